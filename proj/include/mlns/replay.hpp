#ifndef MLNS_REPLAY_HPP
#define MLNS_REPLAY_HPP

#include <random>
#include <string>
#include <vector>

#include "mlns/label.hpp"
#include "mlns/num.hpp"

namespace mlns {

struct ReplayClause {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ReplayReport {
    unsigned n = 0, p = 0;
    std::vector<ReplayClause> clauses;

    bool all_pass() const
    {
        for (const auto& c : clauses)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

// Small deterministic elements with support inside the given label.
inline std::vector<Num> replay_samples(const Label& inside, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<Num> out;
    out.push_back(Num(0));
    out.push_back(Num(1));
    out.push_back(Num(Rat(-7, 2)));
    for (int t = 0; t < 4; ++t) {
        Num x(Rat(static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 9) + 1));
        for (unsigned s : inside) {
            long c = static_cast<long>(rng() % 7) - 3;
            if (c == 0) c = 1;
            unsigned e = static_cast<unsigned>(rng() % 3);
            x = x + Num(c) * Num::scale(s).pow(static_cast<long>(e));
        }
        out.push_back(x);
    }
    return out;
}

} // namespace detail

// Executable replay of the embedding bookkeeping in the Ramsey argument:
// x_1 = w0, x_{i+1} = I(x_i) for I = I_{{0..n-1}}^{{1..n}}, and
// J = I_{{0..n-1}}^{{0..p-1} ∪ {p+1..n}}. Verifies the five side
// conditions the proof relies on.
inline ReplayReport replay_side_conditions(unsigned n, unsigned p,
                                           unsigned scales = default_scales,
                                           std::uint64_t seed = 1)
{
    if (n < 2 || p < 1 || p >= n)
        throw Error(ErrorKind::bad_argument, "replay needs n >= 2 and 1 <= p < n");
    if (n + 1 > scales)
        throw Error(ErrorKind::scale_exhausted,
                    "replay with n = " + std::to_string(n) + " needs " + std::to_string(n + 1) +
                        " scales but only " + std::to_string(scales) + " are configured");

    ReplayReport report;
    report.n = n;
    report.p = p;

    Label full = Label::numeral(n);          // {0..n-1}
    Label shifted = oplus(1, full);          // {1..n}
    std::vector<unsigned> j_target_idx;
    for (unsigned j = 0; j < n; ++j) j_target_idx.push_back(j < p ? j : j + 1);
    Label j_target{std::vector<unsigned>(j_target_idx)}; // {0..p-1} ∪ {p+1..n}

    // x_1 = w0, x_{i+1} = I(x_i)
    std::vector<Num> x(n + 1);
    x[1] = Num::scale(0);
    for (unsigned i = 1; i < n; ++i) x[i + 1] = embed(x[i], full, shifted);

    {
        ReplayClause c{"iterates", true, ""};
        for (unsigned i = 1; i <= n; ++i) {
            if (!(x[i] == Num::scale(i - 1))) {
                c.pass = false;
                c.detail = "x_" + std::to_string(i) + " != w" + std::to_string(i - 1);
                break;
            }
        }
        if (c.pass) c.detail = "x_i = w_{i-1} for i = 1.." + std::to_string(n);
        report.clauses.push_back(c);
    }

    {
        // J fixes everything supported below p (and every rational).
        ReplayClause c{"fixes_low_levels", true, ""};
        auto samples = detail::replay_samples(Label::numeral(p), seed);
        for (const Num& y : samples) {
            if (!(embed(y, full, j_target) == y)) {
                c.pass = false;
                c.detail = "J moved " + y.render();
                break;
            }
        }
        if (c.pass)
            c.detail = std::to_string(samples.size()) + " samples of S" +
                       Label::numeral(p).render() + " fixed";
        report.clauses.push_back(c);
    }

    {
        // J(x_j) = x_{j+1} for p < j <= n-1.
        ReplayClause c{"pushes_high_iterates", true, ""};
        unsigned checked = 0;
        for (unsigned j = p + 1; j <= n - 1; ++j) {
            ++checked;
            if (!(embed(x[j], full, j_target) == x[j + 1])) {
                c.pass = false;
                c.detail = "J(x_" + std::to_string(j) + ") != x_" + std::to_string(j + 1);
                break;
            }
        }
        if (c.pass) c.detail = std::to_string(checked) + " iterates pushed up";
        report.clauses.push_back(c);
    }

    {
        // I and J agree on S_{{p..n-1}} (the coherence the proof cites).
        ReplayClause c{"agree_on_middle", true, ""};
        std::vector<unsigned> mid;
        for (unsigned s = p; s < n; ++s) mid.push_back(s);
        auto samples = detail::replay_samples(Label{std::vector<unsigned>(mid)}, seed + 1);
        for (const Num& z : samples) {
            if (!(embed(z, full, shifted) == embed(z, full, j_target))) {
                c.pass = false;
                c.detail = "I and J disagree at " + z.render();
                break;
            }
        }
        if (c.pass) c.detail = std::to_string(samples.size()) + " samples agree";
        report.clauses.push_back(c);
    }

    {
        // x_1 exceeds every sampled standard natural.
        ReplayClause c{"end_extension", true, ""};
        std::vector<Num> nats = {Num(0), Num(1), Num(2), Num(1000), Num(1000000)};
        std::mt19937_64 rng(seed + 2);
        for (int t = 0; t < 5; ++t) nats.push_back(Num(static_cast<long>(rng() % 1000000000)));
        for (const Num& m : nats) {
            if (!(x[1] > m)) {
                c.pass = false;
                c.detail = "x_1 <= " + m.render();
                break;
            }
        }
        if (c.pass) c.detail = std::to_string(nats.size()) + " naturals exceeded";
        report.clauses.push_back(c);
    }

    return report;
}

} // namespace mlns

#endif
