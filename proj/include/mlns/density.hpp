#ifndef MLNS_DENSITY_HPP
#define MLNS_DENSITY_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mlns/error.hpp"
#include "mlns/rational.hpp"

namespace mlns {

// Sorted finite set of naturals with bound N = 1 + max element (0 when empty).
struct IntSet {
    std::vector<unsigned> elems;

    IntSet() = default;

    explicit IntSet(std::vector<unsigned> xs) : elems(std::move(xs))
    {
        std::sort(elems.begin(), elems.end());
        elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    }

    unsigned bound() const { return elems.empty() ? 0 : elems.back() + 1; }
    std::size_t size() const { return elems.size(); }
    bool empty() const { return elems.empty(); }

    bool contains(unsigned v) const
    {
        return std::binary_search(elems.begin(), elems.end(), v);
    }

    bool subset_of(const IntSet& other) const
    {
        return std::includes(other.elems.begin(), other.elems.end(), elems.begin(), elems.end());
    }

    // Prefix counts: pc[v] = |{x in set : x < v}|.
    std::vector<unsigned> prefix_counts(unsigned upto) const
    {
        std::vector<unsigned> pc(upto + 1, 0);
        std::size_t k = 0;
        for (unsigned v = 0; v <= upto; ++v) {
            pc[v] = static_cast<unsigned>(k);
            while (k < elems.size() && elems[k] == v) ++k;
        }
        return pc;
    }

    // Whitespace-separated naturals.
    static IntSet parse_text(const std::string& text)
    {
        std::vector<unsigned> xs;
        std::size_t pos = 0;
        while (pos < text.size()) {
            if (std::isspace(static_cast<unsigned char>(text[pos]))) {
                ++pos;
                continue;
            }
            if (!std::isdigit(static_cast<unsigned char>(text[pos])))
                throw Error(ErrorKind::parse_error, "expected a natural number", pos);
            unsigned long v = 0;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                v = v * 10 + static_cast<unsigned long>(text[pos] - '0');
                if (v > 1000000) throw Error(ErrorKind::too_large, "set element too large");
                ++pos;
            }
            xs.push_back(static_cast<unsigned>(v));
        }
        return IntSet(std::move(xs));
    }
};

struct Window {
    unsigned start = 0;
    unsigned length = 0;
};

struct DensityResult {
    Rat value{0};
    std::optional<Window> witness;
};

// Finite-window upper Banach density: the exact maximum of |A ∩ P| / |P|
// over intervals P = [u, u+l) within [0, N), l >= window_min, with the
// lexicographically least maximizing (u, l).
inline DensityResult upper_banach_density(const IntSet& a, unsigned window_min)
{
    if (window_min == 0)
        throw Error(ErrorKind::bad_argument, "window_min must be at least 1");
    DensityResult out;
    if (a.empty()) return out;
    unsigned N = a.bound();
    if (window_min > N)
        throw Error(ErrorKind::window_too_large,
                    "window_min " + std::to_string(window_min) + " exceeds the bound " +
                        std::to_string(N));
    auto pc = a.prefix_counts(N);
    // iterate in lexicographic (u, l) order; replace only on strict improvement
    for (unsigned u = 0; u < N; ++u) {
        for (unsigned l = window_min; u + l <= N; ++l) {
            unsigned count = pc[u + l] - pc[u];
            Rat d(count, l);
            d.canonicalize();
            if (!out.witness || d > out.value) {
                out.value = d;
                out.witness = Window{u, l};
            }
        }
    }
    return out;
}

struct RelativeDensityResult {
    Rat value{0};
    Rat ambient_density{0};
    std::optional<Window> witness;
};

// Density of A relative to S: maximum of |A ∩ P|/|P| over windows whose
// S-density is within tol of eta = upper_banach_density(S, window_min).
inline RelativeDensityResult relative_density(const IntSet& a, const IntSet& s,
                                              unsigned window_min, const Rat& tol)
{
    if (!a.subset_of(s))
        throw Error(ErrorKind::not_subset, "relative_density needs A ⊆ S");
    if (tol < 0) throw Error(ErrorKind::bad_argument, "tol must be nonnegative");
    RelativeDensityResult out;
    if (s.empty()) return out;
    DensityResult eta = upper_banach_density(s, window_min);
    out.ambient_density = eta.value;
    unsigned N = s.bound();
    auto pa = a.prefix_counts(N);
    auto ps = s.prefix_counts(N);
    bool found = false;
    for (unsigned u = 0; u < N; ++u) {
        for (unsigned l = window_min; u + l <= N; ++l) {
            Rat sd(ps[u + l] - ps[u], l);
            sd.canonicalize();
            Rat gap = sd - eta.value;
            if (gap < 0) gap = -gap;
            if (gap > tol) continue;
            Rat d(pa[u + l] - pa[u], l);
            d.canonicalize();
            if (!found || d > out.value) {
                out.value = d;
                out.witness = Window{u, l};
                found = true;
            }
        }
    }
    if (!found)
        throw Error(ErrorKind::no_qualifying_window,
                    "no window meets the ambient-density constraint");
    return out;
}

// Lexicographically least (start, step) with a k-term arithmetic
// progression inside A; step >= 1. k = 1 reports (min A, 1).
inline std::optional<std::pair<unsigned, unsigned>> find_k_ap(const IntSet& a, unsigned k)
{
    if (k == 0) throw Error(ErrorKind::bad_argument, "k must be at least 1");
    if (a.empty()) return std::nullopt;
    if (k == 1) return std::make_pair(a.elems.front(), 1u);
    unsigned maxv = a.bound() - 1;
    for (unsigned start : a.elems) {
        if (start + (k - 1) > maxv) break; // even step 1 overshoots
        unsigned max_step = (maxv - start) / (k - 1);
        for (unsigned step = 1; step <= max_step; ++step) {
            bool ok = true;
            for (unsigned i = 1; i < k && ok; ++i)
                if (!a.contains(start + i * step)) ok = false;
            if (ok) return std::make_pair(start, step);
        }
    }
    return std::nullopt;
}

struct ApFreeResult {
    unsigned size = 0;
    std::vector<unsigned> witness;
};

namespace detail {

// Whether appending x to the sorted set b closes a k-term AP ending at x.
inline bool closes_k_ap(const std::vector<bool>& member, unsigned x, unsigned k)
{
    if (k < 2) return true;
    unsigned steps_max = x / (k - 1);
    for (unsigned step = 1; step <= steps_max; ++step) {
        bool all = true;
        for (unsigned i = 1; i < k && all; ++i)
            if (!member[x - i * step]) all = false;
        if (all) return true;
    }
    return false;
}

inline void ap_free_max_search(std::vector<bool>& member, unsigned next, unsigned N, unsigned k,
                               unsigned current, unsigned& best)
{
    if (current + (N - next) <= best) return;
    if (next == N) {
        best = std::max(best, current);
        return;
    }
    if (!closes_k_ap(member, next, k)) {
        member[next] = true;
        ap_free_max_search(member, next + 1, N, k, current + 1, best);
        member[next] = false;
    }
    ap_free_max_search(member, next + 1, N, k, current, best);
}

// Can the partial set be extended with elements in [next, N) to reach target?
inline bool ap_free_reachable(std::vector<bool>& member, unsigned next, unsigned N, unsigned k,
                              unsigned current, unsigned target)
{
    if (current >= target) return true;
    if (current + (N - next) < target) return false;
    if (!closes_k_ap(member, next, k)) {
        member[next] = true;
        bool ok = ap_free_reachable(member, next + 1, N, k, current + 1, target);
        member[next] = false;
        if (ok) return true;
    }
    return ap_free_reachable(member, next + 1, N, k, current, target);
}

} // namespace detail

// Maximum size of a subset of [0, N) without a k-term AP, with the
// lexicographically least witness of that size. Branch-and-bound for the
// size, then a greedy feasibility pass for the witness.
inline ApFreeResult max_ap_free_subset(unsigned N, unsigned k)
{
    if (k < 3) throw Error(ErrorKind::bad_argument, "max_ap_free_subset needs k >= 3");
    if (N > 25)
        throw Error(ErrorKind::too_large, "max_ap_free_subset is limited to N <= 25");
    ApFreeResult out;
    if (N == 0) return out;

    std::vector<bool> member(N, false);
    unsigned best = 0;
    detail::ap_free_max_search(member, 0, N, k, 0, best);
    out.size = best;

    std::fill(member.begin(), member.end(), false);
    unsigned have = 0;
    for (unsigned x = 0; x < N && have < best; ++x) {
        if (detail::closes_k_ap(member, x, k)) continue;
        member[x] = true;
        if (detail::ap_free_reachable(member, x + 1, N, k, have + 1, best)) {
            ++have;
            out.witness.push_back(x);
        } else {
            member[x] = false;
        }
    }
    return out;
}

} // namespace mlns

#endif
