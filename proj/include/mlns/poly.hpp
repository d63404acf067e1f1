#ifndef MLNS_POLY_HPP
#define MLNS_POLY_HPP

#include <cassert>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlns/error.hpp"
#include "mlns/label.hpp"
#include "mlns/rational.hpp"

namespace mlns {

// Exponent vector of a monomial: exps[i] is the power of w_i, trailing
// zeros trimmed (so the constant monomial is the empty vector).
using ExpVec = std::vector<unsigned>;

inline void trim_expvec(ExpVec& e)
{
    while (!e.empty() && e.back() == 0) e.pop_back();
}

// Canonical monomial order: compare exponents from the highest variable
// index down (highest index most significant).
inline int cmp_expvec(const ExpVec& a, const ExpVec& b)
{
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = n; i-- > 0;) {
        unsigned ea = i < a.size() ? a[i] : 0;
        unsigned eb = i < b.size() ? b[i] : 0;
        if (ea != eb) return ea < eb ? -1 : 1;
    }
    return 0;
}

struct ExpVecGreater {
    bool operator()(const ExpVec& a, const ExpVec& b) const { return cmp_expvec(a, b) > 0; }
};

// Multivariate polynomial over exact rationals in the scale variables
// w0, w1, ... Terms are kept in descending canonical order, so begin() is
// the leading monomial and its coefficient is the recursive leading
// coefficient (the recursion by descending variable index unfolds to
// exactly this order).
class Poly {
public:
    using Terms = std::map<ExpVec, Rat, ExpVecGreater>;

    Poly() = default;

    static Poly constant(const Rat& c)
    {
        Poly p;
        if (c != 0) p.terms_[ExpVec{}] = c;
        return p;
    }

    static Poly constant(long c) { return constant(Rat(c)); }
    static Poly one() { return constant(1); }

    static Poly variable(unsigned i)
    {
        Poly p;
        ExpVec e(i + 1, 0);
        e[i] = 1;
        p.terms_[std::move(e)] = 1;
        return p;
    }

    static Poly monomial(ExpVec e, const Rat& c)
    {
        Poly p;
        trim_expvec(e);
        if (c != 0) p.terms_[std::move(e)] = c;
        return p;
    }

    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const
    {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }

    Rat constant_value() const
    {
        if (terms_.empty()) return Rat(0);
        assert(is_constant());
        return terms_.begin()->second;
    }

    // Highest variable index present, or -1 for constants.
    int top_var() const
    {
        if (terms_.empty()) return -1;
        return static_cast<int>(terms_.begin()->first.size()) - 1;
    }

    unsigned degree_in(unsigned v) const
    {
        unsigned d = 0;
        for (const auto& [e, c] : terms_)
            if (v < e.size()) d = std::max(d, e[v]);
        return d;
    }

    unsigned max_degree_any_var() const
    {
        unsigned d = 0;
        for (const auto& [e, c] : terms_)
            for (unsigned x : e) d = std::max(d, x);
        return d;
    }

    std::size_t term_count() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }

    int sign() const
    {
        if (terms_.empty()) return 0;
        return sgn(terms_.begin()->second);
    }

    Label support() const
    {
        std::vector<unsigned> vars;
        for (const auto& [e, c] : terms_)
            for (unsigned i = 0; i < e.size(); ++i)
                if (e[i] > 0) vars.push_back(i);
        return Label(std::move(vars));
    }

    bool operator==(const Poly& other) const { return terms_ == other.terms_; }

    Poly operator-() const
    {
        Poly out(*this);
        for (auto& [e, c] : out.terms_) c = -c;
        return out;
    }

    Poly& operator+=(const Poly& other)
    {
        for (const auto& [e, c] : other.terms_) add_term(e, c);
        return *this;
    }

    Poly& operator-=(const Poly& other)
    {
        for (const auto& [e, c] : other.terms_) add_term(e, -c);
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b)
    {
        Poly out;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                ExpVec e(std::max(ea.size(), eb.size()), 0);
                for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
                for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }

    Poly& operator*=(const Poly& b) { return *this = *this * b; }

    Poly scaled(const Rat& c) const
    {
        if (c == 0) return Poly();
        Poly out(*this);
        for (auto& [e, k] : out.terms_) k *= c;
        return out;
    }

    Poly pow(unsigned n) const
    {
        Poly out = one();
        Poly base = *this;
        while (n) {
            if (n & 1) out *= base;
            base = base * base;
            n >>= 1;
        }
        return out;
    }

    // Coefficient of v^k viewed as a univariate polynomial in v, where v
    // must be the top variable; the result lives in the lower variables.
    Poly coeff_of_top_power(unsigned v, unsigned k) const
    {
        assert(top_var() == static_cast<int>(v));
        Poly out;
        for (const auto& [e, c] : terms_) {
            unsigned ev = v < e.size() ? e[v] : 0;
            if (ev != k) continue;
            ExpVec low(e.begin(), e.end());
            if (v < low.size()) low[v] = 0;
            trim_expvec(low);
            out.add_term(low, c);
        }
        return out;
    }

    Poly leading_coeff_in(unsigned v) const { return coeff_of_top_power(v, degree_in(v)); }

    static Poly assemble(unsigned v, const std::vector<Poly>& coeffs)
    {
        Poly out;
        for (unsigned k = 0; k < coeffs.size(); ++k) {
            if (coeffs[k].is_zero()) continue;
            ExpVec ev(v + 1, 0);
            ev[v] = k;
            out += coeffs[k] * monomial(ev, Rat(1));
        }
        return out;
    }

    // Positive rational c such that (*this)/c has coprime integer
    // coefficients; 0 for the zero polynomial.
    Rat rational_content() const
    {
        if (terms_.empty()) return Rat(0);
        Int g = 0, l = 1;
        for (const auto& [e, c] : terms_) {
            Int num = abs(c.get_num());
            Int den = c.get_den();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
        }
        Rat out(g, l);
        out.canonicalize();
        return out;
    }

    // Integer-coefficient, coprime-content version with positive recursive
    // leading coefficient. Unit normalization used for gcd results.
    Poly unit_normal() const
    {
        if (terms_.empty()) return *this;
        Rat c = rational_content();
        if (sign() < 0) c = -c;
        return scaled(Rat(1) / c);
    }

    // Renames variables along a strictly increasing index map.
    Poly renamed(const OrderIso& iso) const
    {
        Poly out;
        for (const auto& [e, c] : terms_) {
            ExpVec ne;
            for (unsigned i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                unsigned j = iso.apply(i);
                if (ne.size() <= j) ne.resize(j + 1, 0);
                ne[j] = e[i];
            }
            out.add_term(ne, c);
        }
        return out;
    }

    // Exact substitution of rationals for all variables.
    Rat eval(const std::vector<Rat>& at) const
    {
        Rat out(0);
        for (const auto& [e, c] : terms_) {
            Rat m = c;
            for (unsigned i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                assert(i < at.size());
                Rat p(1);
                Rat base = at[i];
                for (unsigned k = 0; k < e[i]; ++k) p *= base;
                m *= p;
            }
            out += m;
        }
        return out;
    }

    // Canonical rendering: monomials in descending canonical order, factors
    // within a monomial by ascending index.
    std::string render() const
    {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rat a = abs(c);
            if (first) {
                if (sgn(c) < 0) out += '-';
                first = false;
            } else {
                out += sgn(c) < 0 ? " - " : " + ";
            }
            std::string vars;
            for (unsigned i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (!vars.empty()) vars += '*';
                vars += 'w';
                vars += std::to_string(i);
                if (e[i] > 1) {
                    vars += '^';
                    vars += std::to_string(e[i]);
                }
            }
            if (vars.empty()) {
                out += rat_to_string(a);
            } else {
                if (a != 1) {
                    out += rat_to_string(a);
                    out += '*';
                }
                out += vars;
            }
        }
        return out;
    }

private:
    void add_term(ExpVec e, Rat c)
    {
        trim_expvec(e);
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (c != 0) terms_.emplace(std::move(e), std::move(c));
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Terms terms_;
};

// Exact division; nullopt when b does not divide a.
inline std::optional<Poly> divexact(const Poly& a, const Poly& b)
{
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return Poly();
    if (b.is_constant()) return a.scaled(Rat(1) / b.constant_value());

    unsigned v = static_cast<unsigned>(b.top_var());

    if (a.top_var() > static_cast<int>(v)) {
        // b lives strictly below a's top variable: divide coefficientwise.
        unsigned w = static_cast<unsigned>(a.top_var());
        unsigned dw = a.degree_in(w);
        std::vector<Poly> out(dw + 1);
        for (unsigned k = 0; k <= dw; ++k) {
            Poly ck = a.coeff_of_top_power(w, k);
            if (ck.is_zero()) continue;
            auto q = divexact(ck, b);
            if (!q) return std::nullopt;
            out[k] = std::move(*q);
        }
        return Poly::assemble(w, out);
    }
    if (a.top_var() < static_cast<int>(v)) return std::nullopt;

    unsigned db = b.degree_in(v);
    Poly lb = b.leading_coeff_in(v);
    Poly r = a;
    Poly q;
    while (!r.is_zero() && r.top_var() == static_cast<int>(v) && r.degree_in(v) >= db) {
        unsigned dr = r.degree_in(v);
        Poly lr = r.leading_coeff_in(v);
        auto t = divexact(lr, lb);
        if (!t) return std::nullopt;
        ExpVec shift(v + 1, 0);
        shift[v] = dr - db;
        Poly term = *t * Poly::monomial(shift, Rat(1));
        q += term;
        r -= term * b;
        if (!r.is_zero() && r.degree_in(v) == dr) return std::nullopt; // no progress
    }
    if (!r.is_zero() && (r.top_var() < static_cast<int>(v) || r.degree_in(v) < db)) {
        if (db == 0) {
            // b is constant in v but not a scalar; divide what remains coefficientwise.
            auto q2 = divexact(r, b);
            if (!q2) return std::nullopt;
            return q + *q2;
        }
        return std::nullopt;
    }
    return r.is_zero() ? std::optional<Poly>(q) : std::nullopt;
}

// Exact pseudo-remainder with respect to v: the R with
// lc(b)^(deg a - deg b + 1) * a = q*b + R.
inline Poly prem(const Poly& a, const Poly& b, unsigned v)
{
    unsigned db = b.degree_in(v);
    unsigned da = a.degree_in(v);
    if (da < db) return a;
    Poly lb = b.leading_coeff_in(v);
    Poly r = a;
    long e = static_cast<long>(da) - static_cast<long>(db) + 1;
    while (!r.is_zero() && r.degree_in(v) >= db) {
        unsigned dr = r.degree_in(v);
        Poly lr = r.leading_coeff_in(v);
        ExpVec shift(v + 1, 0);
        shift[v] = dr - db;
        r = r * lb - lr * Poly::monomial(shift, Rat(1)) * b;
        --e;
    }
    for (; e > 0; --e) r = r * lb;
    return r;
}

Poly poly_gcd(const Poly& a, const Poly& b);

// Content of a with respect to v: the gcd of its coefficient polynomials
// (in the lower variables) when a is viewed as univariate in v.
inline Poly content_in(const Poly& a, unsigned v)
{
    if (a.is_zero()) return Poly();
    if (a.top_var() < static_cast<int>(v)) return a.unit_normal();
    Poly c;
    unsigned d = a.degree_in(v);
    for (unsigned k = 0; k <= d; ++k) {
        Poly ck = a.coeff_of_top_power(v, k);
        if (ck.is_zero()) continue;
        c = poly_gcd(c, ck);
        if (c.is_constant() && !c.is_zero()) return Poly::one();
    }
    return c;
}

namespace detail {

// ---- heuristic gcd (integer substitution, verified, with retries) ----

inline Int int_height(const Poly& p)
{
    Int h = 0;
    for (const auto& [e, c] : p.terms()) {
        Int n = abs(c.get_num());
        if (n > h) h = n;
    }
    return h;
}

inline Poly eval_var_at(const Poly& p, unsigned v, const Int& xi)
{
    unsigned d = p.degree_in(v);
    std::vector<Int> pow(d + 1);
    pow[0] = 1;
    for (unsigned k = 1; k <= d; ++k) pow[k] = pow[k - 1] * xi;
    Poly out;
    for (const auto& [e, c] : p.terms()) {
        unsigned ev = v < e.size() ? e[v] : 0;
        ExpVec ne = e;
        if (v < ne.size()) ne[v] = 0;
        trim_expvec(ne);
        out += Poly::monomial(ne, c * Rat(pow[ev]));
    }
    return out;
}

// Balanced remainder in [-xi/2, xi/2).
inline Int smod(const Int& c, const Int& xi)
{
    Int m;
    mpz_fdiv_r(m.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
    if (m * 2 >= xi) m -= xi;
    return m;
}

// Rebuilds a polynomial in v from the xi-adic expansion of gamma.
inline Poly genpoly(Poly gamma, unsigned v, const Int& xi)
{
    Poly g;
    unsigned e = 0;
    while (!gamma.is_zero()) {
        if (e > 64) return Poly(); // runaway expansion: signal failure with 0
        Poly digit;
        for (const auto& [ev, c] : gamma.terms())
            digit += Poly::monomial(ev, Rat(smod(c.get_num(), xi)));
        if (!digit.is_zero()) {
            ExpVec shift(v + 1, 0);
            shift[v] = e;
            g += digit * Poly::monomial(shift, Rat(1));
        }
        Poly rest = gamma - digit;
        Poly next;
        for (const auto& [ev, c] : rest.terms())
            next += Poly::monomial(ev, Rat(Int(c.get_num() / xi)));
        gamma = std::move(next);
        ++e;
    }
    return g;
}

// Exact division in Z[vars]: the quotient must exist and stay integral.
inline std::optional<Poly> int_divexact(const Poly& a, const Poly& b)
{
    auto q = divexact(a, b);
    if (!q) return std::nullopt;
    for (const auto& [e, c] : q->terms())
        if (c.get_den() != 1) return std::nullopt;
    return q;
}

// gcd of the integer coefficient contents.
inline Int int_content(const Poly& p)
{
    Int g = 0;
    for (const auto& [e, c] : p.terms())
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), Int(c.get_num()).get_mpz_t());
    return g;
}

// Heuristic gcd over Z[vars] (single-point substitution, verified, with
// retries); returns the integer-sense gcd up to sign, nullopt when the
// substitution points keep failing. Contents are stripped at every level,
// so a constant reconstruction settles the case on the first attempt.
inline std::optional<Poly> gcd_heuristic(const Poly& a, const Poly& b, int depth = 0)
{
    if (depth > 10) return std::nullopt;
    if (a.is_constant() && b.is_constant()) {
        Int g;
        mpz_gcd(g.get_mpz_t(), Int(a.constant_value().get_num()).get_mpz_t(),
                Int(b.constant_value().get_num()).get_mpz_t());
        return Poly::constant(Rat(g));
    }
    if (a.is_constant() || b.is_constant()) {
        const Poly& cst = a.is_constant() ? a : b;
        const Poly& pol = a.is_constant() ? b : a;
        Int g = Int(abs(cst.constant_value().get_num()));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), int_content(pol).get_mpz_t());
        return Poly::constant(Rat(g));
    }

    Int ca = int_content(a);
    Int cb = int_content(b);
    Int cc;
    mpz_gcd(cc.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    Poly pa = ca == 1 ? a : a.scaled(Rat(Int(1), ca));
    Poly pb = cb == 1 ? b : b.scaled(Rat(Int(1), cb));

    unsigned v = static_cast<unsigned>(std::max(pa.top_var(), pb.top_var()));
    Int na = int_height(pa), nb = int_height(pb);
    Int xi = 2 * (na < nb ? na : nb) + 29;
    for (int attempt = 0; attempt < 6; ++attempt) {
        if (mpz_sizeinbase(xi.get_mpz_t(), 2) *
                std::max(pa.degree_in(v), pb.degree_in(v)) >
            250000)
            return std::nullopt;
        Poly ae = eval_var_at(pa, v, xi);
        Poly be = eval_var_at(pb, v, xi);
        auto gamma = gcd_heuristic(ae, be, depth + 1);
        if (gamma && !gamma->is_zero()) {
            Poly g = genpoly(*gamma, v, xi);
            if (g.is_constant()) return Poly::constant(Rat(cc));
            if (!g.is_zero()) {
                if (g.sign() < 0) g = -g;
                Int gc = int_content(g);
                if (gc != 1) g = g.scaled(Rat(Int(1), gc));
                if (int_divexact(pa, g) && int_divexact(pb, g))
                    return g.scaled(Rat(cc));
            }
        }
        xi = xi * 73794 / 27011; // irrational-ish growth between retries
    }
    return std::nullopt;
}

// ---- sound coprimality certificate (modular degree bounds) ----
//
// Projects both polynomials to univariate images over F_p (other variables
// at fixed pseudo-random points). When a leading coefficient survives the
// projection, deg_v of the true gcd is bounded by the degree of the
// univariate gcd of the images, so constant images in every variable
// certify a constant gcd. One-sided: failure to certify proves nothing.

inline constexpr std::uint64_t cert_prime = 2147483647ull; // 2^31 - 1

inline std::uint64_t fp_pow(std::uint64_t b, std::uint64_t e)
{
    std::uint64_t out = 1;
    b %= cert_prime;
    while (e) {
        if (e & 1) out = out * b % cert_prime;
        b = b * b % cert_prime;
        e >>= 1;
    }
    return out;
}

// univariate gcd degree over F_p; -1 encodes the zero polynomial
inline int fp_gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b)
{
    auto trim = [](std::vector<std::uint64_t>& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        std::uint64_t inv = fp_pow(b.back(), cert_prime - 2);
        while (a.size() >= b.size()) {
            std::uint64_t scale = a.back() * inv % cert_prime;
            std::size_t off = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) {
                std::uint64_t sub = scale * b[i] % cert_prime;
                a[off + i] = (a[off + i] + cert_prime - sub) % cert_prime;
            }
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
        trim(b);
    }
    return static_cast<int>(a.size()) - 1;
}

// Image of p as a univariate polynomial in v with the other variables at
// the given points; nullopt when every coefficient vanishes mod p.
inline std::vector<std::uint64_t> fp_project(const Poly& p, unsigned v,
                                             const std::vector<std::uint64_t>& points)
{
    std::vector<std::uint64_t> out(p.degree_in(v) + 1, 0);
    for (const auto& [e, c] : p.terms()) {
        std::uint64_t m = mpz_fdiv_ui(Int(c.get_num()).get_mpz_t(), cert_prime);
        for (unsigned i = 0; i < e.size(); ++i) {
            if (i == v || e[i] == 0) continue;
            m = m * fp_pow(points[i], e[i]) % cert_prime;
        }
        unsigned ev = v < e.size() ? e[v] : 0;
        out[ev] = (out[ev] + m) % cert_prime;
    }
    return out;
}

inline bool certified_coprime(const Poly& a, const Poly& b)
{
    int top = std::max(a.top_var(), b.top_var());
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto next_point = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state % (cert_prime - 2) + 1;
    };
    for (int v = 0; v <= top; ++v) {
        unsigned da = a.degree_in(static_cast<unsigned>(v));
        unsigned db = b.degree_in(static_cast<unsigned>(v));
        if (da == 0 || db == 0) continue; // gcd already constant in v
        bool certified = false;
        for (int attempt = 0; attempt < 4 && !certified; ++attempt) {
            std::vector<std::uint64_t> points(static_cast<std::size_t>(top) + 1);
            for (auto& x : points) x = next_point();
            auto av = fp_project(a, static_cast<unsigned>(v), points);
            auto bv = fp_project(b, static_cast<unsigned>(v), points);
            bool lead_a = av.back() != 0;
            bool lead_b = bv.back() != 0;
            if (!lead_a && !lead_b) continue; // both leads vanished, retry
            if (fp_gcd_degree(av, bv) == 0) certified = true;
        }
        if (!certified) return false;
    }
    return true;
}

// Factors out the largest common monomial; gcd(a, b) = m * gcd(a', b').
inline ExpVec monomial_floor(const Poly& p)
{
    ExpVec m;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        if (first) {
            m = e;
            first = false;
            continue;
        }
        if (e.size() < m.size()) m.resize(e.size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
        trim_expvec(m);
        if (m.empty()) break;
    }
    return m;
}

inline Poly shift_down(const Poly& p, const ExpVec& m)
{
    if (m.empty()) return p;
    Poly out;
    for (const auto& [e, c] : p.terms()) {
        ExpVec ne = e;
        for (std::size_t i = 0; i < m.size(); ++i) ne[i] -= m[i];
        trim_expvec(ne);
        out += Poly::monomial(ne, c);
    }
    return out;
}

} // namespace detail

// gcd over Q[w...]; result unit-normalized (primitive integer coefficients,
// positive leading sign). Subresultant pseudo-remainder sequences keep the
// coefficient growth polynomial; contents are extracted once per level.
inline Poly poly_gcd(const Poly& a, const Poly& b)
{
    if (a.is_zero()) return b.unit_normal();
    if (b.is_zero()) return a.unit_normal();
    if (a.is_constant() || b.is_constant()) return Poly::one();

    // common monomial factor first (cheap, settles the frequent w^k cases)
    ExpVec ma = detail::monomial_floor(a);
    ExpVec mb = detail::monomial_floor(b);
    ExpVec mc(std::min(ma.size(), mb.size()), 0);
    for (std::size_t i = 0; i < mc.size(); ++i) mc[i] = std::min(ma[i], mb[i]);
    trim_expvec(mc);
    if (!ma.empty() || !mb.empty()) {
        Poly a2 = detail::shift_down(a, ma);
        Poly b2 = detail::shift_down(b, mb);
        return (Poly::monomial(mc, Rat(1)) * poly_gcd(a2, b2)).unit_normal();
    }

    // Certified fast route: a modular certificate settles coprime pairs;
    // otherwise the heuristic peels off verified common divisors until the
    // cofactors certify coprime. Anything unresolved falls through to the
    // subresultant sequence.
    {
        Poly ia = a.unit_normal();
        Poly ib = b.unit_normal();
        Poly acc = Poly::one();
        for (int round = 0; round < 8; ++round) {
            if (ia.is_constant() || ib.is_constant())
                return acc.unit_normal();
            if (detail::certified_coprime(ia, ib)) return acc.unit_normal();
            auto c = detail::gcd_heuristic(ia, ib);
            if (!c || c->is_constant()) {
                if (round == 0) break; // no progress: use the PRS from scratch
                Poly rest = poly_gcd(ia, ib);
                return (acc * rest).unit_normal();
            }
            Poly div = c->unit_normal();
            auto qa = divexact(ia, div);
            auto qb = divexact(ib, div);
            if (!qa || !qb) break; // should not happen; be safe
            acc = acc * div;
            ia = qa->unit_normal();
            ib = qb->unit_normal();
        }
    }

    unsigned v = static_cast<unsigned>(std::max(a.top_var(), b.top_var()));

    Poly ca = content_in(a, v);
    Poly cb = content_in(b, v);
    Poly c = poly_gcd(ca, cb);

    Poly pa = *divexact(a, ca);
    Poly pb = *divexact(b, cb);

    // Primitive parts: if either is constant in v, the primitive gcd is 1.
    if (pa.top_var() < static_cast<int>(v) || pb.top_var() < static_cast<int>(v))
        return c.unit_normal();

    Poly p = pa, q = pb;
    if (p.degree_in(v) < q.degree_in(v)) std::swap(p, q);

    // quick exit: q | p
    if (auto d = divexact(p, q); d.has_value()) return (c * q.unit_normal()).unit_normal();

    Poly g = Poly::one();
    Poly h = Poly::one();
    for (;;) {
        unsigned delta = p.degree_in(v) - q.degree_in(v);
        Poly r = prem(p, q, v);
        if (r.is_zero()) break;
        if (r.top_var() < static_cast<int>(v) || r.degree_in(v) == 0)
            return c.unit_normal(); // gcd constant in v
        p = q;
        Poly divisor = g * h.pow(delta);
        q = *divexact(r, divisor);
        g = p.leading_coeff_in(v);
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            h = *divexact(g.pow(delta), h.pow(delta - 1));
        }
    }
    Poly qc = content_in(q, v);
    q = *divexact(q, qc);
    return (c * q.unit_normal()).unit_normal();
}

} // namespace mlns

#endif
