#ifndef MLNS_NUM_HPP
#define MLNS_NUM_HPP

#include <compare>
#include <string>
#include <vector>

#include "mlns/error.hpp"
#include "mlns/label.hpp"
#include "mlns/poly.hpp"

namespace mlns {

inline constexpr unsigned default_scales = 8;

enum class Cmp { less, equal, greater };

inline const char* cmp_name(Cmp c)
{
    switch (c) {
    case Cmp::less: return "less";
    case Cmp::equal: return "equal";
    case Cmp::greater: return "greater";
    }
    return "?";
}

// An element of the exact ordered field Q(w0,...,w_{L-1}), stored as a
// reduced fraction of integer-coefficient polynomials with jointly coprime
// contents and a positive recursive leading coefficient in the denominator.
// The order makes each w_j larger than everything supported below j.
class Num {
public:
    Num() : num_(), den_(Poly::one()) {}
    Num(long v) : num_(Poly::constant(v)), den_(Poly::one()) {}
    Num(const Rat& v) : num_(Poly::constant(v)), den_(Poly::one()) { canonicalize(); }

    static Num scale(unsigned i) { return raw(Poly::variable(i), Poly::one()); }

    static Num make(Poly n, Poly d)
    {
        if (d.is_zero()) throw Error(ErrorKind::division_by_zero, "zero denominator");
        Num out;
        out.num_ = std::move(n);
        out.den_ = std::move(d);
        out.canonicalize();
        return out;
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }

    bool is_rational() const { return num_.is_constant() && den_.is_constant(); }

    Rat rational_value() const { return num_.constant_value() / den_.constant_value(); }

    bool operator==(const Num& other) const
    {
        return num_ == other.num_ && den_ == other.den_;
    }

    friend Num operator+(const Num& a, const Num& b)
    {
        return make(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }

    friend Num operator-(const Num& a, const Num& b)
    {
        return make(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }

    friend Num operator*(const Num& a, const Num& b)
    {
        return make(a.num_ * b.num_, a.den_ * b.den_);
    }

    friend Num operator/(const Num& a, const Num& b)
    {
        if (b.is_zero()) throw Error(ErrorKind::division_by_zero, "division by zero");
        return make(a.num_ * b.den_, a.den_ * b.num_);
    }

    Num operator-() const { return raw(-num_, den_); }

    Num pow(long e) const
    {
        if (e == 0) return Num(1);
        Num base = *this;
        if (e < 0) {
            base = Num(1) / base;
            e = -e;
        }
        Num out(1);
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) out = out * base;
            base = base * base;
            k >>= 1;
        }
        return out;
    }

    // Sign under the level ordering: the denominator's recursive leading
    // coefficient is positive by canonical form, so the sign is the
    // numerator's recursive leading sign.
    int sign() const { return num_.sign(); }

    Label support() const { return num_.support().unite(den_.support()); }

    bool in_level(const Label& a) const { return support().subset_of(a); }

    std::string render() const;

    static Num parse(const std::string& text, unsigned scales = default_scales);

private:
    static Num raw(Poly n, Poly d)
    {
        Num out;
        out.num_ = std::move(n);
        out.den_ = std::move(d);
        return out;
    }

    void canonicalize()
    {
        if (num_.is_zero()) {
            den_ = Poly::one();
            return;
        }
        Poly g = poly_gcd(num_, den_);
        num_ = *divexact(num_, g);
        den_ = *divexact(den_, g);
        Rat cn = num_.rational_content();
        Rat cd = den_.rational_content();
        Rat q = cn / cd; // positive, already canonical
        num_ = num_.scaled(Rat(q.get_num()) / cn);
        den_ = den_.scaled(Rat(q.get_den()) / cd);
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
    }

    friend Num embed(const Num&, const Label&, const Label&);

    Poly num_, den_;
};

inline Cmp cmp(const Num& a, const Num& b)
{
    int s = (a - b).sign();
    return s < 0 ? Cmp::less : s > 0 ? Cmp::greater : Cmp::equal;
}

inline bool operator<(const Num& a, const Num& b) { return cmp(a, b) == Cmp::less; }
inline bool operator>(const Num& a, const Num& b) { return cmp(a, b) == Cmp::greater; }

inline Num abs(const Num& x) { return x.sign() < 0 ? -x : x; }

// I_a^b on the model: rename each scale w_s (s in a) to w_{iso(s)}.
// Renaming along an increasing index map preserves the canonical form.
inline Num embed(const Num& x, const Label& a, const Label& b)
{
    if (a.size() != b.size())
        throw Error(ErrorKind::size_mismatch,
                    "embed: |" + a.render() + "| != |" + b.render() + "|");
    if (!x.in_level(a))
        throw Error(ErrorKind::not_in_level,
                    "embed: argument has support " + x.support().render() +
                        " not contained in " + a.render());
    OrderIso iso(a, b);
    return Num::raw(x.num().renamed(iso), x.den().renamed(iso));
}

// Iterated exact limit w_j -> infinity for j from the top of the support
// down to r. Throws Unlimited(j) at the first diverging stage.
inline Num shadow(const Num& x, unsigned r)
{
    Num cur = x;
    for (;;) {
        if (cur.is_zero()) return cur;
        int tv = std::max(cur.num().top_var(), cur.den().top_var());
        if (tv < static_cast<int>(r)) return cur;
        unsigned j = static_cast<unsigned>(tv);
        unsigned dn = cur.num().degree_in(j);
        unsigned dd = cur.den().degree_in(j);
        if (dn > dd)
            throw Error(ErrorKind::unlimited,
                        "unlimited at stage " + std::to_string(j), static_cast<int>(j));
        if (dn < dd) return Num(0);
        Poly ln = cur.num().top_var() == tv ? cur.num().leading_coeff_in(j) : cur.num();
        Poly ld = cur.den().top_var() == tv ? cur.den().leading_coeff_in(j) : cur.den();
        cur = Num::make(ln, ld);
    }
}

struct Classification {
    bool limited = false;
    bool infinitesimal = false;
};

inline Classification classify(const Num& x, unsigned r)
{
    Classification out;
    try {
        Num sh = shadow(x, r);
        out.limited = true;
        out.infinitesimal = !x.is_zero() && sh.is_zero();
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::unlimited) throw;
    }
    return out;
}

struct EndExtensionReport {
    bool standard_branch = false; // x was not positive-unlimited at min(a)
    unsigned level = 0;           // n = min(a)
    std::vector<bool> sample_pass;
    bool all_pass() const
    {
        for (bool b : sample_pass)
            if (!b) return false;
        return true;
    }
};

// Prop-style check: a positive x in S_a that is unlimited at n = min(a)
// exceeds every sample supported in {0,...,n-1}.
inline EndExtensionReport end_extension_check(const Num& x, const Label& a,
                                              const std::vector<Num>& samples)
{
    if (a.empty())
        throw Error(ErrorKind::bad_argument, "end_extension_check: label must be nonempty");
    if (!x.in_level(a))
        throw Error(ErrorKind::not_in_level,
                    "end_extension_check: x has support " + x.support().render() +
                        " not contained in " + a.render());
    unsigned n = a.min();
    Label below = Label::numeral(n);
    for (const Num& y : samples)
        if (!y.in_level(below))
            throw Error(ErrorKind::not_in_level,
                        "end_extension_check: sample not supported in " + below.render());
    EndExtensionReport report;
    report.level = n;
    if (x.sign() <= 0 || classify(x, n).limited) {
        report.standard_branch = true;
        return report;
    }
    report.sample_pass.reserve(samples.size());
    for (const Num& y : samples) report.sample_pass.push_back(x > y);
    return report;
}

// ---- expression parser (rationals p/q, scales w0..w{L-1}, + - * /,
// integer powers ^ with negative exponents, parentheses) ----

namespace detail {

struct NumParser {
    const std::string& text;
    std::size_t pos = 0;
    unsigned scales;

    explicit NumParser(const std::string& t, unsigned s) : text(t), scales(s) {}

    void skip_ws()
    {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c)
    {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg)
    {
        throw Error(ErrorKind::parse_error, msg, pos);
    }

    Num parse_expr()
    {
        Num acc = parse_term();
        for (;;) {
            skip_ws();
            if (eat('+'))
                acc = acc + parse_term();
            else if (pos < text.size() && text[pos] == '-') {
                ++pos;
                acc = acc - parse_term();
            } else
                return acc;
        }
    }

    Num parse_term()
    {
        Num acc = parse_factor();
        for (;;) {
            skip_ws();
            if (eat('*'))
                acc = acc * parse_factor();
            else if (eat('/'))
                acc = acc / parse_factor();
            else
                return acc;
        }
    }

    Num parse_factor()
    {
        skip_ws();
        if (pos < text.size() && text[pos] == '-') {
            ++pos;
            return -parse_factor();
        }
        Num base = parse_atom();
        skip_ws();
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            long e = parse_integer();
            return base.pow(e);
        }
        return base;
    }

    long parse_integer()
    {
        skip_ws();
        bool neg = false;
        if (pos < text.size() && text[pos] == '-') {
            neg = true;
            ++pos;
        }
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail("expected an integer exponent");
        long v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + (text[pos] - '0');
            if (v > 64) fail("exponent too large");
            ++pos;
        }
        return neg ? -v : v;
    }

    Num parse_atom()
    {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of expression");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            Num inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (c == 'w') {
            ++pos;
            if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
                fail("expected a scale index after 'w'");
            unsigned long i = 0;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                i = i * 10 + static_cast<unsigned long>(text[pos] - '0');
                if (i > Label::max_index) fail("scale index too large");
                ++pos;
            }
            if (i >= scales)
                fail("scale w" + std::to_string(i) + " exceeds the configured count " +
                     std::to_string(scales));
            return Num::scale(static_cast<unsigned>(i));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                digits += text[pos++];
            return Num(Rat(Int(digits, 10)));
        }
        fail("unexpected character in expression");
    }
};

} // namespace detail

inline Num Num::parse(const std::string& text, unsigned scales)
{
    detail::NumParser p(text, scales);
    Num out = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size())
        throw Error(ErrorKind::parse_error, "trailing characters in expression", p.pos);
    return out;
}

inline std::string Num::render() const
{
    if (num_.is_zero()) return "0";
    std::string n = num_.render();
    if (den_.is_constant() && den_.constant_value() == 1) return n;
    std::string d = den_.render();
    // Parenthesize so that the canonical text reparses to the same value.
    bool num_parens = num_.term_count() > 1;
    bool den_simple = false;
    if (den_.term_count() == 1) {
        const auto& [e, c] = *den_.terms().begin();
        unsigned nvars = 0;
        for (unsigned x : e) nvars += x > 0 ? 1 : 0;
        den_simple = (nvars == 0) || (nvars == 1 && c == 1);
    }
    std::string out;
    if (num_parens)
        out = "(" + n + ")";
    else
        out = n;
    out += "/";
    if (den_simple)
        out += d;
    else
        out += "(" + d + ")";
    return out;
}

} // namespace mlns

#endif
