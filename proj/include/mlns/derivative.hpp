#ifndef MLNS_DERIVATIVE_HPP
#define MLNS_DERIVATIVE_HPP

#include <string>
#include <vector>

#include "mlns/error.hpp"
#include "mlns/num.hpp"

namespace mlns {

// Univariate polynomial in a formal variable x with Num coefficients,
// c[k] the coefficient of x^k.
struct UniPoly {
    std::vector<Num> c;

    void trim()
    {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }

    static UniPoly constant(Num v)
    {
        UniPoly p;
        p.c.push_back(std::move(v));
        p.trim();
        return p;
    }

    static UniPoly variable()
    {
        UniPoly p;
        p.c = {Num(0), Num(1)};
        return p;
    }

    Num leading() const { return c.back(); }

    Num operator()(const Num& at) const
    {
        Num acc(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * at + c[i];
        return acc;
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b)
    {
        UniPoly out;
        out.c.resize(std::max(a.c.size(), b.c.size()), Num(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) out.c[i] = out.c[i] + a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) out.c[i] = out.c[i] + b.c[i];
        out.trim();
        return out;
    }

    friend UniPoly operator-(const UniPoly& a, const UniPoly& b)
    {
        UniPoly out;
        out.c.resize(std::max(a.c.size(), b.c.size()), Num(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) out.c[i] = out.c[i] + a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) out.c[i] = out.c[i] - b.c[i];
        out.trim();
        return out;
    }

    friend UniPoly operator*(const UniPoly& a, const UniPoly& b)
    {
        if (a.is_zero() || b.is_zero()) return UniPoly();
        UniPoly out;
        out.c.assign(a.c.size() + b.c.size() - 1, Num(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j)
                out.c[i + j] = out.c[i + j] + a.c[i] * b.c[j];
        out.trim();
        return out;
    }

    UniPoly scaled(const Num& k) const
    {
        UniPoly out;
        out.c.reserve(c.size());
        for (const Num& v : c) out.c.push_back(v * k);
        out.trim();
        return out;
    }

    // Formal derivative (used by tests as the independent oracle and
    // exposed for symbolic work).
    UniPoly differentiated() const
    {
        UniPoly out;
        for (std::size_t i = 1; i < c.size(); ++i) out.c.push_back(c[i] * Num(static_cast<long>(i)));
        out.trim();
        return out;
    }

    // Euclidean division over the Num field.
    static void divmod(const UniPoly& a, const UniPoly& b, UniPoly& q, UniPoly& r)
    {
        q = UniPoly();
        r = a;
        if (b.is_zero()) throw Error(ErrorKind::division_by_zero, "polynomial division by zero");
        while (!r.is_zero() && r.degree() >= b.degree()) {
            int k = r.degree() - b.degree();
            Num t = r.leading() / b.leading();
            UniPoly mono;
            mono.c.assign(static_cast<std::size_t>(k) + 1, Num(0));
            mono.c[static_cast<std::size_t>(k)] = t;
            q = q + mono;
            r = r - mono * b;
        }
    }

    Label coefficient_support() const
    {
        Label s;
        for (const Num& v : c) s = s.unite(v.support());
        return s;
    }
};

inline UniPoly unipoly_gcd(UniPoly a, UniPoly b)
{
    while (!b.is_zero()) {
        UniPoly q, r;
        UniPoly::divmod(a, b, q, r);
        a = b;
        b = r;
    }
    if (!a.is_zero()) a = a.scaled(Num(1) / a.leading()); // monic
    return a;
}

// Rational function in x over the Num field, kept reduced with a monic
// denominator.
struct RatFunc {
    UniPoly num, den;

    RatFunc() : num(), den(UniPoly::constant(Num(1))) {}

    static RatFunc make(UniPoly n, UniPoly d)
    {
        if (d.is_zero()) throw Error(ErrorKind::division_by_zero, "zero denominator");
        RatFunc f;
        UniPoly g = unipoly_gcd(n, d);
        if (!g.is_zero() && g.degree() >= 1) {
            UniPoly q, r;
            UniPoly::divmod(n, g, q, r);
            n = q;
            UniPoly::divmod(d, g, q, r);
            d = q;
        }
        Num lead = d.leading();
        f.num = n.scaled(Num(1) / lead);
        f.den = d.scaled(Num(1) / lead);
        return f;
    }

    static RatFunc constant(Num v) { return make(UniPoly::constant(std::move(v)), UniPoly::constant(Num(1))); }
    static RatFunc variable() { return make(UniPoly::variable(), UniPoly::constant(Num(1))); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b)
    {
        return make(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b)
    {
        return make(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b)
    {
        return make(a.num * b.num, a.den * b.den);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b)
    {
        if (b.num.is_zero()) throw Error(ErrorKind::division_by_zero, "division by zero");
        return make(a.num * b.den, a.den * b.num);
    }

    RatFunc operator-() const
    {
        RatFunc out = *this;
        out.num = out.num.scaled(Num(-1));
        return out;
    }

    RatFunc pow(long e) const
    {
        RatFunc base = *this;
        if (e < 0) {
            base = constant(Num(1)) / base;
            e = -e;
        }
        RatFunc out = constant(Num(1));
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) out = out * base;
            base = base * base;
            k >>= 1;
        }
        return out;
    }

    Label coefficient_support() const
    {
        return num.coefficient_support().unite(den.coefficient_support());
    }

    // Parses an expression in the number grammar extended with the formal
    // variable x.
    static RatFunc parse(const std::string& text, unsigned scales = default_scales);
};

namespace detail {

struct RatFuncParser {
    const std::string& text;
    std::size_t pos = 0;
    unsigned scales;

    RatFuncParser(const std::string& t, unsigned s) : text(t), scales(s) {}

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

    RatFunc parse_expr()
    {
        RatFunc acc = parse_term();
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

    RatFunc parse_term()
    {
        RatFunc acc = parse_factor();
        for (;;) {
            if (eat('*'))
                acc = acc * parse_factor();
            else if (eat('/'))
                acc = acc / parse_factor();
            else
                return acc;
        }
    }

    RatFunc parse_factor()
    {
        skip_ws();
        if (pos < text.size() && text[pos] == '-') {
            ++pos;
            return -parse_factor();
        }
        RatFunc base = parse_atom();
        skip_ws();
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
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
            return base.pow(neg ? -v : v);
        }
        return base;
    }

    RatFunc parse_atom()
    {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of expression");
        char ch = text[pos];
        if (ch == '(') {
            ++pos;
            RatFunc inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (ch == 'x') {
            ++pos;
            return RatFunc::variable();
        }
        if (ch == 'w') {
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
            return RatFunc::constant(Num::scale(static_cast<unsigned>(i)));
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::string digits;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                digits += text[pos++];
            return RatFunc::constant(Num(Rat(Int(digits, 10))));
        }
        fail("unexpected character in expression");
    }
};

} // namespace detail

inline RatFunc RatFunc::parse(const std::string& text, unsigned scales)
{
    detail::RatFuncParser p(text, scales);
    RatFunc out = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size())
        throw Error(ErrorKind::parse_error, "trailing characters in expression", p.pos);
    return out;
}

// f'(a) as the shadow of the difference quotient (f(a+h)-f(a))/h with
// h = 1/w_r one scale above everything in f and a.
inline Num derivative_at(const RatFunc& f, const Num& a, unsigned scales = default_scales)
{
    if (f.den(a).is_zero())
        throw Error(ErrorKind::pole_at_point, "the point is a pole of the function");
    Label supp = f.coefficient_support().unite(a.support());
    unsigned r = supp.empty() ? 0 : supp.max() + 1;
    if (r >= scales)
        throw Error(ErrorKind::scale_exhausted,
                    "derivative needs scale w" + std::to_string(r) + " but only " +
                        std::to_string(scales) + " scales are configured");
    Num h = Num(1) / Num::scale(r);
    Num fa = f.num(a) / f.den(a);
    Num ah = a + h;
    Num fah = f.num(ah) / f.den(ah);
    return shadow((fah - fa) / h, r);
}

} // namespace mlns

#endif
