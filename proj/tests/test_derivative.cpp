#include <doctest.h>

#include "testutil.hpp"

using namespace mlns;
using testutil::Rng;

namespace {

// Symbolic oracle: (P/Q)' = (P'Q - PQ')/Q^2 evaluated at the point.
Num formal_derivative_at(const RatFunc& f, const Num& a)
{
    UniPoly dp = f.num.differentiated();
    UniPoly dq = f.den.differentiated();
    Num p = f.num(a), q = f.den(a);
    Num dpv = dp(a), dqv = dq(a);
    return (dpv * q - p * dqv) / (q * q);
}

RatFunc random_ratfunc(Rng& rng, const std::vector<unsigned>& vars)
{
    auto random_unipoly = [&](bool nonzero) {
        UniPoly p;
        unsigned deg = static_cast<unsigned>(rng.range(0, 3));
        for (unsigned k = 0; k <= deg; ++k) {
            if (rng.chance(0.3))
                p.c.push_back(Num(0));
            else if (vars.empty() || rng.chance(0.5))
                p.c.push_back(Num(testutil::random_rat(rng, 5)));
            else
                p.c.push_back(testutil::random_num(rng, vars, 2, 2, 5));
        }
        p.trim();
        if (nonzero && p.is_zero()) p = UniPoly::constant(Num(1));
        return p;
    };
    return RatFunc::make(random_unipoly(false), random_unipoly(true));
}

} // namespace

TEST_CASE("derivative on fixed inputs")
{
    CHECK(derivative_at(RatFunc::parse("x^2"), Num(3)) == Num(6));
    CHECK(derivative_at(RatFunc::parse("x^3"), Num::scale(0)) ==
          Num(3) * Num::scale(0) * Num::scale(0));
    CHECK(derivative_at(RatFunc::parse("1/x"), Num(2)) == Num(Rat(-1, 4)));
    CHECK(derivative_at(RatFunc::parse("(x^2 - 1)/(x - 1)"), Num(5)) == Num(1));

    try {
        derivative_at(RatFunc::parse("1/x"), Num(0));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::pole_at_point);
    }
}

TEST_CASE("the level of the increment follows the data")
{
    // coefficients and point in S_{}: h = 1/w0 works even at the last scale
    CHECK(derivative_at(RatFunc::parse("x^2"), Num(1), 1) == Num(2));
    // point at the top scale: no room left
    try {
        derivative_at(RatFunc::parse("x^2"), Num::scale(7));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::scale_exhausted);
    }
    // a higher-scale coefficient forces a higher-level infinitesimal
    RatFunc f = RatFunc::parse("w2*x^2");
    CHECK(derivative_at(f, Num(1)) == Num(2) * Num::scale(2));
}

TEST_CASE("derivative agrees with the symbolic oracle on random functions")
{
    Rng rng(601);
    std::vector<unsigned> vars{0, 1};
    int checked = 0;
    for (int t = 0; t < 80; ++t) {
        RatFunc f = random_ratfunc(rng, vars);
        Num a = rng.chance(0.4) ? Num(testutil::random_rat(rng, 5))
                                : testutil::random_num(rng, {0}, 2, 2, 5);
        if (f.den(a).is_zero()) continue;
        CHECK(derivative_at(f, a) == formal_derivative_at(f, a));
        ++checked;
    }
    CHECK(checked > 40);
}

TEST_CASE("rational function normalization")
{
    RatFunc f = RatFunc::parse("(x^2 - 1)/(x - 1)");
    CHECK(f.num.degree() == 1); // reduced to x + 1
    CHECK(f.den.degree() == 0);
    RatFunc g = RatFunc::parse("x/x");
    CHECK(g.num.degree() == 0);
    CHECK(g.num.c[0] == Num(1));
    CHECK_THROWS_AS(RatFunc::parse("1/(x - x)"), Error);
}
