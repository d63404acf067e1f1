#include <doctest.h>

#include "testutil.hpp"

using namespace mlns;

namespace {

// Sweep every parameter assignment of a formula through los_check.
bool sweep_formula(const FiniteStructure& m, const FiniteUltrafilter& u, const Ultrapower& up,
                   const StructFormula& f)
{
    unsigned fs = f.free_slots();
    std::vector<std::size_t> params(fs, 0);
    for (;;) {
        if (!los_check(m, u, f, params, &up)) return false;
        unsigned i = 0;
        for (; i < fs; ++i) {
            if (++params[i] < up.function_count) break;
            params[i] = 0;
        }
        if (i == fs) return true;
    }
}

} // namespace

TEST_CASE("principal ultrapower is isomorphic to the base structure")
{
    auto m = FiniteStructure::digraph(3, {{0, 1}, {1, 2}, {2, 2}});
    for (unsigned i = 0; i < 3; ++i) {
        auto u = principal_ultrafilter(base_ground(3), i);
        auto up = ultrapower(m, u);
        REQUIRE(up.quotient.size() == m.size());
        // f ~ g iff f(i) = g(i): classes are indexed by the value at i,
        // and the quotient relations agree with the base ones.
        const auto& e = m.relations.at("E");
        const auto& qe = up.quotient.relations.at("E");
        for (unsigned a = 0; a < 3; ++a)
            for (unsigned b = 0; b < 3; ++b) {
                // find the classes of the constant functions a and b
                std::size_t fa = 0, fb = 0, pw = 1;
                for (std::size_t k = 0; k < up.index_size; ++k) {
                    fa += a * pw;
                    fb += b * pw;
                    pw *= up.base_size;
                }
                CHECK(e.holds(a, b, 3) ==
                      qe.holds(up.class_of[fa], up.class_of[fb], up.quotient.size()));
            }
    }
}

TEST_CASE("constant functions embed elementarily (atomic check)")
{
    auto m = FiniteStructure::digraph(2, {{0, 1}});
    auto u = principal_ultrafilter(base_ground(2), 0);
    auto up = ultrapower(m, u);
    auto constant_fn = [&](unsigned v) {
        std::size_t f = 0, pw = 1;
        for (std::size_t k = 0; k < up.index_size; ++k) {
            f += v * pw;
            pw *= up.base_size;
        }
        return f;
    };
    const auto& e = m.relations.at("E");
    const auto& qe = up.quotient.relations.at("E");
    for (unsigned a = 0; a < 2; ++a)
        for (unsigned b = 0; b < 2; ++b)
            CHECK(e.holds(a, b, 2) == qe.holds(up.class_of[constant_fn(a)],
                                               up.class_of[constant_fn(b)],
                                               up.quotient.size()));
}

TEST_CASE("los_check holds across the bounded family on a fixed digraph")
{
    auto m = FiniteStructure::digraph(2, {{0, 1}});
    auto family = struct_formula_family(m);
    CHECK(family.size() > 500); // 5 atoms, 10 literals, 120 matrices, 7 prefixes
    for (unsigned i = 0; i < 2; ++i) {
        auto u = principal_ultrafilter(base_ground(2), i);
        auto up = ultrapower(m, u);
        for (const auto& f : family) CHECK(sweep_formula(m, u, up, f));
    }
}

TEST_CASE("formula evaluation in a structure")
{
    auto m = FiniteStructure::digraph(2, {{0, 1}});
    StructFormula f;
    f.quantifiers = 2;
    f.is_forall = {false, false}; // E q1. E q2.
    f.shape = StructFormula::Shape::conj;
    f.a = {{StructFormula::Atom::Kind::rel, "E", 2, 0, 1}, false};
    f.b = {{StructFormula::Atom::Kind::eq, "", 2, 0, 1}, true}; // !(q1 = q2)
    CHECK(eval_in_structure(m, f, {}));

    StructFormula g;
    g.quantifiers = 1;
    g.is_forall = {true}; // A q1. E(q1, p1)
    g.shape = StructFormula::Shape::lit;
    g.a = {{StructFormula::Atom::Kind::rel, "E", 2, 0, 1}, false};
    CHECK_FALSE(eval_in_structure(m, g, {1}));
    auto m2 = FiniteStructure::digraph(2, {{0, 1}, {1, 1}});
    CHECK(eval_in_structure(m2, g, {1}));
}

TEST_CASE("structure guards")
{
    CHECK_THROWS_AS(FiniteStructure::digraph(5, {}), Error);
    CHECK_THROWS_AS(FiniteStructure::digraph(2, {{0, 3}}), Error);
    auto m = FiniteStructure::digraph(2, {});
    CHECK_THROWS_AS(ultrapower(m, principal_ultrafilter(base_ground(7), 0)), Error);
}
