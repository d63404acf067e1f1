#include <doctest.h>

#include "testutil.hpp"

using namespace mlns;
using testutil::Rng;

TEST_CASE("parser builds the expected trees")
{
    Formula f = parse_formula("A x in S{0}. E y in S{0,1}. I{0}{1}(x) = y");
    REQUIRE(f->kind == FKind::forall_in);
    CHECK(f->var1 == "x");
    CHECK(f->label1 == Label{0});
    REQUIRE(f->left->kind == FKind::exists_in);
    CHECK(f->left->left->kind == FKind::atom_emb);

    Formula g = parse_formula("x in S{}");
    CHECK(g->kind == FKind::atom_in_level);
    CHECK(g->label1.empty());

    Formula h = parse_formula("x in S3"); // numeral shorthand
    CHECK(h->label1 == Label::numeral(3));
}

TEST_CASE("unbounded quantifiers are rejected outside GT mode")
{
    try {
        parse_formula("A x . x = x");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::admissibility);
    }
    try {
        parse_formula("Aall x. x = x");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::admissibility);
    }
    Formula f = parse_formula("Aall x. x = x", true);
    CHECK(f->kind == FKind::unbounded_forall);
    CHECK_FALSE(is_admissible(f));
}

TEST_CASE("parse errors carry a position")
{
    try {
        parse_formula("x = ");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse_error);
        CHECK(e.position().has_value());
    }
    CHECK_THROWS_AS(parse_formula("(x = y) & y = x"), Error); // operands must be parenthesized
    CHECK_THROWS_AS(parse_formula("I{0}{1,2}(x) = y"), Error); // |a| != |b|
    CHECK_THROWS_AS(parse_formula("x in S{0} extra"), Error);
}

TEST_CASE("rendering is canonical and reparses to the same tree")
{
    CHECK(render(f_in_level("v", Label{0, 1})) == "v in S{0,1}");
    CHECK(render(f_iff(f_eq("u", "v"), f_eq("v", "u"))) == "(u = v) <-> (v = u)");
    CHECK(render(f_not(f_mem("x", "y"))) == "!(x in y)");

    Rng rng(101);
    testutil::FormulaGenOptions opt;
    for (int t = 0; t < 300; ++t) {
        Formula f = testutil::random_admissible(rng, opt, 4, {"u", "v", "w"});
        Formula g = parse_formula(render(f));
        CHECK(equal(f, g));
    }
}

TEST_CASE("free variables")
{
    CHECK(free_variables(parse_formula("A x in S{0}. x = y")) == std::set<std::string>{"y"});
    CHECK(free_variables(parse_formula("x in S{1}")) == std::set<std::string>{"x"});
    CHECK(free_variables(parse_formula("A x in S{0}. E y in S{1}. (x = y) | (x in y)")).empty());
}

TEST_CASE("shift rewrites levels and embeddings")
{
    CHECK(render(shift_up(parse_formula("x in S{0}"), 1)) == "x in S{0,1}");
    CHECK(render(shift_up(parse_formula("I{0}{1}(x) = y"), 2)) == "I{0,1,2}{0,1,3}(x) = y");
    Formula f = parse_formula("A x in S{1}. (x in S{0,2}) -> (x = x)");
    CHECK(equal(shift_up(f, 0), f));
    try {
        shift_up(parse_formula("Aall x. x = x", true), 1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::admissibility);
    }
}

TEST_CASE("shift laws on random admissible formulas")
{
    Rng rng(103);
    testutil::FormulaGenOptions opt;
    for (int t = 0; t < 200; ++t) {
        Formula f = testutil::random_admissible(rng, opt, 4, {"u", "v"});
        unsigned r = static_cast<unsigned>(rng.range(0, 5));
        unsigned s = static_cast<unsigned>(rng.range(0, 5));
        CHECK(equal(shift_up(shift_up(f, r), s), shift_up(f, r + s)));
        CHECK(is_admissible(shift_up(f, r)));
        CHECK(free_variables(shift_up(f, r)) == free_variables(f));
    }
}

TEST_CASE("HO instance shape")
{
    Formula inst = ho_instance(parse_formula("v in S{0}"), 1, Label{0});
    CHECK(render(inst) ==
          "A x in S{0}. A y in S{1}. (I{0}{1}(x) = y) -> ((x in S{0}) <-> (y in S{0,1}))");

    // closed formula: plain biconditional with the shift
    Formula closed = parse_formula("A x in S{0}. x = x");
    Formula inst0 = ho_instance(closed, 2, Label{1});
    CHECK(equal(inst0, f_iff(closed, shift_up(closed, 2))));

    // two parameters at a two-index level: argument maps use r ⊕ a
    Formula emb = parse_formula("I{0}{1}(u) = v");
    Formula inst2 = ho_instance(emb, 1, Label{0, 1});
    CHECK(render(inst2) ==
          "A x1 in S{0,1}. A x2 in S{0,1}. A y1 in S{1,2}. A y2 in S{1,2}. "
          "((I{0,1}{1,2}(x1) = y1) & (I{0,1}{1,2}(x2) = y2)) -> "
          "((I{0}{1}(x1) = x2) <-> (I{0,1}{0,2}(y1) = y2))");

    try {
        ho_instance(parse_formula("Aall x. x = x", true), 1, Label{0});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::admissibility);
    }
}

TEST_CASE("HO instance avoids captured names")
{
    // free variables named x and y force numbered fresh names
    Formula f = parse_formula("(x = y) & (x in S{0})");
    Formula inst = ho_instance(f, 1, Label{0});
    CHECK(is_admissible(inst));
    // reparse and confirm closedness
    CHECK(free_variables(parse_formula(render(inst))).empty());
}

TEST_CASE("GT instance shape and purity check")
{
    Formula inst = gt_instance(parse_formula("v in v1"), Label{0});
    CHECK(equal(inst, parse_formula(
                          "A x1 in S{0}. ((A x in S{0}. x in x1) -> (Aall x. x in x1))", true)));

    // no side parameters: bare implication
    Formula solo = gt_instance(parse_formula("v = v"), Label{1});
    CHECK(solo->kind == FKind::implies);

    try {
        gt_instance(parse_formula("v in S{0}"), Label{0});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::not_pure_in_formula);
    }
    // bounded quantifiers also spoil purity
    CHECK_THROWS_AS(gt_instance(parse_formula("A u in S{0}. u = v"), Label{0}), Error);

    // explicit distinguished variable
    Formula named = gt_instance(parse_formula("a in b"), Label{0}, "b");
    CHECK(free_variables(named).empty());
    CHECK(render(named).rfind("A x1 in S{0}.", 0) == 0);
}

TEST_CASE("GT instances round-trip through the extended grammar")
{
    Rng rng(107);
    for (int t = 0; t < 100; ++t) {
        Formula phi = testutil::random_pure_in(rng, 3, {"v", "v1", "v2"});
        Formula inst = gt_instance(phi, Label{0, 1});
        Formula back = parse_formula(render(inst), true);
        CHECK(equal(inst, back));
        CHECK(free_variables(inst).empty());
    }
}

TEST_CASE("parser survives arbitrary input without crashing")
{
    Rng rng(113);
    const std::string alphabet = "AESIaxyzin0123{}(),.=!&|<->_ #\t";
    int parsed = 0;
    for (int t = 0; t < 3000; ++t) {
        std::string s;
        unsigned len = static_cast<unsigned>(rng.range(0, 24));
        for (unsigned i = 0; i < len; ++i)
            s += alphabet[static_cast<std::size_t>(
                rng.range(0, static_cast<long>(alphabet.size()) - 1))];
        try {
            Formula f = parse_formula(s, rng.chance(0.5));
            CHECK(equal(parse_formula(render(f), true), f));
            ++parsed;
        } catch (const Error&) {
            // rejected input: fine, as long as it is a typed error
        }
    }
    CHECK(parsed >= 0); // reaching here without a crash is the point
}

TEST_CASE("parser survives mutations of valid formulas")
{
    Rng rng(131);
    testutil::FormulaGenOptions opt;
    for (int t = 0; t < 800; ++t) {
        std::string s = render(testutil::random_admissible(rng, opt, 3, {"u", "v"}));
        // delete, duplicate or swap a few characters
        for (int m = 0; m < 3 && !s.empty(); ++m) {
            std::size_t at = static_cast<std::size_t>(
                rng.range(0, static_cast<long>(s.size()) - 1));
            switch (rng.range(0, 2)) {
            case 0: s.erase(at, 1); break;
            case 1: s.insert(at, 1, s[at]); break;
            default:
                if (at + 1 < s.size()) std::swap(s[at], s[at + 1]);
                break;
            }
        }
        try {
            Formula f = parse_formula(s, true);
            CHECK(equal(parse_formula(render(f), true), f));
        } catch (const Error&) {
            // typed rejection
        }
    }
}
