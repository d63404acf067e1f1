#include <doctest.h>

#include "testutil.hpp"

using namespace mlns;

TEST_CASE("is_ultrafilter checks the axioms by enumeration")
{
    // principal family at 1 on {0,1,2}
    std::vector<std::uint64_t> fam;
    for (std::uint64_t y = 0; y < 8; ++y)
        if (y & 2) fam.push_back(y);
    CHECK(is_ultrafilter(fam, 3));

    // the family of all subsets fails (empty set, complements)
    std::vector<std::uint64_t> all;
    for (std::uint64_t y = 0; y < 8; ++y) all.push_back(y);
    CHECK_FALSE(is_ultrafilter(all, 3));

    CHECK_FALSE(is_ultrafilter({}, 3));

    // filter generated by a two-element core: not maximal
    std::vector<std::uint64_t> upfam;
    for (std::uint64_t y = 0; y < 8; ++y)
        if ((y & 3) == 3) upfam.push_back(y);
    CHECK_FALSE(is_ultrafilter(upfam, 3));
}

TEST_CASE("all ultrafilters on a finite set are the principal ones")
{
    CHECK(all_ultrafilters(1, true).size() == 1);
    CHECK(all_ultrafilters(2, true).size() == 2);
    auto principal = all_ultrafilters(4, false);
    auto exhaustive = all_ultrafilters(4, true);
    REQUIRE(exhaustive.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        bool found = false;
        for (const auto& u : exhaustive)
            if (u == principal[i]) found = true;
        CHECK(found);
    }
    CHECK_THROWS_AS(all_ultrafilters(5, true), Error);
}

TEST_CASE("pushforward follows the defining formula")
{
    auto u = principal_ultrafilter(base_ground(3), 1);
    // identity
    CHECK(pushforward(u, {0, 1, 2}, base_ground(3)) == u);
    // constant map: principal at the constant
    auto c = pushforward(u, {2, 2, 2}, base_ground(3));
    CHECK(principal_point(c) == 2);
    CHECK(is_ultrafilter(c));
    // permutation
    auto p = pushforward(u, {2, 0, 1}, base_ground(3));
    CHECK(principal_point(p) == 0);
    // principal at i maps to principal at pi(i), brute force over targets
    for (unsigned i = 0; i < 3; ++i) {
        auto ui = principal_ultrafilter(base_ground(3), i);
        std::vector<unsigned> pi{1, 0, 1};
        auto v = pushforward(ui, pi, base_ground(2));
        CHECK(principal_point(v) == pi[i]);
        CHECK(is_ultrafilter(v));
    }
}

TEST_CASE("pushforward is functorial")
{
    testutil::Rng rng(311);
    for (int t = 0; t < 50; ++t) {
        unsigned gi = static_cast<unsigned>(rng.range(1, 4));
        unsigned gj = static_cast<unsigned>(rng.range(1, 4));
        unsigned gk = static_cast<unsigned>(rng.range(1, 4));
        std::vector<unsigned> pi(gi), sigma(gj);
        for (auto& x : pi) x = static_cast<unsigned>(rng.range(0, gj - 1));
        for (auto& x : sigma) x = static_cast<unsigned>(rng.range(0, gk - 1));
        auto u = principal_ultrafilter(base_ground(gi),
                                       static_cast<unsigned>(rng.range(0, gi - 1)));
        std::vector<unsigned> composed(gi);
        for (unsigned s = 0; s < gi; ++s) composed[s] = sigma[pi[s]];
        CHECK(pushforward(u, composed, base_ground(gk)) ==
              pushforward(pushforward(u, pi, base_ground(gj)), sigma, base_ground(gk)));
    }
}

TEST_CASE("tensor product by enumeration")
{
    auto u = principal_ultrafilter(base_ground(3), 1);
    auto v = principal_ultrafilter(base_ground(3), 2);
    auto t = tensor(u, v);
    CHECK(t.ground.names[principal_point(t)] == "(1,2)");
    CHECK(is_ultrafilter(t));

    // tensor against a singleton: isomorphic copy of U on I x {j}
    auto w = principal_ultrafilter(base_ground(1), 0);
    auto tw = tensor(u, w);
    CHECK(principal_point(tw) == 1);
    CHECK(is_ultrafilter(tw));

    // every pair with |I|,|J| <= 3 yields an ultrafilter
    for (unsigned gi = 1; gi <= 3; ++gi)
        for (unsigned gj = 1; gj <= 3; ++gj)
            for (unsigned i = 0; i < gi; ++i)
                for (unsigned j = 0; j < gj; ++j) {
                    auto tt = tensor(principal_ultrafilter(base_ground(gi), i),
                                     principal_ultrafilter(base_ground(gj), j));
                    CHECK(is_ultrafilter(tt));
                    CHECK(principal_point(tt) == i * gj + j);
                }
}

TEST_CASE("tensor powers follow the recursion")
{
    auto u = principal_ultrafilter(base_ground(3), 1);
    auto t0 = tensor_power(u, 0);
    CHECK(t0.ground.size() == 1);
    CHECK_FALSE(t0.family.get(0)); // empty set absent
    CHECK(t0.family.get(1));       // {∅} present
    CHECK(tensor_power(u, 1) == u);
    auto t2 = tensor_power(u, 2);
    CHECK(t2.ground.names[principal_point(t2)] == "(1,1)");
    auto t3 = tensor_power(u, 3);
    CHECK(t3.ground.names[principal_point(t3)] == "(1,1,1)");
    CHECK(verify_ultrafilter_fast(t3));
    CHECK_THROWS_AS(tensor_power(principal_ultrafilter(base_ground(4), 0), 3), Error);
}

TEST_CASE("projection to a label reindexes the tensor power")
{
    auto u = principal_ultrafilter(base_ground(2), 1);
    CHECK(project_to_label(u, Label::numeral(2), 2) == tensor_power(u, 2));
    auto p = project_to_label(u, Label{1, 3}, 2);
    CHECK(p.ground.names[principal_point(p)] == "[1:1,3:1]");
    CHECK_THROWS_AS(project_to_label(u, Label{1, 3}, 3), Error);
    try {
        project_to_label(u, Label{1}, 2);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::size_mismatch);
    }
}

TEST_CASE("coherence: U_a is the restriction of U_b")
{
    auto u = principal_ultrafilter(base_ground(2), 0);
    CHECK(check_coherence(u, Label{0, 1}, Label{0, 1}));
    CHECK(check_coherence(u, Label{}, Label{0, 1}));
    CHECK(check_coherence(u, Label{1}, Label{0, 1, 2}));
    CHECK_THROWS_AS(check_coherence(u, Label{3}, Label{0, 1}), Error);
}

TEST_CASE("principal construction matches the defining family")
{
    testutil::Rng rng(313);
    for (unsigned g = 1; g <= 10; ++g) {
        unsigned p = static_cast<unsigned>(rng.range(0, g - 1));
        auto u = principal_ultrafilter(base_ground(g), p);
        for (int t = 0; t < 200; ++t) {
            std::uint64_t y = rng.next() & ((std::uint64_t(1) << g) - 1);
            CHECK(u.family.get(y) == ((y >> p) & 1));
        }
        CHECK(verify_ultrafilter_fast(u));
        CHECK(principal_point(u) == p);
    }
}
