#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "apdperm/abelian.hpp"
#include "apdperm/ap_engine.hpp"
#include "apdperm/errors.hpp"
#include "apdperm/permcore.hpp"
#include "apdperm/search.hpp"
#include "doctest.h"

using namespace apdperm;

namespace {

Perm random_perm(std::size_t n, uint64_t seed) {
    std::vector<uint32_t> img(n);
    std::iota(img.begin(), img.end(), 0u);
    SplitMix64 rng(seed);
    for (std::size_t i = n; i > 1; --i)
        std::swap(img[i - 1], img[rng.next_below(i)]);
    return Perm(std::move(img));
}

GroupGenOptions no_cache() {
    GroupGenOptions opts;
    opts.use_cache = false;
    return opts;
}

}  // namespace

TEST_CASE("group descriptors parse and print") {
    const AbelianGroup g = AbelianGroup::parse("3 x 3 x 5");
    CHECK(g.cyclic_factors() == std::vector<uint64_t>{3, 3, 5});
    CHECK(g.order() == 45);
    CHECK(g.omega() == 3);
    CHECK(g.descriptor() == "3 x 3 x 5");

    CHECK(AbelianGroup::parse("9x3").order() == 27);
    CHECK(AbelianGroup::parse("9*3").omega() == 3);
    CHECK(AbelianGroup().order() == 1);

    CHECK_THROWS_AS((void)AbelianGroup::parse(""), ParseError);
    CHECK_THROWS_AS((void)AbelianGroup::parse("3 + 5"), ParseError);
    CHECK_THROWS_AS((void)AbelianGroup::parse("3 x 1"), BadParams);
}

TEST_CASE("group_verify over a cyclic group matches the cyclic scan") {
    const AbelianGroup g({45});
    for (uint64_t seed = 0; seed < 4; ++seed) {
        const Perm pi = random_perm(45, seed);
        const ApReport cyclic = verify(pi);
        const ApReport grouped = group_verify(g, pi);
        CHECK(grouped.preserved_count == cyclic.preserved_count);
        CHECK(grouped.preserved == cyclic.preserved);
    }
}

TEST_CASE("identity on (Z/3)^2 preserves every class") {
    const AbelianGroup g({3, 3});
    CHECK(group_preserved_count(g, Perm::identity(9)) == 36);
    const ApReport rep = group_verify(g, Perm::identity(9));
    CHECK(rep.preserved_count == 36);
    CHECK(!rep.truncated);
}

TEST_CASE("trivial group has nothing to preserve") {
    CHECK(group_preserved_count(AbelianGroup(), Perm::identity(1)) == 0);
}

TEST_CASE("group_lift with a stride subgroup matches the cyclic lift") {
    const AbelianGroup g({16});
    const std::vector<uint64_t> h_elements = {0, 4, 8, 12};
    for (uint64_t seed = 0; seed < 5; ++seed) {
        const Perm h_perm = random_perm(4, seed);
        const Perm q_perm = random_perm(4, seed + 100);
        CHECK(group_lift(h_perm, q_perm, g, h_elements) ==
              lift(q_perm, h_perm));
    }
}

TEST_CASE("group_lift with a trivial subgroup relabels the quotient") {
    const AbelianGroup g({9});
    const Perm q_perm = random_perm(9, 3);
    CHECK(group_lift(Perm::identity(1), q_perm, g, {0}) == q_perm);
}

TEST_CASE("group_lift validates the subgroup enumeration") {
    const AbelianGroup g({16});
    const Perm h = Perm::identity(4);
    const Perm q = Perm::identity(4);
    CHECK_THROWS_AS((void)group_lift(h, q, g, {0, 1, 2, 3}), BadParams);
    CHECK_THROWS_AS((void)group_lift(h, q, g, {4, 8, 12, 0}), BadParams);
    CHECK_THROWS_AS((void)group_lift(h, q, g, {0, 4, 8, 8}), BadParams);
    CHECK_THROWS_AS((void)group_lift(h, q, g, {0, 4, 8}), BadParams);
    CHECK_THROWS_AS(
        (void)group_lift(Perm::identity(3), q, g, {0, 4, 8, 12}), BadParams);
}

TEST_CASE("gluing verified parts destroys everything on the product") {
    // Z/9 x Z/3 x Z/5 glued from a Z/3 x Z/5 subgroup and a (Z/3)^2 quotient.
    const AbelianGroup g({9, 3, 5});
    const Perm h_perm = group_generate(AbelianGroup({3, 5}), no_cache());
    const Perm q_perm = group_generate(AbelianGroup({3, 3}), no_cache());
    std::vector<uint64_t> h_elements;
    for (uint64_t s0 = 0; s0 < 3; ++s0)
        for (uint64_t s1 = 0; s1 < 5; ++s1)
            h_elements.push_back(45 * s0 + s1);
    const Perm glued = group_lift(h_perm, q_perm, g, h_elements);
    CHECK(group_preserved_count(g, glued) == 0);
}

TEST_CASE("random split lifts stay destroying across 20 draws") {
    const std::vector<std::vector<uint64_t>> h_pool = {
        {9}, {3, 3}, {15}, {9, 3}, {11}};
    const std::vector<std::vector<uint64_t>> q_pool = {
        {9}, {11}, {13}, {3, 3}, {15}};
    SplitMix64 rng(2024);
    for (int draw = 0; draw < 20; ++draw) {
        const auto& hf = h_pool[rng.next_below(h_pool.size())];
        const auto& qf = q_pool[rng.next_below(q_pool.size())];
        std::vector<uint64_t> factors = hf;
        factors.insert(factors.end(), qf.begin(), qf.end());
        const AbelianGroup g(factors);

        GroupGenOptions opts = no_cache();
        opts.seed = rng.next();
        const Perm h_perm = group_generate(AbelianGroup(hf), opts);
        const Perm q_perm = group_generate(AbelianGroup(qf), opts);

        uint64_t q_order = 1;
        for (uint64_t f : qf) q_order *= f;
        uint64_t h_order = 1;
        for (uint64_t f : hf) h_order *= f;
        std::vector<uint64_t> h_elements;
        for (uint64_t idx = 0; idx < h_order; ++idx) {
            uint64_t rem = idx;
            uint64_t element = 0;
            uint64_t weight = q_order;
            for (std::size_t i = hf.size(); i-- > 0;) {
                element += (rem % hf[i]) * weight;
                rem /= hf[i];
                weight *= hf[i];
            }
            h_elements.push_back(element);
        }
        std::sort(h_elements.begin(), h_elements.end());

        const Perm glued = group_lift(h_perm, q_perm, g, h_elements);
        CHECK(group_preserved_count(g, glued) == 0);
    }
}

TEST_CASE("forced progression witness on even products") {
    const AbelianGroup h({3});
    const MixedRadixOps ops({2, 2, 3});

    for (uint64_t seed = 0; seed < 500; ++seed) {
        const Perm pi = random_perm(12, seed);
        const ApTriple w = forced_preserved_ap(2, h, pi);
        CHECK(w.r != 0);
        CHECK(w.r % 3 == 0);  // difference lies in the 2-torsion slice
        const std::size_t mid = ops.add(w.a, w.r);
        const std::size_t end = ops.add(mid, w.r);
        CHECK(ops.preserved(pi(w.a), pi(mid), pi(end)));
    }

    // k = 1 with trivial H: both permutations of Z/2 preserve a progression.
    for (const Perm& pi :
         {Perm({0u, 1u}), Perm({1u, 0u})}) {
        const ApTriple w = forced_preserved_ap(1, AbelianGroup(), pi);
        CHECK(w.r == 1);
    }

    CHECK_THROWS_AS((void)forced_preserved_ap(0, h, Perm::identity(3)),
                    BadParams);
    CHECK_THROWS_AS((void)forced_preserved_ap(1, h, Perm::identity(6)),
                    BadParams);  // |H| = 3 >= 2^1
}

TEST_CASE("group generation covers the exceptional structures") {
    for (const std::vector<uint64_t>& factors :
         {std::vector<uint64_t>{3, 3, 5}, std::vector<uint64_t>{9, 3},
          std::vector<uint64_t>{25, 5}}) {
        const AbelianGroup g(factors);
        const Perm pi = group_generate(g, no_cache());
        CHECK(group_preserved_count(g, pi) == 0);
    }
}

TEST_CASE("group generation routes coprime structures through Z/n") {
    for (const std::vector<uint64_t>& factors :
         {std::vector<uint64_t>{15}, std::vector<uint64_t>{3, 5},
          std::vector<uint64_t>{9, 5}, std::vector<uint64_t>{5, 3, 11}}) {
        const AbelianGroup g(factors);
        const Perm pi = group_generate(g, no_cache());
        CHECK(group_preserved_count(g, pi) == 0);
    }
}

TEST_CASE("group generation recurses on a peeled subgroup") {
    for (const std::vector<uint64_t>& factors :
         {std::vector<uint64_t>{3, 3, 11}, std::vector<uint64_t>{27, 3},
          std::vector<uint64_t>{9, 9}, std::vector<uint64_t>{3, 3, 3, 5}}) {
        const AbelianGroup g(factors);
        const Perm pi = group_generate(g, no_cache());
        CHECK(group_preserved_count(g, pi) == 0);
    }
}

TEST_CASE("group generation is seed-deterministic") {
    GroupGenOptions opts = no_cache();
    opts.seed = 9;
    const AbelianGroup g({3, 3, 11});
    CHECK(group_generate(g, opts) == group_generate(g, opts));
}

TEST_CASE("group generation refuses what the theory excludes") {
    CHECK_THROWS_AS((void)group_generate(AbelianGroup({2, 4}), no_cache()),
                    Unsupported);
    CHECK_THROWS_AS((void)group_generate(AbelianGroup({3}), no_cache()),
                    Unsupported);
    CHECK_THROWS_AS((void)group_generate(AbelianGroup({7}), no_cache()),
                    Unsupported);
    CHECK_THROWS_AS((void)group_generate(AbelianGroup({17, 17}), no_cache()),
                    Unsupported);
    GroupGenOptions tiny = no_cache();
    tiny.order_ceiling = 100;
    CHECK_THROWS_AS((void)group_generate(AbelianGroup({101, 3}), tiny),
                    Unsupported);
}
