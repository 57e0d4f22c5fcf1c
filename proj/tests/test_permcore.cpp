#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

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

// Independent scan: every (a, r != 0) pair, canonicalized into a set.
std::set<ApTriple> preserved_oracle(const Perm& pi) {
    const uint64_t n = pi.size();
    std::set<ApTriple> out;
    for (uint64_t a = 0; a < n; ++a)
        for (uint64_t r = 1; r < n; ++r) {
            const uint64_t v0 = pi(a);
            const uint64_t v1 = pi((a + r) % n);
            const uint64_t v2 = pi((a + 2 * r) % n);
            if ((v0 + v2) % n == 2 * v1 % n) out.insert(canonical_ap(n, a, r));
        }
    return out;
}

}  // namespace

TEST_CASE("Perm constructor accepts only bijections") {
    CHECK_THROWS_AS(Perm(std::vector<uint32_t>{}), BadParams);
    CHECK_THROWS_AS(Perm({0, 0, 1}), BadParams);
    CHECK_THROWS_AS(Perm({0, 3}), BadParams);
    const Perm id = Perm::identity(5);
    CHECK(id.size() == 5);
    CHECK(id(3) == 3);
}

TEST_CASE("canonical_ap folds a class with its reverse") {
    // (4, 4) on Z/11 reversed is (1, 7); the smaller pair wins.
    CHECK(canonical_ap(11, 4, 4) == ApTriple{1, 7});
    CHECK(canonical_ap(11, 1, 7) == ApTriple{1, 7});
    // Self-inverse difference: r = n/2.
    CHECK(canonical_ap(8, 5, 4) == ApTriple{5, 4});
    CHECK_THROWS_AS((void)canonical_ap(9, 2, 0), BadParams);
    CHECK_THROWS_AS((void)canonical_ap(0, 0, 1), OutOfRange);
}

TEST_CASE("count_canonical_aps matches direct class enumeration") {
    for (uint64_t n = 1; n <= 40; ++n) {
        std::set<ApTriple> classes;
        for (uint64_t a = 0; a < n; ++a)
            for (uint64_t r = 1; r < n; ++r) classes.insert(canonical_ap(n, a, r));
        CHECK(count_canonical_aps(n) == classes.size());
    }
    CHECK(count_canonical_aps(6) == 18);
    CHECK(count_canonical_aps(2500) == 2500ull * 1250);
}

TEST_CASE("verify matches the quadratic oracle on random permutations") {
    for (uint64_t seed = 0; seed < 6; ++seed) {
        const Perm pi = random_perm(12, seed);
        const std::set<ApTriple> expect = preserved_oracle(pi);
        const ApReport rep = verify(pi);
        CHECK(rep.n == 12);
        CHECK(rep.preserved_count == expect.size());
        CHECK(!rep.truncated);
        CHECK(std::set<ApTriple>(rep.preserved.begin(), rep.preserved.end()) ==
              expect);
        CHECK(preserved_count(pi) == expect.size());
    }
}

TEST_CASE("identity preserves every class") {
    const ApReport rep = verify(Perm::identity(9));
    CHECK(rep.preserved_count == 36);
    CHECK(rep.preserved.size() == 36);
}

TEST_CASE("threaded verification agrees with single-threaded") {
    for (uint64_t seed = 0; seed < 3; ++seed) {
        const Perm pi = random_perm(53, seed);
        VerifyOptions one;
        VerifyOptions four;
        four.threads = 4;
        const ApReport a = verify(pi, one);
        const ApReport b = verify(pi, four);
        CHECK(a.preserved_count == b.preserved_count);
        CHECK(a.preserved == b.preserved);
        CHECK(preserved_count(pi, 4) == a.preserved_count);
    }
}

TEST_CASE("lift interleaves blocks") {
    const Perm sigma_q = random_perm(4, 1);
    const Perm sigma_h = random_perm(3, 2);
    const Perm pi = lift(sigma_q, sigma_h);
    REQUIRE(pi.size() == 12);
    for (uint64_t k = 0; k < 3; ++k)
        for (uint64_t r = 0; r < 4; ++r)
            CHECK(pi(r + 4 * k) == sigma_q(r) + 4 * sigma_h(k));
}

TEST_CASE("apply_transposition swaps two images") {
    const Perm pi = random_perm(9, 5);
    const Perm swapped = apply_transposition(pi, 2, 7);
    CHECK(swapped(2) == pi(7));
    CHECK(swapped(7) == pi(2));
    CHECK(swapped(0) == pi(0));
    CHECK(apply_transposition(swapped, 2, 7) == pi);
}

TEST_CASE("serialization round trips and rejects malformed input") {
    const Perm pi = random_perm(17, 9);
    CHECK(from_json(to_json(pi)) == pi);
    CHECK(from_plain(to_plain(pi)) == pi);
    CHECK(from_any(to_json(pi)) == pi);
    CHECK(from_any(to_plain(pi)) == pi);
    CHECK(from_any("# note\n" + to_plain(pi)) == pi);

    CHECK_THROWS_AS((void)from_json("{\"n\": 3}"), ParseError);
    CHECK_THROWS_AS((void)from_json("{\"n\": 2, \"image\": [0, 2]}"),
                    ParseError);
    CHECK_THROWS_AS((void)from_plain("3\n0 1\n"), ParseError);
    CHECK_THROWS_AS((void)from_any(""), ParseError);
    CHECK_THROWS_AS((void)from_any("not a permutation"), ParseError);
}
