#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "apdperm/driver.hpp"
#include "apdperm/errors.hpp"
#include "apdperm/permcore.hpp"
#include "doctest.h"

using namespace apdperm;
using namespace apdperm::driver;

namespace {

std::string plan_signature(uint64_t n) {
    std::string out;
    for (const Leaf& leaf : plan(n).leaves) {
        if (!out.empty()) out += " ";
        out += std::to_string(leaf.modulus) + ":" + method_name(leaf.method);
        if (leaf.prime != 0) out += "@" + std::to_string(leaf.prime);
    }
    return out;
}

}  // namespace

TEST_CASE("factor plans group small primes and attach singles") {
    CHECK(plan(1).leaves.empty());
    CHECK(plan_signature(12) == "12:descent");
    CHECK(plan_signature(22) == "22:descent@11");       // p = 11 below 2p floor
    CHECK(plan_signature(1006) == "1006:case_2p@503");  // 2 * 503
    CHECK(plan_signature(93) == "93:case_3p@31");       // 3 * 31
    CHECK(plan_signature(2515) == "2515:case_5p@503");  // 5 * 503
    CHECK(plan_signature(469) == "469:case_7p@67");     // 7 * 67
    CHECK(plan_signature(155) == "155:descent@31");     // 5 * 31 below floor
    CHECK(plan_signature(341) ==
          "11:prime_construction@11 31:prime_construction@31");
    CHECK(plan_signature(45 * 503) ==
          "45:descent 503:prime_construction@503");
    CHECK(plan_signature(1024) ==
          "4:descent 4:descent 4:descent 4:descent 4:descent");
    CHECK(plan_signature(121) ==
          "11:prime_construction@11 11:prime_construction@11");

    CHECK_THROWS_AS((void)plan(0), OutOfRange);
    for (uint64_t n : {2ull, 3ull, 5ull, 7ull})
        CHECK_THROWS_AS((void)plan(n), Unsupported);
}

TEST_CASE("generate covers assorted moduli with exhaustive verification") {
    for (uint64_t n : {1ull, 4ull, 8ull, 9ull, 12ull, 45ull, 121ull, 1006ull}) {
        GenOptions opts;
        GenReport report;
        const Perm pi = generate(n, opts, &report);
        CHECK(pi.size() == n);
        CHECK(report.verified);
        CHECK(report.preserved_count == 0);
        CHECK(preserved_count(pi) == 0);
    }
}

TEST_CASE("generate is deterministic for a fixed seed") {
    GenOptions opts;
    opts.seed = 123;
    const Perm a = generate(360, opts);
    const Perm b = generate(360, opts);
    CHECK(a == b);
    CHECK(preserved_count(a) == 0);
}

TEST_CASE("generate rejects unsupported and oversized inputs") {
    for (uint64_t n : {2ull, 3ull, 5ull, 7ull})
        CHECK_THROWS_AS((void)generate(n), Unsupported);
    CHECK_THROWS_AS((void)generate(0), OutOfRange);
    GenOptions tight;
    tight.size_ceiling = 100;
    CHECK_THROWS_AS((void)generate(101, tight), TooLarge);
}

TEST_CASE("small 2p moduli fall back from the glued case gracefully") {
    // 62 = 2 * 31: the 2p construction needs p > 500, so the plan downgrades
    // to descent and the executor may still try the relaxed parameter scan.
    GenOptions opts;
    GenReport report;
    const Perm pi = generate(62, opts, &report);
    CHECK(preserved_count(pi) == 0);
    REQUIRE(report.leaves.size() == 1);
    CHECK(report.leaves[0].planned == Method::Descent);
}

TEST_CASE("descent leaves hit the cache on repeat runs") {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("apdperm-driver-cache-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);

    GenOptions opts;
    opts.cache_dir = dir.string();
    GenReport first;
    const Perm a = generate(12, opts, &first);
    REQUIRE(first.leaves.size() == 1);
    CHECK(first.leaves[0].used == Method::Descent);

    GenReport second;
    const Perm b = generate(12, opts, &second);
    CHECK(second.leaves[0].used == Method::Cache);
    CHECK(a == b);

    std::filesystem::remove_all(dir);
}
