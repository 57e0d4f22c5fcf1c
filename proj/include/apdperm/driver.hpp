#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apdperm/permcore.hpp"

namespace apdperm::driver {

enum class Method {
    PrimeConstruction,
    Case2p,
    Case3p,
    Case5p,
    Case7p,
    Descent,
    Cache,
};

std::string method_name(Method m);

struct Leaf {
    uint64_t modulus = 0;
    Method method = Method::Descent;
    uint64_t prime = 0;  // the prime behind prime and case leaves
};

// Decomposition of n into leaf moduli whose permutations compose by lift.
// Small-prime mass (2, 3, 5, 7) is grouped into products of two or three
// primes (at most 343, searched by descent), except that a single leftover
// small prime s attaches to the smallest remaining prime q as an s*q case
// leaf; case leaves below their parameter threshold downgrade to descent
// (modulus at most 2500). Primes >= 11 appear once per exponent.
struct FactorPlan {
    uint64_t n = 0;
    std::vector<Leaf> leaves;  // composed left to right: acc = lift(acc, leaf)
};

FactorPlan plan(uint64_t n);

struct GenOptions {
    uint64_t seed = 0;
    uint64_t size_ceiling = 1'000'000;
    uint64_t verify_ceiling = 20'000;
    bool verify = true;
    bool use_cache = true;
    std::string cache_dir;  // empty: default resolution order
    unsigned threads = 1;
};

struct LeafNote {
    uint64_t modulus = 0;
    Method planned = Method::Descent;
    Method used = Method::Descent;
    uint64_t prime = 0;
    uint64_t iterations = 0;  // descent samples when freshly searched
};

struct GenReport {
    uint64_t n = 0;
    bool verified = false;
    uint64_t preserved_count = 0;
    std::vector<LeafNote> leaves;
};

Perm generate(uint64_t n);
Perm generate(uint64_t n, const GenOptions& options,
              GenReport* report = nullptr);

}  // namespace apdperm::driver
