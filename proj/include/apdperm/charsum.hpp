#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apdperm/modular.hpp"

namespace apdperm {

// Exact Legendre-symbol sum of a polynomial over Z/pZ, with the bound
// 2g*sqrt(p) + 1 for curves y^2 = f of degree 2g+1 or 2g+2. The bound is
// meaningful only when f is not a constant times a square.
struct CharSumResult {
    uint64_t p;
    PolyOverFp polynomial;
    int64_t sum;
    uint64_t genus_bound_g;  // floor((deg - 1) / 2)
    double bound;            // 2g*sqrt(p) + 1
};

CharSumResult char_sum(const PolyOverFp& f);

// The five parameter-existence sums, one per glued case scan:
//   2p-t   sum_t (1-X(1-t))(1-X(t(t-1)))                     >= p - 4
//   2p-y   sum_y over the four y-condition factors            >= p - 15 - 60*sqrt(p)
//   3p-t   sum_t (1-X(t(t-1)))(1-X((t-1)(t-9)))              >= p - 4
//   5p-t   sum_t over the six t-condition factors             >= p - 63 - 130*sqrt(p)
//   7p-t   sum_t (1-X((t-9)(t-1)))(1-X((9t-1)(t-1)))         >= p - 4
// where X is the Legendre symbol mod p. 2p-y fixes t to the first valid
// 2p parameter for p.
const std::vector<std::string>& parameter_sum_ids();

// Smallest prime each sum's bound is checked from.
uint64_t parameter_sum_min_prime(const std::string& sum_id);

struct ParameterSumCheck {
    uint64_t p = 0;
    std::string sum_id;
    int64_t sum = 0;
    double bound = 0.0;
    bool pass = false;
};

// Exact sum and exact integer comparison against the bound above.
ParameterSumCheck check_parameter_sum(const std::string& sum_id, uint64_t p);
bool verify_parameter_sum(const std::string& sum_id, uint64_t p);

// One nonempty-subset term of the expanded product: sign * sum_v X(product).
// kernel_degree is the degree after removing even-multiplicity roots; the
// term is nonsquare when something of odd multiplicity (a root or an
// irreducible quadratic factor) remains.
struct ExpansionTerm {
    int sign = 1;
    PolyOverFp product;
    int64_t sum = 0;
    uint64_t degree = 0;
    uint64_t kernel_degree = 0;
    bool nonsquare = false;
};

struct Expansion {
    uint64_t p = 0;
    std::string sum_id;
    std::optional<uint64_t> t;  // the fixed parameter, 2p-y only
    std::vector<ExpansionTerm> terms;
};

// All 2^k - 1 product terms of the sum's expansion; any prime p >= 11.
Expansion expansion_terms(const std::string& sum_id, uint64_t p);

// Nonvanishing mod p of 2^28 t^3 (t-9)^2 (t-4)^2 (t-1)^8 (9t-1)^2, the
// discriminant of (y-1)(9y-1)(ty-1)f1(y); true iff the four factors of that
// product share no root, i.e. t avoids {0, 1, 4, 9, 1/9}.
bool discriminant_distinct_roots(uint64_t t, uint64_t p);

}  // namespace apdperm
