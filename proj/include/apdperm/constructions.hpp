#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "apdperm/permcore.hpp"

namespace apdperm {

// The glued-modulus cases 2p, 3p, 5p, 7p.
enum class CaseKind { TwoP, ThreeP, FiveP, SevenP };

std::string case_name(CaseKind kind);
CaseKind parse_case(const std::string& name);
uint64_t case_block_count(CaseKind kind);  // 2, 3, 5, 7

// Smallest prime with guaranteed parameter existence: full 2p (t and y)
// needs p > 500; 3p needs p >= 31; 5p needs p > 500; 7p needs p >= 67.
uint64_t case_threshold(CaseKind kind);

struct CaseParams {
    uint64_t p = 0;
    uint64_t t = 0;
    std::optional<uint64_t> y;  // 2p only
};

// Index of the element congruent to a mod m and x mod p in Z/mpZ.
uint64_t crt_pair(uint64_t m, uint64_t p, uint64_t a, uint64_t x);

// The map 0 -> t, 1 -> 0, x -> t/x on Z/pZ (p >= 11 prime, t != 0).
// Preserves exactly the two classes through (0, 3/2, 3) and (1/3, 2/3, 1).
Perm prime_base_perm(uint64_t p, uint64_t t);

// Base map repaired by up to two transpositions, searched lexicographically
// over (i, j) with i drawn from the residual progressions' elements.
Perm build_prime(uint64_t p, uint64_t t, bool verify = true);
// Same, scanning t = 2, 3, ... until a repairable t is found.
Perm build_prime(uint64_t p, bool verify = true);

// Parameter validity: exclusion set plus Legendre conditions of the case.
bool valid_t(CaseKind kind, uint64_t p, uint64_t t);
// Secondary 2p parameter: exclusion set plus Legendre conditions on y given t.
bool valid_y_2p(uint64_t p, uint64_t t, uint64_t y);
// Number of t in Z/pZ meeting just the Legendre conditions of the case.
uint64_t count_symbol_t(CaseKind kind, uint64_t p);

// Smallest valid t >= 2 for the case, scanning upward; NotFound on exhaustion.
uint64_t first_valid_t(CaseKind kind, uint64_t p);

// Deterministic ascending scans (t = 2, 3, ...; then y for 2p). With
// enforce_threshold the 2p case requires p > 500; without it 31 <= p <= 500
// is admitted and the y scan may exhaust (NotFound), signalling the caller
// to fall back to descent on the full modulus.
CaseParams find_params(CaseKind kind, uint64_t p, bool enforce_threshold = true);

// Two-block glue before the repair exchange at (0,1)/(0,y); t validated.
Perm build_2p_base(uint64_t p, uint64_t t);

Perm build_2p(uint64_t p, const CaseParams& params, bool verify = true);
Perm build_3p(uint64_t p, uint64_t t, bool verify = true);
Perm build_5p(uint64_t p, uint64_t t, bool verify = true);
Perm build_7p(uint64_t p, uint64_t t, bool verify = true);

// Fixed block permutations gluing the special columns x in {0, 1} and the
// generic columns of the 5p and 7p maps.
extern const std::array<uint32_t, 5> kFiveBlockPerm;
extern const std::array<uint32_t, 7> kSevenBlockSpecial;
extern const std::array<uint32_t, 7> kSevenBlockGeneric;

}  // namespace apdperm
