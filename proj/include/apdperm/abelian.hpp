#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apdperm/permcore.hpp"

namespace apdperm {

// Direct product of cyclic groups. Elements are mixed-radix indices with the
// leftmost factor most significant; an empty factor list is the trivial group.
class AbelianGroup {
public:
    AbelianGroup() = default;
    explicit AbelianGroup(std::vector<uint64_t> cyclic_factors);

    // Accepts "3 x 3 x 5" (separator 'x' or '*', whitespace optional).
    static AbelianGroup parse(const std::string& text);

    const std::vector<uint64_t>& cyclic_factors() const { return factors_; }
    uint64_t order() const { return order_; }
    // Prime factors of the order, counted with multiplicity.
    uint64_t omega() const;
    std::string descriptor() const;

private:
    std::vector<uint64_t> factors_;
    uint64_t order_ = 1;
};

// Exhaustive scan of every progression class (a, a+r, a+2r), r != 0, under
// the group's addition. Classes are reported as the lexicographically smaller
// of (a, r) and (a+2r, -r) over element indices.
ApReport group_verify(const AbelianGroup& g, const Perm& pi);
uint64_t group_preserved_count(const AbelianGroup& g, const Perm& pi);

// Coset gluing. h_elements enumerates a subgroup H of g; the enumeration must
// be additive (h_elements[s] + h_elements[s'] lands on some h_elements[s''],
// which defines the index law h_perm is checked against). Cosets are labeled
// by ascending smallest representative, which makes label addition the
// quotient law. The result maps rep(c) + e(h) to rep(q_perm(c)) + e(h_perm(h))
// and destroys all progressions of g whenever h_perm and q_perm destroy all
// progressions of H and of the quotient.
Perm group_lift(const Perm& h_perm, const Perm& q_perm, const AbelianGroup& g,
                const std::vector<uint64_t>& h_elements);

// Pigeonhole obstruction for even order: in (Z/2Z)^k x H with |H| < 2^k, any
// permutation maps two distinct elements (a,0), (b,0) of the 2-torsion slice
// into the same H-coset, and (a, b, a) is then a preserved progression class
// (difference a-b is its own inverse). Returns that class for the given pi on
// the product group [2,...,2] ++ h.cyclic_factors().
ApTriple forced_preserved_ap(uint64_t k, const AbelianGroup& h, const Perm& pi);

struct GroupGenOptions {
    uint64_t seed = 0;
    uint64_t order_ceiling = 10'000;
    bool use_cache = true;
    std::string cache_dir;  // empty: environment/default resolution
};

// Progression-destroying permutation of any odd-order group of order > 7.
// Pairwise-coprime factor lists are re-indexed from the cyclic case; a short
// list of exceptional structures and small elementary-abelian groups run a
// randomized descent (cached); everything else recurses on an order-pq
// subgroup and its quotient, glued with group_lift. Even order, order <= 7,
// orders beyond the ceiling, and (Z/pZ)^2 for p > 13 are Unsupported. The
// output is always verified exhaustively.
Perm group_generate(const AbelianGroup& g, const GroupGenOptions& options = {});

}  // namespace apdperm
