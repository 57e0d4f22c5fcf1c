#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "apdperm/errors.hpp"

namespace apdperm {

// Index arithmetic of Z/nZ. preserved() exploits that the signed combination
// v2 - 2*v1 + v0 lies in (-2n, 2n), so divisibility reduces to three compares.
struct CyclicOps {
    std::size_t n;

    std::size_t size() const { return n; }
    std::size_t add(std::size_t x, std::size_t y) const {
        std::size_t s = x + y;
        if (s >= n) s -= n;
        return s;
    }
    std::size_t neg(std::size_t x) const { return x == 0 ? 0 : n - x; }
    bool preserved(std::size_t v0, std::size_t v1, std::size_t v2) const {
        const int64_t s = static_cast<int64_t>(v0) + static_cast<int64_t>(v2) -
                          2 * static_cast<int64_t>(v1);
        const int64_t m = static_cast<int64_t>(n);
        return s == 0 || s == m || s == -m;
    }
};

// Index arithmetic of a direct product of cyclic groups; leftmost factor is
// the most significant digit of the index.
struct MixedRadixOps {
    std::vector<std::size_t> factors;
    std::size_t order = 1;

    explicit MixedRadixOps(std::vector<std::size_t> f) : factors(std::move(f)) {
        for (std::size_t c : factors) {
            if (c < 2) throw BadParams("MixedRadixOps: factors must be >= 2");
            order *= c;
        }
    }

    std::size_t size() const { return order; }
    std::size_t add(std::size_t x, std::size_t y) const {
        std::size_t out = 0;
        std::size_t place = 1;
        for (std::size_t k = factors.size(); k-- > 0;) {
            const std::size_t f = factors[k];
            std::size_t d = x % f + y % f;
            if (d >= f) d -= f;
            out += d * place;
            place *= f;
            x /= f;
            y /= f;
        }
        return out;
    }
    std::size_t neg(std::size_t x) const {
        std::size_t out = 0;
        std::size_t place = 1;
        for (std::size_t k = factors.size(); k-- > 0;) {
            const std::size_t f = factors[k];
            const std::size_t d = x % f;
            out += (d == 0 ? 0 : f - d) * place;
            place *= f;
            x /= f;
        }
        return out;
    }
    bool preserved(std::size_t v0, std::size_t v1, std::size_t v2) const {
        return add(v0, v2) == add(v1, v1);
    }
};

// r represents the class pair {r, -r} exactly once: every nonzero r with
// index(r) <= index(-r). Self-inverse differences (2r = 0) fall in as r == -r.
template <class Ops>
bool counted_difference(const Ops& ops, std::size_t r) {
    return r != 0 && r <= ops.neg(r);
}

// Visits exactly one (a, r) per canonical progression class.
template <class Ops, class Fn>
void for_each_class(const Ops& ops, Fn&& fn) {
    const std::size_t n = ops.size();
    for (std::size_t r = 1; r < n; ++r) {
        if (!counted_difference(ops, r)) continue;
        for (std::size_t a = 0; a < n; ++a) fn(a, r);
    }
}

template <class Ops, class Val>
bool class_preserved(const Ops& ops, Val&& val, std::size_t a, std::size_t r) {
    const std::size_t i1 = ops.add(a, r);
    const std::size_t i2 = ops.add(i1, r);
    return ops.preserved(val(a), val(i1), val(i2));
}

template <class Ops>
uint64_t count_preserved_generic(const Ops& ops,
                                 const std::vector<uint32_t>& img) {
    uint64_t count = 0;
    auto val = [&](std::size_t x) { return static_cast<std::size_t>(img[x]); };
    for_each_class(ops, [&](std::size_t a, std::size_t r) {
        if (class_preserved(ops, val, a, r)) ++count;
    });
    return count;
}

// Exact change in the preserved-class count if the images at i and j were
// swapped. Only classes through i or j can change; for each counted r those
// classes have base point in {i, j} - {0, r, 2r}, at most six per r. O(n).
template <class Ops>
int64_t swap_delta_generic(const Ops& ops, const std::vector<uint32_t>& img,
                           std::size_t i, std::size_t j) {
    auto before = [&](std::size_t x) { return static_cast<std::size_t>(img[x]); };
    auto after = [&](std::size_t x) {
        if (x == i) return static_cast<std::size_t>(img[j]);
        if (x == j) return static_cast<std::size_t>(img[i]);
        return static_cast<std::size_t>(img[x]);
    };
    int64_t delta = 0;
    const std::size_t n = ops.size();
    std::array<std::size_t, 6> cand;
    for (std::size_t r = 1; r < n; ++r) {
        if (!counted_difference(ops, r)) continue;
        const std::size_t nr = ops.neg(r);
        cand[0] = i;
        cand[1] = ops.add(i, nr);
        cand[2] = ops.add(cand[1], nr);
        cand[3] = j;
        cand[4] = ops.add(j, nr);
        cand[5] = ops.add(cand[4], nr);
        for (std::size_t k = 0; k < 6; ++k) {
            const std::size_t a = cand[k];
            bool seen = false;
            for (std::size_t l = 0; l < k; ++l) {
                if (cand[l] == a) {
                    seen = true;
                    break;
                }
            }
            if (seen) continue;
            const bool was = class_preserved(ops, before, a, r);
            const bool now = class_preserved(ops, after, a, r);
            delta += static_cast<int64_t>(now) - static_cast<int64_t>(was);
        }
    }
    return delta;
}

// swap_delta_generic plus the identities of the classes that changed state;
// classes are reported as the (a, r) visited by the enumeration (counted r).
struct SwapChanges {
    int64_t delta = 0;
    std::vector<std::pair<std::size_t, std::size_t>> destroyed;
    std::vector<std::pair<std::size_t, std::size_t>> created;
};

template <class Ops>
SwapChanges swap_changes_generic(const Ops& ops,
                                 const std::vector<uint32_t>& img,
                                 std::size_t i, std::size_t j) {
    auto before = [&](std::size_t x) { return static_cast<std::size_t>(img[x]); };
    auto after = [&](std::size_t x) {
        if (x == i) return static_cast<std::size_t>(img[j]);
        if (x == j) return static_cast<std::size_t>(img[i]);
        return static_cast<std::size_t>(img[x]);
    };
    SwapChanges out;
    const std::size_t n = ops.size();
    std::array<std::size_t, 6> cand;
    for (std::size_t r = 1; r < n; ++r) {
        if (!counted_difference(ops, r)) continue;
        const std::size_t nr = ops.neg(r);
        cand[0] = i;
        cand[1] = ops.add(i, nr);
        cand[2] = ops.add(cand[1], nr);
        cand[3] = j;
        cand[4] = ops.add(j, nr);
        cand[5] = ops.add(cand[4], nr);
        for (std::size_t k = 0; k < 6; ++k) {
            const std::size_t a = cand[k];
            bool seen = false;
            for (std::size_t l = 0; l < k; ++l) {
                if (cand[l] == a) {
                    seen = true;
                    break;
                }
            }
            if (seen) continue;
            const bool was = class_preserved(ops, before, a, r);
            const bool now = class_preserved(ops, after, a, r);
            if (was == now) continue;
            if (was) {
                out.destroyed.emplace_back(a, r);
                --out.delta;
            } else {
                out.created.emplace_back(a, r);
                ++out.delta;
            }
        }
    }
    return out;
}

}  // namespace apdperm
