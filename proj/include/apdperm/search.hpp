#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apdperm/ap_engine.hpp"
#include "apdperm/errors.hpp"
#include "apdperm/permcore.hpp"

namespace apdperm {

// SplitMix64; fixed algorithm so seeded runs reproduce across platforms
// (the standard library's distributions do not guarantee that).
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform over [0, bound) by rejection sampling; bound >= 1.
    uint64_t next_below(uint64_t bound) {
        if (bound == 0) throw BadParams("next_below: bound must be positive");
        const uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    uint64_t state_;
};

struct DescentConfig {
    uint64_t seed = 0;
    uint64_t max_iterations_per_restart = 0;  // 0 means 50 * n^2
    uint64_t max_restarts = 20;
};

struct DescentOutcome {
    bool success = false;
    std::optional<Perm> perm;
    // Index of the successful restart; equals the restart budget on failure.
    uint64_t restarts_used = 0;
    // Transpositions sampled, summed over restarts.
    uint64_t iterations_used = 0;
    uint64_t final_preserved_count = 0;
};

// Strict hill descent: random start, uniform random transpositions, accept
// only strict decreases of the preserved-class count (exact O(n) delta),
// restart after 10n consecutive rejections. Works over any group Ops.
template <class Ops>
DescentOutcome descent_over_ops(const Ops& ops, const DescentConfig& cfg) {
    const std::size_t n = ops.size();
    const uint64_t max_iter = cfg.max_iterations_per_restart != 0
                                  ? cfg.max_iterations_per_restart
                                  : 50 * static_cast<uint64_t>(n) * n;
    const uint64_t stagnation_limit = 10 * static_cast<uint64_t>(n);

    DescentOutcome out;
    uint64_t last_count = 0;
    for (uint64_t restart = 0; restart < cfg.max_restarts; ++restart) {
        SplitMix64 rng(cfg.seed ^ restart);
        std::vector<uint32_t> img(n);
        for (std::size_t k = 0; k < n; ++k) img[k] = static_cast<uint32_t>(k);
        for (std::size_t k = n; k-- > 1;) {
            const std::size_t l =
                static_cast<std::size_t>(rng.next_below(k + 1));
            std::swap(img[k], img[l]);
        }

        uint64_t count = count_preserved_generic(ops, img);
        uint64_t stagnation = 0;
        for (uint64_t iter = 0; count != 0 && iter < max_iter; ++iter) {
            ++out.iterations_used;
            const std::size_t i = static_cast<std::size_t>(rng.next_below(n));
            std::size_t j = static_cast<std::size_t>(rng.next_below(n - 1));
            if (j >= i) ++j;
            const int64_t d = swap_delta_generic(ops, img, i, j);
            if (d < 0) {
                std::swap(img[i], img[j]);
                count = static_cast<uint64_t>(static_cast<int64_t>(count) + d);
                stagnation = 0;
            } else if (++stagnation >= stagnation_limit) {
                break;
            }
        }
        last_count = count;
        if (count == 0) {
            if (count_preserved_generic(ops, img) != 0)
                throw ConstructionFailed(
                    "descent: incremental count disagreed with full recount");
            out.success = true;
            out.perm = Perm(std::move(img));
            out.restarts_used = restart;
            out.final_preserved_count = 0;
            return out;
        }
    }
    out.restarts_used = cfg.max_restarts;
    out.final_preserved_count = last_count;
    return out;
}

DescentOutcome descent(uint64_t n, const DescentConfig& cfg = {});

struct ExhaustiveResult {
    bool exists = false;
    uint64_t destroying_count = 0;
};

// Enumerates all n! permutations of Z/nZ (n <= 8).
ExhaustiveResult exhaustive_exists(uint64_t n);

// Preserved-count change if the images of i and j were swapped.
int64_t incremental_delta(const Perm& pi, std::size_t i, std::size_t j);

struct CacheMeta {
    uint64_t seed = 0;
    uint64_t iterations = 0;
};

// One file per key under a data directory; entries re-verified on both store
// and load so a corrupted file can never supply a bad permutation.
class PermCache {
public:
    // Empty dir resolves APDPERM_CACHE_DIR, then XDG_CACHE_HOME/apdperm,
    // then HOME/.cache/apdperm, then ./.apdperm-cache.
    explicit PermCache(std::string dir = "");

    const std::string& directory() const { return dir_; }
    static std::string resolve_default_dir();
    static std::string cyclic_key(uint64_t n);
    // Key for a product of cyclic groups, factors sorted: "g3x3x5".
    static std::string group_key(std::vector<uint64_t> factors);
    std::string path_for(const std::string& key) const;

    using Checker = std::function<bool(const Perm&)>;
    std::optional<Perm> get(const std::string& key,
                            const Checker& is_destroying) const;
    void put(const std::string& key, const Perm& pi, const CacheMeta& meta,
             const Checker& is_destroying) const;

private:
    std::string dir_;
};

}  // namespace apdperm
