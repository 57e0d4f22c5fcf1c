#include "apdperm/driver.hpp"

#include <array>
#include <optional>
#include <utility>

#include "apdperm/constructions.hpp"
#include "apdperm/errors.hpp"
#include "apdperm/modular.hpp"
#include "apdperm/search.hpp"

namespace apdperm::driver {

std::string method_name(Method m) {
    switch (m) {
        case Method::PrimeConstruction: return "prime_construction";
        case Method::Case2p: return "case_2p";
        case Method::Case3p: return "case_3p";
        case Method::Case5p: return "case_5p";
        case Method::Case7p: return "case_7p";
        case Method::Descent: return "descent";
        case Method::Cache: return "cache";
    }
    throw BadParams("method_name: unknown method");
}

namespace {

constexpr std::array<uint64_t, 4> kSmallPrimes = {2, 3, 5, 7};

struct Factorization {
    std::array<uint64_t, 4> small_exp{};              // exponents of 2,3,5,7
    std::vector<std::pair<uint64_t, uint64_t>> big;   // (p, exponent), ascending
};

Factorization factorize(uint64_t n) {
    Factorization f;
    for (std::size_t i = 0; i < kSmallPrimes.size(); ++i) {
        while (n % kSmallPrimes[i] == 0) {
            n /= kSmallPrimes[i];
            ++f.small_exp[i];
        }
    }
    for (uint64_t d = 11; d * d <= n; d += 2) {
        if (n % d != 0) continue;
        uint64_t e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        f.big.emplace_back(d, e);
    }
    if (n > 1) f.big.emplace_back(n, 1);
    return f;
}

CaseKind case_for_small(uint64_t s) {
    switch (s) {
        case 2: return CaseKind::TwoP;
        case 3: return CaseKind::ThreeP;
        case 5: return CaseKind::FiveP;
        case 7: return CaseKind::SevenP;
    }
    throw BadParams("case_for_small: not a small prime");
}

Method method_for_small(uint64_t s) {
    switch (s) {
        case 2: return Method::Case2p;
        case 3: return Method::Case3p;
        case 5: return Method::Case5p;
        case 7: return Method::Case7p;
    }
    throw BadParams("method_for_small: not a small prime");
}

}  // namespace

FactorPlan plan(uint64_t n) {
    if (n == 0) throw OutOfRange("plan: n must be >= 1");
    if (n == 2 || n == 3 || n == 5 || n == 7)
        throw Unsupported("plan: Z/" + std::to_string(n) +
                          "Z has no suitable permutation");
    FactorPlan out;
    out.n = n;
    if (n == 1) return out;

    Factorization f = factorize(n);
    uint64_t small_part = 1;
    std::vector<uint64_t> smalls;  // descending: 7s, 5s, 3s, 2s
    for (std::size_t i = kSmallPrimes.size(); i-- > 0;) {
        for (uint64_t e = 0; e < f.small_exp[i]; ++e) {
            smalls.push_back(kSmallPrimes[i]);
            small_part *= kSmallPrimes[i];
        }
    }

    std::optional<Leaf> attached;
    if (smalls.size() == 1) {
        // n itself is not a small prime, so a larger prime exists to attach to.
        const uint64_t s = smalls[0];
        const uint64_t q = f.big.front().first;
        Leaf leaf;
        leaf.modulus = s * q;
        leaf.prime = q;
        leaf.method = q >= case_threshold(case_for_small(s))
                          ? method_for_small(s)
                          : Method::Descent;
        attached = leaf;
    } else {
        std::size_t idx = 0;
        if (smalls.size() % 2 == 1) {
            Leaf leaf;
            leaf.modulus = smalls[0] * smalls[1] * smalls[2];
            out.leaves.push_back(leaf);
            idx = 3;
        }
        for (; idx < smalls.size(); idx += 2) {
            Leaf leaf;
            leaf.modulus = smalls[idx] * smalls[idx + 1];
            out.leaves.push_back(leaf);
        }
    }

    for (const auto& [p, e] : f.big) {
        uint64_t copies = e;
        if (attached && attached->prime == p) {
            out.leaves.push_back(*attached);
            --copies;
        }
        for (uint64_t i = 0; i < copies; ++i) {
            Leaf leaf;
            leaf.modulus = p;
            leaf.method = Method::PrimeConstruction;
            leaf.prime = p;
            out.leaves.push_back(leaf);
        }
    }
    return out;
}

namespace {

Perm run_descent_leaf(const Leaf& leaf, const GenOptions& opts,
                      const std::optional<PermCache>& cache, LeafNote& note) {
    const uint64_t m = leaf.modulus;
    const auto checker = [](const Perm& pi) { return preserved_count(pi) == 0; };
    const std::string key = PermCache::cyclic_key(m);
    if (cache) {
        if (auto hit = cache->get(key, checker)) {
            note.used = Method::Cache;
            return *hit;
        }
    }
    // A downgraded 2p case can still admit parameters below the guaranteed
    // threshold; take the construction when the scan finds them.
    if (m % 2 == 0 && m / 2 >= 31 && is_prime(m / 2)) {
        try {
            const CaseParams params = find_params(CaseKind::TwoP, m / 2, false);
            Perm out = build_2p(m / 2, params, true);
            note.used = Method::Case2p;
            note.prime = m / 2;
            if (cache) cache->put(key, out, CacheMeta{}, checker);
            return out;
        } catch (const NotFound&) {
        } catch (const Unsupported&) {
        }
    }
    DescentConfig cfg;
    cfg.seed = opts.seed ^ (m * 0x9E3779B97F4A7C15ull);
    const DescentOutcome outcome = descent(m, cfg);
    if (!outcome.success)
        throw ConstructionFailed("generate: descent exhausted its budget for " +
                                 std::to_string(m));
    note.used = Method::Descent;
    note.iterations = outcome.iterations_used;
    if (cache)
        cache->put(key, *outcome.perm,
                   CacheMeta{cfg.seed, outcome.iterations_used}, checker);
    return *outcome.perm;
}

Perm run_leaf(const Leaf& leaf, const GenOptions& opts, bool leaf_verify,
              const std::optional<PermCache>& cache, LeafNote& note) {
    switch (leaf.method) {
        case Method::PrimeConstruction:
            return build_prime(leaf.prime, leaf_verify);
        case Method::Case2p:
            return build_2p(leaf.prime, find_params(CaseKind::TwoP, leaf.prime),
                            leaf_verify);
        case Method::Case3p:
            return build_3p(leaf.prime,
                            find_params(CaseKind::ThreeP, leaf.prime).t,
                            leaf_verify);
        case Method::Case5p:
            return build_5p(leaf.prime,
                            find_params(CaseKind::FiveP, leaf.prime).t,
                            leaf_verify);
        case Method::Case7p:
            return build_7p(leaf.prime,
                            find_params(CaseKind::SevenP, leaf.prime).t,
                            leaf_verify);
        case Method::Descent:
            return run_descent_leaf(leaf, opts, cache, note);
        case Method::Cache:
            return run_descent_leaf(leaf, opts, cache, note);
    }
    throw BadParams("run_leaf: unknown method");
}

}  // namespace

Perm generate(uint64_t n) { return generate(n, GenOptions{}, nullptr); }

Perm generate(uint64_t n, const GenOptions& opts, GenReport* report) {
    if (n == 0) throw OutOfRange("generate: n must be >= 1");
    if (n > opts.size_ceiling)
        throw TooLarge("generate: n exceeds the size ceiling " +
                       std::to_string(opts.size_ceiling));
    const FactorPlan pl = plan(n);

    GenReport rep;
    rep.n = n;
    const bool final_verify = opts.verify && n <= opts.verify_ceiling;

    std::optional<PermCache> cache;
    if (opts.use_cache) cache.emplace(opts.cache_dir);

    Perm acc = Perm::identity(1);
    for (const Leaf& leaf : pl.leaves) {
        LeafNote note;
        note.modulus = leaf.modulus;
        note.planned = leaf.method;
        note.used = leaf.method;
        note.prime = leaf.prime;
        const bool leaf_verify = opts.verify && !final_verify &&
                                 leaf.modulus <= opts.verify_ceiling;
        Perm leaf_perm = run_leaf(leaf, opts, leaf_verify, cache, note);
        rep.leaves.push_back(note);
        acc = lift(acc, leaf_perm);
    }

    if (final_verify) {
        rep.preserved_count = preserved_count(acc, opts.threads);
        rep.verified = true;
        if (rep.preserved_count != 0)
            throw VerificationFailed(
                "generate: output for n=" + std::to_string(n) + " preserves " +
                std::to_string(rep.preserved_count) + " classes");
    }
    if (report != nullptr) *report = rep;
    return acc;
}

}  // namespace apdperm::driver
