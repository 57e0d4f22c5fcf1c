#include "apdperm/abelian.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "apdperm/ap_engine.hpp"
#include "apdperm/driver.hpp"
#include "apdperm/errors.hpp"
#include "apdperm/modular.hpp"
#include "apdperm/search.hpp"

namespace apdperm {
namespace {

MixedRadixOps ops_for(const std::vector<uint64_t>& factors) {
    return MixedRadixOps(
        std::vector<std::size_t>(factors.begin(), factors.end()));
}

void require_matching_size(const AbelianGroup& g, const Perm& pi,
                           const char* who) {
    if (pi.size() != g.order())
        throw BadParams(std::string(who) + ": permutation size " +
                        std::to_string(pi.size()) + " != group order " +
                        std::to_string(g.order()));
}

}  // namespace

AbelianGroup::AbelianGroup(std::vector<uint64_t> cyclic_factors)
    : factors_(std::move(cyclic_factors)) {
    for (uint64_t f : factors_) {
        if (f < 2) throw BadParams("AbelianGroup: factors must be >= 2");
        if (order_ > std::numeric_limits<uint64_t>::max() / f)
            throw TooLarge("AbelianGroup: order overflows");
        order_ *= f;
    }
}

AbelianGroup AbelianGroup::parse(const std::string& text) {
    std::vector<uint64_t> factors;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        factors.push_back(std::stoull(token));
        token.clear();
    };
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            token += c;
        } else if (c == 'x' || c == 'X' || c == '*' || c == ' ' || c == '\t') {
            flush();
        } else {
            throw ParseError(std::string("group descriptor: unexpected '") + c +
                             "'");
        }
    }
    flush();
    if (factors.empty())
        throw ParseError("group descriptor: no factors in \"" + text + "\"");
    return AbelianGroup(std::move(factors));
}

uint64_t AbelianGroup::omega() const {
    uint64_t total = 0;
    for (uint64_t f : factors_) {
        uint64_t m = f;
        for (uint64_t d = 2; d * d <= m; ++d)
            while (m % d == 0) {
                ++total;
                m /= d;
            }
        if (m > 1) ++total;
    }
    return total;
}

std::string AbelianGroup::descriptor() const {
    if (factors_.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) out += " x ";
        out += std::to_string(factors_[i]);
    }
    return out;
}

ApReport group_verify(const AbelianGroup& g, const Perm& pi) {
    require_matching_size(g, pi, "group_verify");
    const MixedRadixOps ops = ops_for(g.cyclic_factors());
    const auto& img = pi.image();
    auto val = [&](std::size_t x) { return static_cast<std::size_t>(img[x]); };

    ApReport report;
    report.n = g.order();
    constexpr std::size_t kWitnessKeep = 100;
    for_each_class(ops, [&](std::size_t a, std::size_t r) {
        if (!class_preserved(ops, val, a, r)) return;
        ++report.preserved_count;
        if (report.preserved.size() < kWitnessKeep) {
            const std::size_t rev_a = ops.add(a, ops.add(r, r));
            const std::size_t rev_r = ops.neg(r);
            report.preserved.push_back(
                std::min(ApTriple{static_cast<uint32_t>(a),
                                  static_cast<uint32_t>(r)},
                         ApTriple{static_cast<uint32_t>(rev_a),
                                  static_cast<uint32_t>(rev_r)}));
        }
    });
    report.truncated = report.preserved_count > report.preserved.size();
    std::sort(report.preserved.begin(), report.preserved.end());
    return report;
}

uint64_t group_preserved_count(const AbelianGroup& g, const Perm& pi) {
    require_matching_size(g, pi, "group_preserved_count");
    const MixedRadixOps ops = ops_for(g.cyclic_factors());
    return count_preserved_generic(ops, pi.image());
}

Perm group_lift(const Perm& h_perm, const Perm& q_perm, const AbelianGroup& g,
                const std::vector<uint64_t>& h_elements) {
    const uint64_t n = g.order();
    const std::size_t h_size = h_elements.size();
    if (h_size == 0)
        throw BadParams("group_lift: subgroup enumeration is empty");
    if (n % h_size != 0)
        throw BadParams("group_lift: subgroup size must divide the order");
    const uint64_t q_size = n / h_size;
    if (h_perm.size() != h_size)
        throw BadParams("group_lift: subgroup permutation size mismatch");
    if (q_perm.size() != q_size)
        throw BadParams("group_lift: quotient permutation size mismatch");
    if (h_elements[0] != 0)
        throw BadParams("group_lift: enumeration must start at the identity");

    const MixedRadixOps ops = ops_for(g.cyclic_factors());
    constexpr uint32_t kUnset = std::numeric_limits<uint32_t>::max();
    std::vector<uint32_t> index_of(n, kUnset);
    for (std::size_t s = 0; s < h_size; ++s) {
        const uint64_t e = h_elements[s];
        if (e >= n) throw BadParams("group_lift: subgroup element out of range");
        if (index_of[e] != kUnset)
            throw BadParams("group_lift: duplicate subgroup element");
        index_of[e] = static_cast<uint32_t>(s);
    }
    for (std::size_t s1 = 0; s1 < h_size; ++s1)
        for (std::size_t s2 = s1; s2 < h_size; ++s2)
            if (index_of[ops.add(h_elements[s1], h_elements[s2])] == kUnset)
                throw BadParams("group_lift: enumeration not closed under +");

    // Cosets labeled in order of their smallest element; with reduced-digit
    // representatives this matches the quotient's own mixed-radix indexing.
    std::vector<uint32_t> coset(n, kUnset);
    std::vector<uint32_t> offset(n, 0);
    std::vector<uint64_t> rep;
    rep.reserve(q_size);
    for (uint64_t x = 0; x < n; ++x) {
        if (coset[x] != kUnset) continue;
        const auto label = static_cast<uint32_t>(rep.size());
        rep.push_back(x);
        for (std::size_t s = 0; s < h_size; ++s) {
            const std::size_t y = ops.add(x, h_elements[s]);
            if (coset[y] != kUnset)
                throw BadParams("group_lift: cosets overlap");
            coset[y] = label;
            offset[y] = static_cast<uint32_t>(s);
        }
    }

    std::vector<uint32_t> img(n);
    for (uint64_t x = 0; x < n; ++x) {
        const uint64_t base = rep[q_perm(coset[x])];
        const uint64_t shift = h_elements[h_perm(offset[x])];
        img[x] = static_cast<uint32_t>(ops.add(base, shift));
    }
    return Perm(std::move(img));
}

ApTriple forced_preserved_ap(uint64_t k, const AbelianGroup& h,
                             const Perm& pi) {
    if (k == 0)
        throw BadParams("forced_preserved_ap: need at least one Z/2 factor");
    if (k >= 32) throw TooLarge("forced_preserved_ap: 2-rank too large");
    const uint64_t h_order = h.order();
    const uint64_t two_k = uint64_t{1} << k;
    if (h_order >= two_k)
        throw BadParams("forced_preserved_ap: needs |H| < 2^k");
    const uint64_t n = two_k * h_order;
    if (pi.size() != n)
        throw BadParams("forced_preserved_ap: permutation size " +
                        std::to_string(pi.size()) + " != group order " +
                        std::to_string(n));

    // The 2-torsion slice (bits, 0) sits at indices bits * |H|; its image
    // class mod |H| collides for some pair, and that difference is its own
    // inverse, so the progression (x_a, x_b, x_a) survives any pi.
    constexpr uint32_t kUnset = std::numeric_limits<uint32_t>::max();
    std::vector<uint32_t> first(h_order, kUnset);
    for (uint64_t bits = 0; bits < two_k; ++bits) {
        const uint64_t proj = pi(bits * h_order) % h_order;
        if (first[proj] == kUnset) {
            first[proj] = static_cast<uint32_t>(bits);
            continue;
        }
        const uint64_t a_bits = first[proj];
        return ApTriple{static_cast<uint32_t>(a_bits * h_order),
                        static_cast<uint32_t>((a_bits ^ bits) * h_order)};
    }
    throw Error("forced_preserved_ap: pigeonhole cannot fail");
}

namespace {

bool pairwise_coprime(const std::vector<uint64_t>& fs) {
    for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i + 1; j < fs.size(); ++j)
            if (std::gcd(fs[i], fs[j]) != 1) return false;
    return true;
}

std::vector<uint64_t> prime_multiset(uint64_t n) {
    std::vector<uint64_t> primes;
    for (uint64_t d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            primes.push_back(d);
            n /= d;
        }
    if (n > 1) primes.push_back(n);
    return primes;
}

// phi must be a group isomorphism from the requested indexing to the
// indexing pi lives on; conjugation carries the destroying property back.
Perm conjugated(const Perm& pi, const std::vector<uint32_t>& phi) {
    const std::size_t n = phi.size();
    std::vector<uint32_t> inv(n);
    for (std::size_t x = 0; x < n; ++x) inv[phi[x]] = static_cast<uint32_t>(x);
    std::vector<uint32_t> img(n);
    for (std::size_t x = 0; x < n; ++x) img[x] = inv[pi(phi[x])];
    return Perm(std::move(img));
}

std::vector<uint64_t> place_values(const std::vector<uint64_t>& fs) {
    std::vector<uint64_t> w(fs.size(), 1);
    for (std::size_t i = fs.size(); i-- > 1;) w[i - 1] = w[i] * fs[i];
    return w;
}

// Mixed-radix index over fs -> element of Z/n via the coprime residue
// isomorphism (digit d_i adds d_i * (n/f_i) * ((n/f_i)^-1 mod f_i)).
std::vector<uint32_t> coprime_residue_iso(const std::vector<uint64_t>& fs,
                                          uint64_t n) {
    std::vector<uint64_t> embed(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const uint64_t m = n / fs[i];
        embed[i] = mulmod(m % n, mod_inverse(m % fs[i], fs[i]), n);
    }
    const std::vector<uint64_t> w = place_values(fs);
    std::vector<uint32_t> phi(n);
    for (uint64_t x = 0; x < n; ++x) {
        uint64_t value = 0;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const uint64_t digit = (x / w[i]) % fs[i];
            value = (value + mulmod(digit, embed[i], n)) % n;
        }
        phi[x] = static_cast<uint32_t>(value);
    }
    return phi;
}

// Reorders digits from the requested factor list onto its sorted version.
std::vector<uint32_t> digit_sort_iso(const std::vector<uint64_t>& fs,
                                     const std::vector<uint64_t>& sorted) {
    std::vector<std::size_t> source(fs.size());
    std::vector<bool> used(fs.size(), false);
    for (std::size_t j = 0; j < sorted.size(); ++j)
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (!used[i] && fs[i] == sorted[j]) {
                source[j] = i;
                used[i] = true;
                break;
            }
    const std::vector<uint64_t> w_from = place_values(fs);
    const std::vector<uint64_t> w_to = place_values(sorted);
    uint64_t n = 1;
    for (uint64_t f : fs) n *= f;
    std::vector<uint32_t> phi(n);
    for (uint64_t x = 0; x < n; ++x) {
        uint64_t y = 0;
        for (std::size_t j = 0; j < sorted.size(); ++j)
            y += ((x / w_from[source[j]]) % fs[source[j]]) * w_to[j];
        phi[x] = static_cast<uint32_t>(y);
    }
    return phi;
}

bool exceptional_structure(const std::vector<uint64_t>& sorted) {
    static const std::vector<std::vector<uint64_t>> kList = {
        {3, 3, 5}, {3, 3, 7}, {3, 5, 5}, {5, 5, 7}, {3, 7, 7},
        {5, 7, 7}, {3, 9},    {5, 25},   {7, 49}};
    return std::find(kList.begin(), kList.end(), sorted) != kList.end();
}

Perm group_descent(const std::vector<uint64_t>& sorted,
                   const GroupGenOptions& opts) {
    const AbelianGroup gs(sorted);
    const MixedRadixOps ops = ops_for(sorted);
    auto checker = [&](const Perm& cand) {
        return cand.size() == gs.order() &&
               count_preserved_generic(ops, cand.image()) == 0;
    };

    const std::string key = PermCache::group_key(sorted);
    std::optional<PermCache> cache;
    if (opts.use_cache) {
        cache.emplace(opts.cache_dir);
        if (auto hit = cache->get(key, checker)) return std::move(*hit);
    }

    DescentConfig cfg;
    uint64_t mix = 0x243F6A8885A308D3ull;
    for (uint64_t f : sorted) mix = (mix ^ f) * 0x9E3779B97F4A7C15ull;
    cfg.seed = opts.seed ^ mix;
    DescentOutcome outcome = descent_over_ops(ops, cfg);
    if (!outcome.success)
        throw ConstructionFailed("group_generate: descent exhausted for " +
                                 gs.descriptor());
    if (cache)
        cache->put(key, *outcome.perm,
                   CacheMeta{cfg.seed, outcome.iterations_used}, checker);
    return std::move(*outcome.perm);
}

// Per-factor subgroup sizes describing an order-pq subgroup to peel off.
using SubgroupShape = std::vector<uint64_t>;

std::vector<SubgroupShape> subgroup_shapes(const std::vector<uint64_t>& fs,
                                           uint64_t p, uint64_t q) {
    std::vector<SubgroupShape> shapes;
    auto largest_with = [&](auto&& pred, std::size_t skip) {
        std::size_t best = fs.size();
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (i != skip && pred(fs[i]) &&
                (best == fs.size() || fs[i] >= fs[best]))
                best = i;
        return best;
    };

    const uint64_t pq = p * q;
    const std::size_t whole =
        largest_with([&](uint64_t f) { return f % pq == 0; }, fs.size());
    if (whole != fs.size()) {
        SubgroupShape shape(fs.size(), 1);
        shape[whole] = pq;
        shapes.push_back(std::move(shape));
    }

    if (p != q) {
        const std::size_t ip =
            largest_with([&](uint64_t f) { return f % p == 0; }, fs.size());
        const std::size_t iq =
            largest_with([&](uint64_t f) { return f % q == 0; }, fs.size());
        if (ip != fs.size() && iq != fs.size() && ip != iq) {
            SubgroupShape shape(fs.size(), 1);
            shape[ip] = p;
            shape[iq] = q;
            shapes.push_back(std::move(shape));
        }
    } else {
        const std::size_t i1 =
            largest_with([&](uint64_t f) { return f % p == 0; }, fs.size());
        if (i1 != fs.size()) {
            const std::size_t i2 =
                largest_with([&](uint64_t f) { return f % p == 0; }, i1);
            if (i2 != fs.size()) {
                SubgroupShape shape(fs.size(), 1);
                shape[i1] = p;
                shape[i2] = p;
                shapes.push_back(std::move(shape));
            }
        }
    }
    return shapes;
}

// Enumerates the subgroup with digit i restricted to multiples of f_i / h_i,
// indexed by the mixed radix of the nontrivial h_i (an additive enumeration).
std::vector<uint64_t> subgroup_elements(const std::vector<uint64_t>& fs,
                                        const SubgroupShape& shape) {
    const std::vector<uint64_t> w = place_values(fs);
    std::vector<std::size_t> pos;
    uint64_t h_order = 1;
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (shape[i] > 1) {
            pos.push_back(i);
            h_order *= shape[i];
        }
    std::vector<uint64_t> elements(h_order);
    for (uint64_t idx = 0; idx < h_order; ++idx) {
        uint64_t rem = idx;
        uint64_t element = 0;
        for (std::size_t j = pos.size(); j-- > 0;) {
            const std::size_t i = pos[j];
            const uint64_t digit = rem % shape[i];
            rem /= shape[i];
            element += digit * (fs[i] / shape[i]) * w[i];
        }
        elements[idx] = element;
    }
    return elements;
}

Perm generate_dispatch(const AbelianGroup& g, const GroupGenOptions& opts);

Perm peel_and_glue(const AbelianGroup& g, const GroupGenOptions& opts) {
    const std::vector<uint64_t>& fs = g.cyclic_factors();
    const std::vector<uint64_t> primes = prime_multiset(g.order());

    std::vector<std::pair<uint64_t, uint64_t>> pairs;
    auto add_pair = [&](uint64_t a, uint64_t b) {
        if (a > b) std::swap(a, b);
        const std::pair<uint64_t, uint64_t> pr{a, b};
        if (std::find(pairs.begin(), pairs.end(), pr) == pairs.end())
            pairs.push_back(pr);
    };
    add_pair(primes[0], primes[1]);
    add_pair(primes[0], primes.back());
    for (std::size_t i = 0; i < primes.size(); ++i)
        for (std::size_t j = i + 1; j < primes.size(); ++j)
            add_pair(primes[i], primes[j]);

    for (const auto& [p, q] : pairs) {
        for (const SubgroupShape& shape : subgroup_shapes(fs, p, q)) {
            std::vector<uint64_t> h_factors;
            std::vector<uint64_t> q_factors;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                if (shape[i] > 1) h_factors.push_back(shape[i]);
                if (fs[i] / shape[i] > 1) q_factors.push_back(fs[i] / shape[i]);
            }
            try {
                const Perm h_perm =
                    generate_dispatch(AbelianGroup(h_factors), opts);
                const Perm q_perm =
                    generate_dispatch(AbelianGroup(q_factors), opts);
                return group_lift(h_perm, q_perm, g,
                                  subgroup_elements(fs, shape));
            } catch (const Unsupported&) {
            } catch (const ConstructionFailed&) {
            } catch (const NotFound&) {
            }
        }
    }

    if (g.order() <= 1000) {
        std::vector<uint64_t> sorted = fs;
        std::sort(sorted.begin(), sorted.end());
        Perm base = group_descent(sorted, opts);
        if (sorted == fs) return base;
        return conjugated(base, digit_sort_iso(fs, sorted));
    }
    throw Unsupported("group_generate: no subgroup decomposition applies to " +
                      g.descriptor());
}

Perm generate_dispatch(const AbelianGroup& g, const GroupGenOptions& opts) {
    const uint64_t n = g.order();
    if (n % 2 == 0)
        throw Unsupported("group_generate: even order is not covered");
    if (n <= 7)
        throw Unsupported("group_generate: order must exceed 7");
    if (n > opts.order_ceiling)
        throw Unsupported("group_generate: order " + std::to_string(n) +
                          " above ceiling " +
                          std::to_string(opts.order_ceiling));

    const std::vector<uint64_t>& fs = g.cyclic_factors();
    if (pairwise_coprime(fs)) {
        driver::GenOptions dopts;
        dopts.seed = opts.seed;
        dopts.use_cache = opts.use_cache;
        dopts.cache_dir = opts.cache_dir;
        Perm cyclic = driver::generate(n, dopts);
        if (fs.size() <= 1) return cyclic;
        return conjugated(cyclic, coprime_residue_iso(fs, n));
    }

    std::vector<uint64_t> sorted = fs;
    std::sort(sorted.begin(), sorted.end());
    auto sorted_descent = [&] {
        Perm base = group_descent(sorted, opts);
        if (sorted == fs) return base;
        return conjugated(base, digit_sort_iso(fs, sorted));
    };

    if (exceptional_structure(sorted)) return sorted_descent();
    if (sorted.size() == 2 && sorted[0] == sorted[1] && is_prime(sorted[0])) {
        if (sorted[0] > 13)
            throw Unsupported(
                "group_generate: (Z/pZ)^2 beyond p = 13 relies on "
                "constructions not reproduced here");
        return sorted_descent();
    }
    if (sorted.size() == 3 && sorted[0] == sorted[1] &&
        sorted[1] == sorted[2] && is_prime(sorted[0]) && sorted[0] <= 7)
        return sorted_descent();

    return peel_and_glue(g, opts);
}

}  // namespace

Perm group_generate(const AbelianGroup& g, const GroupGenOptions& options) {
    Perm out = generate_dispatch(g, options);
    if (group_preserved_count(g, out) != 0)
        throw VerificationFailed("group_generate: output for " +
                                 g.descriptor() + " preserves a progression");
    return out;
}

}  // namespace apdperm
