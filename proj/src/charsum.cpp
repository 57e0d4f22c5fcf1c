#include "apdperm/charsum.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "apdperm/constructions.hpp"
#include "apdperm/errors.hpp"

namespace apdperm {

CharSumResult char_sum(const PolyOverFp& f) {
    const uint64_t p = f.prime();
    if (p == 2) throw BadParams("char_sum: p must be odd");
    if (f.is_zero()) throw BadParams("char_sum: polynomial must be nonzero");
    const QrTable table(p);
    int64_t sum = 0;
    for (uint64_t y = 0; y < p; ++y) sum += table(f.eval(y));
    const uint64_t deg = f.degree();
    const uint64_t g = deg >= 1 ? (deg - 1) / 2 : 0;
    return CharSumResult{p, f, sum,
                         g, 2.0 * static_cast<double>(g) * std::sqrt(static_cast<double>(p)) + 1.0};
}

namespace {

struct SumSpec {
    const char* id;
    int64_t slack;        // additive constant A in the bound p - A - B*sqrt(p)
    int64_t root_factor;  // B
    uint64_t min_prime;
};

constexpr SumSpec kSumSpecs[] = {
    {"2p-t", 4, 0, 31},   {"2p-y", 15, 60, 503}, {"3p-t", 4, 0, 31},
    {"5p-t", 63, 130, 503}, {"7p-t", 4, 0, 67},
};

const SumSpec& spec_for(const std::string& sum_id) {
    for (const auto& s : kSumSpecs) {
        if (sum_id == s.id) return s;
    }
    throw BadParams("unknown sum id '" + sum_id +
                    "' (expected 2p-t, 2p-y, 3p-t, 5p-t or 7p-t)");
}

struct BasePoly {
    PolyOverFp poly;
    int epsilon;  // sign attached to the symbol: (1 + epsilon * X(poly))
};

// The product factors of each sum, in the scan variable.
std::vector<BasePoly> sum_bases(const std::string& sum_id, uint64_t p,
                                std::optional<uint64_t>* t_used) {
    if (t_used != nullptr) t_used->reset();
    if (sum_id == "2p-t")
        return {{PolyOverFp({1, -1}, p), -1}, {PolyOverFp({0, -1, 1}, p), -1}};
    if (sum_id == "3p-t")
        return {{PolyOverFp({0, -1, 1}, p), -1},
                {PolyOverFp({9, -10, 1}, p), -1}};
    if (sum_id == "7p-t")
        return {{PolyOverFp({9, -10, 1}, p), -1},
                {PolyOverFp({1, -10, 9}, p), -1}};
    if (sum_id == "5p-t")
        return {{PolyOverFp({-16, 9}, p), -1}, {PolyOverFp({9, -16}, p), -1},
                {PolyOverFp({1, 1}, p), -1},   {PolyOverFp({9, -10, 1}, p), -1},
                {PolyOverFp({1, -10, 9}, p), -1}, {PolyOverFp({0, 1}, p), 1}};
    if (sum_id == "2p-y") {
        const uint64_t t = first_valid_t(CaseKind::TwoP, p);
        if (t_used != nullptr) *t_used = t;
        const auto st = static_cast<int64_t>(t);
        const int64_t lead = (4 * st - 1) * (4 * st - 1) % static_cast<int64_t>(p);
        return {{PolyOverFp({1, -st}, p), -1},
                {PolyOverFp({1, -1}, p), -1},
                {PolyOverFp({1, -2 * (4 * st + 1), lead}, p), -1},
                {PolyOverFp({1, -9}, p), 1}};
    }
    spec_for(sum_id);  // throws BadParams
    return {};
}

void require_sum_prime(uint64_t p, const char* who) {
    if (!is_prime(p)) throw NotPrime(std::string(who) + ": p must be prime");
    if (p < 11) throw BadParams(std::string(who) + ": p must be >= 11");
}

}  // namespace

const std::vector<std::string>& parameter_sum_ids() {
    static const std::vector<std::string> ids = {"2p-t", "2p-y", "3p-t",
                                                 "5p-t", "7p-t"};
    return ids;
}

uint64_t parameter_sum_min_prime(const std::string& sum_id) {
    return spec_for(sum_id).min_prime;
}

ParameterSumCheck check_parameter_sum(const std::string& sum_id, uint64_t p) {
    const SumSpec& spec = spec_for(sum_id);
    require_sum_prime(p, "check_parameter_sum");
    if (p < spec.min_prime)
        throw OutOfRange("check_parameter_sum: " + sum_id + " requires p >= " +
                         std::to_string(spec.min_prime));
    const std::vector<BasePoly> bases = sum_bases(sum_id, p, nullptr);
    const QrTable table(p);
    int64_t sum = 0;
    for (uint64_t v = 0; v < p; ++v) {
        int64_t prod = 1;
        for (const auto& b : bases) prod *= 1 + b.epsilon * table(b.poly.eval(v));
        sum += prod;
    }

    ParameterSumCheck out;
    out.p = p;
    out.sum_id = sum_id;
    out.sum = sum;
    out.bound = static_cast<double>(p) - static_cast<double>(spec.slack) -
                static_cast<double>(spec.root_factor) *
                    std::sqrt(static_cast<double>(p));
    const int64_t deficit = static_cast<int64_t>(p) - spec.slack - sum;
    if (deficit <= 0)
        out.pass = true;
    else
        out.pass = static_cast<__int128>(spec.root_factor) * spec.root_factor *
                       static_cast<__int128>(p) >=
                   static_cast<__int128>(deficit) * deficit;
    return out;
}

bool verify_parameter_sum(const std::string& sum_id, uint64_t p) {
    return check_parameter_sum(sum_id, p).pass;
}

namespace {

struct RootProfile {
    std::vector<std::pair<uint64_t, int>> roots;  // (root, multiplicity)
    bool irreducible_quadratic = false;
};

RootProfile profile_roots(const PolyOverFp& f) {
    RootProfile out;
    const uint64_t p = f.prime();
    std::vector<uint64_t> found;
    for (uint64_t v = 0; v < p; ++v) {
        if (f.eval(v) == 0) found.push_back(v);
    }
    const uint64_t deg = f.degree();
    if (deg == 1) {
        out.roots.emplace_back(found.at(0), 1);
    } else if (deg == 2) {
        if (found.empty())
            out.irreducible_quadratic = true;
        else if (found.size() == 1)
            out.roots.emplace_back(found[0], 2);
        else
            for (uint64_t r : found) out.roots.emplace_back(r, 1);
    } else {
        throw BadParams("profile_roots: unexpected base degree");
    }
    return out;
}

}  // namespace

Expansion expansion_terms(const std::string& sum_id, uint64_t p) {
    spec_for(sum_id);
    require_sum_prime(p, "expansion_terms");

    Expansion out;
    out.p = p;
    out.sum_id = sum_id;
    const std::vector<BasePoly> bases = sum_bases(sum_id, p, &out.t);
    std::vector<RootProfile> profiles;
    profiles.reserve(bases.size());
    for (const auto& b : bases) profiles.push_back(profile_roots(b.poly));

    const QrTable table(p);
    const std::size_t k = bases.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        int sign = 1;
        PolyOverFp product({1}, p);
        std::map<uint64_t, int> mult;
        int irreducible = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!(mask & (std::size_t{1} << i))) continue;
            sign *= bases[i].epsilon;
            product = product * bases[i].poly;
            for (const auto& [root, m] : profiles[i].roots) mult[root] += m;
            irreducible += profiles[i].irreducible_quadratic ? 1 : 0;
        }
        uint64_t odd_roots = 0;
        for (const auto& [root, m] : mult) odd_roots += m % 2;
        const uint64_t kernel = odd_roots + 2 * (irreducible % 2);
        int64_t sum = 0;
        for (uint64_t v = 0; v < p; ++v) sum += table(product.eval(v));
        const uint64_t degree = product.degree();
        out.terms.push_back(
            ExpansionTerm{sign, std::move(product), sum, degree, kernel, kernel > 0});
    }
    return out;
}

bool discriminant_distinct_roots(uint64_t t, uint64_t p) {
    if (!is_prime(p)) throw NotPrime("discriminant_distinct_roots: p must be prime");
    const Residue tr(static_cast<int64_t>(t % p), p);
    const Residue nine(9, p);
    auto pw = [&](const Residue& base, uint64_t e) {
        return Residue(static_cast<int64_t>(powmod(base.value(), e, p)), p);
    };
    const Residue value = pw(Residue(2, p), 28) * pw(tr, 3) *
                          pw(tr - nine, 2) * pw(tr - Residue(4, p), 2) *
                          pw(tr - Residue(1, p), 8) *
                          pw(nine * tr - Residue(1, p), 2);
    return value.value() != 0;
}

}  // namespace apdperm
