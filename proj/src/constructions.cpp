#include "apdperm/constructions.hpp"

#include <algorithm>
#include <initializer_list>
#include <set>
#include <utility>
#include <vector>

#include "apdperm/ap_engine.hpp"
#include "apdperm/errors.hpp"
#include "apdperm/modular.hpp"

namespace apdperm {

const std::array<uint32_t, 5> kFiveBlockPerm = {3, 2, 1, 4, 0};
const std::array<uint32_t, 7> kSevenBlockSpecial = {0, 1, 2, 3, 5, 6, 4};
const std::array<uint32_t, 7> kSevenBlockGeneric = {6, 0, 4, 2, 3, 5, 1};

std::string case_name(CaseKind kind) {
    switch (kind) {
        case CaseKind::TwoP: return "2p";
        case CaseKind::ThreeP: return "3p";
        case CaseKind::FiveP: return "5p";
        case CaseKind::SevenP: return "7p";
    }
    throw BadParams("case_name: unknown case");
}

CaseKind parse_case(const std::string& name) {
    if (name == "2p") return CaseKind::TwoP;
    if (name == "3p") return CaseKind::ThreeP;
    if (name == "5p") return CaseKind::FiveP;
    if (name == "7p") return CaseKind::SevenP;
    throw ParseError("unknown case '" + name + "' (expected 2p, 3p, 5p or 7p)");
}

uint64_t case_block_count(CaseKind kind) {
    switch (kind) {
        case CaseKind::TwoP: return 2;
        case CaseKind::ThreeP: return 3;
        case CaseKind::FiveP: return 5;
        case CaseKind::SevenP: return 7;
    }
    throw BadParams("case_block_count: unknown case");
}

uint64_t case_threshold(CaseKind kind) {
    switch (kind) {
        case CaseKind::TwoP: return 503;
        case CaseKind::ThreeP: return 31;
        case CaseKind::FiveP: return 503;
        case CaseKind::SevenP: return 67;
    }
    throw BadParams("case_threshold: unknown case");
}

namespace {

void require_case_prime(uint64_t p, const char* who) {
    if (!is_prime(p)) throw NotPrime(std::string(who) + ": p must be prime");
    if (p < 11) throw BadParams(std::string(who) + ": p must be >= 11");
}

// Legendre evaluation, optionally through a precomputed table.
struct Chi {
    uint64_t p;
    const QrTable* table;
    int operator()(const Residue& a) const {
        return table != nullptr ? (*table)(a.value()) : legendre(a.value(), p);
    }
};

Residue frac(int64_t num, int64_t den, uint64_t p) {
    return Residue(num, p) / Residue(den, p);
}

bool excluded_t(CaseKind kind, uint64_t p, const Residue& t) {
    auto in = [&](std::initializer_list<Residue> set) {
        return std::find(set.begin(), set.end(), t) != set.end();
    };
    switch (kind) {
        case CaseKind::TwoP:
            return in({Residue(0, p), Residue(1, p), frac(1, 4, p),
                       Residue(4, p), frac(1, 9, p), Residue(9, p)});
        case CaseKind::ThreeP:
            return in({Residue(-1, p), Residue(0, p), Residue(1, p),
                       frac(1, 2, p), Residue(2, p), Residue(9, p)});
        case CaseKind::FiveP:
            return in({Residue(-3, p), Residue(-2, p), Residue(-1, p),
                       Residue(0, p), Residue(1, p), Residue(2, p),
                       Residue(3, p), Residue(4, p), frac(-3, 2, p),
                       frac(-4, 3, p), frac(-3, 4, p), frac(-2, 3, p),
                       frac(-1, 2, p), frac(-1, 3, p), frac(1, 4, p),
                       frac(1, 3, p), frac(1, 2, p), frac(2, 3, p),
                       frac(3, 4, p), frac(3, 2, p)});
        case CaseKind::SevenP:
            return in({Residue(-2, p), Residue(-1, p), Residue(0, p),
                       Residue(1, p), Residue(2, p), Residue(3, p),
                       Residue(4, p), frac(-1, 2, p), frac(1, 4, p),
                       frac(1, 3, p), frac(1, 2, p), frac(2, 3, p),
                       frac(3, 4, p)});
    }
    throw BadParams("excluded_t: unknown case");
}

bool symbols_hold_t(CaseKind kind, const Chi& chi, uint64_t p, const Residue& t) {
    const Residue one(1, p);
    const Residue nine(9, p);
    switch (kind) {
        case CaseKind::TwoP: {
            if (t.value() == 0) return false;
            return chi(one - t.inverse()) == -1 && chi(one - t) == -1;
        }
        case CaseKind::ThreeP: {
            const Residue tm1 = t - one;
            return chi(t * tm1) == -1 && chi(tm1 * (t - nine)) == -1;
        }
        case CaseKind::FiveP: {
            const Residue sixteen(16, p);
            const Residue tm1 = t - one;
            return chi(nine * t - sixteen) == -1 &&
                   chi(nine - sixteen * t) == -1 && chi(t + one) == -1 &&
                   chi(tm1 * (t - nine)) == -1 &&
                   chi(tm1 * (nine * t - one)) == -1 && chi(t) == 1;
        }
        case CaseKind::SevenP: {
            const Residue tm1 = t - one;
            return chi(tm1 * (t - nine)) == -1 &&
                   chi((nine * t - one) * tm1) == -1;
        }
    }
    throw BadParams("symbols_hold_t: unknown case");
}

bool valid_t_with(CaseKind kind, const Chi& chi, uint64_t p, uint64_t tv) {
    const Residue t(static_cast<int64_t>(tv % p), p);
    return !excluded_t(kind, p, t) && symbols_hold_t(kind, chi, p, t);
}

bool valid_y_2p_with(const Chi& chi, uint64_t p, uint64_t tv, uint64_t yv) {
    const Residue t(static_cast<int64_t>(tv % p), p);
    const Residue y(static_cast<int64_t>(yv % p), p);
    if (t.value() == 0) throw BadParams("valid_y_2p: t must be nonzero");
    const Residue one(1, p);
    const Residue two(2, p);
    const Residue four(4, p);
    const Residue nine(9, p);

    std::vector<Residue> excluded = {Residue(0, p), one,          Residue(-1, p),
                                     two,           frac(1, 2, p), frac(1, 3, p),
                                     four,          four / t};
    const Residue shift = two * t + one;
    if (shift.value() != 0) excluded.push_back(shift.inverse());
    if (std::find(excluded.begin(), excluded.end(), y) != excluded.end())
        return false;

    const Residue four_t_m1 = four * t - one;
    const Residue f1 = four_t_m1 * four_t_m1 * y * y - two * (four * t + one) * y + one;
    return chi(one - t * y) == -1 && chi(one - y) == -1 && chi(f1) == -1 &&
           chi(one - nine * y) == 1;
}

void ensure_destroying(const Perm& pi, const char* who, bool check) {
    if (check && preserved_count(pi) != 0)
        throw VerificationFailed(std::string(who) +
                                 ": output preserves a progression");
}

using BlockPair = std::pair<uint64_t, uint64_t>;

template <class MapFn>
Perm glue_case(uint64_t m, uint64_t p, MapFn&& map) {
    const uint64_t n = m * p;
    std::vector<uint32_t> img(n);
    for (uint64_t b = 0; b < m; ++b)
        for (uint64_t x = 0; x < p; ++x) {
            const BlockPair to = map(b, x);
            img[crt_pair(m, p, b, x)] =
                static_cast<uint32_t>(crt_pair(m, p, to.first, to.second));
        }
    return Perm(std::move(img));
}

}  // namespace

uint64_t crt_pair(uint64_t m, uint64_t p, uint64_t a, uint64_t x) {
    if (m == 0 || p == 0) throw BadParams("crt_pair: moduli must be positive");
    const uint64_t n = m * p;
    const uint64_t co_m = mulmod(p % n, mod_inverse(p % m, m), n);
    const uint64_t co_p = mulmod(m % n, mod_inverse(m % p, p), n);
    return (mulmod(a % m, co_m, n) + mulmod(x % p, co_p, n)) % n;
}

bool valid_t(CaseKind kind, uint64_t p, uint64_t t) {
    require_case_prime(p, "valid_t");
    const QrTable table(p);
    return valid_t_with(kind, Chi{p, &table}, p, t);
}

bool valid_y_2p(uint64_t p, uint64_t t, uint64_t y) {
    require_case_prime(p, "valid_y_2p");
    const QrTable table(p);
    return valid_y_2p_with(Chi{p, &table}, p, t, y);
}

uint64_t count_symbol_t(CaseKind kind, uint64_t p) {
    require_case_prime(p, "count_symbol_t");
    const QrTable table(p);
    const Chi chi{p, &table};
    uint64_t count = 0;
    for (uint64_t t = 0; t < p; ++t) {
        if (symbols_hold_t(kind, chi, p, Residue(static_cast<int64_t>(t), p)))
            ++count;
    }
    return count;
}

namespace {

uint64_t first_t_with(CaseKind kind, const Chi& chi, uint64_t p) {
    for (uint64_t t = 2; t < p; ++t) {
        if (valid_t_with(kind, chi, p, t)) return t;
    }
    throw NotFound("no valid t for case " + case_name(kind) +
                   ", p=" + std::to_string(p));
}

}  // namespace

uint64_t first_valid_t(CaseKind kind, uint64_t p) {
    require_case_prime(p, "first_valid_t");
    const QrTable table(p);
    return first_t_with(kind, Chi{p, &table}, p);
}

CaseParams find_params(CaseKind kind, uint64_t p, bool enforce_threshold) {
    require_case_prime(p, "find_params");
    const uint64_t strict = case_threshold(kind);
    const uint64_t minimum =
        (!enforce_threshold && kind == CaseKind::TwoP) ? 31 : strict;
    if (p < minimum)
        throw Unsupported("find_params: case " + case_name(kind) +
                          " requires p >= " + std::to_string(minimum) +
                          ", got " + std::to_string(p));
    const QrTable table(p);
    const Chi chi{p, &table};

    CaseParams out;
    out.p = p;
    out.t = first_t_with(kind, chi, p);
    if (kind == CaseKind::TwoP) {
        for (uint64_t y = 2; y < p; ++y) {
            if (valid_y_2p_with(chi, p, out.t, y)) {
                out.y = y;
                break;
            }
        }
        if (!out.y)
            throw NotFound("find_params: no valid y for 2p, p=" +
                           std::to_string(p) + ", t=" + std::to_string(out.t));
    }
    return out;
}

Perm prime_base_perm(uint64_t p, uint64_t t) {
    require_case_prime(p, "prime_base_perm");
    t %= p;
    if (t == 0) throw BadParams("prime_base_perm: t must be nonzero");
    std::vector<uint32_t> img(p);
    img[0] = static_cast<uint32_t>(t);
    img[1] = 0;
    for (uint64_t x = 2; x < p; ++x)
        img[x] = static_cast<uint32_t>(mulmod(t, mod_inverse(x, p), p));
    return Perm(std::move(img));
}

namespace {

using CountedClass = std::pair<std::size_t, std::size_t>;

CountedClass counted_form(uint64_t n, uint64_t a, uint64_t r) {
    a %= n;
    r %= n;
    if (r <= n - r) return {a, r};
    return {(a + 2 * r) % n, n - r};
}

std::vector<std::size_t> class_positions(
    uint64_t n, const std::set<CountedClass>& classes) {
    std::set<std::size_t> positions;
    for (const auto& [a, r] : classes) {
        positions.insert(a);
        positions.insert((a + r) % n);
        positions.insert((a + 2 * r) % n);
    }
    return {positions.begin(), positions.end()};
}

}  // namespace

Perm build_prime(uint64_t p, uint64_t t, bool verify) {
    Perm base = prime_base_perm(p, t);
    std::vector<uint32_t> img = base.image();
    const CyclicOps ops{static_cast<std::size_t>(p)};

    const uint64_t inv2 = mod_inverse(2, p);
    const uint64_t inv3 = mod_inverse(3, p);
    std::set<CountedClass> preserved;
    preserved.insert(counted_form(p, 0, mulmod(3, inv2, p)));
    preserved.insert(counted_form(p, inv3, inv3));

    auto finish = [&](std::vector<uint32_t> image) {
        Perm out(std::move(image));
        ensure_destroying(out, "build_prime", verify);
        return out;
    };

    for (std::size_t i : class_positions(p, preserved)) {
        for (std::size_t j = 0; j < p; ++j) {
            if (j == i) continue;
            const SwapChanges first = swap_changes_generic(ops, img, i, j);
            if (static_cast<int64_t>(preserved.size()) + first.delta == 0) {
                std::swap(img[i], img[j]);
                return finish(std::move(img));
            }
            // Neutral first swaps must be expanded too: at some primes (17 is
            // the smallest) every repair trades the residual classes for new
            // ones before the second swap clears the board.
            if (first.delta > 0) continue;
            if (first.destroyed.empty() && first.created.empty()) continue;

            std::set<CountedClass> remaining = preserved;
            for (const auto& c : first.destroyed) remaining.erase(c);
            for (const auto& c : first.created) remaining.insert(c);
            std::swap(img[i], img[j]);
            for (std::size_t i2 : class_positions(p, remaining)) {
                for (std::size_t j2 = 0; j2 < p; ++j2) {
                    if (j2 == i2) continue;
                    const SwapChanges second =
                        swap_changes_generic(ops, img, i2, j2);
                    if (static_cast<int64_t>(remaining.size()) + second.delta ==
                        0) {
                        std::swap(img[i2], img[j2]);
                        return finish(std::move(img));
                    }
                }
            }
            std::swap(img[i], img[j]);
        }
    }
    throw ConstructionFailed("build_prime: no two-transposition repair for p=" +
                             std::to_string(p) + ", t=" + std::to_string(t));
}

Perm build_prime(uint64_t p, bool verify) {
    require_case_prime(p, "build_prime");
    for (uint64_t t = 2; t < p; ++t) {
        try {
            return build_prime(p, t, verify);
        } catch (const ConstructionFailed&) {
            continue;
        }
    }
    throw ConstructionFailed(
        "build_prime: every parameter failed two-transposition repair, p=" +
        std::to_string(p));
}

Perm build_2p_base(uint64_t p, uint64_t t) {
    require_case_prime(p, "build_2p");
    t %= p;
    if (!valid_t(CaseKind::TwoP, p, t))
        throw BadParams("build_2p: t=" + std::to_string(t) +
                        " violates the 2p parameter conditions for p=" +
                        std::to_string(p));
    return glue_case(2, p, [&](uint64_t b, uint64_t x) -> BlockPair {
        if (b == 0) {
            if (x == 0) return {1, t};
            if (x == 1) return {1, 0};
            return {0, mod_inverse(x, p)};
        }
        if (x == 0) return {0, 1};
        if (x == 1) return {0, 0};
        return {1, mulmod(t, mod_inverse(x, p), p)};
    });
}

Perm build_2p(uint64_t p, const CaseParams& params, bool verify) {
    if (!params.y)
        throw BadParams("build_2p: parameter y is required");
    const uint64_t y = *params.y % p;
    Perm base = build_2p_base(p, params.t);
    if (!valid_y_2p(p, params.t, y))
        throw BadParams("build_2p: y=" + std::to_string(y) +
                        " violates the secondary parameter conditions for p=" +
                        std::to_string(p));
    std::vector<uint32_t> img = base.image();
    std::swap(img[crt_pair(2, p, 0, 1)], img[crt_pair(2, p, 0, y)]);
    Perm out{std::move(img)};
    ensure_destroying(out, "build_2p", verify);
    return out;
}

Perm build_3p(uint64_t p, uint64_t t, bool verify) {
    require_case_prime(p, "build_3p");
    t %= p;
    if (!valid_t(CaseKind::ThreeP, p, t))
        throw BadParams("build_3p: t=" + std::to_string(t) +
                        " violates the 3p parameter conditions for p=" +
                        std::to_string(p));
    Perm out = glue_case(3, p, [&](uint64_t b, uint64_t x) -> BlockPair {
        if (b == 0) {
            if (x == 0) return {1, 0};
            if (x == 1) return {1, 1};
            return {0, mod_inverse(x, p)};
        }
        if (b == 1) {
            if (x == 0) return {2, t};
            if (x == 1) return {2, 0};
            return {1, mod_inverse(x, p)};
        }
        if (x == 0) return {0, 1};
        if (x == 1) return {0, 0};
        return {2, mulmod(t, mod_inverse(x, p), p)};
    });
    ensure_destroying(out, "build_3p", verify);
    return out;
}

Perm build_5p(uint64_t p, uint64_t t, bool verify) {
    require_case_prime(p, "build_5p");
    t %= p;
    if (!valid_t(CaseKind::FiveP, p, t))
        throw BadParams("build_5p: t=" + std::to_string(t) +
                        " violates the 5p parameter conditions for p=" +
                        std::to_string(p));
    const uint64_t t1 = (t + 1) % p;
    Perm out = glue_case(5, p, [&](uint64_t b, uint64_t x) -> BlockPair {
        switch (b) {
            case 0:
                if (x == 0) return {3, 1};
                if (x == 1) return {3, 0};
                return {0, mulmod(t, mod_inverse(x, p), p)};
            case 1:
                if (x == 0) return {2, 0};
                if (x == 1) return {2, t};
                return {1, mulmod(t1, mod_inverse(x, p), p)};
            case 2:
                if (x == 0) return {1, t1};
                if (x == 1) return {1, 0};
                return {2, mulmod(t, mod_inverse(x, p), p)};
            case 3:
                if (x == 0) return {4, 1};
                if (x == 1) return {4, 0};
                return {3, mod_inverse(x, p)};
            default:
                if (x == 0) return {0, t};
                if (x == 1) return {0, 0};
                return {4, mod_inverse(x, p)};
        }
    });
    ensure_destroying(out, "build_5p", verify);
    return out;
}

Perm build_7p(uint64_t p, uint64_t t, bool verify) {
    require_case_prime(p, "build_7p");
    t %= p;
    if (!valid_t(CaseKind::SevenP, p, t))
        throw BadParams("build_7p: t=" + std::to_string(t) +
                        " violates the 7p parameter conditions for p=" +
                        std::to_string(p));
    Perm out = glue_case(7, p, [&](uint64_t b, uint64_t x) -> BlockPair {
        switch (b) {
            case 0:
                if (x == 0) return {0, 1};
                if (x == 1) return {0, 0};
                return {6, mulmod(t, mod_inverse(x, p), p)};
            case 1:
                if (x == 0) return {1, 1};
                if (x == 1) return {1, 0};
                return {0, mod_inverse(x, p)};
            case 2:
                if (x == 0) return {2, 0};
                if (x == 1) return {2, t};
                return {4, mod_inverse(x, p)};
            case 3:
                if (x == 0) return {3, 1};
                if (x == 1) return {3, 0};
                return {2, mulmod(t, mod_inverse(x, p), p)};
            case 4:
                if (x == 0) return {5, 1};
                if (x == 1) return {5, 0};
                return {3, mod_inverse(x, p)};
            case 5:
                if (x == 0) return {6, t};
                if (x == 1) return {6, 0};
                return {5, mod_inverse(x, p)};
            default:
                if (x == 0) return {4, 1};
                if (x == 1) return {4, 0};
                return {1, mod_inverse(x, p)};
        }
    });
    ensure_destroying(out, "build_7p", verify);
    return out;
}

}  // namespace apdperm
