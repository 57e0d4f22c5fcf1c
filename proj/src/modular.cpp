#include "apdperm/modular.hpp"

#include <array>
#include <cmath>
#include <string>

#include "apdperm/errors.hpp"

namespace apdperm {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    if (m == 0) throw BadParams("mulmod: modulus must be positive");
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    if (m == 0) throw BadParams("powmod: modulus must be positive");
    if (m == 1) return 0;
    uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

uint64_t mod_inverse(uint64_t a, uint64_t m) {
    if (m == 0) throw BadParams("mod_inverse: modulus must be positive");
    if (m > static_cast<uint64_t>(INT64_MAX))
        throw BadParams("mod_inverse: modulus too large");
    if (m == 1) return 0;
    const int64_t mm = static_cast<int64_t>(m);
    int64_t r = mm;
    int64_t new_r = static_cast<int64_t>(a % m);
    int64_t t = 0;
    int64_t new_t = 1;
    while (new_r != 0) {
        const int64_t q = r / new_r;
        const int64_t tmp_t = t - q * new_t;
        t = new_t;
        new_t = tmp_t;
        const int64_t tmp_r = r - q * new_r;
        r = new_r;
        new_r = tmp_r;
    }
    if (r != 1)
        throw NotInvertible("mod_inverse: " + std::to_string(a % m) + " mod " +
                            std::to_string(m));
    if (t < 0) t += mm;
    return static_cast<uint64_t>(t);
}

bool is_prime(uint64_t n) {
    constexpr std::array<uint64_t, 12> witnesses = {2,  3,  5,  7,  11, 13,
                                                    17, 19, 23, 29, 31, 37};
    if (n < 2) return false;
    for (uint64_t p : witnesses) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : witnesses) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness_of_compositeness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness_of_compositeness = false;
                break;
            }
        }
        if (witness_of_compositeness) return false;
    }
    return true;
}

int legendre(uint64_t a, uint64_t p) {
    if (p == 2 || !is_prime(p))
        throw NotPrime("legendre: modulus " + std::to_string(p) +
                       " is not an odd prime");
    a %= p;
    if (a == 0) return 0;
    const uint64_t e = powmod(a, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

namespace {
bool square_at_most(uint64_t r, uint64_t n) {
    return static_cast<unsigned __int128>(r) * r <= n;
}
}  // namespace

uint64_t isqrt_floor(uint64_t n) {
    if (n == 0) return 0;
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && !square_at_most(r, n)) --r;
    while (square_at_most(r + 1, n)) ++r;
    return r;
}

uint64_t isqrt_ceil(uint64_t n) {
    const uint64_t r = isqrt_floor(n);
    return r * r == n ? r : r + 1;
}

QrTable::QrTable(uint64_t p) : p_(p) {
    if (p == 2 || !is_prime(p))
        throw NotPrime("QrTable: modulus " + std::to_string(p) +
                       " is not an odd prime");
    table_.assign(p, -1);
    table_[0] = 0;
    for (uint64_t x = 1; x < p; ++x) table_[mulmod(x, x, p)] = 1;
}

Residue::Residue(int64_t value, uint64_t modulus) : m_(modulus) {
    if (modulus == 0) throw BadParams("Residue: modulus must be positive");
    if (modulus > static_cast<uint64_t>(INT64_MAX))
        throw BadParams("Residue: modulus too large");
    int64_t v = value % static_cast<int64_t>(modulus);
    if (v < 0) v += static_cast<int64_t>(modulus);
    v_ = static_cast<uint64_t>(v);
}

namespace {
void require_same_modulus(const Residue& a, const Residue& b) {
    if (a.modulus() != b.modulus())
        throw BadParams("Residue: mixed moduli " + std::to_string(a.modulus()) +
                        " and " + std::to_string(b.modulus()));
}
}  // namespace

Residue Residue::operator-() const {
    return Residue(v_ == 0 ? 0 : static_cast<int64_t>(m_ - v_),
                   m_);
}

Residue Residue::inverse() const {
    return Residue(static_cast<int64_t>(mod_inverse(v_, m_)), m_);
}

Residue operator+(const Residue& a, const Residue& b) {
    require_same_modulus(a, b);
    uint64_t s = a.v_ + b.v_;
    if (s >= a.m_) s -= a.m_;
    return Residue(static_cast<int64_t>(s), a.m_);
}

Residue operator-(const Residue& a, const Residue& b) {
    return a + (-b);
}

Residue operator*(const Residue& a, const Residue& b) {
    require_same_modulus(a, b);
    return Residue(static_cast<int64_t>(mulmod(a.v_, b.v_, a.m_)), a.m_);
}

Residue operator/(const Residue& a, const Residue& b) {
    require_same_modulus(a, b);
    return a * b.inverse();
}

PolyOverFp::PolyOverFp(std::vector<int64_t> coefficients, uint64_t p) : p_(p) {
    if (p < 2 || !is_prime(p)) throw NotPrime("PolyOverFp: p must be prime");
    coeffs_.reserve(coefficients.size());
    for (int64_t c : coefficients) coeffs_.push_back(Residue(c, p).value());
    trim();
}

void PolyOverFp::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

uint64_t PolyOverFp::eval(uint64_t x) const {
    x %= p_;
    uint64_t acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = (mulmod(acc, x, p_) + *it) % p_;
    return acc;
}

PolyOverFp operator*(const PolyOverFp& a, const PolyOverFp& b) {
    if (a.p_ != b.p_) throw BadParams("PolyOverFp: mixed primes");
    PolyOverFp out(a.p_);
    if (a.is_zero() || b.is_zero()) return out;
    out.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
            out.coeffs_[i + j] =
                (out.coeffs_[i + j] + mulmod(a.coeffs_[i], b.coeffs_[j], a.p_)) %
                a.p_;
        }
    }
    out.trim();
    return out;
}

Residue eval_poly(const PolyOverFp& f, const Residue& x) {
    if (x.modulus() != f.prime()) throw BadParams("eval_poly: mixed moduli");
    return Residue(static_cast<int64_t>(f.eval(x.value())), f.prime());
}

}  // namespace apdperm
