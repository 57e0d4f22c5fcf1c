#pragma once

#include <cstdint>
#include <vector>

namespace apdperm {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m);

// Inverse of a modulo m via extended Euclid; throws NotInvertible when gcd(a, m) != 1.
uint64_t mod_inverse(uint64_t a, uint64_t m);

// Deterministic for all 64-bit n (strong-pseudoprime witnesses 2..37).
bool is_prime(uint64_t n);

// Legendre symbol (a/p) in {-1, 0, +1} by Euler's criterion; p must be an odd prime.
int legendre(uint64_t a, uint64_t p);

uint64_t isqrt_floor(uint64_t n);
uint64_t isqrt_ceil(uint64_t n);

// Legendre symbols of all residues mod an odd prime, precomputed in O(p).
class QrTable {
public:
    explicit QrTable(uint64_t p);
    uint64_t prime() const { return p_; }
    // a may be unreduced.
    int operator()(uint64_t a) const { return table_[a % p_]; }

private:
    uint64_t p_;
    std::vector<signed char> table_;
};

// Fully reduced element of Z/nZ with field-style operators (n need not be prime;
// division requires invertibility).
class Residue {
public:
    Residue(int64_t value, uint64_t modulus);
    uint64_t value() const { return v_; }
    uint64_t modulus() const { return m_; }

    Residue operator-() const;
    Residue inverse() const;

    friend Residue operator+(const Residue& a, const Residue& b);
    friend Residue operator-(const Residue& a, const Residue& b);
    friend Residue operator*(const Residue& a, const Residue& b);
    friend Residue operator/(const Residue& a, const Residue& b);
    friend bool operator==(const Residue& a, const Residue& b) = default;

private:
    uint64_t v_;
    uint64_t m_;
};

// Dense polynomial over F_p, constant term first, trailing zeros trimmed.
class PolyOverFp {
public:
    PolyOverFp(std::vector<int64_t> coefficients, uint64_t p);

    uint64_t prime() const { return p_; }
    const std::vector<uint64_t>& coefficients() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    // Degree of the zero polynomial is reported as 0.
    uint64_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

    uint64_t eval(uint64_t x) const;

    friend PolyOverFp operator*(const PolyOverFp& a, const PolyOverFp& b);

private:
    PolyOverFp(uint64_t p) : p_(p) {}
    void trim();
    uint64_t p_;
    std::vector<uint64_t> coeffs_;
};

Residue eval_poly(const PolyOverFp& f, const Residue& x);

}  // namespace apdperm
