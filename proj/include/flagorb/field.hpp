#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace flagorb {

// Field policies. A matrix carries one policy instance; its value_type is the
// scalar. Rational values are kept canonical by gmpxx (lowest terms, positive
// denominator); prime field values are residues in [0, p).

struct Rational {
    using value_type = mpq_class;

    std::uint32_t characteristic() const { return 0; }
    std::string name() const { return "Q"; }

    value_type zero() const { return value_type(0); }
    value_type one() const { return value_type(1); }
    value_type from_int(long v) const { return value_type(v); }
    value_type from_fraction(long num, long den) const {
        if (den == 0) throw std::domain_error("zero denominator");
        value_type r(num, den);
        r.canonicalize();
        return r;
    }

    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type inv(const value_type& a) const {
        if (sgn(a) == 0) throw std::domain_error("inverse of zero");
        return value_type(1) / a;
    }
    bool is_zero(const value_type& a) const { return sgn(a) == 0; }
    bool is_one(const value_type& a) const { return a == 1; }
    std::string to_string(const value_type& a) const { return a.get_str(); }

    bool operator==(const Rational&) const { return true; }
    bool operator!=(const Rational&) const { return false; }
};

bool is_prime(std::uint64_t p);

struct PrimeField {
    using value_type = std::uint32_t;

    std::uint32_t p = 2;

    PrimeField() = default;
    explicit PrimeField(std::uint32_t prime) : p(prime) {
        if (prime < 2 || prime > (1u << 31) || !is_prime(prime))
            throw std::invalid_argument("GF(p) needs a prime p <= 2^31, got " + std::to_string(prime));
    }

    std::uint32_t characteristic() const { return p; }
    std::string name() const { return "F" + std::to_string(p); }

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(long v) const {
        long r = v % static_cast<long>(p);
        if (r < 0) r += p;
        return static_cast<value_type>(r);
    }
    value_type from_fraction(long num, long den) const {
        value_type d = from_int(den);
        if (d == 0) throw std::domain_error("denominator vanishes mod p");
        return mul(from_int(num), inv(d));
    }

    value_type add(value_type a, value_type b) const {
        std::uint64_t s = static_cast<std::uint64_t>(a) + b;
        return static_cast<value_type>(s >= p ? s - p : s);
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (p - b); }
    value_type mul(value_type a, value_type b) const {
        return static_cast<value_type>(static_cast<std::uint64_t>(a) * b % p);
    }
    value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
    value_type pow(value_type a, std::uint64_t e) const {
        std::uint64_t r = 1, b = a;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return static_cast<value_type>(r);
    }
    // Fermat: a^(p-2).
    value_type inv(value_type a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        return pow(a, p - 2);
    }
    bool is_zero(value_type a) const { return a == 0; }
    bool is_one(value_type a) const { return a == 1; }
    std::string to_string(value_type a) const { return std::to_string(a); }

    bool operator==(const PrimeField& o) const { return p == o.p; }
    bool operator!=(const PrimeField& o) const { return p != o.p; }
};

inline bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Smallest generator of GF(p)^*.
std::uint32_t primitive_root(std::uint32_t p);

}  // namespace flagorb
