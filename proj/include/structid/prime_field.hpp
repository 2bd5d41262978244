#pragma once

#include <cstdint>
#include <random>

#include "structid/errors.hpp"
#include "structid/rational.hpp"

namespace structid {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t acc = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1) acc = mulmod_u64(acc, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return acc;
}

}  // namespace detail

// Deterministic Miller-Rabin, valid for all 64-bit integers.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < r - 1; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Coefficient domain Q. Stateless; all instances compare equal.
struct Rationals {
    using Elem = Rat;

    Elem zero() const { return Rat(0); }
    Elem one() const { return Rat(1); }
    bool is_zero(const Elem& a) const { return a == 0; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem div(const Elem& a, const Elem& b) const {
        if (b == 0) throw DivisionError("division by zero rational");
        return a / b;
    }
    Elem inv(const Elem& a) const { return div(one(), a); }

    friend bool operator==(const Rationals&, const Rationals&) { return true; }
};

// Coefficient domain F_p for a word-sized prime p. Elements are their
// canonical representatives in [0, p).
struct PrimeField {
    std::uint64_t p = 0;

    using Elem = std::uint64_t;

    PrimeField() = default;
    explicit PrimeField(std::uint64_t modulus) : p(modulus) {
        if (!is_prime_u64(modulus)) throw ArgumentError("PrimeField modulus must be prime");
    }

    Elem zero() const { return 0; }
    Elem one() const { return 1 % p; }
    bool is_zero(const Elem& a) const { return a == 0; }
    Elem add(Elem a, Elem b) const {
        Elem s = a + b;  // p < 2^63 keeps this overflow-free
        return s >= p ? s - p : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
    Elem mul(Elem a, Elem b) const { return detail::mulmod_u64(a, b, p); }
    Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
    Elem inv(Elem a) const {
        if (a == 0) throw DivisionError("inverse of zero in prime field");
        return detail::powmod_u64(a, p - 2, p);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    Elem from_integer(const Int& z) const {
        Int r = z % Int(static_cast<unsigned long>(p));
        if (r < 0) r += Int(static_cast<unsigned long>(p));
        return r.get_ui();
    }

    // Image of a rational number; the caller retries with another prime when
    // the denominator is divisible by p.
    Elem from_rational(const Rat& q) const {
        Elem den = from_integer(q.get_den());
        if (den == 0) throw BadPrimeError("denominator divisible by prime " + std::to_string(p));
        return mul(from_integer(q.get_num()), inv(den));
    }

    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p == b.p; }
};

// Random prime in (2^59, 2^60): large enough that one Schwartz-Zippel-style
// failure budget covers point sampling and modular reduction together, small
// enough for single-word multiply-reduce.
template <typename Rng>
PrimeField random_prime_field(Rng& rng) {
    for (;;) {
        std::uint64_t candidate = (rng() | 1ull) % (1ull << 59);
        candidate |= (1ull << 59) | 1ull;
        if (candidate > (1ull << 59) && is_prime_u64(candidate)) return PrimeField(candidate);
    }
}

}  // namespace structid
