#pragma once

// Arithmetic modulo the Mersenne primes 2^61 - 1 and 2^89 - 1.

#include <cstdint>

namespace hashlab {

using uint128 = unsigned __int128;

struct Mersenne61 {
    static constexpr unsigned kBits = 61;
    static constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;
    using value_type = std::uint64_t;

    // Reduces any 128-bit value.
    static constexpr value_type reduce(uint128 x) noexcept {
        x = (x & kPrime) + (x >> 61);
        x = (x & kPrime) + (x >> 61);
        const auto r = static_cast<std::uint64_t>(x);
        return r >= kPrime ? r - kPrime : r;
    }

    static constexpr value_type add(value_type a, value_type b) noexcept {
        const value_type s = a + b;
        return s >= kPrime ? s - kPrime : s;
    }

    static constexpr value_type mul(value_type a, value_type b) noexcept {
        return reduce(static_cast<uint128>(a) * b);
    }
};

struct Mersenne89 {
    static constexpr unsigned kBits = 89;
    static constexpr uint128 kPrime = (uint128{1} << 89) - 1;
    using value_type = uint128;

    // Reduces any 128-bit value.
    static constexpr value_type reduce(uint128 x) noexcept {
        uint128 r = (x & kPrime) + (x >> 89);
        r = (r & kPrime) + (r >> 89);
        return r >= kPrime ? r - kPrime : r;
    }

    static constexpr value_type add(value_type a, value_type b) noexcept {
        const value_type s = a + b;
        return s >= kPrime ? s - kPrime : s;
    }

    // Two-limb schoolbook product folded at bit 89. Inputs must be < 2^89.
    static constexpr value_type mul(value_type a, value_type b) noexcept {
        const std::uint64_t a_lo = static_cast<std::uint64_t>(a);
        const std::uint64_t a_hi = static_cast<std::uint64_t>(a >> 64);  // < 2^25
        const std::uint64_t b_lo = static_cast<std::uint64_t>(b);
        const std::uint64_t b_hi = static_cast<std::uint64_t>(b >> 64);

        const uint128 low = static_cast<uint128>(a_lo) * b_lo;
        const uint128 mid = static_cast<uint128>(a_hi) * b_lo + static_cast<uint128>(a_lo) * b_hi;  // < 2^90
        const uint128 high = static_cast<uint128>(a_hi) * b_hi;                                    // < 2^50

        // product = top * 2^128 + bottom
        const uint128 bottom = low + (mid << 64);
        const uint128 carry = bottom < low ? 1 : 0;
        const uint128 top = high + (mid >> 64) + carry;  // < 2^51

        // product >> 89 fits in 90 bits; 2^89 == 1 mod p.
        const uint128 upper = (bottom >> 89) | (top << 39);
        return reduce((bottom & kPrime) + upper);
    }
};

}  // namespace hashlab
