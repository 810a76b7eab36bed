#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace hashlab {

// 256-bit master seed. limbs[0] holds the least significant 64 bits.
struct MasterSeed {
    std::array<std::uint64_t, 4> limbs{};

    MasterSeed() = default;
    constexpr explicit MasterSeed(std::uint64_t low) : limbs{low, 0, 0, 0} {}
    constexpr explicit MasterSeed(std::array<std::uint64_t, 4> l) : limbs(l) {}

    // Accepts "0x" followed by 1..64 hex digits. Throws InvalidParams otherwise.
    static MasterSeed from_hex(std::string_view text);

    // Canonical form: "0x" + 64 lowercase hex digits.
    [[nodiscard]] std::string to_hex() const;
    // Shortest form without leading zeros ("0x0" for zero).
    [[nodiscard]] std::string to_short_hex() const;

    friend bool operator==(const MasterSeed&, const MasterSeed&) = default;
};

// Deterministic child seed, e.g. one per experiment trial.
MasterSeed derive_seed(const MasterSeed& parent, std::string_view tag, std::uint64_t index);

namespace detail {

std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a(std::string_view bytes) noexcept;

// Counter-mode expansion: word number `counter` of the stream keyed by (seed, domain).
std::uint64_t expand(const MasterSeed& seed, std::uint64_t domain, std::uint64_t counter) noexcept;

}  // namespace detail

}  // namespace hashlab
