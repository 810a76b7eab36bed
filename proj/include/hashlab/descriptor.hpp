#pragma once

#include "hashlab/seed.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hashlab {

enum class Scheme : std::uint8_t {
    SimpleTab = 1,
    TabPerm = 2,
    Tab1Perm = 3,
    TwistedTab = 4,
    MixedTab = 5,
    DoubleTab = 6,
    MultiplyShift = 7,
    PolyHash = 8,
};

[[nodiscard]] bool is_tabulation(Scheme s) noexcept;

// Reproducible identity of a hash function. Zero-valued optional fields are
// filled with the scheme defaults by normalized().
struct SchemeDescriptor {
    Scheme scheme = Scheme::SimpleTab;
    unsigned key_bits = 32;
    unsigned char_bits = 0;  // 0: 8, or 16 for double tabulation
    unsigned d = 0;          // output (or derived) characters; 0: scheme default
    unsigned poly_k = 2;     // independence of PolyHash
    MasterSeed seed{};

    // Input characters.
    [[nodiscard]] unsigned c() const noexcept { return char_bits == 0 ? 0 : key_bits / char_bits; }

    // Width of the produced hash values.
    [[nodiscard]] unsigned output_bits() const noexcept;

    // Copy with defaults resolved. Throws InvalidDescriptor / UnsupportedConfig.
    [[nodiscard]] SchemeDescriptor normalized() const;

    // e.g. "tab1perm/64/8/8" or "poly100/32". Seed not included.
    [[nodiscard]] std::string to_string() const;

    // 64-bit digest of (normalized descriptor, seed); equal digests identify the same function.
    [[nodiscard]] std::uint64_t digest() const;

    friend bool operator==(const SchemeDescriptor&, const SchemeDescriptor&) = default;
};

// CLI names: simpletab, tabperm, tab1perm, twisted, mixed, doubletab, multishift, poly<k>.
[[nodiscard]] std::string scheme_name(Scheme s, unsigned poly_k = 2);
[[nodiscard]] SchemeDescriptor parse_scheme(std::string_view name, unsigned key_bits, const MasterSeed& seed);

// Parses SchemeDescriptor::to_string() output.
[[nodiscard]] SchemeDescriptor parse_descriptor(std::string_view text, const MasterSeed& seed);

}  // namespace hashlab
