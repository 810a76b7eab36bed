#include "hashlab/seed.hpp"

#include "hashlab/errors.hpp"

#include <cctype>

namespace hashlab {

namespace detail {

std::uint64_t mix64(std::uint64_t x) noexcept {
    // SplitMix64 finalizer.
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t expand(const MasterSeed& seed, std::uint64_t domain, std::uint64_t counter) noexcept {
    std::uint64_t h = mix64(domain ^ 0x6a09e667f3bcc908ULL);
    for (std::size_t i = 0; i < seed.limbs.size(); ++i) {
        h = mix64(h ^ seed.limbs[i] ^ (0x243f6a8885a308d3ULL * (i + 1)));
    }
    h = mix64(h ^ counter);
    return mix64(h + 0xb7e151628aed2a6bULL * (counter + 1));
}

}  // namespace detail

namespace {

int hex_value(char ch) {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    return -1;
}

constexpr char kDigits[] = "0123456789abcdef";

}  // namespace

MasterSeed MasterSeed::from_hex(std::string_view text) {
    if (text.size() < 3 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) {
        throw InvalidParams("seed must be 0x-prefixed hex: '" + std::string(text) + "'");
    }
    std::string_view digits = text.substr(2);
    if (digits.size() > 64) {
        throw InvalidParams("seed has more than 64 hex digits");
    }
    MasterSeed seed;
    std::size_t bit = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it, bit += 4) {
        const int v = hex_value(*it);
        if (v < 0) {
            throw InvalidParams("invalid hex digit in seed: '" + std::string(text) + "'");
        }
        seed.limbs[bit / 64] |= static_cast<std::uint64_t>(v) << (bit % 64);
    }
    return seed;
}

std::string MasterSeed::to_hex() const {
    std::string out = "0x";
    for (int limb = 3; limb >= 0; --limb) {
        for (int nib = 15; nib >= 0; --nib) {
            out.push_back(kDigits[(limbs[limb] >> (4 * nib)) & 0xf]);
        }
    }
    return out;
}

std::string MasterSeed::to_short_hex() const {
    const std::string full = to_hex();
    const auto first = full.find_first_not_of('0', 2);
    if (first == std::string::npos) return "0x0";
    return "0x" + full.substr(first);
}

MasterSeed derive_seed(const MasterSeed& parent, std::string_view tag, std::uint64_t index) {
    const std::uint64_t domain = detail::fnv1a(tag) ^ detail::mix64(index);
    MasterSeed child;
    for (std::size_t i = 0; i < child.limbs.size(); ++i) {
        child.limbs[i] = detail::expand(parent, domain, (index << 2) | i);
    }
    return child;
}

}  // namespace hashlab
