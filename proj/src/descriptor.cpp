#include "hashlab/descriptor.hpp"

#include "hashlab/errors.hpp"

#include <charconv>
#include <vector>

namespace hashlab {

bool is_tabulation(Scheme s) noexcept {
    return s != Scheme::MultiplyShift && s != Scheme::PolyHash;
}

unsigned SchemeDescriptor::output_bits() const noexcept {
    switch (scheme) {
        case Scheme::MultiplyShift:
        case Scheme::PolyHash:
        case Scheme::DoubleTab:
            return key_bits;
        default:
            return d * char_bits;
    }
}

SchemeDescriptor SchemeDescriptor::normalized() const {
    SchemeDescriptor out = *this;
    if (key_bits != 32 && key_bits != 64) {
        throw InvalidDescriptor("key_bits must be 32 or 64, got " + std::to_string(key_bits));
    }
    if (!is_tabulation(scheme)) {
        out.char_bits = 8;
        out.d = key_bits / 8;
        if (scheme == Scheme::PolyHash && poly_k == 0) {
            throw InvalidDescriptor("PolyHash needs k >= 1");
        }
        if (scheme != Scheme::PolyHash) out.poly_k = 0;
        return out;
    }
    out.poly_k = 0;

    if (scheme == Scheme::DoubleTab) {
        if (key_bits == 64) {
            throw UnsupportedConfig("double tabulation is only supported for 32-bit keys");
        }
        if (char_bits == 0) out.char_bits = 16;
        if (d == 0) out.d = 20;
        if (out.char_bits != 16 || out.d != 20) {
            throw InvalidDescriptor("double tabulation uses 16-bit characters and 20 derived characters");
        }
        return out;
    }

    if (char_bits == 0) out.char_bits = 8;
    if (out.char_bits != 8) {
        throw UnsupportedConfig("16-bit characters are only supported for double tabulation");
    }
    const unsigned c = out.c();
    if (d == 0) out.d = c;
    if (out.d == 0 || out.d * out.char_bits > 64) {
        throw InvalidDescriptor("output must be 1..64 bits (d * char_bits)");
    }
    if (scheme == Scheme::MixedTab && out.d != c) {
        throw InvalidDescriptor("mixed tabulation requires d == c");
    }
    return out;
}

std::string scheme_name(Scheme s, unsigned poly_k) {
    switch (s) {
        case Scheme::SimpleTab: return "simpletab";
        case Scheme::TabPerm: return "tabperm";
        case Scheme::Tab1Perm: return "tab1perm";
        case Scheme::TwistedTab: return "twisted";
        case Scheme::MixedTab: return "mixed";
        case Scheme::DoubleTab: return "doubletab";
        case Scheme::MultiplyShift: return "multishift";
        case Scheme::PolyHash: return "poly" + std::to_string(poly_k);
    }
    return "unknown";
}

std::string SchemeDescriptor::to_string() const {
    const SchemeDescriptor n = normalized();
    std::string out = scheme_name(n.scheme, n.poly_k) + "/" + std::to_string(n.key_bits);
    if (is_tabulation(n.scheme)) {
        out += "/" + std::to_string(n.char_bits) + "/" + std::to_string(n.d);
    }
    return out;
}

std::uint64_t SchemeDescriptor::digest() const {
    const SchemeDescriptor n = normalized();
    std::uint64_t h = detail::fnv1a(n.to_string());
    for (const std::uint64_t limb : n.seed.limbs) {
        h = detail::mix64(h ^ limb);
    }
    return h;
}

SchemeDescriptor parse_scheme(std::string_view name, unsigned key_bits, const MasterSeed& seed) {
    SchemeDescriptor desc;
    desc.key_bits = key_bits;
    desc.seed = seed;
    if (name == "simpletab") desc.scheme = Scheme::SimpleTab;
    else if (name == "tabperm") desc.scheme = Scheme::TabPerm;
    else if (name == "tab1perm") desc.scheme = Scheme::Tab1Perm;
    else if (name == "twisted") desc.scheme = Scheme::TwistedTab;
    else if (name == "mixed") desc.scheme = Scheme::MixedTab;
    else if (name == "doubletab") desc.scheme = Scheme::DoubleTab;
    else if (name == "multishift") desc.scheme = Scheme::MultiplyShift;
    else if (name.starts_with("poly")) {
        desc.scheme = Scheme::PolyHash;
        const std::string_view digits = name.substr(4);
        unsigned k = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || k == 0) {
            throw InvalidDescriptor("bad PolyHash name '" + std::string(name) + "'");
        }
        desc.poly_k = k;
    } else {
        throw InvalidDescriptor("unknown scheme '" + std::string(name) + "'");
    }
    return desc;
}

SchemeDescriptor parse_descriptor(std::string_view text, const MasterSeed& seed) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto slash = text.find('/');
        parts.push_back(text.substr(0, slash));
        if (slash == std::string_view::npos) break;
        text.remove_prefix(slash + 1);
    }
    auto number = [](std::string_view s) {
        unsigned v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
            throw InvalidDescriptor("bad number '" + std::string(s) + "' in descriptor");
        }
        return v;
    };
    if (parts.size() != 2 && parts.size() != 4) {
        throw InvalidDescriptor("descriptor must look like name/bits[/charbits/d]");
    }
    SchemeDescriptor desc = parse_scheme(parts[0], number(parts[1]), seed);
    if (parts.size() == 4) {
        desc.char_bits = number(parts[2]);
        desc.d = number(parts[3]);
    }
    return desc.normalized();
}

}  // namespace hashlab
