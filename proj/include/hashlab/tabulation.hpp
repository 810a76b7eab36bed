#pragma once

// Tabulation-based hash families.
//
// Keys are split little-endian into c characters of char_bits bits each:
// character position i covers key bits [i*char_bits, (i+1)*char_bits).
// Hash values are d characters wide; output character 1 is the most
// significant one, i.e. it occupies bits [(d-1)*char_bits, d*char_bits).
//
// Every evaluator has a templated eval(x, probe) that calls probe() once per
// table read. operator() uses a no-op probe and compiles to the bare loop.

#include "hashlab/generator.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hashlab {

struct NoProbe {
    constexpr void operator()() const noexcept {}
};

struct LookupCounter {
    std::size_t reads = 0;
    void operator()() noexcept { ++reads; }
};

struct TabGeometry {
    unsigned char_bits = 8;
    unsigned c = 4;
    unsigned d = 4;

    [[nodiscard]] constexpr unsigned key_bits() const noexcept { return c * char_bits; }
    [[nodiscard]] constexpr unsigned out_bits() const noexcept { return d * char_bits; }
    [[nodiscard]] constexpr std::size_t alphabet() const noexcept { return std::size_t{1} << char_bits; }
    [[nodiscard]] constexpr std::uint64_t char_mask() const noexcept { return alphabet() - 1; }

    // Throws InvalidParams unless 1 <= char_bits <= 16, c >= 1, d >= 1 and both
    // key and output widths fit in 64 bits.
    void validate() const;

    friend bool operator==(const TabGeometry&, const TabGeometry&) = default;
};

// Mask of the low `bits` bits; bits may be 64.
constexpr std::uint64_t low_mask(unsigned bits) noexcept {
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

namespace detail {

// XOR of table[i * stride + char_i(x)] over `count` character positions.
// Fixed counts unroll into straight-line code, which keeps throughput
// independent of where the loop lands in the binary.
template <unsigned Count, typename Probe>
std::uint64_t xor_lookups_fixed(std::uint64_t x, const std::uint64_t* table, std::size_t stride, unsigned char_bits,
                                std::uint64_t mask, Probe& probe) {
    std::uint64_t h = 0;
    for (unsigned i = 0; i < Count; ++i, x >>= char_bits, table += stride) {
        probe();
        h ^= table[x & mask];
    }
    return h;
}

template <typename Probe>
std::uint64_t xor_lookups(std::uint64_t x, const std::uint64_t* table, std::size_t stride, unsigned count,
                          unsigned char_bits, std::uint64_t mask, Probe& probe) {
    switch (count) {
        case 2: return xor_lookups_fixed<2>(x, table, stride, char_bits, mask, probe);
        case 4: return xor_lookups_fixed<4>(x, table, stride, char_bits, mask, probe);
        case 8: return xor_lookups_fixed<8>(x, table, stride, char_bits, mask, probe);
        default: break;
    }
    std::uint64_t h = 0;
    for (unsigned i = 0; i < count; ++i, x >>= char_bits, table += stride) {
        probe();
        h ^= table[x & mask];
    }
    return h;
}

}  // namespace detail

// h(x) = h_1(x_1) xor ... xor h_c(x_c).
class SimpleTabulation {
public:
    // tables holds c consecutive blocks of |Sigma| entries, each < 2^out_bits.
    SimpleTabulation(TabGeometry geometry, std::vector<std::uint64_t> tables);

    static SimpleTabulation random(TabGeometry geometry, IndependentGenerator& gen);

    template <typename Probe>
    std::uint64_t eval(std::uint64_t x, Probe& probe) const {
        return detail::xor_lookups(x, tables_.data(), stride_, geometry_.c, geometry_.char_bits, geometry_.char_mask(),
                                   probe);
    }

    std::uint64_t operator()(std::uint64_t x) const {
        NoProbe probe;
        return eval(x, probe);
    }

    [[nodiscard]] const TabGeometry& geometry() const noexcept { return geometry_; }
    [[nodiscard]] std::uint64_t entry(unsigned position, std::size_t ch) const { return tables_[position * stride_ + ch]; }
    [[nodiscard]] std::span<const std::uint64_t> table(unsigned position) const {
        return {tables_.data() + position * stride_, stride_};
    }

private:
    TabGeometry geometry_;
    std::size_t stride_;
    std::vector<std::uint64_t> tables_;
};

// Simple tabulation followed by an independent random permutation of every
// output character, folded into d extra lookup tables T_i.
class TabulationPermutation {
public:
    // permutations[i] is the permutation of output character i+1 (most significant first).
    TabulationPermutation(SimpleTabulation simple, std::vector<std::vector<std::uint32_t>> permutations);

    static TabulationPermutation random(TabGeometry geometry, IndependentGenerator& table_gen,
                                        IndependentGenerator& perm_gen);

    template <typename Probe>
    std::uint64_t eval(std::uint64_t x, Probe& probe) const {
        const std::uint64_t z = simple_.eval(x, probe);
        const TabGeometry& g = simple_.geometry();
        // folded_ is ordered from the least significant character upwards.
        return detail::xor_lookups(z, folded_.data(), stride_, g.d, g.char_bits, g.char_mask(), probe);
    }

    std::uint64_t operator()(std::uint64_t x) const {
        NoProbe probe;
        return eval(x, probe);
    }

    // (tau_1(z_1), ..., tau_d(z_d)) computed character by character from the raw permutations.
    [[nodiscard]] std::uint64_t permute_direct(std::uint64_t z) const;

    [[nodiscard]] const SimpleTabulation& simple() const noexcept { return simple_; }
    [[nodiscard]] const std::vector<std::vector<std::uint32_t>>& permutations() const noexcept { return perms_; }
    // Folded table for output character i (1-based, 1 = most significant).
    [[nodiscard]] std::span<const std::uint64_t> folded_table(unsigned i) const;

private:
    SimpleTabulation simple_;
    std::vector<std::vector<std::uint32_t>> perms_;
    std::size_t stride_;
    std::vector<std::uint64_t> folded_;
};

// Simple tabulation followed by a random permutation of the most significant
// output character only: h(x) = z xor T(z_1) with z = g(x).
class Tabulation1Permutation {
public:
    Tabulation1Permutation(SimpleTabulation simple, std::vector<std::uint32_t> permutation);

    static Tabulation1Permutation random(TabGeometry geometry, IndependentGenerator& table_gen,
                                         IndependentGenerator& perm_gen);

    template <typename Probe>
    std::uint64_t eval(std::uint64_t x, Probe& probe) const {
        const std::uint64_t z = simple_.eval(x, probe);
        probe();
        return z ^ fold_[z >> top_shift_];
    }

    std::uint64_t operator()(std::uint64_t x) const {
        NoProbe probe;
        return eval(x, probe);
    }

    [[nodiscard]] const SimpleTabulation& simple() const noexcept { return simple_; }
    [[nodiscard]] const std::vector<std::uint32_t>& permutation() const noexcept { return perm_; }
    [[nodiscard]] std::span<const std::uint64_t> folded_table() const noexcept { return fold_; }

private:
    SimpleTabulation simple_;
    std::vector<std::uint32_t> perm_;
    unsigned top_shift_;
    std::vector<std::uint64_t> fold_;
};

// Twisted tabulation. Positions 0..c-2 hold (value, twist) pairs; the twist
// values are XORed into the last (most significant) input character before
// its own lookup. c lookups of double-width entries.
class TwistedTabulation {
public:
    struct Entry {
        std::uint64_t value;
        std::uint64_t twist;  // char_bits wide
    };

    // twisted holds (c-1) blocks of |Sigma| entries; last holds |Sigma| values.
    TwistedTabulation(TabGeometry geometry, std::vector<Entry> twisted, std::vector<std::uint64_t> last);

    static TwistedTabulation random(TabGeometry geometry, IndependentGenerator& gen);

    template <typename Probe>
    std::uint64_t eval(std::uint64_t x, Probe& probe) const {
        const unsigned cb = geometry_.char_bits;
        const std::uint64_t mask = geometry_.char_mask();
        const Entry* table = twisted_.data();
        std::uint64_t h = 0;
        std::uint64_t t = 0;
        for (unsigned i = 0; i + 1 < geometry_.c; ++i, x >>= cb, table += stride_) {
            probe();
            const Entry& e = table[x & mask];
            h ^= e.value;
            t ^= e.twist;
        }
        probe();
        return h ^ last_[(x ^ t) & mask];
    }

    std::uint64_t operator()(std::uint64_t x) const {
        NoProbe probe;
        return eval(x, probe);
    }

    // The key with its last character replaced by the twisted character.
    [[nodiscard]] std::uint64_t twist_key(std::uint64_t x) const;

    [[nodiscard]] const TabGeometry& geometry() const noexcept { return geometry_; }
    [[nodiscard]] std::span<const Entry> twisted_entries() const noexcept { return twisted_; }
    [[nodiscard]] std::span<const std::uint64_t> last_table() const noexcept { return last_; }

private:
    TabGeometry geometry_;
    std::size_t stride_;
    std::vector<Entry> twisted_;
    std::vector<std::uint64_t> last_;
};

// Mixed tabulation with c derived characters (c == d). Each input character
// looks up (value, derived characters); the derived characters are hashed
// through c more tables. 2c lookups.
class MixedTabulation {
public:
    struct Entry {
        std::uint64_t value;    // out_bits wide
        std::uint64_t derived;  // c characters
    };

    MixedTabulation(TabGeometry geometry, std::vector<Entry> primary, std::vector<std::uint64_t> derived_tables);

    static MixedTabulation random(TabGeometry geometry, IndependentGenerator& gen);

    template <typename Probe>
    std::uint64_t eval(std::uint64_t x, Probe& probe) const {
        const unsigned cb = geometry_.char_bits;
        const std::uint64_t mask = geometry_.char_mask();
        const Entry* table = primary_.data();
        std::uint64_t h = 0;
        std::uint64_t derived = 0;
        for (unsigned i = 0; i < geometry_.c; ++i, x >>= cb, table += stride_) {
            probe();
            const Entry& e = table[x & mask];
            h ^= e.value;
            derived ^= e.derived;
        }
        const std::uint64_t* dtable = derived_.data();
        for (unsigned j = 0; j < geometry_.c; ++j, derived >>= cb, dtable += stride_) {
            probe();
            h ^= dtable[derived & mask];
        }
        return h;
    }

    std::uint64_t operator()(std::uint64_t x) const {
        NoProbe probe;
        return eval(x, probe);
    }

    [[nodiscard]] const TabGeometry& geometry() const noexcept { return geometry_; }
    [[nodiscard]] std::span<const Entry> primary_entries() const noexcept { return primary_; }
    [[nodiscard]] std::span<const std::uint64_t> derived_tables() const noexcept { return derived_; }

private:
    TabGeometry geometry_;
    std::size_t stride_;
    std::vector<Entry> primary_;
    std::vector<std::uint64_t> derived_;
};

// Double tabulation: h = h2(h1(x)) with simple tabulation h1: Sigma^c -> Sigma^d
// and h2: Sigma^d -> Sigma^c. Here d counts the derived characters.
class DoubleTabulation {
public:
    // first: c blocks of |Sigma| entries, each d characters (character j of an entry
    // at first[(pos * |Sigma| + ch) * d + j]); second: d blocks of |Sigma| key_bits-wide values.
    DoubleTabulation(TabGeometry geometry, std::vector<std::uint16_t> first, std::vector<std::uint64_t> second);

    static DoubleTabulation random(TabGeometry geometry, IndependentGenerator& first_gen,
                                   IndependentGenerator& second_gen);

    template <typename Probe>
    std::uint64_t eval(std::uint64_t x, Probe& probe) const {
        constexpr unsigned kMaxDerived = 64;
        const unsigned cb = geometry_.char_bits;
        const std::uint64_t mask = geometry_.char_mask();
        const unsigned d = geometry_.d;
        std::uint16_t derived[kMaxDerived] = {};
        for (unsigned i = 0; i < geometry_.c; ++i, x >>= cb) {
            probe();
            const std::uint16_t* entry = first_.data() + ((i * stride_) + (x & mask)) * d;
            for (unsigned j = 0; j < d; ++j) derived[j] ^= entry[j];
        }
        const std::uint64_t* table = second_.data();
        std::uint64_t h = 0;
        for (unsigned j = 0; j < d; ++j, table += stride_) {
            probe();
            h ^= table[derived[j]];
        }
        return h;
    }

    std::uint64_t operator()(std::uint64_t x) const {
        NoProbe probe;
        return eval(x, probe);
    }

    [[nodiscard]] const TabGeometry& geometry() const noexcept { return geometry_; }
    [[nodiscard]] std::span<const std::uint16_t> first_tables() const noexcept { return first_; }
    [[nodiscard]] std::span<const std::uint64_t> second_tables() const noexcept { return second_; }

private:
    TabGeometry geometry_;
    std::size_t stride_;
    std::vector<std::uint16_t> first_;
    std::vector<std::uint64_t> second_;
};

}  // namespace hashlab
