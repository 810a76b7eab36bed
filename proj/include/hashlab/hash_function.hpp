#pragma once

#include "hashlab/descriptor.hpp"
#include "hashlab/multiply_shift.hpp"
#include "hashlab/polyhash.hpp"
#include "hashlab/tabulation.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace hashlab {

using HashVariant = std::variant<SimpleTabulation, TabulationPermutation, Tabulation1Permutation, TwistedTabulation,
                                 MixedTabulation, DoubleTabulation, MultiplyShift32, MultiplyShift64, PolyHash61,
                                 PolyHash89>;

// Immutable, cheaply copyable handle to a built hash function. Safe to
// evaluate concurrently from any number of threads.
class HashFunction {
public:
    HashFunction(SchemeDescriptor descriptor, HashVariant impl);

    std::uint64_t operator()(std::uint64_t x) const {
        return std::visit([x](const auto& h) { return h(x); }, *impl_);
    }

    // Calls fn with the concrete evaluator; use it to keep dispatch out of hot loops.
    template <typename Fn>
    decltype(auto) visit(Fn&& fn) const {
        return std::visit(std::forward<Fn>(fn), *impl_);
    }

    // Evaluates every key, dispatching once.
    void hash_all(std::span<const std::uint64_t> keys, std::span<std::uint64_t> out) const;

    // Number of table reads performed for key x, counted by an instrumented evaluation.
    [[nodiscard]] std::size_t count_lookups(std::uint64_t x) const;

    [[nodiscard]] const SchemeDescriptor& descriptor() const noexcept { return desc_; }
    [[nodiscard]] const HashVariant& impl() const noexcept { return *impl_; }
    [[nodiscard]] unsigned output_bits() const noexcept { return desc_.output_bits(); }
    [[nodiscard]] std::uint64_t digest() const noexcept { return digest_; }
    // Character tables held by the function (0 for multiply-shift and PolyHash).
    [[nodiscard]] std::size_t table_count() const noexcept;

private:
    SchemeDescriptor desc_;
    std::uint64_t digest_;
    std::shared_ptr<const HashVariant> impl_;
};

// Fills every table from generators keyed by the descriptor's seed.
// Throws InvalidDescriptor or UnsupportedConfig.
HashFunction build(const SchemeDescriptor& descriptor);

// Canonical little-endian dump of the function's state:
//   "HLAB1" | scheme id (u8) | c (u8) | d (u8) | char_bits (u8) | payload
// Key width is c * char_bits.
// The payload lists the tables in index order; see README for per-scheme layout.
std::vector<std::uint8_t> dump_tables(const HashFunction& hf);

}  // namespace hashlab
