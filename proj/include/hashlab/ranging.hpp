#pragma once

// Mapping ell-bit hash values to m bins, and interval arithmetic on [0, 2^ell).

#include "hashlab/hash_function.hpp"
#include "hashlab/mersenne.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hashlab {

enum class BinMode { ShiftMultiply, Modulo };

// Half-open interval [lo, hi) of ell-bit values. hi may equal 2^ell, so both
// bounds are 128-bit.
struct Interval {
    uint128 lo = 0;
    uint128 hi = 0;

    [[nodiscard]] constexpr uint128 size() const noexcept { return hi - lo; }
    [[nodiscard]] constexpr bool contains(std::uint64_t h) const noexcept { return lo <= h && h < hi; }

    friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

class BinMap {
public:
    // 1 <= m <= 2^ell, 1 <= ell <= 64.
    BinMap(std::uint64_t m, unsigned ell, BinMode mode = BinMode::ShiftMultiply);

    // ShiftMultiply: (h * m) >> ell. Modulo: h mod m.
    [[nodiscard]] std::uint64_t to_bin(std::uint64_t h) const noexcept {
        if (mode_ == BinMode::Modulo) return h % m_;
        return static_cast<std::uint64_t>((static_cast<uint128>(h) * m_) >> ell_);
    }

    // Exact preimage of bin d: [ceil(r d / m), ceil(r (d+1) / m)) with r = 2^ell.
    // ShiftMultiply only.
    [[nodiscard]] Interval bin_to_interval(std::uint64_t d) const;

    [[nodiscard]] std::uint64_t bins() const noexcept { return m_; }
    [[nodiscard]] unsigned ell() const noexcept { return ell_; }
    [[nodiscard]] BinMode mode() const noexcept { return mode_; }

private:
    std::uint64_t m_;
    unsigned ell_;
    BinMode mode_;
};

[[nodiscard]] constexpr bool in_interval(std::uint64_t h, const Interval& iv) noexcept { return iv.contains(h); }

// Canonical partition of iv into aligned power-of-two pieces [q 2^j, (q+1) 2^j),
// taken greedily from the left. Sorted, disjoint, at most two pieces per size.
std::vector<Interval> dyadic_decompose(const Interval& iv, unsigned ell);

struct WeightedKey {
    std::uint64_t key;
    double weight;
};

// Total weight of the keys whose hash lands in iv.
double weight_in_interval(const HashFunction& hf, std::span<const WeightedKey> keys, const Interval& iv);

}  // namespace hashlab
