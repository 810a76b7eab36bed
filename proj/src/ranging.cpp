#include "hashlab/ranging.hpp"

#include "hashlab/errors.hpp"

#include <bit>

namespace hashlab {

BinMap::BinMap(std::uint64_t m, unsigned ell, BinMode mode) : m_(m), ell_(ell), mode_(mode) {
    if (ell < 1 || ell > 64) throw InvalidParams("hash width must be 1..64 bits");
    if (m == 0 || static_cast<uint128>(m) > (uint128{1} << ell)) throw InvalidParams("bin count must be in [1, 2^ell]");
}

Interval BinMap::bin_to_interval(std::uint64_t d) const {
    if (mode_ != BinMode::ShiftMultiply) throw InvalidParams("bin intervals exist only for shift-multiply mapping");
    if (d >= m_) throw InvalidParams("bin index out of range");
    const uint128 r = uint128{1} << ell_;
    // h lands in bin d iff d*r <= h*m < (d+1)*r, i.e. ceil(d r / m) <= h < ceil((d+1) r / m).
    // The floor form [floor(r d / m), floor(r (d+1) / m)) is off by one for some d when m does not divide r.
    auto ceil_div = [&](uint128 num) { return (num + m_ - 1) / m_; };
    return {ceil_div(r * d), ceil_div(r * (d + 1))};
}

std::vector<Interval> dyadic_decompose(const Interval& iv, unsigned ell) {
    if (ell > 64) throw InvalidParams("hash width must be at most 64 bits");
    if (iv.lo > iv.hi || iv.hi > (uint128{1} << ell)) throw InvalidParams("interval outside [0, 2^ell)");
    std::vector<Interval> pieces;
    uint128 lo = iv.lo;
    while (lo < iv.hi) {
        // Largest aligned block starting at lo that still fits.
        // lo < hi <= 2^64, so lo fits in 64 bits.
        unsigned j = lo == 0 ? ell : static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(lo)));
        while ((uint128{1} << j) > iv.hi - lo) --j;
        const uint128 next = lo + (uint128{1} << j);
        pieces.push_back({lo, next});
        lo = next;
    }
    return pieces;
}

double weight_in_interval(const HashFunction& hf, std::span<const WeightedKey> keys, const Interval& iv) {
    double total = 0.0;
    hf.visit([&](const auto& h) {
        for (const WeightedKey& k : keys) {
            if (k.weight < 0.0 || k.weight > 1.0) throw InvalidParams("key weights must lie in [0, 1]");
            if (iv.contains(h(k.key))) total += k.weight;
        }
    });
    return total;
}

}  // namespace hashlab
