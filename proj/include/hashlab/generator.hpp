#pragma once

#include "hashlab/mersenne.hpp"
#include "hashlab/seed.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hashlab {

// Pseudo-random word source with k-wise independent outputs: the stream is
// P(counter), P(counter+1), ... for a random polynomial P of degree k-1 over
// the field of integers mod 2^89 - 1.
//
// Successive values are produced from a forward-difference table, so each
// word costs k-1 modular additions rather than a full Horner evaluation.
// Single-owner and mutable; not safe to share between threads.
class IndependentGenerator {
public:
    static constexpr std::size_t kDefaultIndependence = 100;

    // coefficients[i] multiplies x^i. All coefficients must be < 2^89 - 1.
    explicit IndependentGenerator(std::vector<uint128> coefficients, std::uint64_t counter = 0);

    // Low `bits` bits (1..64) of the next polynomial value.
    std::uint64_t next_word(unsigned bits = 64);

    // Next full residue in [0, 2^89 - 1).
    uint128 next_residue();

    // Uniform integer in [0, range) by rejection on 32-bit words. range in [1, 2^32].
    std::uint32_t next_below(std::uint64_t range);

    [[nodiscard]] std::span<const uint128> coefficients() const noexcept { return coefficients_; }
    [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

    // Horner evaluation at an arbitrary point.
    [[nodiscard]] uint128 evaluate(uint128 x) const noexcept;

private:
    void rebuild_differences();

    std::vector<uint128> coefficients_;
    std::vector<uint128> differences_;  // scratch for rebuild_differences()
    std::vector<std::uint64_t> lo_;     // Δ^j P(counter_), low limbs
    std::vector<std::uint64_t> hi_;     // high limbs
    std::uint64_t counter_;
};

// Cuts 64-bit generator words into consecutive `bits`-wide values, low bits
// first, floor(64 / bits) values per word.
class WordSlicer {
public:
    WordSlicer(IndependentGenerator& gen, unsigned bits);

    std::uint64_t next();

private:
    IndependentGenerator& gen_;
    unsigned bits_;
    unsigned per_word_;
    unsigned left_ = 0;
    std::uint64_t word_ = 0;
};

// Generator whose coefficients are a pure function of (seed, domain_tag).
// domain_tag must be 1..32 bytes. Distinct tags draw from disjoint counter blocks.
IndependentGenerator make_generator(const MasterSeed& seed, std::string_view domain_tag,
                                    std::size_t independence = IndependentGenerator::kDefaultIndependence);

// Fisher-Yates shuffle of [0, n). n must be a power of two no larger than 2^16.
std::vector<std::uint32_t> random_permutation(IndependentGenerator& gen, std::size_t n);

}  // namespace hashlab
