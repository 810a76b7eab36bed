#pragma once

// Fully random hashing, simulated. This is the baseline every statistical
// comparison in the lab is made against.

#include "hashlab/seed.hpp"

#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

namespace hashlab {

// Assigns each distinct key an independent uniform ell-bit value on first
// sight, memoized. Deterministic in (seed, order of first appearance).
class FullyRandomHash {
public:
    FullyRandomHash(const MasterSeed& seed, unsigned ell = 64);

    std::uint64_t operator()(std::uint64_t key);

    [[nodiscard]] unsigned output_bits() const noexcept { return ell_; }
    // Stands in for a scheme digest when sketches are built from this hash.
    [[nodiscard]] std::uint64_t digest() const noexcept { return digest_; }

private:
    std::mt19937_64 rng_;
    unsigned ell_;
    std::uint64_t digest_;
    std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

// Focal-bin (bin 0) counts of `trials` independent experiments, each
// throwing n balls uniformly into m bins.
std::vector<std::uint64_t> simulate_reference_focal(std::uint64_t n, std::uint64_t m, std::size_t trials,
                                                    const MasterSeed& seed);

}  // namespace hashlab
