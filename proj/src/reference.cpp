#include "hashlab/reference.hpp"

#include "hashlab/errors.hpp"
#include "hashlab/mersenne.hpp"

#include <bit>

namespace hashlab {

FullyRandomHash::FullyRandomHash(const MasterSeed& seed, unsigned ell)
    : rng_(detail::expand(seed, detail::fnv1a("reference.hash"), 0)),
      ell_(ell),
      digest_(detail::expand(seed, detail::fnv1a("reference.digest"), 0)) {
    if (ell < 1 || ell > 64) throw InvalidParams("hash width must be 1..64 bits");
}

std::uint64_t FullyRandomHash::operator()(std::uint64_t key) {
    auto [it, fresh] = memo_.try_emplace(key, 0);
    if (fresh) it->second = rng_() >> (64 - ell_);
    return it->second;
}

std::vector<std::uint64_t> simulate_reference_focal(std::uint64_t n, std::uint64_t m, std::size_t trials,
                                                    const MasterSeed& seed) {
    if (m == 0) throw InvalidParams("bin count must be positive");
    std::vector<std::uint64_t> counts(trials, 0);
    const std::uint64_t domain = detail::fnv1a("reference.bins");
    for (std::size_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng(detail::expand(seed, domain, t));
        std::uint64_t focal = 0;
        if (std::has_single_bit(m)) {
            // One ball per log2(m)-bit slice; bin 0 is an all-zero slice.
            const unsigned bits = static_cast<unsigned>(std::countr_zero(m));
            if (bits == 0) {
                focal = n;
            } else {
                const unsigned per_word = 64 / bits;
                const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
                std::uint64_t left = n;
                while (left > 0) {
                    std::uint64_t word = rng();
                    for (unsigned s = 0; s < per_word && left > 0; ++s, --left, word >>= bits) {
                        focal += (word & mask) == 0;
                    }
                }
            }
        } else {
            for (std::uint64_t i = 0; i < n; ++i) focal += ((static_cast<uint128>(rng()) * m) >> 64) == 0;
        }
        counts[t] = focal;
    }
    return counts;
}

}  // namespace hashlab
