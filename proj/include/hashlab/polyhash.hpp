#pragma once

#include "hashlab/errors.hpp"
#include "hashlab/generator.hpp"
#include "hashlab/mersenne.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hashlab {

// k-independent PolyHash: a random degree-(k-1) polynomial over a Mersenne
// prime field, evaluated with Horner's rule and truncated to the low
// out_bits bits.
template <typename Field>
class PolyHash {
public:
    using value_type = typename Field::value_type;

    // coefficients[i] multiplies x^i.
    PolyHash(std::vector<value_type> coefficients, unsigned out_bits)
        : coeffs_(std::move(coefficients)), out_bits_(out_bits) {
        if (coeffs_.empty()) throw InvalidParams("PolyHash needs k >= 1 coefficients");
        if (out_bits_ < 1 || out_bits_ > 64) throw InvalidParams("PolyHash output must be 1..64 bits");
        for (const value_type c : coeffs_) {
            if (c >= Field::kPrime) throw InvalidParams("PolyHash coefficient not reduced");
        }
    }

    static PolyHash random(std::size_t k, unsigned out_bits, IndependentGenerator& gen) {
        std::vector<value_type> coeffs(k);
        for (auto& c : coeffs) {
            const uint128 lo = gen.next_word(64);
            const uint128 hi = gen.next_word(64);
            c = static_cast<value_type>(Field::reduce(lo | (hi << 64)));
        }
        return {std::move(coeffs), out_bits};
    }

    // Full residue, x < p.
    [[nodiscard]] value_type residue(value_type x) const noexcept {
        value_type acc = coeffs_.back();
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
            acc = Field::add(Field::mul(acc, x), coeffs_[i]);
        }
        return acc;
    }

    template <typename Probe>
    std::uint64_t eval(std::uint64_t x, Probe&) const {
        return (*this)(x);
    }

    std::uint64_t operator()(std::uint64_t x) const noexcept {
        const auto r = static_cast<std::uint64_t>(residue(static_cast<value_type>(x)));
        return out_bits_ >= 64 ? r : r & ((std::uint64_t{1} << out_bits_) - 1);
    }

    [[nodiscard]] std::span<const value_type> coefficients() const noexcept { return coeffs_; }
    [[nodiscard]] std::size_t k() const noexcept { return coeffs_.size(); }
    [[nodiscard]] unsigned out_bits() const noexcept { return out_bits_; }

private:
    std::vector<value_type> coeffs_;
    unsigned out_bits_;
};

using PolyHash61 = PolyHash<Mersenne61>;
using PolyHash89 = PolyHash<Mersenne89>;

}  // namespace hashlab
