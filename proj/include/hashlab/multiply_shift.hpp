#pragma once

#include "hashlab/errors.hpp"
#include "hashlab/generator.hpp"
#include "hashlab/mersenne.hpp"

#include <cstdint>
#include <type_traits>

namespace hashlab {

// Dietzfelbinger's multiply-shift: ((a*x + b) mod 2^(2w)) >> w for w-bit keys,
// with a and b 2w bits wide and a odd.
template <unsigned KeyBits>
class MultiplyShift {
    static_assert(KeyBits == 32 || KeyBits == 64);

public:
    using word_type = std::conditional_t<KeyBits == 32, std::uint64_t, uint128>;

    MultiplyShift(word_type a, word_type b) : a_(a), b_(b) {
        if ((a_ & 1) == 0) throw InvalidParams("multiply-shift multiplier must be odd");
    }

    static MultiplyShift random(IndependentGenerator& gen) {
        word_type a = draw(gen);
        word_type b = draw(gen);
        return {a | 1, b};
    }

    template <typename Probe>
    std::uint64_t eval(std::uint64_t x, Probe&) const {
        return (*this)(x);
    }

    std::uint64_t operator()(std::uint64_t x) const noexcept {
        return static_cast<std::uint64_t>((a_ * static_cast<word_type>(x) + b_) >> KeyBits);
    }

    [[nodiscard]] word_type a() const noexcept { return a_; }
    [[nodiscard]] word_type b() const noexcept { return b_; }

private:
    static word_type draw(IndependentGenerator& gen) {
        if constexpr (KeyBits == 32) {
            return gen.next_word(64);
        } else {
            const uint128 lo = gen.next_word(64);
            const uint128 hi = gen.next_word(64);
            return lo | (hi << 64);
        }
    }

    word_type a_;
    word_type b_;
};

using MultiplyShift32 = MultiplyShift<32>;
using MultiplyShift64 = MultiplyShift<64>;

}  // namespace hashlab
