#include "hashlab/generator.hpp"

#include "hashlab/errors.hpp"

#include <bit>
#include <numeric>
#include <utility>

namespace hashlab {

using F = Mersenne89;

IndependentGenerator::IndependentGenerator(std::vector<uint128> coefficients, std::uint64_t counter)
    : coefficients_(std::move(coefficients)), counter_(counter) {
    if (coefficients_.empty()) {
        throw InvalidParams("generator needs at least one coefficient");
    }
    for (const uint128 c : coefficients_) {
        if (c >= F::kPrime) throw InvalidParams("generator coefficient not reduced mod 2^89-1");
    }
    rebuild_differences();
}

uint128 IndependentGenerator::evaluate(uint128 x) const noexcept {
    x = F::reduce(x);
    uint128 acc = 0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
        acc = F::add(F::mul(acc, x), *it);
    }
    return acc;
}

void IndependentGenerator::rebuild_differences() {
    const std::size_t n = coefficients_.size();
    differences_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        differences_[i] = evaluate(static_cast<uint128>(counter_) + i);
    }
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = n - 1; i >= level; --i) {
            differences_[i] = F::add(differences_[i], F::kPrime - differences_[i - 1]);
        }
    }
    lo_.resize(n);
    hi_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        lo_[i] = static_cast<std::uint64_t>(differences_[i]);
        hi_[i] = static_cast<std::uint64_t>(differences_[i] >> 64);
    }
}

namespace {

// Δ^j += Δ^(j+1) for j < n-1 on partially reduced two-limb residues, which
// stay in [0, 2^89 + 1]: one branchless fold per addition.
#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__)
__attribute__((target_clones("avx2", "default")))
#endif
void step_differences(std::uint64_t* lo, std::uint64_t* hi, std::size_t n) noexcept {
    constexpr std::uint64_t kHighMask = (std::uint64_t{1} << 25) - 1;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const std::uint64_t s_lo = lo[j] + lo[j + 1];
        const std::uint64_t s_hi = hi[j] + hi[j + 1] + (s_lo < lo[j] ? 1 : 0);
        const std::uint64_t f_lo = s_lo + (s_hi >> 25);
        lo[j] = f_lo;
        hi[j] = (s_hi & kHighMask) + (f_lo < s_lo ? 1 : 0);
    }
}

}  // namespace

uint128 IndependentGenerator::next_residue() {
    const uint128 value = F::reduce((static_cast<uint128>(hi_[0]) << 64) | lo_[0]);
    step_differences(lo_.data(), hi_.data(), lo_.size());
    ++counter_;
    return value;
}

std::uint64_t IndependentGenerator::next_word(unsigned bits) {
    const auto value = static_cast<std::uint64_t>(next_residue());
    if (bits >= 64) return value;
    return value & ((std::uint64_t{1} << bits) - 1);
}

std::uint32_t IndependentGenerator::next_below(std::uint64_t range) {
    if (range == 0 || range > (std::uint64_t{1} << 32)) {
        throw InvalidParams("next_below range out of [1, 2^32]");
    }
    const std::uint64_t limit = ((std::uint64_t{1} << 32) / range) * range;
    for (;;) {
        const std::uint64_t w = next_word(32);
        if (w < limit) return static_cast<std::uint32_t>(w % range);
    }
}

WordSlicer::WordSlicer(IndependentGenerator& gen, unsigned bits)
    : gen_(gen), bits_(bits), per_word_(bits == 0 ? 0 : 64 / bits) {
    if (bits < 1 || bits > 64) throw InvalidParams("slice width must be 1..64 bits");
}

std::uint64_t WordSlicer::next() {
    if (left_ == 0) {
        word_ = gen_.next_word(64);
        left_ = per_word_;
    }
    --left_;
    if (bits_ == 64) return word_;
    const std::uint64_t value = word_ & ((std::uint64_t{1} << bits_) - 1);
    word_ >>= bits_;
    return value;
}

IndependentGenerator make_generator(const MasterSeed& seed, std::string_view domain_tag, std::size_t independence) {
    if (domain_tag.empty() || domain_tag.size() > 32) {
        throw InvalidParams("domain tag must be 1..32 bytes");
    }
    if (independence == 0) {
        throw InvalidParams("independence must be at least 1");
    }
    const std::uint64_t domain = detail::fnv1a(domain_tag);
    std::vector<uint128> coefficients(independence);
    for (std::size_t i = 0; i < independence; ++i) {
        const uint128 lo = detail::expand(seed, domain, 2 * i);
        const uint128 hi = detail::expand(seed, domain, 2 * i + 1);
        coefficients[i] = F::reduce((lo | (hi << 64)) & F::kPrime);
    }
    return IndependentGenerator(std::move(coefficients));
}

std::vector<std::uint32_t> random_permutation(IndependentGenerator& gen, std::size_t n) {
    if (n == 0 || n > (std::size_t{1} << 16) || !std::has_single_bit(n)) {
        throw InvalidParams("permutation size must be a power of two in [1, 2^16]");
    }
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = gen.next_below(i + 1);
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

}  // namespace hashlab
