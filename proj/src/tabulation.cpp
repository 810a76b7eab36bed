#include "hashlab/tabulation.hpp"

#include "hashlab/errors.hpp"

#include <algorithm>
#include <utility>

namespace hashlab {

namespace {

void check_key_geometry(const TabGeometry& g) {
    if (g.char_bits < 1 || g.char_bits > 16) throw InvalidParams("char_bits must be in [1, 16]");
    if (g.c < 1 || g.d < 1) throw InvalidParams("c and d must be at least 1");
    if (g.key_bits() > 64) throw InvalidParams("keys wider than 64 bits");
}

void check_permutation(const std::vector<std::uint32_t>& perm, std::size_t n) {
    if (perm.size() != n) throw InvalidParams("permutation has wrong size");
    std::vector<bool> seen(n, false);
    for (const std::uint32_t v : perm) {
        if (v >= n || seen[v]) throw InvalidParams("permutation is not a bijection");
        seen[v] = true;
    }
}

void check_entries(std::span<const std::uint64_t> values, std::size_t expected, unsigned bits, const char* what) {
    if (values.size() != expected) throw InvalidParams(std::string(what) + ": wrong table size");
    const std::uint64_t mask = low_mask(bits);
    for (const std::uint64_t v : values) {
        if ((v & ~mask) != 0) throw InvalidParams(std::string(what) + ": entry wider than output");
    }
}

std::vector<std::uint64_t> draw_values(IndependentGenerator& gen, std::size_t count, unsigned bits) {
    WordSlicer slicer(gen, bits);
    std::vector<std::uint64_t> out(count);
    for (auto& v : out) v = slicer.next();
    return out;
}

}  // namespace

void TabGeometry::validate() const {
    check_key_geometry(*this);
    if (out_bits() > 64) throw InvalidParams("hash values wider than 64 bits");
}

// ---------------------------------------------------------------- simple

SimpleTabulation::SimpleTabulation(TabGeometry geometry, std::vector<std::uint64_t> tables)
    : geometry_(geometry), stride_(geometry.alphabet()), tables_(std::move(tables)) {
    geometry_.validate();
    check_entries(tables_, geometry_.c * stride_, geometry_.out_bits(), "simple tabulation");
}

SimpleTabulation SimpleTabulation::random(TabGeometry geometry, IndependentGenerator& gen) {
    geometry.validate();
    return {geometry, draw_values(gen, geometry.c * geometry.alphabet(), geometry.out_bits())};
}

// ---------------------------------------------------------------- permutation

TabulationPermutation::TabulationPermutation(SimpleTabulation simple, std::vector<std::vector<std::uint32_t>> permutations)
    : simple_(std::move(simple)), perms_(std::move(permutations)), stride_(simple_.geometry().alphabet()) {
    const TabGeometry& g = simple_.geometry();
    if (perms_.size() != g.d) throw InvalidParams("need one permutation per output character");
    folded_.assign(g.d * stride_, 0);
    for (unsigned i = 1; i <= g.d; ++i) {
        check_permutation(perms_[i - 1], stride_);
        const unsigned shift = (g.d - i) * g.char_bits;
        const std::size_t block = g.d - i;  // least significant character first
        for (std::size_t z = 0; z < stride_; ++z) {
            folded_[block * stride_ + z] = static_cast<std::uint64_t>(perms_[i - 1][z]) << shift;
        }
    }
}

TabulationPermutation TabulationPermutation::random(TabGeometry geometry, IndependentGenerator& table_gen,
                                                    IndependentGenerator& perm_gen) {
    SimpleTabulation simple = SimpleTabulation::random(geometry, table_gen);
    std::vector<std::vector<std::uint32_t>> perms;
    perms.reserve(geometry.d);
    for (unsigned i = 0; i < geometry.d; ++i) perms.push_back(random_permutation(perm_gen, geometry.alphabet()));
    return {std::move(simple), std::move(perms)};
}

std::uint64_t TabulationPermutation::permute_direct(std::uint64_t z) const {
    const TabGeometry& g = simple_.geometry();
    std::uint64_t out = 0;
    for (unsigned i = 1; i <= g.d; ++i) {
        const unsigned shift = (g.d - i) * g.char_bits;
        const std::uint64_t zi = (z >> shift) & g.char_mask();
        out |= static_cast<std::uint64_t>(perms_[i - 1][zi]) << shift;
    }
    return out;
}

std::span<const std::uint64_t> TabulationPermutation::folded_table(unsigned i) const {
    const std::size_t block = simple_.geometry().d - i;
    return {folded_.data() + block * stride_, stride_};
}

// ---------------------------------------------------------------- 1-permutation

Tabulation1Permutation::Tabulation1Permutation(SimpleTabulation simple, std::vector<std::uint32_t> permutation)
    : simple_(std::move(simple)), perm_(std::move(permutation)) {
    const TabGeometry& g = simple_.geometry();
    check_permutation(perm_, g.alphabet());
    top_shift_ = (g.d - 1) * g.char_bits;
    fold_.resize(g.alphabet());
    for (std::size_t z = 0; z < fold_.size(); ++z) {
        fold_[z] = (static_cast<std::uint64_t>(z) ^ perm_[z]) << top_shift_;
    }
}

Tabulation1Permutation Tabulation1Permutation::random(TabGeometry geometry, IndependentGenerator& table_gen,
                                                      IndependentGenerator& perm_gen) {
    SimpleTabulation simple = SimpleTabulation::random(geometry, table_gen);
    return {std::move(simple), random_permutation(perm_gen, geometry.alphabet())};
}

// ---------------------------------------------------------------- twisted

TwistedTabulation::TwistedTabulation(TabGeometry geometry, std::vector<Entry> twisted, std::vector<std::uint64_t> last)
    : geometry_(geometry), stride_(geometry.alphabet()), twisted_(std::move(twisted)), last_(std::move(last)) {
    geometry_.validate();
    if (twisted_.size() != (geometry_.c - 1) * stride_) throw InvalidParams("twisted tabulation: wrong table size");
    const std::uint64_t out_mask = low_mask(geometry_.out_bits());
    for (const Entry& e : twisted_) {
        if ((e.value & ~out_mask) != 0 || (e.twist & ~geometry_.char_mask()) != 0) {
            throw InvalidParams("twisted tabulation: entry too wide");
        }
    }
    check_entries(last_, stride_, geometry_.out_bits(), "twisted tabulation");
}

TwistedTabulation TwistedTabulation::random(TabGeometry geometry, IndependentGenerator& gen) {
    geometry.validate();
    std::vector<Entry> twisted((geometry.c - 1) * geometry.alphabet());
    WordSlicer values(gen, geometry.out_bits());
    WordSlicer twists(gen, geometry.char_bits);
    for (Entry& e : twisted) {
        e.value = values.next();
        e.twist = twists.next();
    }
    auto last = draw_values(gen, geometry.alphabet(), geometry.out_bits());
    return {geometry, std::move(twisted), std::move(last)};
}

std::uint64_t TwistedTabulation::twist_key(std::uint64_t x) const {
    const unsigned cb = geometry_.char_bits;
    const unsigned last_shift = (geometry_.c - 1) * cb;
    std::uint64_t t = 0;
    std::uint64_t rest = x;
    for (unsigned i = 0; i + 1 < geometry_.c; ++i, rest >>= cb) {
        t ^= twisted_[i * stride_ + (rest & geometry_.char_mask())].twist;
    }
    return x ^ (t << last_shift);
}

// ---------------------------------------------------------------- mixed

MixedTabulation::MixedTabulation(TabGeometry geometry, std::vector<Entry> primary, std::vector<std::uint64_t> derived_tables)
    : geometry_(geometry), stride_(geometry.alphabet()), primary_(std::move(primary)), derived_(std::move(derived_tables)) {
    geometry_.validate();
    if (geometry_.c != geometry_.d) throw InvalidParams("mixed tabulation requires c == d");
    if (primary_.size() != geometry_.c * stride_) throw InvalidParams("mixed tabulation: wrong table size");
    const std::uint64_t out_mask = low_mask(geometry_.out_bits());
    const std::uint64_t key_mask = low_mask(geometry_.key_bits());
    for (const Entry& e : primary_) {
        if ((e.value & ~out_mask) != 0 || (e.derived & ~key_mask) != 0) {
            throw InvalidParams("mixed tabulation: entry too wide");
        }
    }
    check_entries(derived_, geometry_.c * stride_, geometry_.out_bits(), "mixed tabulation");
}

MixedTabulation MixedTabulation::random(TabGeometry geometry, IndependentGenerator& gen) {
    geometry.validate();
    std::vector<Entry> primary(geometry.c * geometry.alphabet());
    WordSlicer values(gen, geometry.out_bits());
    WordSlicer derived_chars(gen, geometry.key_bits());
    for (Entry& e : primary) {
        e.value = values.next();
        e.derived = derived_chars.next();
    }
    auto derived = draw_values(gen, geometry.c * geometry.alphabet(), geometry.out_bits());
    return {geometry, std::move(primary), std::move(derived)};
}

// ---------------------------------------------------------------- double

DoubleTabulation::DoubleTabulation(TabGeometry geometry, std::vector<std::uint16_t> first, std::vector<std::uint64_t> second)
    : geometry_(geometry), stride_(geometry.alphabet()), first_(std::move(first)), second_(std::move(second)) {
    check_key_geometry(geometry_);
    if (geometry_.d > 64) throw InvalidParams("double tabulation supports at most 64 derived characters");
    if (first_.size() != geometry_.c * stride_ * geometry_.d) throw InvalidParams("double tabulation: wrong first table size");
    for (const std::uint16_t ch : first_) {
        if (ch > geometry_.char_mask()) throw InvalidParams("double tabulation: derived character too wide");
    }
    check_entries(second_, geometry_.d * stride_, geometry_.key_bits(), "double tabulation");
}

DoubleTabulation DoubleTabulation::random(TabGeometry geometry, IndependentGenerator& first_gen,
                                          IndependentGenerator& second_gen) {
    check_key_geometry(geometry);
    std::vector<std::uint16_t> first(geometry.c * geometry.alphabet() * geometry.d);
    WordSlicer chars(first_gen, geometry.char_bits);
    for (auto& ch : first) ch = static_cast<std::uint16_t>(chars.next());
    auto second = draw_values(second_gen, geometry.d * geometry.alphabet(), geometry.key_bits());
    return {geometry, std::move(first), std::move(second)};
}

}  // namespace hashlab
