#include "hashlab/streams.hpp"

#include "hashlab/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

namespace hashlab {

double UnitHash::fraction() const noexcept {
    return std::ldexp(static_cast<double>(raw) + 1.0, -static_cast<int>(ell));
}

std::pair<std::uint64_t, std::uint64_t> split_hash_bits(std::uint64_t h, unsigned ell0, unsigned ell1) {
    if (ell0 + ell1 > 64 || ell0 + ell1 == 0) throw InvalidParams("ell0 + ell1 must be in [1, 64]");
    if (ell1 == 0) return {h, 0};
    if (ell1 == 64) return {0, h};
    return {h >> ell1, h & low_mask(ell1)};
}

// ---------------------------------------------------------------- bottom-k

BottomKSketch::BottomKSketch(std::size_t k, unsigned ell, std::uint64_t digest) : k_(k), ell_(ell), digest_(digest) {
    if (k == 0) throw InvalidParams("sketch capacity k must be positive");
    if (k > (std::size_t{1} << 28)) throw InvalidParams("sketch capacity too large");
    if (ell < 1 || ell > 64) throw InvalidParams("hash width must be 1..64 bits");
    index_bits_ = static_cast<unsigned>(std::bit_width(4 * k - 1));
    buffer_.reserve(2 * k);
    slots_.assign(std::size_t{1} << index_bits_, 0);
}

BottomKSketch BottomKSketch::of(const HashFunction& hf, std::span<const std::uint64_t> keys, std::size_t k) {
    BottomKSketch sketch(k, hf.output_bits(), hf.digest());
    hf.visit([&](const auto& h) {
        for (const std::uint64_t key : keys) sketch.offer(key, h(key));
    });
    return sketch;
}

bool BottomKSketch::contains(std::uint64_t key, std::uint64_t hash) const {
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t slot = split_hash_bits(hash, ell_ - std::min(ell_, index_bits_), std::min(ell_, index_bits_)).second & mask;;
         slot = (slot + 1) & mask) {
        const std::uint32_t pos = slots_[slot];
        if (pos == 0) return false;
        if (buffer_[pos - 1].key == key) return true;
    }
}

void BottomKSketch::index_insert(std::uint32_t pos) {
    const std::size_t mask = slots_.size() - 1;
    const std::uint64_t hash = buffer_[pos].hash;
    std::size_t slot = split_hash_bits(hash, ell_ - std::min(ell_, index_bits_), std::min(ell_, index_bits_)).second & mask;
    while (slots_[slot] != 0) slot = (slot + 1) & mask;
    slots_[slot] = pos + 1;
}

void BottomKSketch::rebuild_index() {
    std::fill(slots_.begin(), slots_.end(), 0);
    for (std::uint32_t i = 0; i < buffer_.size(); ++i) index_insert(i);
}

void BottomKSketch::offer(std::uint64_t key, std::uint64_t hash) {
    const SketchEntry e{key, hash};
    // Anything at or beyond the k-th smallest can never re-enter the sample;
    // the threshold entry itself is stored, so equality is a duplicate.
    if (has_threshold_ && !(e < threshold_)) return;
    if (contains(key, hash)) return;
    buffer_.push_back(e);
    index_insert(static_cast<std::uint32_t>(buffer_.size() - 1));
    if (buffer_.size() >= 2 * k_) compact();
}

void BottomKSketch::compact() {
    if (buffer_.size() <= k_) return;
    std::nth_element(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(k_ - 1), buffer_.end());
    threshold_ = buffer_[k_ - 1];
    has_threshold_ = true;
    buffer_.erase(std::remove_if(buffer_.begin(), buffer_.end(), [&](const SketchEntry& x) { return threshold_ < x; }),
                  buffer_.end());
    rebuild_index();
}

std::vector<SketchEntry> BottomKSketch::entries() const {
    std::vector<SketchEntry> out = buffer_;
    std::sort(out.begin(), out.end());
    if (out.size() > k_) out.resize(k_);
    return out;
}

std::size_t BottomKSketch::size() const { return std::min(buffer_.size(), k_); }

double estimate_distinct(const BottomKSketch& sketch) {
    const auto entries = sketch.entries();
    if (entries.size() < sketch.k()) throw Underfull(entries.size(), sketch.k());
    const UnitHash kth{entries.back().hash, sketch.ell()};
    return static_cast<double>(sketch.k()) / kth.fraction();
}

double estimate_distinct_or_count(const BottomKSketch& sketch) {
    try {
        return estimate_distinct(sketch);
    } catch (const Underfull& u) {
        return static_cast<double>(u.exact_count());
    }
}

double median(std::vector<double> values) {
    if (values.empty()) throw InvalidParams("median of no values");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    if (values.size() % 2 == 1) return values[mid];
    const double upper = values[mid];
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

MedianParams median_params(double eps, double delta) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidParams("eps must be in (0, 1]");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidParams("delta must be in (0, 1)");
    const auto k0 = static_cast<std::size_t>(std::ceil(12.0 / (eps * eps)));
    const auto r = static_cast<std::size_t>(std::ceil(12.0 * std::log(1.0 / delta)));
    return {k0, std::max<std::size_t>(r, 1)};
}

double estimate_distinct_median(std::span<const std::uint64_t> stream, std::span<const HashFunction> hash_functions,
                                std::size_t k0) {
    if (hash_functions.empty()) throw InvalidParams("need at least one hash function");
    std::vector<double> estimates;
    estimates.reserve(hash_functions.size());
    for (const HashFunction& hf : hash_functions) {
        estimates.push_back(estimate_distinct(BottomKSketch::of(hf, stream, k0)));
    }
    return median(std::move(estimates));
}

namespace {

void check_compatible(const BottomKSketch& a, const BottomKSketch& b) {
    if (a.digest() != b.digest() || a.ell() != b.ell()) throw SeedMismatch("sketches use different hash functions");
    if (a.k() != b.k()) throw SeedMismatch("sketches use different capacities");
}

}  // namespace

BottomKSketch merge_union(const BottomKSketch& a, const BottomKSketch& b) {
    check_compatible(a, b);
    BottomKSketch out(a.k(), a.ell(), a.digest());
    for (const auto& e : a.entries()) out.offer(e.key, e.hash);
    for (const auto& e : b.entries()) out.offer(e.key, e.hash);
    return out;
}

double jaccard(const BottomKSketch& a, const BottomKSketch& b) {
    check_compatible(a, b);
    if (!a.full()) throw Underfull(a.size(), a.k());
    if (!b.full()) throw Underfull(b.size(), b.k());
    std::unordered_set<std::uint64_t> in_a;
    std::unordered_set<std::uint64_t> in_b;
    for (const auto& e : a.entries()) in_a.insert(e.key);
    for (const auto& e : b.entries()) in_b.insert(e.key);
    std::size_t both = 0;
    for (const auto& e : merge_union(a, b).entries()) {
        if (in_a.contains(e.key) && in_b.contains(e.key)) ++both;
    }
    return static_cast<double>(both) / static_cast<double>(a.k());
}

// ---------------------------------------------------------------- power of two

PowTwoSketch::PowTwoSketch(std::size_t k, unsigned ell) : k_(k), ell_(ell) {
    if (k == 0) throw InvalidParams("sketch capacity k must be positive");
    if (ell < 1 || ell > 64) throw InvalidParams("hash width must be 1..64 bits");
}

bool PowTwoSketch::below_level(std::uint64_t hash) const noexcept {
    const unsigned width = ell_ - b_;
    return width >= 64 || (hash >> width) == 0;
}

void PowTwoSketch::offer(std::uint64_t key, std::uint64_t hash) {
    if (!below_level(hash)) return;
    kept_.emplace(key, hash);
    while (kept_.size() > k_ && b_ < ell_) {
        ++b_;
        std::erase_if(kept_, [&](const auto& kv) { return !below_level(kv.second); });
    }
}

double PowTwoSketch::estimate() const {
    return std::ldexp(static_cast<double>(kept_.size()), static_cast<int>(b_));
}

// ---------------------------------------------------------------- wire format

namespace {

void put(std::vector<std::uint8_t>& out, std::uint64_t v, unsigned bytes) {
    for (unsigned i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get(std::span<const std::uint8_t> in, std::size_t& pos, unsigned bytes) {
    if (pos + bytes > in.size()) throw FormatError("truncated sketch");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in[pos + i]) << (8 * i);
    pos += bytes;
    return v;
}

constexpr std::uint8_t kSketchMagic[5] = {'H', 'L', 'B', 'K', '1'};

}  // namespace

std::vector<std::uint8_t> serialize(const BottomKSketch& sketch) {
    const auto entries = sketch.entries();
    std::vector<std::uint8_t> out(std::begin(kSketchMagic), std::end(kSketchMagic));
    put(out, sketch.k(), 4);
    put(out, sketch.ell(), 1);
    put(out, sketch.digest(), 8);
    put(out, entries.size(), 4);
    for (const auto& e : entries) put(out, e.hash, 8);
    for (const auto& e : entries) put(out, e.key, 8);
    return out;
}

BottomKSketch deserialize_sketch(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 5 || !std::equal(std::begin(kSketchMagic), std::end(kSketchMagic), bytes.begin())) {
        throw FormatError("not a sketch (bad magic)");
    }
    std::size_t pos = 5;
    const auto k = static_cast<std::size_t>(get(bytes, pos, 4));
    const auto ell = static_cast<unsigned>(get(bytes, pos, 1));
    const std::uint64_t digest = get(bytes, pos, 8);
    const auto n = static_cast<std::size_t>(get(bytes, pos, 4));
    if (n > k) throw FormatError("sketch holds more than k entries");
    if (bytes.size() != pos + 16 * n) throw FormatError("sketch length mismatch");
    BottomKSketch sketch(k, ell, digest);
    std::vector<std::uint64_t> hashes(n);
    for (auto& h : hashes) h = get(bytes, pos, 8);
    if (!std::is_sorted(hashes.begin(), hashes.end())) throw FormatError("sketch hashes are not sorted");
    if (ell < 64 && n > 0 && (hashes.back() >> ell) != 0) throw FormatError("sketch hash wider than ell bits");
    // Membership inside the sketch trusts that equal keys have equal hashes,
    // which a foreign file need not honour, so check distinctness directly.
    std::unordered_set<std::uint64_t> keys;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t key = get(bytes, pos, 8);
        if (!keys.insert(key).second) throw FormatError("sketch contains duplicate keys");
        sketch.offer(key, hashes[i]);
    }
    return sketch;
}

}  // namespace hashlab
