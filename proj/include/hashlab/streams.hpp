#pragma once

// Streaming estimators driven by a shared hash function: bottom-k sketches
// (distinct counting and Jaccard similarity) and the power-of-two level sketch.

#include "hashlab/hash_function.hpp"

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hashlab {

// An ell-bit hash read as the fraction (raw + 1) / 2^ell in (0, 1].
struct UnitHash {
    std::uint64_t raw = 0;
    unsigned ell = 64;

    [[nodiscard]] double fraction() const noexcept;
};

// (top ell0 bits, bottom ell1 bits) of an ell-bit hash, ell = ell0 + ell1.
std::pair<std::uint64_t, std::uint64_t> split_hash_bits(std::uint64_t h, unsigned ell0, unsigned ell1);

struct SketchEntry {
    std::uint64_t key;
    std::uint64_t hash;

    friend constexpr bool operator==(const SketchEntry&, const SketchEntry&) = default;
    // Hash order; ties broken by key so the order is total.
    friend constexpr bool operator<(const SketchEntry& a, const SketchEntry& b) noexcept {
        return a.hash != b.hash ? a.hash < b.hash : a.key < b.key;
    }
};

// The k smallest distinct hash values of a stream (MIN_k), kept in a buffer of
// up to 2k entries that is compacted by linear-time selection when full.
// Duplicate detection uses an open-addressing table indexed by the low
// ceil(log2(4k)) hash bits. Single-writer.
class BottomKSketch {
public:
    // `digest` identifies the hash function; sketches only combine when digests match.
    BottomKSketch(std::size_t k, unsigned ell, std::uint64_t digest);

    static BottomKSketch of(const HashFunction& hf, std::span<const std::uint64_t> keys, std::size_t k);

    void offer(std::uint64_t key, std::uint64_t hash);

    // Stored entries after compaction: the min(k, distinct) smallest, sorted.
    [[nodiscard]] std::vector<SketchEntry> entries() const;

    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] bool full() const { return size() >= k_; }
    [[nodiscard]] std::size_t k() const noexcept { return k_; }
    [[nodiscard]] unsigned ell() const noexcept { return ell_; }
    [[nodiscard]] std::uint64_t digest() const noexcept { return digest_; }

    // Stored-set equality.
    friend bool operator==(const BottomKSketch& a, const BottomKSketch& b) {
        return a.k_ == b.k_ && a.ell_ == b.ell_ && a.digest_ == b.digest_ && a.entries() == b.entries();
    }

private:
    void compact();
    void rebuild_index();
    bool contains(std::uint64_t key, std::uint64_t hash) const;
    void index_insert(std::uint32_t pos);

    std::size_t k_;
    unsigned ell_;
    std::uint64_t digest_;
    std::vector<SketchEntry> buffer_;
    bool has_threshold_ = false;
    SketchEntry threshold_{};  // k-th smallest after the last compaction
    unsigned index_bits_;
    std::vector<std::uint32_t> slots_;  // 0: empty, otherwise buffer position + 1
};

// n-hat = k / h_(k). Throws Underfull when fewer than k distinct keys were seen.
double estimate_distinct(const BottomKSketch& sketch);

// Like estimate_distinct, but an underfull sketch reports its exact count.
double estimate_distinct_or_count(const BottomKSketch& sketch);

// Median of independent estimates. Empty input is rejected.
double median(std::vector<double> values);

struct MedianParams {
    std::size_t k0;
    std::size_t r;
};

// k0 = ceil(12 / eps^2), r = ceil(12 ln(1 / delta)).
MedianParams median_params(double eps, double delta);

// Median over one bottom-k0 sketch per hash function. Throws Underfull.
double estimate_distinct_median(std::span<const std::uint64_t> stream, std::span<const HashFunction> hash_functions,
                                std::size_t k0);

// MIN_k(A u B) = MIN_k(MIN_k(A) u MIN_k(B)). Throws SeedMismatch.
BottomKSketch merge_union(const BottomKSketch& a, const BottomKSketch& b);

// |MIN_k(A u B) n MIN_k(A) n MIN_k(B)| / k. Throws SeedMismatch or Underfull.
double jaccard(const BottomKSketch& a, const BottomKSketch& b);

// Level sketch: keeps the keys hashing below 2^(ell-b), raising b whenever
// more than k are kept. Estimate 2^b * |kept|.
class PowTwoSketch {
public:
    PowTwoSketch(std::size_t k, unsigned ell);

    void offer(std::uint64_t key, std::uint64_t hash);
    [[nodiscard]] double estimate() const;

    [[nodiscard]] unsigned level() const noexcept { return b_; }
    [[nodiscard]] std::size_t kept() const noexcept { return kept_.size(); }
    [[nodiscard]] const std::unordered_map<std::uint64_t, std::uint64_t>& kept_keys() const noexcept { return kept_; }

private:
    [[nodiscard]] bool below_level(std::uint64_t hash) const noexcept;

    std::size_t k_;
    unsigned ell_;
    unsigned b_ = 0;
    std::unordered_map<std::uint64_t, std::uint64_t> kept_;  // key -> hash
};

// Wire format: "HLBK1" | k (u32) | ell (u8) | digest (u64) | n (u32) |
// n sorted hashes (u64) | n keys (u64), all little-endian.
std::vector<std::uint8_t> serialize(const BottomKSketch& sketch);
BottomKSketch deserialize_sketch(std::span<const std::uint8_t> bytes);

}  // namespace hashlab
