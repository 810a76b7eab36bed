#pragma once

// Experiment harness: structured key sets, many-trial quality runs with
// bin counts, CDFs, timing and variance statistics, and CSV output.

#include "hashlab/descriptor.hpp"
#include "hashlab/hash_function.hpp"
#include "hashlab/seed.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hashlab {

enum class WorkloadKind { RandomKeys, ArithmeticProgression, DiscreteCube, CollapseSet };

// Keys are encoded in key_bits-wide words of 8-bit characters, character 0 lowest.
struct Workload {
    WorkloadKind kind = WorkloadKind::RandomKeys;
    unsigned key_bits = 32;
    std::uint64_t size = 0;     // RandomKeys and ArithmeticProgression
    std::uint64_t step = 0;     // ArithmeticProgression; 0 draws a random odd step from the seed
    unsigned cube_dims = 7;     // DiscreteCube: two-valued characters 0..cube_dims-1
    unsigned tail_bits = 6;     // DiscreteCube: character cube_dims ranges over [2^tail_bits]
    std::uint64_t collapse_k = 2;  // CollapseSet: characters 0..c-2 range over [k]
    unsigned collapse_c = 4;       // CollapseSet: character c-1 ranges over all 256 values

    static Workload random_keys(std::uint64_t n, unsigned key_bits);
    static Workload progression(std::uint64_t n, unsigned key_bits, std::uint64_t step = 0);
    static Workload cube(unsigned key_bits = 64);
    static Workload collapse(std::uint64_t k, unsigned c, unsigned key_bits);

    // Number of keys gen_workload produces.
    [[nodiscard]] std::uint64_t key_count() const;
    [[nodiscard]] std::string name() const;
};

// Reproducible from (workload, seed). RandomKeys are distinct. Throws InvalidParams.
std::vector<std::uint64_t> gen_workload(const Workload& w, const MasterSeed& seed);

// Step actually used by a progression (the drawn one when w.step == 0).
std::uint64_t progression_step(const Workload& w, const MasterSeed& seed);

struct TrialResult {
    std::uint64_t trial = 0;
    std::uint64_t digest = 0;
    std::vector<std::uint64_t> bin_counts;

    [[nodiscard]] std::uint64_t focal_count() const { return bin_counts.front(); }
};

// Runs fn(i) for i in [0, n) on `jobs` worker threads. Work is handed out by
// index, so results written to slot i do not depend on scheduling.
void parallel_trials(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

// Seed of the hash function used in trial t.
MasterSeed trial_seed(const MasterSeed& master, std::uint64_t t);

// One trial per derived seed: hashes the workload (generated once from the
// master seed) into m bins by shift-multiply and records every bin count.
std::vector<TrialResult> run_quality(const SchemeDescriptor& scheme, const Workload& w, std::uint64_t m,
                                     std::size_t trials, const MasterSeed& master, unsigned jobs = 1);

// For SimpleTab on the cube workload into 2 bins: whether bin 0 receives exactly
// half the keys, computed from the tables alone. A split is forced as soon as one
// two-valued character has table entries that differ in the top output bit.
bool cube_split_from_tables(const SimpleTabulation& tab, const Workload& cube);

// Fraction of trials whose focal count equals `target`.
double fraction_equal(std::span<const std::uint64_t> focal_counts, std::uint64_t target);
std::vector<std::uint64_t> focal_counts(std::span<const TrialResult> results, std::size_t focal_bin = 0);

// Right-continuous empirical CDF: sorted distinct counts with cumulative fractions.
std::vector<std::pair<std::uint64_t, double>> cdf(std::span<const std::uint64_t> counts);
std::vector<std::pair<std::uint64_t, double>> cdf(std::span<const TrialResult> results, std::size_t focal_bin = 0);

struct TimingRow {
    std::string scheme;
    unsigned key_bits = 0;
    std::uint64_t n = 0;
    double ms = 0.0;
    double keys_per_sec = 0.0;
    std::uint64_t checksum = 0;
};

// Hashes the same pre-generated key array with each scheme. Repetitions are
// interleaved across schemes; each row reports the median of `reps`.
std::vector<TimingRow> run_timing(std::span<const SchemeDescriptor> schemes, unsigned key_bits, std::uint64_t n,
                                  const MasterSeed& seed, unsigned reps = 5);

struct VarianceResult {
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance of the focal count
    double expected = 0.0;  // n (1/m) (1 - 1/m)
    double z = 0.0;
};

// z-score of the focal-bin variance against its 2-independent prediction.
// The standard error uses the binomial fourth central moment. trials >= 100.
VarianceResult variance_from_counts(std::span<const std::uint64_t> counts, std::uint64_t n, std::uint64_t m);
VarianceResult variance_check(const SchemeDescriptor& scheme, std::uint64_t n_keys, std::uint64_t m,
                              std::size_t trials, const MasterSeed& master, unsigned jobs = 1);

// ---------------------------------------------------------------- CSV output

// Comment lines starting with '#' that precede every CSV: tool version,
// configuration and master seed.
struct RunHeader {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    MasterSeed seed;
};

void write_header(std::ostream& out, const RunHeader& header);
void write_quality_csv(std::ostream& out, const RunHeader& header, std::span<const TrialResult> results,
                       const std::string& scheme, const std::string& workload, std::size_t focal_bin = 0);
void write_cdf_csv(std::ostream& out, const RunHeader& header, std::span<const std::pair<std::uint64_t, double>> cdf);
void write_timing_csv(std::ostream& out, const RunHeader& header, std::span<const TimingRow> rows);

}  // namespace hashlab
