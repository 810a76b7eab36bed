#include "hashlab/lab.hpp"

#include "hashlab/errors.hpp"
#include "hashlab/ranging.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>
#include <unordered_set>

namespace hashlab {

namespace {

constexpr unsigned kCharBits = 8;

std::mt19937_64 workload_rng(const MasterSeed& seed, std::string_view tag) {
    return std::mt19937_64(detail::expand(seed, detail::fnv1a(tag), 0));
}

void check_key_bits(unsigned key_bits) {
    if (key_bits != 32 && key_bits != 64) throw InvalidParams("key width must be 32 or 64 bits");
}

std::string format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------- workloads

Workload Workload::random_keys(std::uint64_t n, unsigned key_bits) {
    Workload w;
    w.kind = WorkloadKind::RandomKeys;
    w.size = n;
    w.key_bits = key_bits;
    return w;
}

Workload Workload::progression(std::uint64_t n, unsigned key_bits, std::uint64_t step) {
    Workload w;
    w.kind = WorkloadKind::ArithmeticProgression;
    w.size = n;
    w.key_bits = key_bits;
    w.step = step;
    return w;
}

Workload Workload::cube(unsigned key_bits) {
    Workload w;
    w.kind = WorkloadKind::DiscreteCube;
    w.key_bits = key_bits;
    return w;
}

Workload Workload::collapse(std::uint64_t k, unsigned c, unsigned key_bits) {
    Workload w;
    w.kind = WorkloadKind::CollapseSet;
    w.collapse_k = k;
    w.collapse_c = c;
    w.key_bits = key_bits;
    return w;
}

std::uint64_t Workload::key_count() const {
    switch (kind) {
        case WorkloadKind::RandomKeys:
        case WorkloadKind::ArithmeticProgression:
            return size;
        case WorkloadKind::DiscreteCube:
            return std::uint64_t{1} << (cube_dims + tail_bits);
        case WorkloadKind::CollapseSet: {
            std::uint64_t n = 256;
            for (unsigned i = 0; i + 1 < collapse_c; ++i) n *= collapse_k;
            return n;
        }
    }
    return 0;
}

std::string Workload::name() const {
    switch (kind) {
        case WorkloadKind::RandomKeys: return "random";
        case WorkloadKind::ArithmeticProgression: return "progression";
        case WorkloadKind::DiscreteCube: return "cube";
        case WorkloadKind::CollapseSet: return "collapse";
    }
    return "unknown";
}

std::uint64_t progression_step(const Workload& w, const MasterSeed& seed) {
    if (w.step != 0) return w.step;
    auto rng = workload_rng(seed, "workload.step");
    return (rng() | 1) & low_mask(w.key_bits);
}

std::vector<std::uint64_t> gen_workload(const Workload& w, const MasterSeed& seed) {
    check_key_bits(w.key_bits);
    const std::uint64_t key_mask = low_mask(w.key_bits);
    const unsigned chars = w.key_bits / kCharBits;
    std::vector<std::uint64_t> keys;

    switch (w.kind) {
        case WorkloadKind::RandomKeys: {
            if (w.size > (std::uint64_t{1} << (w.key_bits - 1))) throw InvalidParams("too many distinct keys for key width");
            auto rng = workload_rng(seed, "workload.random");
            std::unordered_set<std::uint64_t> seen;
            seen.reserve(w.size);
            keys.reserve(w.size);
            while (keys.size() < w.size) {
                const std::uint64_t x = rng() & key_mask;
                if (seen.insert(x).second) keys.push_back(x);
            }
            break;
        }
        case WorkloadKind::ArithmeticProgression: {
            if (w.key_bits < 64 && w.size > (std::uint64_t{1} << w.key_bits)) throw InvalidParams("progression longer than key space");
            const std::uint64_t step = progression_step(w, seed);
            keys.resize(w.size);
            for (std::uint64_t i = 0; i < w.size; ++i) keys[i] = (step * i) & key_mask;
            break;
        }
        case WorkloadKind::DiscreteCube: {
            if (w.cube_dims + 1 > chars) throw InvalidParams("cube needs one character per dimension plus a tail character");
            if (w.tail_bits > kCharBits) throw InvalidParams("cube tail must fit in one character");
            keys.resize(w.key_count());
            const std::uint64_t dim_mask = (std::uint64_t{1} << w.cube_dims) - 1;
            for (std::uint64_t j = 0; j < keys.size(); ++j) {
                std::uint64_t x = (j >> w.cube_dims) << (kCharBits * w.cube_dims);
                for (unsigned i = 0; i < w.cube_dims; ++i) x |= ((j & dim_mask) >> i & 1) << (kCharBits * i);
                keys[j] = x;
            }
            break;
        }
        case WorkloadKind::CollapseSet: {
            if (w.collapse_c < 1 || w.collapse_c > chars) throw InvalidParams("collapse set needs 1 <= c <= key characters");
            if (w.collapse_k < 1 || w.collapse_k > 256) throw InvalidParams("collapse set needs 1 <= k <= 256");
            keys.resize(w.key_count());
            for (std::uint64_t j = 0; j < keys.size(); ++j) {
                std::uint64_t rest = j;
                std::uint64_t x = 0;
                for (unsigned i = 0; i + 1 < w.collapse_c; ++i) {
                    x |= (rest % w.collapse_k) << (kCharBits * i);
                    rest /= w.collapse_k;
                }
                keys[j] = x | (rest << (kCharBits * (w.collapse_c - 1)));
            }
            break;
        }
    }
    return keys;
}

// ---------------------------------------------------------------- trials

void parallel_trials(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    pool.reserve(count);
    for (unsigned j = 0; j < count; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

MasterSeed trial_seed(const MasterSeed& master, std::uint64_t t) { return derive_seed(master, "trial", t); }

std::vector<TrialResult> run_quality(const SchemeDescriptor& scheme, const Workload& w, std::uint64_t m,
                                     std::size_t trials, const MasterSeed& master, unsigned jobs) {
    if (trials == 0) throw InvalidParams("need at least one trial");
    const std::vector<std::uint64_t> keys = gen_workload(w, master);
    SchemeDescriptor base = scheme;
    base.key_bits = w.key_bits;
    base = base.normalized();  // surface configuration errors before spawning work
    std::vector<TrialResult> results(trials);
    parallel_trials(trials, jobs, [&](std::size_t t) {
        SchemeDescriptor desc = base;
        desc.seed = trial_seed(master, t);
        const HashFunction hf = build(desc);
        const BinMap bins(m, hf.output_bits());
        TrialResult& r = results[t];
        r.trial = t;
        r.digest = hf.digest();
        r.bin_counts.assign(m, 0);
        hf.visit([&](const auto& h) {
            for (const std::uint64_t x : keys) ++r.bin_counts[bins.to_bin(h(x))];
        });
    });
    return results;
}

bool cube_split_from_tables(const SimpleTabulation& tab, const Workload& cube) {
    const TabGeometry& g = tab.geometry();
    if (cube.kind != WorkloadKind::DiscreteCube || g.char_bits != kCharBits || g.key_bits() != cube.key_bits) {
        throw InvalidParams("cube split predicate needs 8-bit simple tabulation over the cube's key width");
    }
    const unsigned top = g.out_bits() - 1;
    auto top_bit = [top](std::uint64_t v) { return (v >> top) & 1; };
    for (unsigned i = 0; i < cube.cube_dims; ++i) {
        if (top_bit(tab.entry(i, 0)) != top_bit(tab.entry(i, 1))) return true;
    }
    // No binary character moves the top bit, so it is decided by the tail
    // character alone and each tail value carries 2^dims keys.
    std::uint64_t fixed = 0;
    for (unsigned i = 0; i < g.c; ++i) {
        if (i != cube.cube_dims) fixed ^= tab.entry(i, 0);
    }
    std::uint64_t zero_top = 0;
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << cube.tail_bits); ++t) {
        zero_top += top_bit(fixed ^ tab.entry(cube.cube_dims, t)) == 0;
    }
    return 2 * zero_top == (std::uint64_t{1} << cube.tail_bits);
}

std::vector<std::uint64_t> focal_counts(std::span<const TrialResult> results, std::size_t focal_bin) {
    std::vector<std::uint64_t> out;
    out.reserve(results.size());
    for (const auto& r : results) {
        if (focal_bin >= r.bin_counts.size()) throw InvalidParams("focal bin out of range");
        out.push_back(r.bin_counts[focal_bin]);
    }
    return out;
}

double fraction_equal(std::span<const std::uint64_t> counts, std::uint64_t target) {
    if (counts.empty()) return 0.0;
    const auto hits = std::count(counts.begin(), counts.end(), target);
    return static_cast<double>(hits) / static_cast<double>(counts.size());
}

std::vector<std::pair<std::uint64_t, double>> cdf(std::span<const std::uint64_t> counts) {
    if (counts.empty()) throw InvalidParams("CDF of no trials");
    std::vector<std::uint64_t> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<std::uint64_t, double>> out;
    const double total = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        out.emplace_back(sorted[i], static_cast<double>(i + 1) / total);
    }
    return out;
}

std::vector<std::pair<std::uint64_t, double>> cdf(std::span<const TrialResult> results, std::size_t focal_bin) {
    const auto counts = focal_counts(results, focal_bin);
    return cdf(std::span<const std::uint64_t>(counts));
}

// ---------------------------------------------------------------- timing

std::vector<TimingRow> run_timing(std::span<const SchemeDescriptor> schemes, unsigned key_bits, std::uint64_t n,
                                  const MasterSeed& seed, unsigned reps) {
    if (n == 0) throw InvalidParams("timing needs at least one key");
    if (reps == 0) throw InvalidParams("timing needs at least one repetition");
    check_key_bits(key_bits);

    std::vector<HashFunction> functions;
    for (SchemeDescriptor desc : schemes) {
        desc.key_bits = key_bits;
        desc.seed = seed;
        functions.push_back(build(desc));
    }
    auto rng = workload_rng(seed, "timing.keys");
    std::vector<std::uint64_t> keys(n);
    for (auto& k : keys) k = rng() & low_mask(key_bits);

    std::vector<std::vector<double>> elapsed(functions.size());
    std::vector<std::uint64_t> checksums(functions.size(), 0);
    // Interleaving repetitions spreads slow machine phases over all schemes.
    for (unsigned rep = 0; rep < reps; ++rep) {
        for (std::size_t s = 0; s < functions.size(); ++s) {
            std::uint64_t acc = 0;
            const auto start = std::chrono::steady_clock::now();
            functions[s].visit([&](const auto& h) {
                // A local sum stays in a register; writing through the captured
                // reference would put a store on every iteration.
                std::uint64_t sum = 0;
                for (const std::uint64_t x : keys) sum += h(x);
                acc = sum;
            });
            const auto stop = std::chrono::steady_clock::now();
            elapsed[s].push_back(std::chrono::duration<double, std::milli>(stop - start).count());
            checksums[s] = acc;
        }
    }

    std::vector<TimingRow> rows;
    for (std::size_t s = 0; s < functions.size(); ++s) {
        auto& times = elapsed[s];
        std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
        const double ms = times[times.size() / 2];
        TimingRow row;
        row.scheme = functions[s].descriptor().to_string();
        row.key_bits = key_bits;
        row.n = n;
        row.ms = ms;
        row.keys_per_sec = ms > 0.0 ? static_cast<double>(n) / (ms / 1000.0) : 0.0;
        row.checksum = checksums[s];
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------- variance

VarianceResult variance_from_counts(std::span<const std::uint64_t> counts, std::uint64_t n, std::uint64_t m) {
    if (counts.size() < 2) throw InvalidParams("variance needs at least two trials");
    if (m == 0) throw InvalidParams("bin count must be positive");
    const double trials = static_cast<double>(counts.size());
    double mean = 0.0;
    for (const auto c : counts) mean += static_cast<double>(c);
    mean /= trials;
    double ss = 0.0;
    for (const auto c : counts) ss += (static_cast<double>(c) - mean) * (static_cast<double>(c) - mean);

    VarianceResult r;
    r.mean = mean;
    r.variance = ss / (trials - 1.0);
    const double p = 1.0 / static_cast<double>(m);
    const double q = 1.0 - p;
    const double nd = static_cast<double>(n);
    r.expected = nd * p * q;
    if (r.expected == 0.0) {
        r.z = r.variance == 0.0 ? 0.0 : INFINITY;
        return r;
    }
    // Sampling variance of s^2 for binomial data.
    const double mu4 = nd * p * q * (1.0 + 3.0 * (nd - 2.0) * p * q);
    const double sigma4 = r.expected * r.expected;
    const double var_s2 = (mu4 - sigma4 * (trials - 3.0) / (trials - 1.0)) / trials;
    r.z = (r.variance - r.expected) / std::sqrt(var_s2);
    return r;
}

VarianceResult variance_check(const SchemeDescriptor& scheme, std::uint64_t n_keys, std::uint64_t m, std::size_t trials,
                              const MasterSeed& master, unsigned jobs) {
    if (trials < 100) throw InvalidParams("variance check needs at least 100 trials");
    const Workload w = Workload::random_keys(n_keys, scheme.key_bits);
    const auto results = run_quality(scheme, w, m, trials, master, jobs);
    const auto counts = focal_counts(results);
    return variance_from_counts(counts, n_keys, m);
}

// ---------------------------------------------------------------- CSV

void write_header(std::ostream& out, const RunHeader& header) {
    out << "# hashlab " << HASHLAB_VERSION << '\n';
    out << "# command: " << header.command << '\n';
    out << "# config:";
    for (const auto& [key, value] : header.config) out << ' ' << key << '=' << value;
    out << '\n';
    out << "# seed: " << header.seed.to_hex() << '\n';
}

void write_quality_csv(std::ostream& out, const RunHeader& header, std::span<const TrialResult> results,
                       const std::string& scheme, const std::string& workload, std::size_t focal_bin) {
    write_header(out, header);
    out << "trial,scheme,workload,focal_count\n";
    for (const auto& r : results) {
        out << r.trial << ',' << scheme << ',' << workload << ',' << r.bin_counts.at(focal_bin) << '\n';
    }
}

void write_cdf_csv(std::ostream& out, const RunHeader& header, std::span<const std::pair<std::uint64_t, double>> rows) {
    write_header(out, header);
    out << "count,cum_frac\n";
    for (const auto& [count, frac] : rows) out << count << ',' << format_double("%.10g", frac) << '\n';
}

void write_timing_csv(std::ostream& out, const RunHeader& header, std::span<const TimingRow> rows) {
    write_header(out, header);
    out << "scheme,bits,n,ms,keys_per_sec,checksum\n";
    for (const auto& r : rows) {
        char checksum[32];
        std::snprintf(checksum, sizeof checksum, "0x%016llx", static_cast<unsigned long long>(r.checksum));
        out << r.scheme << ',' << r.key_bits << ',' << r.n << ',' << format_double("%.3f", r.ms) << ','
            << format_double("%.0f", r.keys_per_sec) << ',' << checksum << '\n';
    }
}

}  // namespace hashlab
