// hashlab: command-line front end for hashing, benchmarks, quality
// experiments, streaming estimators and conformance vectors.

#include "hashlab/conformance.hpp"
#include "hashlab/errors.hpp"
#include "hashlab/hash_function.hpp"
#include "hashlab/lab.hpp"
#include "hashlab/streams.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

namespace {

using namespace hashlab;

// Bad flag values that CLI11 cannot see; reported with exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SchemeFlags {
    std::string scheme = "tab1perm";
    unsigned bits = 32;
    unsigned charbits = 0;
    unsigned d = 0;
    std::string seed;

    void add_to(CLI::App& cmd, bool with_scheme = true) {
        if (with_scheme) cmd.add_option("--scheme", scheme, "Hash scheme (simpletab, tabperm, tab1perm, twisted, mixed, doubletab, multishift, poly<k>)");
        cmd.add_option("--bits", bits, "Key width")->check(CLI::IsMember({32u, 64u}));
        cmd.add_option("--charbits", charbits, "Character width (8, or 16 for doubletab)");
        cmd.add_option("--d", d, "Output characters for tabulation schemes (0: default)");
        cmd.add_option("--seed", seed, "Master seed as 0x-prefixed hex (fallback: HASHLAB_SEED)");
    }
};

MasterSeed resolve_seed(const std::string& flag) {
    std::string text = flag;
    if (text.empty()) {
        if (const char* env = std::getenv("HASHLAB_SEED")) text = env;
    }
    if (text.empty()) throw UsageError("no seed given: pass --seed 0x... or set HASHLAB_SEED");
    try {
        return MasterSeed::from_hex(text);
    } catch (const InvalidParams& e) {
        throw UsageError(std::string("bad seed: ") + e.what());
    }
}

SchemeDescriptor make_descriptor(const std::string& name, const SchemeFlags& f, const MasterSeed& seed) {
    SchemeDescriptor desc = parse_scheme(name, f.bits, seed);
    desc.char_bits = f.charbits;
    desc.d = f.d;
    return desc.normalized();
}

// Streams want wide hashes so distinct keys rarely collide; widen the output
// of the single-table-per-character schemes unless --d was given.
SchemeDescriptor stream_descriptor(const SchemeFlags& f, const MasterSeed& seed) {
    SchemeDescriptor desc = make_descriptor(f.scheme, f, seed);
    if (f.d == 0 && (desc.scheme == Scheme::SimpleTab || desc.scheme == Scheme::TabPerm ||
                     desc.scheme == Scheme::Tab1Perm || desc.scheme == Scheme::TwistedTab)) {
        desc.d = 64 / desc.char_bits;
        desc = desc.normalized();
    }
    return desc;
}

std::uint64_t parse_key(std::string_view s, unsigned bits) {
    if (s.starts_with("0x") || s.starts_with("0X")) s.remove_prefix(2);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw UsageError("bad hex key '" + std::string(s) + "'");
    }
    if (bits < 64 && (v >> bits) != 0) throw UsageError("key '" + std::string(s) + "' wider than " + std::to_string(bits) + " bits");
    return v;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in;
    std::istream* src = &std::cin;
    if (path != "-") {
        in.open(path, std::ios::binary);
        if (!in) throw Error("cannot open '" + path + "'");
        src = &in;
    }
    return {std::istreambuf_iterator<char>(*src), std::istreambuf_iterator<char>()};
}

// Newline-delimited hex, or raw little-endian words of key width.
std::vector<std::uint64_t> parse_keys(const std::vector<std::uint8_t>& bytes, const std::string& format, unsigned bits) {
    std::vector<std::uint64_t> keys;
    if (format == "bin") {
        const std::size_t width = bits / 8;
        if (bytes.size() % width != 0) throw FormatError("binary key input is not a whole number of keys");
        for (std::size_t i = 0; i < bytes.size(); i += width) {
            std::uint64_t v = 0;
            for (std::size_t b = 0; b < width; ++b) v |= static_cast<std::uint64_t>(bytes[i + b]) << (8 * b);
            keys.push_back(v);
        }
        return keys;
    }
    std::istringstream lines(std::string(bytes.begin(), bytes.end()));
    for (std::string line; std::getline(lines, line);) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        keys.push_back(parse_key(line, bits));
    }
    return keys;
}

std::vector<std::uint64_t> read_keys(const std::string& path, const std::string& format, unsigned bits) {
    return parse_keys(read_bytes(path), format, bits);
}

// Writes to --out when given, otherwise to stdout.
class Output {
public:
    explicit Output(const std::string& path, bool binary = false) {
        if (!path.empty() && path != "-") {
            file_.open(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
            if (!file_) throw Error("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::string hex_width(std::uint64_t v, unsigned bits) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%0*llx", static_cast<int>((bits + 3) / 4), static_cast<unsigned long long>(v));
    return buf;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

// ---------------------------------------------------------------- commands

struct HashCmd {
    SchemeFlags flags;
    std::vector<std::string> keys;
    std::string input;
    std::string format = "hex";
    std::string out;

    void run() {
        const MasterSeed seed = resolve_seed(flags.seed);
        const HashFunction hf = build(make_descriptor(flags.scheme, flags, seed));
        std::vector<std::uint64_t> xs;
        for (const auto& k : keys) xs.push_back(parse_key(k, flags.bits));
        if (!input.empty()) {
            const auto more = read_keys(input, format, flags.bits);
            xs.insert(xs.end(), more.begin(), more.end());
        }
        if (xs.empty()) throw UsageError("hash needs --key or --input");
        Output o(out);
        for (const std::uint64_t x : xs) o.stream() << hex_width(hf(x), hf.output_bits()) << '\n';
    }
};

struct BenchCmd {
    SchemeFlags flags;
    std::vector<std::string> schemes;
    std::uint64_t n = 10'000'000;
    unsigned reps = 5;
    std::string out;

    void run() {
        const MasterSeed seed = resolve_seed(flags.seed);
        if (schemes.empty()) {
            schemes = {"simpletab", "tab1perm", "tabperm", "twisted", "mixed", "multishift", "poly2", "poly100"};
            if (flags.bits == 32) schemes.insert(schemes.begin() + 5, "doubletab");
        }
        std::vector<SchemeDescriptor> descs;
        for (const auto& s : schemes) descs.push_back(make_descriptor(s, flags, seed));
        const auto rows = run_timing(descs, flags.bits, n, seed, reps);
        RunHeader header{"bench", {{"bits", std::to_string(flags.bits)}, {"n", std::to_string(n)}, {"reps", std::to_string(reps)}}, seed};
        Output o(out);
        write_timing_csv(o.stream(), header, rows);
    }
};

struct QualityCmd {
    SchemeFlags flags;
    std::string workload = "cube";
    std::optional<unsigned> bits;
    std::optional<std::uint64_t> bins_flag;
    std::uint64_t bins = 0;
    std::size_t trials = 5000;
    std::uint64_t n = 0;
    std::uint64_t step = 0;
    std::uint64_t collapse_k = 2;
    unsigned collapse_c = 4;
    unsigned jobs = 1;
    std::string out;
    std::string cdf_out;

    void run() {
        const MasterSeed seed = resolve_seed(flags.seed);
        if (bins_flag && *bins_flag == 0) throw UsageError("--bins must be positive");
        bins = bins_flag.value_or(0);
        Workload w;
        if (workload == "cube") {
            w = Workload::cube(bits.value_or(64));
            if (bins == 0) bins = 2;
        } else if (workload == "progression") {
            w = Workload::progression(n == 0 ? 50000 : n, bits.value_or(32), step);
            if (bins == 0) bins = 16;
        } else if (workload == "random") {
            w = Workload::random_keys(n == 0 ? 10000 : n, bits.value_or(32));
            if (bins == 0) bins = 16;
        } else {
            w = Workload::collapse(collapse_k, collapse_c, bits.value_or(32));
            if (bins == 0) bins = 2;
        }
        SchemeFlags sf = flags;
        sf.bits = w.key_bits;
        const SchemeDescriptor desc = make_descriptor(flags.scheme, sf, seed);
        const auto results = run_quality(desc, w, bins, trials, seed, jobs);

        RunHeader header{"quality " + workload,
                         {{"scheme", desc.to_string()},
                          {"workload", w.name()},
                          {"keys", std::to_string(w.key_count())},
                          {"bins", std::to_string(bins)},
                          {"trials", std::to_string(trials)},
                          {"focal_bin", "0"}},
                         seed};
        if (w.kind == WorkloadKind::ArithmeticProgression) {
            header.config.emplace_back("step", hex_width(progression_step(w, seed), w.key_bits));
        }
        Output o(out);
        write_quality_csv(o.stream(), header, results, desc.to_string(), w.name());
        if (!cdf_out.empty()) {
            Output c(cdf_out);
            write_cdf_csv(c.stream(), header, cdf(std::span<const TrialResult>(results)));
        }
        if (w.key_count() % bins == 0) {
            const auto counts = focal_counts(results);
            std::cerr << "perfect-split fraction (focal count " << w.key_count() / bins
                      << "): " << fmt_double(fraction_equal(counts, w.key_count() / bins)) << '\n';
        }
    }
};

struct DistinctCmd {
    SchemeFlags flags;
    std::string input = "-";
    std::string format = "hex";
    std::size_t k = 0;
    double eps = 0.0;
    double delta = 0.0;
    std::string method = "bottomk";
    std::string save_sketch;
    std::string out;

    void run() {
        const MasterSeed seed = resolve_seed(flags.seed);
        const auto keys = read_keys(input, format, flags.bits);
        std::size_t k0 = k;
        std::size_t r = 1;
        if (eps > 0.0 || delta > 0.0) {
            if (eps <= 0.0 || delta <= 0.0) throw UsageError("--eps and --delta go together");
            const MedianParams p = median_params(eps, delta);
            if (k0 == 0) k0 = p.k0;
            r = p.r;
        }
        if (k0 == 0) k0 = 1024;
        if (!save_sketch.empty() && (r != 1 || method != "bottomk")) {
            throw UsageError("--save-sketch needs a single bottom-k sketch");
        }

        std::vector<HashFunction> hfs;
        for (std::size_t i = 0; i < r; ++i) {
            // A single sketch uses the master seed itself so that its sketch
            // can be merged with others built from the same seed.
            const MasterSeed s = r == 1 ? seed : derive_seed(seed, "stream", i);
            hfs.push_back(build(stream_descriptor(flags, s)));
        }

        double estimate = 0.0;
        bool exact = false;
        if (method == "powtwo") {
            std::vector<double> estimates;
            for (const auto& hf : hfs) {
                PowTwoSketch sk(k0, hf.output_bits());
                hf.visit([&](const auto& h) {
                    for (const std::uint64_t x : keys) sk.offer(x, h(x));
                });
                estimates.push_back(sk.estimate());
            }
            estimate = median(std::move(estimates));
        } else {
            try {
                estimate = estimate_distinct_median(keys, hfs, k0);
            } catch (const Underfull& u) {
                estimate = static_cast<double>(u.exact_count());
                exact = true;
            }
            if (!save_sketch.empty()) {
                const auto bytes = serialize(BottomKSketch::of(hfs.front(), keys, k0));
                std::ofstream f(save_sketch, std::ios::binary | std::ios::trunc);
                if (!f) throw Error("cannot write '" + save_sketch + "'");
                f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
            }
        }

        RunHeader header{"stream-distinct",
                         {{"scheme", hfs.front().descriptor().to_string()}, {"method", method}, {"k", std::to_string(k0)}, {"r", std::to_string(r)}},
                         seed};
        Output o(out);
        write_header(o.stream(), header);
        o.stream() << "keys,k,r,estimate,exact\n"
                   << keys.size() << ',' << k0 << ',' << r << ',' << fmt_double(estimate) << ',' << (exact ? 1 : 0) << '\n';
    }
};

struct JaccardCmd {
    SchemeFlags flags;
    std::string a;
    std::string b;
    std::string format = "hex";
    std::size_t k = 1024;
    std::string out;

    // A sketch file (saved by stream-distinct) or a key list.
    BottomKSketch load(const std::string& path, const HashFunction& hf) const {
        const auto bytes = read_bytes(path);
        if (bytes.size() >= 5 && std::string(bytes.begin(), bytes.begin() + 5) == "HLBK1") return deserialize_sketch(bytes);
        return BottomKSketch::of(hf, parse_keys(bytes, format, flags.bits), k);
    }

    void run() {
        const MasterSeed seed = resolve_seed(flags.seed);
        const HashFunction hf = build(stream_descriptor(flags, seed));
        const BottomKSketch sa = load(a, hf);
        const BottomKSketch sb = load(b, hf);
        const double j = jaccard(sa, sb);
        RunHeader header{"stream-jaccard", {{"scheme", hf.descriptor().to_string()}, {"k", std::to_string(sa.k())}}, seed};
        Output o(out);
        write_header(o.stream(), header);
        o.stream() << "k,jaccard\n" << sa.k() << ',' << fmt_double(j) << '\n';
    }
};

struct DumpCmd {
    SchemeFlags flags;
    std::string out;

    void run() {
        const MasterSeed seed = resolve_seed(flags.seed);
        const auto bytes = dump_tables(build(make_descriptor(flags.scheme, flags, seed)));
        Output o(out, true);
        o.stream().write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
};

struct ConformanceCmd {
    std::string vectors;
    bool generate = false;

    int run() {
        if (vectors.empty()) throw UsageError("conformance needs --vectors");
        if (generate) {
            Output o(vectors);
            write_vectors(o.stream(), generate_vectors());
            return 0;
        }
        std::ifstream in(vectors);
        if (!in) throw Error("cannot open '" + vectors + "'");
        const ConformanceReport report = verify_vectors(read_vectors(in));
        for (const auto& line : report.details) std::cerr << "mismatch: " << line << '\n';
        std::cout << report.rows - report.mismatches << '/' << report.rows << " vectors match\n";
        return report.mismatches == 0 && report.rows > 0 ? 0 : 1;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hashlab: tabulation hashing toolkit and experiment runner"};
    app.set_version_flag("--version", std::string(HASHLAB_VERSION));
    app.require_subcommand(1);

    HashCmd hash_cmd;
    auto* hash = app.add_subcommand("hash", "Hash keys given on the command line or in a file");
    hash_cmd.flags.add_to(*hash);
    hash->add_option("--key", hash_cmd.keys, "Key in hex (repeatable)");
    hash->add_option("--input", hash_cmd.input, "Key file ('-' for stdin)");
    hash->add_option("--format", hash_cmd.format, "Key file format")->check(CLI::IsMember({"hex", "bin"}));
    hash->add_option("--out", hash_cmd.out, "Output path (default stdout)");

    BenchCmd bench_cmd;
    auto* bench = app.add_subcommand("bench", "Time schemes on the same key array");
    bench_cmd.flags.add_to(*bench, false);
    bench->add_option("--scheme", bench_cmd.schemes, "Scheme to time (repeatable; default all)");
    bench->add_option("--n", bench_cmd.n, "Keys per run")->check(CLI::PositiveNumber);
    bench->add_option("--reps", bench_cmd.reps, "Repetitions (median reported)")->check(CLI::PositiveNumber);
    bench->add_option("--out", bench_cmd.out, "timing.csv path (default stdout)");

    QualityCmd quality_cmd;
    auto* quality = app.add_subcommand("quality", "Bin-count experiment over many independently seeded trials");
    quality->add_option("workload", quality_cmd.workload, "Key set")
        ->check(CLI::IsMember({"cube", "progression", "random", "collapse"}))
        ->required();
    quality_cmd.flags.scheme = "simpletab";
    quality->add_option("--scheme", quality_cmd.flags.scheme, "Hash scheme");
    quality->add_option("--bits", quality_cmd.bits, "Key width (cube: 64, others: 32)")->check(CLI::IsMember({32u, 64u}));
    quality->add_option("--charbits", quality_cmd.flags.charbits, "Character width");
    quality->add_option("--d", quality_cmd.flags.d, "Output characters for tabulation schemes");
    quality->add_option("--seed", quality_cmd.flags.seed, "Master seed (fallback: HASHLAB_SEED)");
    quality->add_option("--bins", quality_cmd.bins_flag, "Bins m (cube/collapse: 2, others: 16)");
    quality->add_option("--trials", quality_cmd.trials, "Independent trials")->check(CLI::PositiveNumber);
    quality->add_option("--n", quality_cmd.n, "Keys for progression/random");
    quality->add_option("--step", quality_cmd.step, "Progression step (default: random odd)");
    quality->add_option("--k", quality_cmd.collapse_k, "Collapse set: values per collapsing character");
    quality->add_option("--c", quality_cmd.collapse_c, "Collapse set: characters");
    quality->add_option("--jobs", quality_cmd.jobs, "Worker threads")->check(CLI::PositiveNumber);
    quality->add_option("--out", quality_cmd.out, "quality.csv path (default stdout)");
    quality->add_option("--cdf", quality_cmd.cdf_out, "Also write cdf.csv here");

    DistinctCmd distinct_cmd;
    auto* distinct = app.add_subcommand("stream-distinct", "Estimate the number of distinct keys in a stream");
    distinct_cmd.flags.add_to(*distinct);
    distinct->add_option("--input", distinct_cmd.input, "Key file ('-' for stdin)");
    distinct->add_option("--format", distinct_cmd.format, "Key file format")->check(CLI::IsMember({"hex", "bin"}));
    distinct->add_option("--k", distinct_cmd.k, "Sketch capacity (default 1024, or derived from --eps)");
    distinct->add_option("--eps", distinct_cmd.eps, "Relative error target; with --delta takes a median of sketches");
    distinct->add_option("--delta", distinct_cmd.delta, "Failure probability");
    distinct->add_option("--method", distinct_cmd.method, "Estimator")->check(CLI::IsMember({"bottomk", "powtwo"}));
    distinct->add_option("--save-sketch", distinct_cmd.save_sketch, "Write the serialized bottom-k sketch here");
    distinct->add_option("--out", distinct_cmd.out, "Output path (default stdout)");

    JaccardCmd jaccard_cmd;
    auto* jac = app.add_subcommand("stream-jaccard", "Estimate the Jaccard similarity of two key sets");
    jaccard_cmd.flags.add_to(*jac);
    jac->add_option("--a", jaccard_cmd.a, "First key file or saved sketch")->required();
    jac->add_option("--b", jaccard_cmd.b, "Second key file or saved sketch")->required();
    jac->add_option("--format", jaccard_cmd.format, "Key file format")->check(CLI::IsMember({"hex", "bin"}));
    jac->add_option("--k", jaccard_cmd.k, "Sketch capacity")->check(CLI::PositiveNumber);
    jac->add_option("--out", jaccard_cmd.out, "Output path (default stdout)");

    DumpCmd dump_cmd;
    auto* dump = app.add_subcommand("dump-tables", "Write the binary table dump of a hash function");
    dump_cmd.flags.add_to(*dump);
    dump->add_option("--out", dump_cmd.out, "Output path (default stdout)");

    ConformanceCmd conf_cmd;
    auto* conf = app.add_subcommand("conformance", "Check (or regenerate) known-answer vectors");
    conf->add_option("--vectors", conf_cmd.vectors, "Vector file (TSV)");
    conf->add_flag("--generate", conf_cmd.generate, "Write vectors from this build instead of checking");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*hash) hash_cmd.run();
        else if (*bench) bench_cmd.run();
        else if (*quality) quality_cmd.run();
        else if (*distinct) distinct_cmd.run();
        else if (*jac) jaccard_cmd.run();
        else if (*dump) dump_cmd.run();
        else if (*conf) return conf_cmd.run();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidDescriptor& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidParams& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const UnsupportedConfig& e) {
        std::cerr << "error: unsupported configuration: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cout.flush();
    return 0;
}
