#include "hashlab/errors.hpp"
#include "hashlab/lab.hpp"
#include "hashlab/reference.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace hashlab;

TEST(Workload, ProgressionWithUnitStep) {
    EXPECT_EQ(gen_workload(Workload::progression(4, 32, 1), MasterSeed(1)), (std::vector<std::uint64_t>{0, 1, 2, 3}));
}

TEST(Workload, ProgressionDrawsOddStepFromSeed) {
    const auto w = Workload::progression(50000, 32);
    const auto step = progression_step(w, MasterSeed(3));
    EXPECT_EQ(step & 1, 1u);
    EXPECT_LT(step, 1ULL << 32);
    EXPECT_EQ(step, progression_step(w, MasterSeed(3)));
    EXPECT_NE(step, progression_step(w, MasterSeed(4)));
    const auto keys = gen_workload(w, MasterSeed(3));
    EXPECT_EQ(keys[7], (7 * step) & 0xffffffff);
    EXPECT_EQ(std::set<std::uint64_t>(keys.begin(), keys.end()).size(), 50000u);
}

TEST(Workload, DiscreteCubeLayout) {
    const auto w = Workload::cube();
    const auto keys = gen_workload(w, MasterSeed(0));
    ASSERT_EQ(keys.size(), 8192u);
    EXPECT_EQ(w.key_count(), 8192u);
    EXPECT_EQ(std::set<std::uint64_t>(keys.begin(), keys.end()).size(), 8192u);
    for (const auto x : keys) {
        for (unsigned i = 0; i < 7; ++i) ASSERT_LE((x >> (8 * i)) & 0xff, 1u);
        ASSERT_LT(x >> 56, 64u);
    }
    EXPECT_THROW(gen_workload(Workload::cube(32), MasterSeed(0)), InvalidParams);
}

TEST(Workload, CollapseSetCardinality) {
    const auto w = Workload::collapse(2, 3, 32);
    const auto keys = gen_workload(w, MasterSeed(0));
    EXPECT_EQ(keys.size(), 1024u);
    EXPECT_EQ(std::set<std::uint64_t>(keys.begin(), keys.end()).size(), 1024u);
    for (const auto x : keys) {
        ASSERT_LT(x & 0xff, 2u);
        ASSERT_LT((x >> 8) & 0xff, 2u);
        ASSERT_EQ(x >> 24, 0u);
    }
    EXPECT_THROW(gen_workload(Workload::collapse(2, 5, 32), MasterSeed(0)), InvalidParams);
}

TEST(Workload, RandomKeysAreDistinctAndReproducible) {
    const auto w = Workload::random_keys(20000, 32);
    const auto a = gen_workload(w, MasterSeed(5));
    EXPECT_EQ(a, gen_workload(w, MasterSeed(5)));
    EXPECT_NE(a, gen_workload(w, MasterSeed(6)));
    EXPECT_EQ(std::set<std::uint64_t>(a.begin(), a.end()).size(), 20000u);
    EXPECT_THROW(gen_workload(Workload::random_keys(10, 48), MasterSeed(5)), InvalidParams);
}

TEST(Quality, SingleBinHoldsEverything) {
    const auto r = run_quality(parse_scheme("tabperm", 64, MasterSeed()), Workload::cube(), 1, 1, MasterSeed(1));
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].bin_counts, std::vector<std::uint64_t>{8192});
}

TEST(Quality, BinCountsSumToWorkloadSize) {
    const auto r = run_quality(parse_scheme("mixed", 32, MasterSeed()), Workload::random_keys(5000, 32), 7, 20, MasterSeed(2));
    for (const auto& t : r) {
        EXPECT_EQ(std::accumulate(t.bin_counts.begin(), t.bin_counts.end(), std::uint64_t{0}), 5000u);
    }
    std::set<std::uint64_t> digests;
    for (const auto& t : r) digests.insert(t.digest);
    EXPECT_EQ(digests.size(), 20u);
}

TEST(Quality, ResultsIndependentOfWorkerCount) {
    const auto desc = parse_scheme("tab1perm", 32, MasterSeed());
    const auto w = Workload::progression(3000, 32);
    const auto serial = run_quality(desc, w, 16, 40, MasterSeed(3), 1);
    const auto parallel = run_quality(desc, w, 16, 40, MasterSeed(3), 4);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].trial, i);
        EXPECT_EQ(serial[i].bin_counts, parallel[i].bin_counts);
        EXPECT_EQ(serial[i].digest, parallel[i].digest);
    }
}

TEST(Quality, WorkerErrorsPropagate) {
    EXPECT_THROW(run_quality(parse_scheme("doubletab", 64, MasterSeed()), Workload::cube(), 2, 4, MasterSeed(), 2),
                 UnsupportedConfig);
    EXPECT_THROW(parallel_trials(10, 3, [](std::size_t i) {
                     if (i == 7) throw InvalidParams("boom");
                 }),
                 InvalidParams);
}

TEST(Quality, CubeSplitAgreesWithTablePredicate) {
    const auto w = Workload::cube();
    const auto desc = parse_scheme("simpletab", 64, MasterSeed());
    const MasterSeed master(0xc0be);
    const auto results = run_quality(desc, w, 2, 400, master);
    int forced = 0;
    for (const auto& r : results) {
        SchemeDescriptor d = desc;
        d.seed = trial_seed(master, r.trial);
        const HashFunction hf = build(d);
        const auto& tab = std::get<SimpleTabulation>(hf.impl());
        const bool perfect = r.focal_count() == 4096;
        ASSERT_EQ(cube_split_from_tables(tab, w), perfect) << "trial " << r.trial;
        // One-way predicate: a differing top bit in a binary character forces the split.
        for (unsigned i = 0; i < 7; ++i) {
            if (((tab.entry(i, 0) ^ tab.entry(i, 1)) >> 63) != 0) {
                ASSERT_TRUE(perfect);
                ++forced;
                break;
            }
        }
    }
    EXPECT_GT(forced, 380);
}

TEST(Quality, TabPermCubeRateMatchesIndependentModel) {
    // Re-simulate TabPerm on the cube from first principles: the focal bin is
    // the top bit of a random permutation applied to the XOR of random top
    // output characters, one per position character. No library code involved.
    std::mt19937_64 rng(77);
    const int model_trials = 20000;
    int model_perfect = 0;
    for (int t = 0; t < model_trials; ++t) {
        std::uint8_t top[8][64];
        for (int i = 0; i < 7; ++i) top[i][0] = rng() & 0xff, top[i][1] = rng() & 0xff;
        for (int v = 0; v < 64; ++v) top[7][v] = rng() & 0xff;
        std::vector<int> perm(256);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        int focal = 0;
        for (int key = 0; key < 8192; ++key) {
            int z = top[7][key >> 7];
            for (int i = 0; i < 7; ++i) z ^= top[i][(key >> i) & 1];
            focal += perm[z] < 128;
        }
        model_perfect += focal == 4096;
    }
    const double model = static_cast<double>(model_perfect) / model_trials;
    const auto results = run_quality(parse_scheme("tabperm", 64, MasterSeed()), Workload::cube(), 2, 2000, MasterSeed(9));
    const double observed = fraction_equal(focal_counts(results), 4096);
    const double se = std::sqrt(model * (1 - model) / 2000 + model * (1 - model) / model_trials);
    EXPECT_NEAR(observed, model, 4 * se);
    EXPECT_GT(model, 0.1);  // far above the fully random 0.0088
}

TEST(Cdf, Examples) {
    const std::vector<std::uint64_t> one = {7};
    EXPECT_EQ(cdf(one), (std::vector<std::pair<std::uint64_t, double>>{{7, 1.0}}));
    const std::vector<std::uint64_t> two = {5, 3};
    EXPECT_EQ(cdf(two), (std::vector<std::pair<std::uint64_t, double>>{{3, 0.5}, {5, 1.0}}));
    EXPECT_THROW(cdf(std::vector<std::uint64_t>{}), InvalidParams);
}

TEST(Cdf, MatchesNaiveRankOracle) {
    std::mt19937_64 rng(10);
    std::vector<std::uint64_t> counts(1000);
    for (auto& c : counts) c = rng() % 50;
    const auto got = cdf(counts);
    std::set<std::uint64_t> distinct(counts.begin(), counts.end());
    ASSERT_EQ(got.size(), distinct.size());
    std::size_t i = 0;
    for (const auto v : distinct) {
        const auto at_most = std::count_if(counts.begin(), counts.end(), [v](std::uint64_t c) { return c <= v; });
        EXPECT_EQ(got[i].first, v);
        EXPECT_DOUBLE_EQ(got[i].second, static_cast<double>(at_most) / 1000.0);
        ++i;
    }
}

TEST(Timing, BoundaryAndDeterminism) {
    const std::vector<SchemeDescriptor> schemes = {parse_scheme("simpletab", 32, MasterSeed()),
                                                   parse_scheme("tabperm", 32, MasterSeed())};
    EXPECT_THROW(run_timing(schemes, 32, 0, MasterSeed(1)), InvalidParams);
    const auto one = run_timing(schemes, 32, 1, MasterSeed(1));
    ASSERT_EQ(one.size(), 2u);
    EXPECT_EQ(one[0].n, 1u);
    const auto a = run_timing(schemes, 32, 10000, MasterSeed(1));
    const auto b = run_timing(schemes, 32, 10000, MasterSeed(1));
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].checksum, b[i].checksum);
        EXPECT_EQ(a[i].scheme, b[i].scheme);
        EXPECT_GT(a[i].keys_per_sec, 0.0);
    }
    EXPECT_EQ(a[0].scheme, "simpletab/32/8/4");
    EXPECT_THROW(run_timing(std::vector<SchemeDescriptor>{parse_scheme("doubletab", 64, MasterSeed())}, 64, 10, MasterSeed()),
                 UnsupportedConfig);
}

TEST(Variance, SingleBinHasNoVariance) {
    const auto r = variance_check(parse_scheme("simpletab", 32, MasterSeed()), 1000, 1, 100, MasterSeed(11));
    EXPECT_EQ(r.variance, 0.0);
    EXPECT_EQ(r.expected, 0.0);
    EXPECT_EQ(r.z, 0.0);
    EXPECT_THROW(variance_check(parse_scheme("simpletab", 32, MasterSeed()), 1000, 2, 99, MasterSeed(11)), InvalidParams);
}

TEST(Variance, FullyRandomReferencePasses) {
    const auto counts = simulate_reference_focal(10000, 16, 2000, MasterSeed(12));
    const auto r = variance_from_counts(counts, 10000, 16);
    EXPECT_NEAR(r.mean, 625.0, 5.0);
    EXPECT_LE(std::abs(r.z), 5.0);
}

TEST(Variance, ZScoreFlagsWrongVariance) {
    // Counts with twice the binomial variance must stand out clearly.
    std::mt19937_64 rng(13);
    std::normal_distribution<double> wide(625.0, std::sqrt(2 * 10000.0 / 16 * 15 / 16));
    std::vector<std::uint64_t> counts(2000);
    for (auto& c : counts) c = static_cast<std::uint64_t>(std::llround(wide(rng)));
    EXPECT_GT(variance_from_counts(counts, 10000, 16).z, 5.0);
}

TEST(Variance, SimpleTabulationMatchesPrediction) {
    const auto r = variance_check(parse_scheme("simpletab", 32, MasterSeed()), 10000, 16, 300, MasterSeed(14));
    EXPECT_LE(std::abs(r.z), 5.0);
    EXPECT_NEAR(r.expected, 10000.0 / 16 * 15 / 16, 1e-9);
}

TEST(Reference, FullyRandomHashIsMemoized) {
    FullyRandomHash h(MasterSeed(15), 20);
    const auto a = h(123);
    EXPECT_EQ(h(123), a);
    EXPECT_LT(a, 1u << 20);
    FullyRandomHash same(MasterSeed(15), 20);
    EXPECT_EQ(same(123), a);
}

TEST(Reference, CubeAndProgressionBaselines) {
    const double cube = fraction_equal(simulate_reference_focal(8192, 2, 20000, MasterSeed(16)), 4096);
    EXPECT_NEAR(cube, 0.0088, 0.003);
    const double prog = fraction_equal(simulate_reference_focal(50000, 16, 20000, MasterSeed(17)), 3125);
    EXPECT_NEAR(prog, 0.0074, 0.003);
}

TEST(Csv, HeadersAndByteIdenticalReruns) {
    const auto desc = parse_scheme("tab1perm", 32, MasterSeed());
    const auto w = Workload::random_keys(1000, 32);
    auto render = [&] {
        const auto results = run_quality(desc, w, 4, 10, MasterSeed(18));
        RunHeader header{"quality random", {{"bins", "4"}}, MasterSeed(18)};
        std::ostringstream q, c;
        write_quality_csv(q, header, results, desc.to_string(), w.name());
        write_cdf_csv(c, header, cdf(std::span<const TrialResult>(results)));
        return q.str() + c.str();
    };
    const std::string a = render();
    EXPECT_EQ(a, render());
    EXPECT_EQ(a.rfind("# hashlab ", 0), 0u);
    EXPECT_NE(a.find("# seed: 0x"), std::string::npos);
    EXPECT_NE(a.find("trial,scheme,workload,focal_count\n"), std::string::npos);
    EXPECT_NE(a.find("count,cum_frac\n"), std::string::npos);

    std::ostringstream t;
    write_timing_csv(t, {"bench", {}, MasterSeed(1)}, std::vector<TimingRow>{{"simpletab/32/8/4", 32, 10, 1.5, 6666.7, 255}});
    EXPECT_NE(t.str().find("scheme,bits,n,ms,keys_per_sec,checksum\nsimpletab/32/8/4,32,10,1.500,6667,0x00000000000000ff\n"),
              std::string::npos);
}
