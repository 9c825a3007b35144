#include "grokforge/bounds.hpp"
#include "grokforge/graph_sim.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace grokforge;

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_rational to_big(const Ratio& r) { return cpp_rational(cpp_int(r.numerator()), cpp_int(r.denominator())); }

cpp_int factorial(std::uint64_t k) {
    cpp_int out = 1;
    for (std::uint64_t i = 2; i <= k; ++i) out *= i;
    return out;
}

cpp_int binomial(std::uint64_t n, std::uint64_t k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// Reference: C(V, n+1) (n+1)! (b/(V-1))^n with every factor exact.
cpp_rational exact_expected_paths(std::uint64_t v, const Ratio& b, int n) {
    cpp_rational p = to_big(b) / cpp_rational(v - 1);
    cpp_rational pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    return cpp_rational(binomial(v, n + 1) * factorial(n + 1)) * pn;
}

double rel_err(double got, double want) { return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want); }

// Plain ascending scan, the reference for the node-count search.
std::uint64_t linear_min_nodes(const cpp_rational& threshold, int n, std::uint64_t cutoff) {
    for (std::uint64_t v = n + 2; v <= cutoff; ++v) {
        cpp_rational lhs = 1;
        for (int k = 1; k <= n; ++k) lhs *= cpp_rational(v - k, v - 1);
        if (lhs >= threshold) return v;
    }
    return 0;
}

BoundParams params(std::uint64_t v, Ratio b, int n, Ratio phi = Ratio(1)) { return {v, b, n, phi}; }

}  // namespace

// ---------------------------------------------------------------------------
// expected_path_count

TEST(ExpectedPaths, HandExample) {
    const auto e = expected_path_count(params(4, Ratio(3, 4), 2));
    EXPECT_DOUBLE_EQ(e.value, 1.5);
    EXPECT_FALSE(e.degenerate);
}

TEST(ExpectedPaths, FrozenRegressionConstant) {
    // Exact value 3921225 * 24 * 8 / 970299, frozen from the rational oracle.
    const double frozen = 775.9208244056729;
    EXPECT_NEAR(exact_expected_paths(100, Ratio(2), 3).convert_to<double>(), frozen, 1e-9);
    EXPECT_LE(rel_err(expected_path_count(params(100, Ratio(2), 3)).value, frozen), 1e-12);
}

TEST(ExpectedPaths, DegenerateWhenTooFewNodes) {
    const auto e = expected_path_count(params(3, Ratio(1), 3));
    EXPECT_TRUE(e.degenerate);
    EXPECT_EQ(e.value, 0.0);
}

TEST(ExpectedPaths, OneHopReducesToEdgeCount) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> log_v(std::log(2.0), std::log(1e6));
    std::uniform_int_distribution<std::int64_t> num(1, 100000);
    for (int i = 0; i < 1000; ++i) {
        const auto v = static_cast<std::uint64_t>(std::exp(log_v(gen)));
        const Ratio b(num(gen), 1000);  // (0, 100]
        const double got = expected_path_count(params(std::max<std::uint64_t>(v, 2), b, 1)).value;
        EXPECT_LE(rel_err(got, static_cast<double>(std::max<std::uint64_t>(v, 2)) * to_double(b)), 1e-12);
    }
}

TEST(ExpectedPaths, MatchesExactOracleUpTo500Nodes) {
    std::mt19937_64 gen(6);
    std::uniform_int_distribution<std::uint64_t> vd(2, 500);
    std::uniform_int_distribution<std::int64_t> bd(1, 400);
    std::uniform_int_distribution<int> nd(1, 6);
    for (int i = 0; i < 300; ++i) {
        const auto v = vd(gen);
        const int n = nd(gen);
        if (v < static_cast<std::uint64_t>(n) + 1) continue;
        const Ratio b(bd(gen), 100);
        if (b > Ratio(static_cast<std::int64_t>(v - 1))) continue;
        const double want = exact_expected_paths(v, b, n).convert_to<double>();
        EXPECT_LE(rel_err(expected_path_count(params(v, b, n)).value, want), 1e-10) << v << " " << b << " " << n;
    }
}

TEST(ExpectedPaths, LogSpaceAgreesAtLargeScale) {
    const double direct = expected_path_count(params(100000, Ratio(2), 3)).value;
    EXPECT_LE(rel_err(expected_path_count_log(100000, 2.0, 3), direct), 1e-8);
}

TEST(ExpectedPathsProperty, RatioBelowUpperBound) {
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<std::uint64_t> vd(5, 100000);
    std::uniform_int_distribution<std::int64_t> bd(1, 500);
    std::uniform_int_distribution<int> nd(2, 4);
    for (int i = 0; i < 500; ++i) {
        const auto p = params(vd(gen), Ratio(bd(gen), 100), nd(gen));
        const double ratio = expected_path_count(p).value / (static_cast<double>(p.node_count) * to_double(p.branching));
        EXPECT_LE(ratio, phi_upper_bound(p) * (1 + 1e-12));
    }
}

// ---------------------------------------------------------------------------
// phi_upper_bound

TEST(PhiUpperBound, Examples) {
    EXPECT_DOUBLE_EQ(phi_upper_bound(params(kInfiniteNodes, Ratio(2), 3)), 4.0);
    const double want = (cpp_rational(4) * cpp_rational(100, 99) * cpp_rational(100, 99) * cpp_rational(100, 99))
                            .convert_to<double>();
    EXPECT_LE(rel_err(phi_upper_bound(params(100, Ratio(2), 3)), want), 1e-12);
    EXPECT_NEAR(phi_upper_bound(params(100, Ratio(2), 3)), 4.1224, 1e-4);
    EXPECT_THROW(phi_upper_bound(params(1, Ratio(2), 3)), InputError);
}

TEST(PhiUpperBound, DecreasesTowardLimit) {
    double prev = phi_upper_bound(params(2, Ratio(2), 3));
    for (std::uint64_t v = 3; v < 5000; v += 7) {
        const double cur = phi_upper_bound(params(v, Ratio(2), 3));
        EXPECT_LT(cur, prev);
        EXPECT_GT(cur, 4.0);
        prev = cur;
    }
}

// ---------------------------------------------------------------------------
// min_branching_factor

TEST(MinBranching, Examples) {
    const auto p = params(1000, Ratio(1), 2, Ratio(18, 5));
    const double want = (cpp_rational(18, 5) * cpp_rational(999, 998)).convert_to<double>();
    EXPECT_LE(rel_err(min_branching_factor(p), want), 1e-12);
    EXPECT_NEAR(min_branching_factor(p), 3.6036, 1e-4);
    EXPECT_DOUBLE_EQ(min_branching_factor(params(kInfiniteNodes, Ratio(1), 3, Ratio(18, 5))), std::sqrt(3.6));
    EXPECT_LE(rel_err(min_branching_factor(params(10000000, Ratio(1), 3, Ratio(18, 5))), std::sqrt(3.6)), 1e-5);
    EXPECT_THROW(min_branching_factor(params(100, Ratio(1), 1, Ratio(18, 5))), InputError);
}

TEST(MinBranching, ConsistentWithNodeCountFlip) {
    // b = 2 is sufficient at v = 31 and insufficient at v = 30.
    EXPECT_LE(min_branching_factor(params(31, Ratio(1), 3, Ratio(18, 5))), 2.0);
    EXPECT_GT(min_branching_factor(params(30, Ratio(1), 3, Ratio(18, 5))), 2.0);
    EXPECT_TRUE(branching_sufficient(params(31, Ratio(2), 3, Ratio(18, 5))));
    EXPECT_FALSE(branching_sufficient(params(30, Ratio(2), 3, Ratio(18, 5))));
}

// ---------------------------------------------------------------------------
// min_node_count

TEST(MinNodeCount, Examples) {
    const auto found = min_node_count(params(0, Ratio(2), 3, Ratio(18, 5)));
    EXPECT_EQ(found.status, NodeCountStatus::found);
    EXPECT_EQ(found.node_count, 31u);
    EXPECT_EQ(found.threshold, cpp_rational(9, 10));
    EXPECT_EQ(gamma_ratio(30, 3), cpp_rational(756, 841));
    EXPECT_EQ(gamma_ratio(31, 3), cpp_rational(812, 900));
    EXPECT_EQ(linear_min_nodes(cpp_rational(9, 10), 3, 1000), 31u);

    EXPECT_EQ(min_node_count(params(0, Ratio(3, 2), 3, Ratio(18, 5))).status, NodeCountStatus::infeasible);
    EXPECT_EQ(min_node_count(params(0, Ratio(2), 3, Ratio(0))).node_count, 5u);
    EXPECT_EQ(min_node_count(params(0, Ratio(2), 4, Ratio(0))).node_count, 6u);
    EXPECT_THROW(min_node_count(params(0, Ratio(0), 3, Ratio(18, 5))), InputError);
    EXPECT_THROW(min_node_count(params(0, Ratio(2), 1, Ratio(18, 5))), InputError);
}

TEST(MinNodeCount, WorstRelationDecides) {
    const std::map<std::string, Ratio> per{{"fast", Ratio(4)}, {"slow", Ratio(2)}};
    EXPECT_EQ(min_node_count(params(0, Ratio(9), 3, Ratio(18, 5)), per).node_count, 31u);
    const std::map<std::string, Ratio> weak{{"fast", Ratio(4)}, {"weak", Ratio(3, 2)}};
    EXPECT_EQ(min_node_count(params(0, Ratio(9), 3, Ratio(18, 5)), weak).status, NodeCountStatus::infeasible);
}

TEST(MinNodeCount, CutoffReported) {
    const auto r = min_node_count(params(0, Ratio(2), 3, Ratio(18, 5)), {}, 20);
    EXPECT_EQ(r.status, NodeCountStatus::not_found_below_cutoff);
}

TEST(MinNodeCountProperty, MatchesLinearSearchAndBoundary) {
    std::mt19937_64 gen(8);
    std::uniform_int_distribution<std::int64_t> phi_num(1, 200), b_num(10, 60);
    std::uniform_int_distribution<int> nd(2, 4);
    int found = 0;
    for (int i = 0; i < 200; ++i) {
        const Ratio phi(phi_num(gen), 10), b(b_num(gen), 10);
        const int n = nd(gen);
        const auto r = min_node_count(params(0, b, n, phi), {}, 5000);
        const auto want = linear_min_nodes(r.threshold, n, 5000);
        if (r.threshold >= 1) {
            EXPECT_EQ(r.status, NodeCountStatus::infeasible);
            EXPECT_EQ(want, 0u);
            continue;
        }
        if (want == 0) {
            EXPECT_EQ(r.status, NodeCountStatus::not_found_below_cutoff);
            continue;
        }
        ++found;
        ASSERT_EQ(r.status, NodeCountStatus::found);
        EXPECT_EQ(r.node_count, want);
        EXPECT_GE(gamma_ratio(r.node_count, n), r.threshold);
        if (r.node_count > static_cast<std::uint64_t>(n) + 2) {
            EXPECT_LT(gamma_ratio(r.node_count - 1, n), r.threshold);
        }
    }
    EXPECT_GT(found, 20);
}

// ---------------------------------------------------------------------------
// graph-sim

TEST(RandomGraph, ZeroBranchingIsEdgeless) {
    for (auto model : {GraphModel::edge_probability, GraphModel::exact_edge_count}) {
        const auto kg = generate_random_kg(20, Ratio(0), model, 1);
        EXPECT_EQ(kg.entity_count(), 20u);
        EXPECT_EQ(kg.edge_count(), 0u);
    }
}

TEST(RandomGraph, ProbabilityOneFillsPairs) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EXPECT_EQ(generate_random_kg(2, Ratio(1), GraphModel::edge_probability, seed).edge_count(), 2u);
    }
}

TEST(RandomGraph, ExactModelHitsRoundedTarget) {
    EXPECT_EQ(generate_random_kg(10, Ratio(3, 4), GraphModel::exact_edge_count, 3).edge_count(), 8u);
    EXPECT_EQ(generate_random_kg(50, Ratio(2), GraphModel::exact_edge_count, 3).edge_count(), 100u);
    EXPECT_EQ(generate_random_kg(5, Ratio(4), GraphModel::exact_edge_count, 3).edge_count(), 20u);
}

TEST(RandomGraph, RejectsInvalidParameters) {
    EXPECT_THROW(generate_random_kg(1, Ratio(0), GraphModel::exact_edge_count, 1), InputError);
    EXPECT_THROW(generate_random_kg(5, Ratio(5), GraphModel::edge_probability, 1), InputError);
    EXPECT_THROW(generate_random_kg(5, Ratio(-1), GraphModel::edge_probability, 1), InputError);
}

TEST(RandomGraph, SeedDeterminesGraph) {
    const auto a = generate_random_kg(30, Ratio(2), GraphModel::edge_probability, 77);
    const auto b = generate_random_kg(30, Ratio(2), GraphModel::edge_probability, 77);
    const auto c = generate_random_kg(30, Ratio(2), GraphModel::edge_probability, 78);
    EXPECT_EQ(a.facts(), b.facts());
    EXPECT_NE(a.facts(), c.facts());
}

TEST(RandomGraph, MeanEdgeCountWithinThreeSigma) {
    const double p = 2.0 / 49.0;
    double sum = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        sum += static_cast<double>(generate_random_kg(50, Ratio(2), GraphModel::edge_probability, seed).edge_count());
    }
    const double mean = sum / 1000.0;
    // Sigma of a single draw is sqrt(100 (1 - p)); the tolerance band uses that directly.
    EXPECT_NEAR(mean, 100.0, 3.0 * std::sqrt(100.0 * (1.0 - p)));
    // The tighter band for a mean of 1000 draws.
    EXPECT_NEAR(mean, 100.0, 3.0 * std::sqrt(100.0 * (1.0 - p) / 1000.0));
}

TEST(Sweep, MonteCarloMatchesFormula) {
    const auto rows = run_sweep({{12, Ratio(3, 2), 2}},
                                {.trials = 2000, .model = GraphModel::edge_probability, .master_seed = 3});
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0].empirical_mean_paths, rows[0].formula_paths, 3.0 * rows[0].standard_error());
    EXPECT_NEAR(rows[0].formula_paths, exact_expected_paths(12, Ratio(3, 2), 2).convert_to<double>(), 1e-9);
}

TEST(Sweep, DeterministicAcrossJobs) {
    std::vector<GridPoint> grid;
    for (std::uint64_t v = 10; v <= 50; v += 10) grid.push_back({v, Ratio(2), 3});
    SweepOptions opts{.trials = 5, .mode = Traversal::undirected, .master_seed = 42, .jobs = 1};
    const auto a = run_sweep(grid, opts);
    opts.jobs = 4;
    const auto b = run_sweep(grid, opts);
    std::ostringstream sa, sb;
    write_sweep_csv(a, sa);
    write_sweep_csv(b, sb);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(sa.str().substr(0, sa.str().find('\n')), kSweepCsvHeader);
}

TEST(Sweep, SingleTrialRunTwiceIsIdentical) {
    const std::vector<GridPoint> grid{{20, Ratio(2), 3}};
    std::ostringstream a, b;
    write_sweep_csv(run_sweep(grid, {.trials = 1, .master_seed = 9}), a);
    write_sweep_csv(run_sweep(grid, {.trials = 1, .master_seed = 9}), b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, BudgetAndDegenerateFlags) {
    const std::vector<GridPoint> grid{{3, Ratio(1), 3}, {2000, Ratio(20), 3}, {40, Ratio(2), 3}};
    const auto rows = run_sweep(grid, {.trials = 2, .master_seed = 1, .work_budget = 1e5});
    EXPECT_EQ(rows[0].flag, "degenerate");
    EXPECT_EQ(rows[1].flag, "skipped: budget");
    EXPECT_EQ(rows[2].flag, "ok");
    EXPECT_EQ(rows[2].trials, 2u);
}

TEST(Sweep, RejectsInvalidGrid) {
    EXPECT_THROW(run_sweep({{10, Ratio(2), 3}}, {.trials = 0}), InputError);
    EXPECT_THROW(run_sweep({{10, Ratio(2), 1}}, {.trials = 1}), InputError);
    EXPECT_THROW(run_sweep({{3, Ratio(5), 2}}, {.trials = 1}), InputError);
}

TEST(Sweep, UndirectedSweepShape) {
    std::vector<GridPoint> grid;
    for (std::uint64_t v = 10; v <= 100; v += 10) grid.push_back({v, Ratio(2), 3});
    const auto rows = run_sweep(grid, {.trials = 400, .mode = Traversal::undirected, .master_seed = 1});
    int above = 0, rated = 0, inversions = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].flag != "ok") continue;
        ++rated;
        if (rows[i].empirical_phi >= rows[i].formula_phi) ++above;
        EXPECT_LE(rows[i].empirical_phi / rows[i].formula_phi, 10.0);
        if (i > 0 && rows[i].empirical_phi < rows[i - 1].empirical_phi) ++inversions;
    }
    EXPECT_GE(above * 10, rated * 9);
    EXPECT_LE(inversions, 1);
}
