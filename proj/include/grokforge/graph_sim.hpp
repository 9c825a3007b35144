#pragma once

// Seeded random knowledge graphs and Monte Carlo sweeps comparing counted
// n-hop paths against the closed-form expectation.

#include "grokforge/bounds.hpp"
#include "grokforge/error.hpp"
#include "grokforge/kg.hpp"
#include "grokforge/parallel.hpp"
#include "grokforge/path_enum.hpp"
#include "grokforge/rational.hpp"
#include "grokforge/rng.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdint>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace grokforge {

enum class GraphModel { edge_probability, exact_edge_count };

inline std::string_view to_string(GraphModel m) {
    return m == GraphModel::edge_probability ? "edge-probability" : "exact-edge-count";
}

inline GraphModel parse_graph_model(std::string_view text) {
    if (text == "edge-probability" || text == "probability") return GraphModel::edge_probability;
    if (text == "exact-edge-count" || text == "exact") return GraphModel::exact_edge_count;
    throw InputError("unknown graph model '" + std::string(text) + "' (expected edge-probability|exact-edge-count)");
}

// round(|V| * b), halves rounded up.
inline std::uint64_t exact_edge_target(std::uint64_t node_count, const Ratio& b) {
    const Ratio scaled = b * Ratio(static_cast<std::int64_t>(node_count));
    const Ratio shifted = scaled + Ratio(1, 2);
    return static_cast<std::uint64_t>(shifted.numerator() / shifted.denominator());
}

// Single relation "r", entities "v0" .. "v{N-1}".
inline KnowledgeGraph generate_random_kg(std::uint64_t node_count, const Ratio& branching, GraphModel model,
                                         std::uint64_t seed) {
    if (node_count < 2) throw InputError("random graph needs at least 2 nodes");
    if (branching < 0) throw InputError("branching factor must be non-negative");
    if (branching > Ratio(static_cast<std::int64_t>(node_count - 1))) {
        throw InputError("branching factor " + to_string(branching) + " exceeds |V|-1 = " +
                         std::to_string(node_count - 1) + " (edge probability would exceed 1)");
    }
    KnowledgeGraph kg;
    for (std::uint64_t i = 0; i < node_count; ++i) kg.intern_entity("v" + std::to_string(i));
    const RelationId rel = kg.intern_relation("r");
    Rng rng(seed);
    const std::uint64_t span = node_count - 1;
    auto pair_at = [&](std::uint64_t index) {
        const std::uint64_t head = index / span;
        std::uint64_t tail = index % span;
        if (tail >= head) ++tail;
        return std::pair{EntityId{static_cast<std::uint32_t>(head)}, EntityId{static_cast<std::uint32_t>(tail)}};
    };

    if (model == GraphModel::edge_probability) {
        const double p = to_double(branching) / static_cast<double>(span);
        for (std::uint64_t index = 0; index < node_count * span; ++index) {
            if (rng.bernoulli(p)) {
                auto [h, t] = pair_at(index);
                kg.add_fact(h, rel, t);
            }
        }
    } else {
        // Floyd's sampling of m distinct ordered pairs out of N.
        const std::uint64_t total = node_count * span;
        const std::uint64_t m = exact_edge_target(node_count, branching);
        std::set<std::uint64_t> chosen;
        for (std::uint64_t j = total - m; j < total; ++j) {
            const std::uint64_t t = rng.below(j + 1);
            if (!chosen.insert(t).second) chosen.insert(j);
        }
        for (auto index : chosen) {
            auto [h, t] = pair_at(index);
            kg.add_fact(h, rel, t);
        }
    }
    return kg;
}

struct GridPoint {
    std::uint64_t node_count = 0;
    Ratio branching{1};
    int hops = 2;
};

struct SweepOptions {
    std::size_t trials = 30;
    GraphModel model = GraphModel::exact_edge_count;
    Traversal mode = Traversal::directed;
    std::uint64_t master_seed = 0;
    double work_budget = 5.0e7;  // estimated paths per trial
    unsigned jobs = 1;
};

struct SimRecord {
    std::uint64_t node_count = 0;
    Ratio branching;
    int hops = 0;
    std::size_t trials = 0;
    double empirical_mean_paths = 0.0;
    double empirical_sd_paths = 0.0;  // sample standard deviation across trials
    double empirical_mean_edges = 0.0;
    double empirical_phi = 0.0;
    double formula_paths = 0.0;
    double formula_phi = 0.0;
    double asymptotic_phi = 0.0;  // finite-|V| upper bound b^(n-1) (|V|/(|V|-1))^n
    std::uint64_t seed = 0;
    std::string flag;  // "ok", "degenerate" or "skipped: budget"

    double standard_error() const {
        return trials > 0 ? empirical_sd_paths / std::sqrt(static_cast<double>(trials)) : 0.0;
    }
};

inline std::vector<SimRecord> run_sweep(const std::vector<GridPoint>& grid, const SweepOptions& opts) {
    if (opts.trials < 1) throw InputError("trials must be >= 1");
    for (const auto& g : grid) {
        if (g.hops < 2) throw InputError("sweep hops must be >= 2");
        if (g.node_count < 2 || g.branching < 0 ||
            g.branching > Ratio(static_cast<std::int64_t>(g.node_count - 1))) {
            throw InputError("invalid grid point v=" + std::to_string(g.node_count) + " b=" + to_string(g.branching));
        }
    }
    std::vector<SimRecord> rows(grid.size());
    struct Job {
        std::size_t row, trial;
    };
    std::vector<Job> work;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& g = grid[i];
        auto& rec = rows[i];
        rec.node_count = g.node_count;
        rec.branching = g.branching;
        rec.hops = g.hops;
        rec.trials = opts.trials;
        rec.seed = derive_seed(opts.master_seed, {i});
        const BoundParams params{g.node_count, g.branching, g.hops, Ratio(1)};
        const auto expected = expected_path_count(params);
        rec.formula_paths = expected.value;
        const double atomic = static_cast<double>(g.node_count) * to_double(g.branching);
        rec.formula_phi = atomic > 0.0 ? rec.formula_paths / atomic : 0.0;
        rec.asymptotic_phi = phi_upper_bound(params);
        const double mode_factor = opts.mode == Traversal::undirected ? std::pow(2.0, g.hops) : 1.0;
        if (rec.formula_paths * mode_factor > opts.work_budget) {
            rec.flag = "skipped: budget";
            continue;
        }
        rec.flag = expected.degenerate || rec.formula_paths < 1.0 ? "degenerate" : "ok";
        for (std::size_t t = 0; t < opts.trials; ++t) work.push_back({i, t});
    }

    std::vector<double> paths(work.size()), edges(work.size());
    parallel_for(work.size(), opts.jobs, [&](unsigned, std::size_t k) {
        const auto& job = work[k];
        const auto& g = grid[job.row];
        const auto seed = derive_seed(opts.master_seed, {job.row, job.trial});
        const auto kg = generate_random_kg(g.node_count, g.branching, opts.model, seed);
        edges[k] = static_cast<double>(kg.edge_count());
        paths[k] = kg.edge_count() > 0 ? static_cast<double>(count_paths(kg, g.hops, opts.mode)) : 0.0;
    });

    // Deterministic reduction in (row, trial) order.
    std::size_t k = 0;
    while (k < work.size()) {
        const std::size_t row = work[k].row;
        auto& rec = rows[row];
        double sum = 0.0, sum_edges = 0.0, sum_phi = 0.0;
        const std::size_t begin = k;
        for (; k < work.size() && work[k].row == row; ++k) {
            sum += paths[k];
            sum_edges += edges[k];
            if (edges[k] > 0.0) sum_phi += paths[k] / edges[k];
        }
        const double n = static_cast<double>(k - begin);
        rec.empirical_mean_paths = sum / n;
        rec.empirical_mean_edges = sum_edges / n;
        rec.empirical_phi = sum_phi / n;
        double ss = 0.0;
        for (std::size_t j = begin; j < k; ++j) ss += (paths[j] - rec.empirical_mean_paths) * (paths[j] - rec.empirical_mean_paths);
        rec.empirical_sd_paths = n > 1.0 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    }
    return rows;
}

inline constexpr std::string_view kSweepCsvHeader =
    "v,b,n,trials,empirical_mean_paths,formula_paths,empirical_phi,formula_phi,asymptotic_phi,seed,flag";

inline void write_sweep_csv(const std::vector<SimRecord>& rows, std::ostream& out) {
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        out << fmt::format("{},{:.10g},{},{},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{},{}\n", r.node_count,
                           to_double(r.branching), r.hops, r.trials, r.empirical_mean_paths, r.formula_paths,
                           r.empirical_phi, r.formula_phi, r.asymptotic_phi, r.seed, r.flag);
    }
}

}  // namespace grokforge
