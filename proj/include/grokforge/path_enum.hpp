#pragma once

// Enumeration of n-hop inference paths and the inferred-to-atomic ratios
// built on top of them.
//
// Paths always visit pairwise-distinct nodes. In directed mode every step
// follows a stored fact head -> tail. In undirected mode a step may also walk
// a fact backwards, and a path and its reversal denote the same inferred fact:
// only the orientation whose head id is smaller than its tail id is kept.
//
// Output order is the lexicographic order of the id tuple
// (v0, r1, v1, ..., rn, vn), independent of the worker count.

#include "grokforge/error.hpp"
#include "grokforge/kg.hpp"
#include "grokforge/parallel.hpp"
#include "grokforge/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

namespace grokforge {

// A (2n+1)-tuple (v0, r1, v1, ..., rn, vn) with n >= 2.
struct InferredFact {
    std::vector<EntityId> nodes;
    std::vector<RelationId> relations;

    std::size_t hops() const { return relations.size(); }
    EntityId head() const { return nodes.front(); }
    EntityId tail() const { return nodes.back(); }

    auto operator<=>(const InferredFact&) const = default;
};

struct EnumerateOptions {
    int hops = 2;
    Traversal mode = Traversal::undirected;
    // Keep a path only if every (entity, relation) step has a unique successor.
    bool simple_only = false;
    std::optional<std::size_t> limit{};
    unsigned jobs = 1;
};

namespace detail {

// Depth-first walk from one start node. `on_path` receives the completed
// node/relation buffers; return false from it to stop early. Returns false
// when stopped.
template <class OnPath>
bool walk_paths_from(const KnowledgeGraph& kg, EntityId start, int hops, Traversal mode, bool simple_only,
                     std::vector<char>& visited, std::vector<EntityId>& nodes, std::vector<RelationId>& rels,
                     OnPath& on_path) {
    nodes.assign(1, start);
    rels.clear();
    visited[start.value] = 1;
    bool keep_going = true;

    auto recurse = [&](auto&& self, EntityId at) -> void {
        const auto adj = kg.adjacency(at, mode);
        for (std::size_t i = 0; i < adj.size() && keep_going; ++i) {
            const auto& step = adj[i];
            if (visited[step.node.value]) continue;
            if (simple_only) {
                // Unique successor of (at, relation): neighbours share the relation.
                const bool prev_same = i > 0 && adj[i - 1].relation == step.relation;
                const bool next_same = i + 1 < adj.size() && adj[i + 1].relation == step.relation;
                if (prev_same || next_same) continue;
            }
            nodes.push_back(step.node);
            rels.push_back(step.relation);
            if (static_cast<int>(rels.size()) == hops) {
                if (mode == Traversal::directed || nodes.front() < nodes.back()) {
                    keep_going = on_path(nodes, rels);
                }
            } else {
                visited[step.node.value] = 1;
                self(self, step.node);
                visited[step.node.value] = 0;
            }
            nodes.pop_back();
            rels.pop_back();
        }
    };
    recurse(recurse, start);
    visited[start.value] = 0;
    return keep_going;
}

inline void check_enumerate_args(const KnowledgeGraph& kg, int hops) {
    if (hops < 2) {
        throw InputError("inferred facts need at least 2 hops (got " + std::to_string(hops) + ")");
    }
    (void)kg;
}

}  // namespace detail

// Streams every inferred fact of exactly `opts.hops` hops to `visit`, in
// lexicographic order. `visit` may return bool (false stops the stream) or void.
// Returns the number of facts delivered.
template <class Visitor>
std::size_t enumerate_inferred(const KnowledgeGraph& kg, const EnumerateOptions& opts, Visitor&& visit) {
    detail::check_enumerate_args(kg, opts.hops);
    const std::size_t limit = opts.limit.value_or(std::numeric_limits<std::size_t>::max());
    std::size_t delivered = 0;
    if (limit == 0 || kg.edge_count() == 0) return 0;

    auto deliver = [&](const InferredFact& fact) -> bool {
        if constexpr (std::is_same_v<std::invoke_result_t<Visitor&, const InferredFact&>, bool>) {
            if (!visit(fact)) return false;
        } else {
            visit(fact);
        }
        return ++delivered < limit;
    };

    const unsigned jobs = std::max(1u, opts.jobs);
    const std::size_t n = kg.entity_count();
    if (jobs == 1) {
        std::vector<char> visited(n, 0);
        std::vector<EntityId> nodes;
        std::vector<RelationId> rels;
        InferredFact fact;
        auto on_path = [&](const std::vector<EntityId>& ns, const std::vector<RelationId>& rs) {
            fact.nodes = ns;
            fact.relations = rs;
            return deliver(fact);
        };
        for (std::uint32_t v = 0; v < n; ++v) {
            if (!detail::walk_paths_from(kg, EntityId{v}, opts.hops, opts.mode, opts.simple_only, visited, nodes,
                                         rels, on_path)) {
                break;
            }
        }
        return delivered;
    }

    // Workers fill one run per start node; runs are emitted in start order.
    const std::size_t block = static_cast<std::size_t>(jobs) * 4;
    std::vector<std::vector<char>> visited(jobs, std::vector<char>(n, 0));
    std::vector<std::vector<EntityId>> node_buf(jobs);
    std::vector<std::vector<RelationId>> rel_buf(jobs);
    for (std::size_t base = 0; base < n; base += block) {
        const std::size_t count = std::min(block, n - base);
        std::vector<std::vector<InferredFact>> runs(count);
        const std::size_t remaining = limit - delivered;
        parallel_for(count, jobs, [&](unsigned w, std::size_t i) {
            auto& run = runs[i];
            auto on_path = [&](const std::vector<EntityId>& ns, const std::vector<RelationId>& rs) {
                run.push_back(InferredFact{ns, rs});
                return run.size() < remaining;
            };
            detail::walk_paths_from(kg, EntityId{static_cast<std::uint32_t>(base + i)}, opts.hops, opts.mode,
                                    opts.simple_only, visited[w], node_buf[w], rel_buf[w], on_path);
        });
        for (const auto& run : runs) {
            for (const auto& fact : run) {
                if (!deliver(fact)) return delivered;
            }
        }
    }
    return delivered;
}

inline std::vector<InferredFact> collect_inferred(const KnowledgeGraph& kg, const EnumerateOptions& opts) {
    std::vector<InferredFact> out;
    enumerate_inferred(kg, opts, [&](const InferredFact& f) { out.push_back(f); });
    return out;
}

// Exact counts of inferred facts. `per_relation[n][r]` counts the n-hop facts
// that use relation r at least once; a fact using r twice counts once.
struct InferredCounts {
    std::map<int, std::uint64_t> total;
    std::map<int, std::vector<std::uint64_t>> per_relation;
};

inline InferredCounts count_inferred_hops(const KnowledgeGraph& kg, int hops, Traversal mode, bool simple_only,
                                          unsigned jobs) {
    detail::check_enumerate_args(kg, hops);
    const std::size_t n = kg.entity_count();
    const std::size_t rcount = kg.relation_count();
    jobs = std::max(1u, jobs);
    struct Partial {
        std::uint64_t total = 0;
        std::vector<std::uint64_t> per_relation;
    };
    std::vector<Partial> partials(jobs);
    for (auto& p : partials) p.per_relation.assign(rcount, 0);
    std::vector<std::vector<char>> visited(jobs, std::vector<char>(n, 0));
    std::vector<std::vector<EntityId>> node_buf(jobs);
    std::vector<std::vector<RelationId>> rel_buf(jobs);

    if (kg.edge_count() > 0) {
        parallel_for(n, jobs, [&](unsigned w, std::size_t v) {
            auto& part = partials[w];
            auto on_path = [&](const std::vector<EntityId>&, const std::vector<RelationId>& rs) {
                ++part.total;
                for (std::size_t i = 0; i < rs.size(); ++i) {
                    bool seen = false;
                    for (std::size_t j = 0; j < i && !seen; ++j) seen = rs[j] == rs[i];
                    if (!seen) ++part.per_relation[rs[i].value];
                }
                return true;
            };
            detail::walk_paths_from(kg, EntityId{static_cast<std::uint32_t>(v)}, hops, mode, simple_only,
                                    visited[w], node_buf[w], rel_buf[w], on_path);
        });
    }

    InferredCounts out;
    auto& per = out.per_relation[hops];
    per.assign(rcount, 0);
    std::uint64_t total = 0;
    for (const auto& p : partials) {
        total += p.total;
        for (std::size_t r = 0; r < rcount; ++r) per[r] += p.per_relation[r];
    }
    out.total[hops] = total;
    return out;
}

inline std::uint64_t count_paths(const KnowledgeGraph& kg, int hops, Traversal mode, bool simple_only = false,
                                 unsigned jobs = 1) {
    return count_inferred_hops(kg, hops, mode, simple_only, jobs).total.at(hops);
}

// Counts for every hop order in [2, n_max].
inline InferredCounts inferred_fact_counts(const KnowledgeGraph& kg, int n_max, Traversal mode, bool simple_only = false,
                                           unsigned jobs = 1) {
    if (n_max < 2) {
        throw InputError("n_max must be at least 2 (got " + std::to_string(n_max) + ")");
    }
    InferredCounts out;
    for (int hops = 2; hops <= n_max; ++hops) {
        auto c = count_inferred_hops(kg, hops, mode, simple_only, jobs);
        out.total[hops] = c.total[hops];
        out.per_relation[hops] = std::move(c.per_relation[hops]);
    }
    return out;
}

// Independent oracle: counts ordered tuples of n+1 distinct nodes whose n
// consecutive directed edges exist, weighting each tuple by the number of
// relation choices per edge. Builds its own adjacency matrix from the fact
// list. Exponential; keep instances small.
inline std::uint64_t brute_force_path_count(const KnowledgeGraph& kg, int hops) {
    const std::size_t n = kg.entity_count();
    if (n == 0 || hops < 1) return 0;
    std::vector<std::uint64_t> multiplicity(n * n, 0);
    for (const auto& f : kg.facts()) ++multiplicity[f.head.value * n + f.tail.value];
    std::vector<char> used(n, 0);
    std::uint64_t total = 0;
    auto extend = [&](auto&& self, std::size_t at, int depth, std::uint64_t weight) -> void {
        if (depth == hops) {
            total += weight;
            return;
        }
        for (std::size_t next = 0; next < n; ++next) {
            if (used[next]) continue;
            const auto m = multiplicity[at * n + next];
            if (m == 0) continue;
            used[next] = 1;
            self(self, next, depth + 1, weight * m);
            used[next] = 0;
        }
    };
    for (std::size_t start = 0; start < n; ++start) {
        used[start] = 1;
        extend(extend, start, 0, 1);
        used[start] = 0;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Generalization ratios

enum class Generalizability { full, partial, none, unknown };

inline std::string_view to_string(Generalizability g) {
    switch (g) {
        case Generalizability::full: return "fully generalizable";
        case Generalizability::partial: return "partially generalizable";
        case Generalizability::none: return "not generalizable";
        case Generalizability::unknown: return "no threshold supplied";
    }
    return "?";
}

struct RelationPhi {
    std::string relation;
    std::uint64_t atomic_count = 0;
    Ratio branching;                        // b_r
    std::map<int, std::uint64_t> inferred;  // per hop order
    std::uint64_t inferred_count = 0;       // summed over hop orders
    std::optional<Ratio> phi;               // nullopt when atomic_count == 0
    std::optional<bool> meets_threshold;
};

struct PhiReport {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    Ratio global_b;
    std::string hop_order;  // "2", "3", ... or "all"
    std::string mode;
    std::map<int, std::uint64_t> inferred_total;
    std::uint64_t inferred_count = 0;
    std::optional<Ratio> global_phi;
    std::vector<RelationPhi> per_relation;  // sorted by relation label
    std::optional<Ratio> phi_threshold{};
    Generalizability verdict = Generalizability::unknown;
    std::vector<std::string> warnings;
};

// Raw tallies from which a PhiReport is derived; filled from a graph or a corpus.
struct PhiCounts {
    std::size_t node_count = 0;
    std::map<std::string, std::uint64_t> atomic;  // relation -> |F_A,r|
    std::map<std::string, std::map<int, std::uint64_t>> inferred;
    std::map<int, std::uint64_t> inferred_total;
};

// Verdict: a corpus whose overall ratio is below phi_G is not generalizable;
// otherwise the per-relation test decides between full, partial and none.
inline PhiReport make_phi_report(const PhiCounts& counts, std::string hop_order, std::string mode,
                                 std::optional<Ratio> phi_g) {
    PhiReport rep;
    rep.node_count = counts.node_count;
    rep.hop_order = std::move(hop_order);
    rep.mode = std::move(mode);
    rep.inferred_total = counts.inferred_total;
    rep.phi_threshold = phi_g;
    for (const auto& [_, c] : counts.atomic) rep.edge_count += c;
    for (const auto& [_, c] : counts.inferred_total) rep.inferred_count += c;
    const auto nodes = static_cast<std::int64_t>(std::max<std::size_t>(rep.node_count, 1));
    rep.global_b = rep.node_count ? Ratio(static_cast<std::int64_t>(rep.edge_count), nodes) : Ratio(0);
    if (rep.edge_count > 0) {
        rep.global_phi = Ratio(static_cast<std::int64_t>(rep.inferred_count), static_cast<std::int64_t>(rep.edge_count));
    }

    std::map<std::string, RelationPhi> rows;
    for (const auto& [rel, c] : counts.atomic) rows[rel].atomic_count = c;
    for (const auto& [rel, by_hop] : counts.inferred) rows[rel].inferred = by_hop;
    std::size_t defined = 0, meeting = 0;
    for (auto& [rel, row] : rows) {
        row.relation = rel;
        row.branching = rep.node_count ? Ratio(static_cast<std::int64_t>(row.atomic_count), nodes) : Ratio(0);
        for (const auto& [_, c] : row.inferred) row.inferred_count += c;
        if (row.atomic_count == 0) {
            rep.warnings.push_back("relation '" + rel + "' has no atomic facts; phi undefined and excluded from the verdict");
        } else {
            row.phi = Ratio(static_cast<std::int64_t>(row.inferred_count), static_cast<std::int64_t>(row.atomic_count));
            ++defined;
            if (phi_g) {
                row.meets_threshold = *row.phi >= *phi_g;
                if (*row.meets_threshold) ++meeting;
            }
        }
        rep.per_relation.push_back(std::move(row));
    }

    if (phi_g) {
        if (!rep.global_phi || *rep.global_phi < *phi_g || meeting == 0) {
            rep.verdict = Generalizability::none;
        } else if (meeting == defined) {
            rep.verdict = Generalizability::full;
        } else {
            rep.verdict = Generalizability::partial;
        }
    }
    return rep;
}

struct PhiOptions {
    std::optional<int> hops = 2;  // nullopt: all hop orders >= 2
    Traversal mode = Traversal::undirected;
    bool simple_only = false;
    std::optional<Ratio> phi_threshold{};
    int max_hops = 8;  // cap when hops is "all"
    unsigned jobs = 1;
};

inline PhiReport compute_phi(const KnowledgeGraph& kg, const PhiOptions& opts) {
    if (kg.empty()) {
        throw InputError("cannot compute phi of an empty graph");
    }
    PhiCounts counts;
    counts.node_count = kg.entity_count();
    for (std::uint32_t r = 0; r < kg.relation_count(); ++r) {
        counts.atomic[kg.label(RelationId{r})] = kg.relation_fact_count(RelationId{r});
    }
    auto add_hop = [&](int hops) {
        auto c = count_inferred_hops(kg, hops, opts.mode, opts.simple_only, opts.jobs);
        counts.inferred_total[hops] = c.total[hops];
        const auto& per = c.per_relation[hops];
        for (std::uint32_t r = 0; r < per.size(); ++r) {
            counts.inferred[kg.label(RelationId{r})][hops] = per[r];
        }
        return c.total[hops];
    };
    std::string hop_label;
    std::vector<std::string> warnings;
    if (opts.hops) {
        add_hop(*opts.hops);
        hop_label = std::to_string(*opts.hops);
    } else {
        hop_label = "all";
        const int longest = static_cast<int>(std::min<std::size_t>(kg.entity_count() - 1, 1u << 20));
        int hops = 2;
        for (; hops <= longest && hops <= opts.max_hops; ++hops) {
            // No n-hop path means no longer path either.
            if (add_hop(hops) == 0) break;
        }
        if (hops > opts.max_hops && hops <= longest) {
            warnings.push_back("hop orders above " + std::to_string(opts.max_hops) + " not counted (max_hops cap)");
        }
    }
    auto rep = make_phi_report(counts, hop_label, std::string(to_string(opts.mode)), opts.phi_threshold);
    rep.warnings.insert(rep.warnings.end(), warnings.begin(), warnings.end());
    return rep;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json ratio_json(const Ratio& r) {
    return nlohmann::json{{"exact", to_string(r)}, {"value", to_double(r)}};
}

inline nlohmann::json to_json(const PhiReport& rep) {
    nlohmann::json j;
    j["node_count"] = rep.node_count;
    j["edge_count"] = rep.edge_count;
    j["global_b"] = ratio_json(rep.global_b);
    j["hop_order"] = rep.hop_order;
    j["mode"] = rep.mode;
    j["inferred_count"] = rep.inferred_count;
    nlohmann::json totals = nlohmann::json::object();
    for (const auto& [n, c] : rep.inferred_total) totals[std::to_string(n)] = c;
    j["inferred_total"] = totals;
    j["global_phi"] = rep.global_phi ? ratio_json(*rep.global_phi) : nlohmann::json(nullptr);
    j["phi_threshold"] = rep.phi_threshold ? ratio_json(*rep.phi_threshold) : nlohmann::json(nullptr);
    j["verdict"] = std::string(to_string(rep.verdict));
    nlohmann::json rels = nlohmann::json::object();
    for (const auto& row : rep.per_relation) {
        nlohmann::json r;
        r["atomic_count"] = row.atomic_count;
        r["b_r"] = ratio_json(row.branching);
        r["inferred_count"] = row.inferred_count;
        nlohmann::json by_hop = nlohmann::json::object();
        for (const auto& [n, c] : row.inferred) by_hop[std::to_string(n)] = c;
        r["inferred_by_hop"] = by_hop;
        r["phi"] = row.phi ? ratio_json(*row.phi) : nlohmann::json("undefined");
        r["meets_threshold"] = row.meets_threshold ? nlohmann::json(*row.meets_threshold) : nlohmann::json(nullptr);
        rels[row.relation] = r;
    }
    j["relations"] = rels;
    j["warnings"] = rep.warnings;
    return j;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace detail

// One row per (relation, hop order).
inline void write_csv(const PhiReport& rep, std::ostream& out) {
    out << "relation,n,atomic_count,inferred_count,b_r,phi,meets_threshold\n";
    for (const auto& row : rep.per_relation) {
        for (const auto& [n, c] : row.inferred) {
            out << detail::csv_field(row.relation) << ',' << n << ',' << row.atomic_count << ',' << c << ','
                << to_string(row.branching) << ',';
            if (row.atomic_count == 0) {
                out << "undefined";
            } else {
                out << to_string(Ratio(static_cast<std::int64_t>(c), static_cast<std::int64_t>(row.atomic_count)));
            }
            out << ',';
            if (row.meets_threshold) out << (*row.meets_threshold ? "true" : "false");
            out << '\n';
        }
    }
}

}  // namespace grokforge
