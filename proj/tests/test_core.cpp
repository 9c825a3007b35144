#include "grokforge/kg.hpp"
#include "grokforge/parallel.hpp"
#include "grokforge/path_enum.hpp"
#include "grokforge/qa.hpp"
#include "grokforge/rational.hpp"
#include "grokforge/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace grokforge;

namespace {

KnowledgeGraph example_graph() {
    KnowledgeGraph kg;
    kg.add_fact("Michelle", "wife of", "Obama");
    kg.add_fact("Michelle", "born in", "1964");
    kg.add_fact("Mary Poppins", "aired in", "1964");
    return kg;
}

KnowledgeGraph augmented_example_graph() {
    auto kg = example_graph();
    kg.add_fact("Michelle", "educated at", "Princeton University");
    kg.add_fact("Ford Mustang", "introduced in", "1964");
    return kg;
}

// Random multi-relation graph built with the test's own RNG.
KnowledgeGraph random_graph(std::mt19937_64& gen, int max_nodes, int relations, double density) {
    std::uniform_int_distribution<int> nodes_dist(2, max_nodes);
    const int n = nodes_dist(gen);
    std::bernoulli_distribution edge(density);
    std::uniform_int_distribution<int> rel(0, relations - 1);
    KnowledgeGraph kg;
    for (int i = 0; i < n; ++i) kg.intern_entity("e" + std::to_string(i));
    for (int h = 0; h < n; ++h) {
        for (int t = 0; t < n; ++t) {
            if (h != t && edge(gen)) kg.add_fact("e" + std::to_string(h), "r" + std::to_string(rel(gen)), "e" + std::to_string(t));
        }
    }
    return kg;
}

std::vector<std::string> labels_of(const KnowledgeGraph& kg, const InferredFact& f) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
        out.push_back(kg.label(f.nodes[i]));
        if (i < f.relations.size()) out.push_back(kg.label(f.relations[i]));
    }
    return out;
}

// Independent count of directed n-hop paths: every ordered tuple of distinct
// nodes, multiplied by the number of relations joining each consecutive pair.
std::uint64_t permutation_count(const KnowledgeGraph& kg, int hops) {
    const std::size_t n = kg.entity_count();
    std::vector<std::vector<std::uint64_t>> mult(n, std::vector<std::uint64_t>(n, 0));
    for (const auto& f : kg.facts()) ++mult[f.head.value][f.tail.value];
    std::uint64_t total = 0;
    std::vector<std::size_t> tuple;
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, std::uint64_t weight) -> void {
        if (static_cast<int>(tuple.size()) == hops + 1) {
            total += weight;
            return;
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (used[v]) continue;
            std::uint64_t w = weight;
            if (!tuple.empty()) {
                w *= mult[tuple.back()][v];
                if (w == 0) continue;
            }
            used[v] = 1;
            tuple.push_back(v);
            self(self, w);
            tuple.pop_back();
            used[v] = 0;
        }
    };
    rec(rec, 1);
    return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// rational

TEST(Rational, ParsesIntegersFractionsAndDecimals) {
    EXPECT_EQ(parse_ratio("3"), Ratio(3));
    EXPECT_EQ(parse_ratio("3/4"), Ratio(3, 4));
    EXPECT_EQ(parse_ratio("0.75"), Ratio(3, 4));
    EXPECT_EQ(parse_ratio("3.6"), Ratio(18, 5));
    EXPECT_EQ(parse_ratio("-1.5"), Ratio(-3, 2));
    EXPECT_EQ(to_string(Ratio(6, 5)), "6/5");
    EXPECT_EQ(to_string(Ratio(4, 2)), "2");
    EXPECT_THROW(parse_ratio("abc"), std::invalid_argument);
    EXPECT_THROW(parse_ratio("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_ratio(""), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// kg-core

TEST(KnowledgeGraph, AddFactStoresAndInterns) {
    KnowledgeGraph kg;
    const auto f = kg.add_fact("Michelle", "wife of", "Obama");
    EXPECT_EQ(kg.edge_count(), 1u);
    EXPECT_EQ(kg.entity_count(), 2u);
    EXPECT_EQ(kg.relation_count(), 1u);
    EXPECT_EQ(kg.label(f.head), "Michelle");
    EXPECT_EQ(kg.label(f.relation), "wife of");
    EXPECT_EQ(kg.label(f.tail), "Obama");
}

TEST(KnowledgeGraph, DuplicateIsIdempotent) {
    KnowledgeGraph kg;
    const auto a = kg.add_fact("Michelle", "wife of", "Obama");
    const auto b = kg.add_fact("Michelle", "wife of", "Obama");
    EXPECT_EQ(a, b);
    EXPECT_EQ(kg.edge_count(), 1u);
    EXPECT_EQ(kg.successors(a.head).size(), 1u);
}

TEST(KnowledgeGraph, SelfLoopRejected) {
    KnowledgeGraph kg;
    EXPECT_THROW(kg.add_fact("Paris", "self", "Paris"), InputError);
    EXPECT_EQ(kg.edge_count(), 0u);
    const auto p = kg.intern_entity("Paris");
    const auto r = kg.intern_relation("self");
    EXPECT_THROW(kg.add_fact(p, r, p), InputError);
}

TEST(KnowledgeGraph, LabelsTrimmedAndCaseSensitive) {
    KnowledgeGraph kg;
    kg.add_fact("  Paris ", "capital of", "France");
    kg.add_fact("paris", "capital of", "France");
    EXPECT_TRUE(kg.find_entity("Paris"));
    EXPECT_TRUE(kg.find_entity("paris"));
    EXPECT_EQ(kg.entity_count(), 3u);
    EXPECT_THROW(kg.add_fact("", "r", "x"), InputError);
    EXPECT_THROW(kg.add_fact("a\tb", "r", "x"), InputError);
}

TEST(KnowledgeGraph, InferenceStepDirectedAndUndirected) {
    const auto kg = example_graph();
    const auto obama = *kg.find_entity("Obama");
    const auto y1964 = *kg.find_entity("1964");
    const auto wife = *kg.find_relation("wife of");
    const auto aired = *kg.find_relation("aired in");

    const auto wife_of_obama = kg.inference_step(obama, wife, Traversal::undirected);
    ASSERT_EQ(wife_of_obama.size(), 1u);
    EXPECT_EQ(kg.label(wife_of_obama[0]), "Michelle");

    const auto aired_1964 = kg.inference_step(y1964, aired, Traversal::undirected);
    ASSERT_EQ(aired_1964.size(), 1u);
    EXPECT_EQ(kg.label(aired_1964[0]), "Mary Poppins");

    EXPECT_TRUE(kg.inference_step(y1964, aired, Traversal::directed).empty());
}

TEST(KnowledgeGraph, InferenceStepUnknownIdsRejected) {
    const auto kg = example_graph();
    EXPECT_THROW(kg.inference_step(EntityId{99}, RelationId{0}, Traversal::directed), InputError);
    EXPECT_THROW(kg.inference_step(EntityId{0}, RelationId{99}, Traversal::directed), InputError);
}

TEST(KnowledgeGraph, InferenceStepAscendingIds) {
    KnowledgeGraph kg;
    kg.add_fact("hub", "r", "c");
    kg.add_fact("hub", "r", "a");
    kg.add_fact("b", "r", "hub");
    const auto hub = *kg.find_entity("hub");
    const auto r = *kg.find_relation("r");
    const auto out = kg.inference_step(hub, r, Traversal::undirected);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_TRUE(std::is_sorted(out.begin(), out.end()));
}

TEST(KnowledgeGraph, BranchingFactorExamples) {
    EXPECT_EQ(branching_factor(example_graph()), Ratio(3, 4));

    KnowledgeGraph isolated;
    for (int i = 0; i < 5; ++i) isolated.intern_entity("n" + std::to_string(i));
    EXPECT_EQ(branching_factor(isolated), Ratio(0));

    KnowledgeGraph ten;
    for (int i = 0; i < 10; ++i) {
        ten.add_fact("v" + std::to_string(i), "r", "v" + std::to_string((i + 1) % 10));
        ten.add_fact("v" + std::to_string(i), "r", "v" + std::to_string((i + 2) % 10));
    }
    EXPECT_EQ(ten.edge_count(), 20u);
    EXPECT_EQ(branching_factor(ten), Ratio(2));
    EXPECT_EQ(branching_factor(ten, ten.find_relation("r")), Ratio(2));

    EXPECT_THROW(branching_factor(KnowledgeGraph{}), InputError);
}

TEST(KnowledgeGraphProperty, BranchingTimesNodesIsEdgeCount) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto kg = random_graph(gen, 15, 3, 0.2);
        EXPECT_EQ(branching_factor(kg) * Ratio(static_cast<std::int64_t>(kg.entity_count())),
                  Ratio(static_cast<std::int64_t>(kg.edge_count())));
        std::size_t sum = 0;
        for (std::uint32_t r = 0; r < kg.relation_count(); ++r) sum += kg.relation_fact_count(RelationId{r});
        EXPECT_EQ(sum, kg.edge_count());
    }
}

TEST(KnowledgeGraphProperty, DirectedStepSubsetOfUndirected) {
    std::mt19937_64 gen(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto kg = random_graph(gen, 12, 3, 0.25);
        for (std::uint32_t v = 0; v < kg.entity_count(); ++v) {
            for (std::uint32_t r = 0; r < kg.relation_count(); ++r) {
                const auto d = kg.inference_step(EntityId{v}, RelationId{r}, Traversal::directed);
                const auto u = kg.inference_step(EntityId{v}, RelationId{r}, Traversal::undirected);
                EXPECT_TRUE(std::includes(u.begin(), u.end(), d.begin(), d.end()));
            }
        }
    }
}

TEST(KnowledgeGraphProperty, TsvRoundTrip) {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto kg = random_graph(gen, 12, 4, 0.3);
        std::stringstream ss;
        write_tsv(kg, ss);
        const auto text = ss.str();
        std::istringstream in("# comment line\n" + text);
        const auto back = read_tsv(in);
        std::set<std::tuple<std::string, std::string, std::string>> a, b;
        for (const auto& f : kg.facts()) a.insert({kg.label(f.head), kg.label(f.relation), kg.label(f.tail)});
        for (const auto& f : back.facts()) b.insert({back.label(f.head), back.label(f.relation), back.label(f.tail)});
        EXPECT_EQ(a, b);
        std::stringstream again;
        write_tsv(back, again);
        EXPECT_EQ(again.str(), text);
    }
}

TEST(KnowledgeGraph, TsvRejectsMalformedLines) {
    std::istringstream bad("a\tb\n");
    EXPECT_THROW(read_tsv(bad), InputError);
    std::istringstream loop("a\tr\ta\n");
    EXPECT_THROW(read_tsv(loop), InputError);
}

// ---------------------------------------------------------------------------
// path-enum

TEST(PathEnum, TwoHopExampleChain) {
    const auto kg = example_graph();
    const auto paths = collect_inferred(kg, {.hops = 2, .mode = Traversal::undirected});
    std::vector<std::vector<std::string>> as_labels;
    for (const auto& p : paths) as_labels.push_back(labels_of(kg, p));
    const std::vector<std::string> expected{"Obama", "wife of", "Michelle", "born in", "1964"};
    EXPECT_NE(std::find(as_labels.begin(), as_labels.end(), expected), as_labels.end());
    EXPECT_EQ(paths.size(), 2u);
}

TEST(PathEnum, ThreeHopExampleChain) {
    const auto kg = example_graph();
    const auto paths = collect_inferred(kg, {.hops = 3, .mode = Traversal::undirected});
    ASSERT_EQ(paths.size(), 1u);
    const std::vector<std::string> expected{"Obama", "wife of", "Michelle", "born in", "1964", "aired in",
                                            "Mary Poppins"};
    EXPECT_EQ(labels_of(kg, paths[0]), expected);
}

TEST(PathEnum, EdgelessGraphYieldsNothing) {
    KnowledgeGraph kg;
    kg.intern_entity("a");
    kg.intern_entity("b");
    for (int n = 2; n <= 4; ++n) {
        EXPECT_TRUE(collect_inferred(kg, {.hops = n, .mode = Traversal::undirected}).empty());
        EXPECT_TRUE(collect_inferred(kg, {.hops = n, .mode = Traversal::directed}).empty());
    }
}

TEST(PathEnum, HopsBelowTwoRejected) {
    const auto kg = example_graph();
    EXPECT_THROW(collect_inferred(kg, {.hops = 1}), InputError);
    EXPECT_THROW(inferred_fact_counts(kg, 1, Traversal::undirected), InputError);
}

TEST(PathEnum, SmallExampleCounts) {
    const auto base = inferred_fact_counts(example_graph(), 2, Traversal::undirected);
    EXPECT_EQ(base.total.at(2), 2u);
    const auto aug = inferred_fact_counts(augmented_example_graph(), 2, Traversal::undirected);
    EXPECT_EQ(aug.total.at(2), 6u);
}

TEST(PathEnum, SingleEdgeGraphCountsZero) {
    KnowledgeGraph kg;
    kg.add_fact("a", "r", "b");
    const auto c = inferred_fact_counts(kg, 3, Traversal::undirected);
    for (const auto& [n, total] : c.total) EXPECT_EQ(total, 0u) << "n=" << n;
    for (const auto& [n, per] : c.per_relation) {
        for (auto v : per) EXPECT_EQ(v, 0u);
    }
}

TEST(PathEnum, RepeatedRelationCountsOncePerPath) {
    KnowledgeGraph kg;
    kg.add_fact("a", "r", "b");
    kg.add_fact("b", "r", "c");
    kg.add_fact("c", "s", "d");
    const auto c = count_inferred_hops(kg, 2, Traversal::directed, false, 1);
    const auto r = kg.find_relation("r")->value;
    const auto s = kg.find_relation("s")->value;
    EXPECT_EQ(c.total.at(2), 2u);          // a-b-c, b-c-d
    EXPECT_EQ(c.per_relation.at(2)[r], 2u);  // a-b-c counts once for r
    EXPECT_EQ(c.per_relation.at(2)[s], 1u);
}

TEST(PathEnum, SimpleOnlyRequiresUniqueSuccessor) {
    KnowledgeGraph kg;
    kg.add_fact("a", "r", "b");
    kg.add_fact("b", "s", "c");
    kg.add_fact("b", "s", "d");
    EXPECT_EQ(count_paths(kg, 2, Traversal::directed, false), 2u);
    EXPECT_EQ(count_paths(kg, 2, Traversal::directed, true), 0u);
    kg.add_fact("c", "t", "e");
    // b -s-> c is still ambiguous, so no simple 2-hop path passes through it.
    EXPECT_EQ(count_paths(kg, 2, Traversal::directed, true), 0u);
}

TEST(PathEnum, LexicographicOrderAndLimitPrefix) {
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto kg = random_graph(gen, 10, 3, 0.3);
        for (auto mode : {Traversal::directed, Traversal::undirected}) {
            const auto all = collect_inferred(kg, {.hops = 2, .mode = mode});
            auto key = [](const InferredFact& f) {
                std::vector<std::uint32_t> k;
                for (std::size_t i = 0; i < f.nodes.size(); ++i) {
                    k.push_back(f.nodes[i].value);
                    if (i < f.relations.size()) k.push_back(f.relations[i].value);
                }
                return k;
            };
            for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LT(key(all[i - 1]), key(all[i]));
            for (std::size_t limit : {std::size_t{0}, std::size_t{1}, all.size() / 2, all.size() + 5}) {
                const auto some = collect_inferred(kg, {.hops = 2, .mode = mode, .limit = limit});
                ASSERT_EQ(some.size(), std::min(limit, all.size()));
                EXPECT_TRUE(std::equal(some.begin(), some.end(), all.begin()));
            }
        }
    }
}

TEST(PathEnum, ParallelStreamMatchesSerial) {
    std::mt19937_64 gen(22);
    for (int trial = 0; trial < 10; ++trial) {
        const auto kg = random_graph(gen, 14, 3, 0.25);
        for (int n : {2, 3}) {
            const auto serial = collect_inferred(kg, {.hops = n, .mode = Traversal::undirected, .jobs = 1});
            const auto parallel = collect_inferred(kg, {.hops = n, .mode = Traversal::undirected, .jobs = 4});
            EXPECT_EQ(serial, parallel);
            const auto limited = collect_inferred(kg, {.hops = n, .mode = Traversal::undirected, .limit = 7, .jobs = 3});
            ASSERT_EQ(limited.size(), std::min<std::size_t>(7, serial.size()));
            EXPECT_TRUE(std::equal(limited.begin(), limited.end(), serial.begin()));
            const auto c1 = count_inferred_hops(kg, n, Traversal::undirected, false, 1);
            const auto c4 = count_inferred_hops(kg, n, Traversal::undirected, false, 4);
            EXPECT_EQ(c1.total, c4.total);
            EXPECT_EQ(c1.per_relation, c4.per_relation);
        }
    }
}

TEST(PathEnumProperty, ReplayReconstructsNodes) {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto kg = random_graph(gen, 10, 3, 0.3);
        for (auto mode : {Traversal::directed, Traversal::undirected}) {
            for (const auto& f : collect_inferred(kg, {.hops = 3, .mode = mode})) {
                std::set<std::uint32_t> distinct;
                for (auto v : f.nodes) distinct.insert(v.value);
                EXPECT_EQ(distinct.size(), f.nodes.size());
                EXPECT_GE(f.hops(), 2u);
                for (std::size_t i = 0; i < f.relations.size(); ++i) {
                    const auto next = kg.inference_step(f.nodes[i], f.relations[i], mode);
                    EXPECT_TRUE(std::binary_search(next.begin(), next.end(), f.nodes[i + 1]));
                }
            }
        }
    }
}

TEST(PathEnumProperty, EnumerationMatchesOracles) {
    std::mt19937_64 gen(24);
    for (int trial = 0; trial < 40; ++trial) {
        const auto kg = random_graph(gen, 9, 2, 0.3);
        for (int n : {2, 3}) {
            const auto counted = collect_inferred(kg, {.hops = n, .mode = Traversal::directed}).size();
            EXPECT_EQ(counted, brute_force_path_count(kg, n));
            EXPECT_EQ(counted, permutation_count(kg, n));
        }
    }
}

TEST(PathEnum, BruteForceExamples) {
    KnowledgeGraph complete;
    for (int h = 0; h < 4; ++h) {
        for (int t = 0; t < 4; ++t) {
            if (h != t) complete.add_fact("n" + std::to_string(h), "r", "n" + std::to_string(t));
        }
    }
    EXPECT_EQ(brute_force_path_count(complete, 2), 24u);
    // Frozen from the exhaustive DFS: the base graph has no directed 2-hop path.
    EXPECT_EQ(brute_force_path_count(example_graph(), 2), permutation_count(example_graph(), 2));
    EXPECT_EQ(brute_force_path_count(example_graph(), 2), 0u);
    EXPECT_EQ(brute_force_path_count(KnowledgeGraph{}, 2), 0u);
}

TEST(PathEnumProperty, UndirectedCountsEachUnorderedPathOnce) {
    std::mt19937_64 gen(25);
    for (int trial = 0; trial < 20; ++trial) {
        const auto kg = random_graph(gen, 9, 2, 0.3);
        // Count both orientations over the symmetric closure and halve.
        KnowledgeGraph sym;
        for (std::uint32_t v = 0; v < kg.entity_count(); ++v) sym.intern_entity(kg.label(EntityId{v}));
        for (const auto& f : kg.facts()) {
            sym.add_fact(kg.label(f.head), kg.label(f.relation), kg.label(f.tail));
            sym.add_fact(kg.label(f.tail), kg.label(f.relation), kg.label(f.head));
        }
        for (int n : {2, 3}) {
            EXPECT_EQ(2 * count_paths(kg, n, Traversal::undirected), brute_force_path_count(sym, n));
        }
    }
}

// ---------------------------------------------------------------------------
// phi

TEST(Phi, SmallExampleRatios) {
    const auto base = compute_phi(example_graph(), {.hops = 2, .phi_threshold = Ratio(1)});
    ASSERT_TRUE(base.global_phi);
    EXPECT_EQ(*base.global_phi, Ratio(2, 3));
    EXPECT_EQ(base.verdict, Generalizability::none);

    const auto aug = compute_phi(augmented_example_graph(), {.hops = 2, .phi_threshold = Ratio(1)});
    ASSERT_TRUE(aug.global_phi);
    EXPECT_EQ(*aug.global_phi, Ratio(6, 5));
    EXPECT_EQ(aug.verdict, Generalizability::full);
}

TEST(Phi, PerRelationRatiosExact) {
    const auto rep = compute_phi(example_graph(), {.hops = 2});
    std::map<std::string, Ratio> phi;
    for (const auto& r : rep.per_relation) phi[r.relation] = *r.phi;
    EXPECT_EQ(phi.at("born in"), Ratio(2));
    EXPECT_EQ(phi.at("wife of"), Ratio(1));
    EXPECT_EQ(phi.at("aired in"), Ratio(1));
    EXPECT_EQ(rep.verdict, Generalizability::unknown);
}

TEST(Phi, CorpusOfSeedSizes) {
    std::vector<QAItem> atomic(120), inferred(60);
    for (std::size_t i = 0; i < atomic.size(); ++i) {
        atomic[i].kind = ItemKind::atomic;
        atomic[i].source_facts = {{"loc" + std::to_string(i), "country", "C" + std::to_string(i % 5)}};
    }
    for (std::size_t i = 0; i < inferred.size(); ++i) {
        inferred[i].kind = ItemKind::inferred;
        inferred[i].hops = 2;
        inferred[i].source_facts = {atomic[2 * i].source_facts[0], atomic[2 * i + 1].source_facts[0]};
    }
    const auto rep = corpus_phi(atomic, inferred);
    EXPECT_EQ(*rep.global_phi, Ratio(1, 2));
}

TEST(Phi, UndefinedRelationFlagged) {
    PhiCounts counts;
    counts.node_count = 3;
    counts.atomic["r"] = 2;
    counts.inferred["r"][2] = 4;
    counts.inferred["ghost"][2] = 1;
    counts.inferred_total[2] = 4;
    const auto rep = make_phi_report(counts, "2", "corpus", Ratio(1));
    bool ghost_seen = false;
    for (const auto& r : rep.per_relation) {
        if (r.relation == "ghost") {
            ghost_seen = true;
            EXPECT_FALSE(r.phi);
        }
    }
    EXPECT_TRUE(ghost_seen);
    EXPECT_FALSE(rep.warnings.empty());
    EXPECT_EQ(rep.verdict, Generalizability::full);
}

TEST(Phi, PartialVerdict) {
    KnowledgeGraph kg;
    kg.add_fact("a", "r", "b");
    kg.add_fact("b", "r", "c");
    kg.add_fact("c", "r", "d");
    kg.add_fact("x", "s", "y");
    kg.add_fact("p", "s", "q");
    kg.add_fact("d", "r", "e");
    const auto rep = compute_phi(kg, {.hops = 2, .phi_threshold = Ratio(1, 2)});
    // r: 3 paths over 4 facts, s: none. Global 3/6.
    EXPECT_EQ(*rep.global_phi, Ratio(1, 2));
    EXPECT_EQ(rep.verdict, Generalizability::partial);
}

TEST(Phi, EmptyGraphRejected) { EXPECT_THROW(compute_phi(KnowledgeGraph{}, {}), InputError); }

TEST(PhiProperty, RelabelingInvariance) {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto kg = random_graph(gen, 10, 3, 0.3);
        // Rebuild with shuffled entity ids and renamed labels.
        std::vector<std::uint32_t> perm(kg.entity_count());
        std::iota(perm.begin(), perm.end(), 0u);
        std::shuffle(perm.begin(), perm.end(), gen);
        KnowledgeGraph relabeled;
        for (auto v : perm) relabeled.intern_entity("x" + kg.label(EntityId{v}));
        auto facts = kg.facts();
        std::shuffle(facts.begin(), facts.end(), gen);
        for (const auto& f : facts) {
            relabeled.add_fact("x" + kg.label(f.head), "q" + kg.label(f.relation), "x" + kg.label(f.tail));
        }
        for (auto mode : {Traversal::directed, Traversal::undirected}) {
            for (int n : {2, 3}) {
                const auto a = compute_phi(kg, {.hops = n, .mode = mode});
                const auto b = compute_phi(relabeled, {.hops = n, .mode = mode});
                EXPECT_EQ(a.global_phi, b.global_phi);
                ASSERT_EQ(a.per_relation.size(), b.per_relation.size());
                for (std::size_t i = 0; i < a.per_relation.size(); ++i) {
                    EXPECT_EQ("q" + a.per_relation[i].relation, b.per_relation[i].relation);
                    EXPECT_EQ(a.per_relation[i].phi, b.per_relation[i].phi);
                }
            }
        }
    }
}

TEST(Phi, AllHopOrdersStopAtLongestPath) {
    const auto rep = compute_phi(example_graph(), {.hops = std::nullopt});
    EXPECT_EQ(rep.hop_order, "all");
    EXPECT_EQ(rep.inferred_total.at(2), 2u);
    EXPECT_EQ(rep.inferred_total.at(3), 1u);
    EXPECT_EQ(*rep.global_phi, Ratio(1));
}

TEST(Phi, JsonIsKeySortedAndDeterministic) {
    const auto rep = compute_phi(augmented_example_graph(), {.hops = 2, .phi_threshold = Ratio(1)});
    const auto a = to_json(rep).dump();
    const auto b = to_json(compute_phi(augmented_example_graph(), {.hops = 2, .phi_threshold = Ratio(1)})).dump();
    EXPECT_EQ(a, b);
    const auto j = nlohmann::json::parse(a);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
    std::ostringstream csv;
    write_csv(rep, csv);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "relation,n,atomic_count,inferred_count,b_r,phi,meets_threshold");
}

// ---------------------------------------------------------------------------
// rng, parallel, qa

TEST(Rng, DeterministicAndInRange) {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next(), b.next());
    Rng r(7);
    std::vector<int> hist(7, 0);
    for (int i = 0; i < 70000; ++i) ++hist[r.below(7)];
    for (int h : hist) EXPECT_NEAR(h, 10000, 500);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform01();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
    EXPECT_NE(derive_seed(1, {0, 1}), derive_seed(1, {1, 0}));
    EXPECT_EQ(derive_seed(9, {3, 4}), derive_seed(9, {3, 4}));
}

TEST(Parallel, CoversEveryIndexOnce) {
    for (unsigned jobs : {1u, 2u, 5u}) {
        std::vector<int> hits(101, 0);
        parallel_for(hits.size(), jobs, [&](unsigned, std::size_t i) { ++hits[i]; });
        for (int h : hits) EXPECT_EQ(h, 1);
    }
    EXPECT_THROW(parallel_for(10, 3,
                              [](unsigned, std::size_t i) {
                                  if (i == 4) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}

TEST(QAItem, JsonFieldOrderAndRoundTrip) {
    QAItem item;
    item.id = "composition-inferred-000001";
    item.kind = ItemKind::inferred;
    item.task = Task::composition;
    item.hops = 2;
    item.question = "Which year was Obama's wife born?";
    item.answer = "1964";
    item.path = LabeledPath{{"Obama", "Michelle", "1964"}, {"wife of", "born in"}};
    item.source_facts = path_facts(*item.path);
    item.synthetic = true;
    const auto j = to_json(item);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    const std::vector<std::string> expected{"id",   "kind",         "task",      "hops",     "question", "answer",
                                            "path", "source_facts", "synthetic", "detailed", "split"};
    EXPECT_EQ(keys, expected);
    EXPECT_EQ(j["path"].size(), 5u);
    EXPECT_TRUE(j["split"].is_null());

    std::stringstream ss;
    write_jsonl({item}, ss);
    const auto back = read_jsonl(ss);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(to_json(back[0]).dump(), j.dump());
}

TEST(QAItem, MalformedJsonlReportsLine) {
    std::istringstream in("\n{\"id\": 1}\n");
    try {
        read_jsonl(in);
        FAIL() << "expected an error";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}
