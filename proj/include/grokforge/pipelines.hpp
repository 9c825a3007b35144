#pragma once

// End-to-end augmentation pipelines for the comparison and composition tasks,
// and the built-in seed corpora they start from.

#include "grokforge/augment.hpp"
#include "grokforge/backend.hpp"
#include "grokforge/error.hpp"
#include "grokforge/kg.hpp"
#include "grokforge/lexicon.hpp"
#include "grokforge/path_enum.hpp"
#include "grokforge/qa.hpp"
#include "grokforge/rational.hpp"
#include "grokforge/rng.hpp"

#include <fmt/format.h>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace grokforge {

// Fixed seeds so the built-in corpora never change with the run seed.
inline constexpr std::uint64_t kSeedCorpusSeed = 0x5eedc0de2024ULL;

inline constexpr std::size_t kComparisonSeedAtomic = 120;
inline constexpr std::size_t kComparisonSeedInferred = 60;
inline constexpr std::size_t kCompositionSeedAtomic = 200;
inline constexpr std::size_t kCompositionSeedInferred = 100;

// Seed locations for the requested countries, interleaved by country and
// truncated to `limit`.
inline std::vector<QAItem> comparison_seed_atomic(const std::vector<std::string>& countries,
                                                  std::size_t limit = kComparisonSeedAtomic) {
    std::vector<std::vector<const lexicon::SeedLocation*>> by_country(countries.size());
    for (const auto& s : lexicon::kSeedLocations) {
        for (std::size_t c = 0; c < countries.size(); ++c) {
            if (s.country == countries[c]) by_country[c].push_back(&s);
        }
    }
    std::vector<QAItem> out;
    for (std::size_t i = 0; out.size() < limit; ++i) {
        bool any = false;
        for (const auto& bucket : by_country) {
            if (i < bucket.size() && out.size() < limit) {
                out.push_back(make_location_item(std::string(bucket[i]->name), std::string(bucket[i]->country), false));
                any = true;
            }
        }
        if (!any) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Composition seed world

namespace detail {

class SeedWorld {
public:
    explicit SeedWorld(std::size_t limit) : limit_(limit), rng_(kSeedCorpusSeed) {}

    bool full() const { return facts_.size() >= limit_; }

    void add(const std::string& h, const std::string& ht, const std::string& r, const std::string& t,
             const std::string& tt) {
        if (full()) return;
        if (!seen_.insert({h, r, t}).second) return;
        facts_.push_back(fmt::format("<{}; {}><{}><{}; {}>", h, ht, r, t, tt));
    }

    std::string person() {
        while (true) {
            auto name = fmt::format("{} {}", lexicon::kFirstNames[rng_.below(lexicon::kFirstNames.size())],
                                    lexicon::kLastNames[rng_.below(lexicon::kLastNames.size())]);
            if (names_.insert(name).second) return name;
        }
    }

    std::string film() {
        while (true) {
            auto name = fmt::format("The {} {}", lexicon::kTitleAdjectives[rng_.below(lexicon::kTitleAdjectives.size())],
                                    lexicon::kTitleNouns[rng_.below(lexicon::kTitleNouns.size())]);
            if (names_.insert(name).second) return name;
        }
    }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[rng_.below(v.size())];
    }

    std::uint64_t below(std::uint64_t n) { return rng_.below(n); }

    std::string text() const {
        std::string out;
        for (std::size_t i = 0; i < facts_.size(); ++i) out += fmt::format("{}. {}\n", i + 1, facts_[i]);
        return out;
    }

    std::size_t size() const { return facts_.size(); }

private:
    std::size_t limit_;
    Rng rng_;
    std::vector<std::string> facts_;
    std::set<LabeledFact> seen_;
    std::set<std::string> names_;
};

}  // namespace detail

// The built-in composition seed: exactly 200 numbered
// `<obj; Type><relation><obj; Type>` lines describing films, people and
// places. The graph is acyclic.
inline std::string composition_seed_text() {
    detail::SeedWorld w(kCompositionSeedAtomic);
    const std::string randal = "Randal Plunkett, 19th baron of Dunsany";
    const std::string edward = "Edward Plunkett, 18th baron of Dunsany";
    w.add("Avatar", "Film", "director", "James Cameron", "Person");
    w.add("James Cameron", "Person", "place of birth", "Kapuskasing", "Location");
    w.add("Kapuskasing", "Location", "country", "Canada", "Location");
    w.add(randal, "Person", "father", edward, "Person");
    w.add(edward, "Person", "cause of death", "heart attack", "Object");
    w.add(edward, "Person", "place of birth", "London", "Location");
    w.add("London", "Location", "country", "United Kingdom", "Location");

    std::vector<std::string> cities;
    for (const auto& c : lexicon::kWorldCities) {
        cities.emplace_back(c.city);
        w.add(std::string(c.city), "Location", "country", std::string(c.country), "Location");
    }
    std::vector<std::string> universities;
    for (std::size_t i = 0; i < lexicon::kUniversities.size(); ++i) {
        universities.emplace_back(lexicon::kUniversities[i]);
        w.add(universities.back(), "Object", "located in", cities[(i * 4 + 1) % cities.size()], "Location");
    }
    std::vector<std::string> causes(lexicon::kCausesOfDeath.begin(), lexicon::kCausesOfDeath.end());

    // Three generations linked by `father`.
    std::vector<std::string> elders, parents, children;
    for (int i = 0; i < 10; ++i) {
        elders.push_back(w.person());
        const auto& p = elders.back();
        w.add(p, "Person", "cause of death", w.pick(causes), "Object");
        w.add(p, "Person", "place of birth", w.pick(cities), "Location");
        w.add(p, "Person", "date of birth", std::to_string(1850 + w.below(50)), "Object");
    }
    for (int i = 0; i < 16; ++i) {
        parents.push_back(w.person());
        const auto& p = parents.back();
        w.add(p, "Person", "father", w.pick(elders), "Person");
        w.add(p, "Person", "place of birth", w.pick(cities), "Location");
        w.add(p, "Person", "educated at", w.pick(universities), "Object");
    }
    for (int i = 0; i < 16; ++i) {
        children.push_back(w.person());
        const auto& p = children.back();
        w.add(p, "Person", "father", w.pick(parents), "Person");
        w.add(p, "Person", "place of birth", w.pick(cities), "Location");
    }
    for (std::size_t i = 0; i + 1 < parents.size(); i += 2) {
        w.add(parents[i], "Person", "spouse", parents[i + 1], "Person");
    }
    std::vector<std::string> crew = parents;
    crew.insert(crew.end(), children.begin(), children.end());
    while (!w.full()) {
        const auto film = w.film();
        w.add(film, "Film", "director", w.pick(crew), "Person");
        w.add(film, "Film", "cast member", w.pick(children), "Person");
        w.add(film, "Film", "producer", w.pick(crew), "Person");
    }
    return w.text();
}

// ---------------------------------------------------------------------------
// Pipelines

struct PipelineResult {
    Task task = Task::comparison;
    std::vector<QAItem> atomic;
    std::vector<QAItem> inferred;
    std::optional<KnowledgeGraph> graph;  // composition only
    PhiReport phi;
    Ratio achieved_phi{0};
    Ratio target_phi{0};
    std::size_t fallback_renderings = 0;
    std::size_t parse_rejects = 0;
    std::vector<std::string> warnings;

    // Global ratio and, as a post-condition, every relation present in the
    // inferred set meets the target.
    bool target_met() const {
        if (achieved_phi < target_phi) return false;
        for (const auto& r : phi.per_relation) {
            if (r.inferred_count > 0 && r.phi && *r.phi < target_phi) return false;
        }
        return true;
    }
};

inline void assign_ids(PipelineResult& result) {
    const auto task = std::string(to_string(result.task));
    for (std::size_t i = 0; i < result.atomic.size(); ++i) {
        result.atomic[i].id = fmt::format("{}-atomic-{:06d}", task, i + 1);
    }
    for (std::size_t i = 0; i < result.inferred.size(); ++i) {
        result.inferred[i].id = fmt::format("{}-inferred-{:06d}", task, i + 1);
    }
}

struct ComparisonConfig {
    std::size_t atomic_total = 1000;    // including the seed locations
    std::size_t inferred_total = 8000;  // including the seed questions
    Ratio yes_fraction{1, 2};
    std::vector<std::string> countries{lexicon::kDefaultCountries.begin(), lexicon::kDefaultCountries.end()};
    bool detailed = false;
    std::optional<Ratio> phi_target;  // defaults to inferred_total / atomic_total
    std::uint64_t seed = 0;
    BackendConfig backend;
};

inline PipelineResult run_comparison_pipeline(const ComparisonConfig& cfg) {
    if (cfg.atomic_total < 2) throw InputError("comparison pipeline needs at least 2 atomic facts");
    if (cfg.inferred_total < 1) throw InputError("comparison pipeline needs at least 1 inferred fact");
    if (cfg.countries.empty()) throw InputError("comparison pipeline needs at least one country");

    PipelineResult result;
    result.task = Task::comparison;
    result.target_phi = cfg.phi_target.value_or(
        Ratio(static_cast<std::int64_t>(cfg.inferred_total), static_cast<std::int64_t>(cfg.atomic_total)));

    auto seeds = comparison_seed_atomic(cfg.countries, std::min(kComparisonSeedAtomic, cfg.atomic_total));
    std::vector<QAItem> seed_inferred;
    if (seeds.size() >= 2) {
        const std::size_t want = std::min({kComparisonSeedInferred, cfg.inferred_total});
        try {
            seed_inferred = generate_inferred_comparison(seeds, want, cfg.yes_fraction, kSeedCorpusSeed);
        } catch (const InputError& e) {
            result.warnings.push_back(std::string("seed questions skipped: ") + e.what());
        }
    }
    for (auto& item : seed_inferred) item.synthetic = false;

    result.atomic = seeds;
    if (cfg.atomic_total > seeds.size()) {
        auto fresh = generate_locations(seeds, cfg.atomic_total - seeds.size(), cfg.countries, cfg.backend,
                                        derive_seed(cfg.seed, {1}));
        result.atomic.insert(result.atomic.end(), fresh.begin(), fresh.end());
    }
    if (cfg.detailed) {
        std::vector<QAItem> examples(seeds.begin(), seeds.begin() + std::min<std::size_t>(5, seeds.size()));
        examples = examples.empty() ? examples
                                    : detalize_locations(examples, {}, BackendConfig{}, kSeedCorpusSeed);
        result.atomic = detalize_locations(result.atomic, examples, cfg.backend, derive_seed(cfg.seed, {2}));
    }

    std::set<LocationPair> taken;
    for (const auto& item : seed_inferred) {
        taken.insert(make_location_pair(item.source_facts[0].head, item.source_facts[1].head));
    }
    result.inferred = seed_inferred;
    if (cfg.inferred_total > seed_inferred.size()) {
        auto fresh = generate_inferred_comparison(result.atomic, cfg.inferred_total - seed_inferred.size(),
                                                  cfg.yes_fraction, derive_seed(cfg.seed, {3}), taken);
        result.inferred.insert(result.inferred.end(), fresh.begin(), fresh.end());
    }
    assign_ids(result);
    result.phi = corpus_phi(result.atomic, result.inferred, result.target_phi);
    result.achieved_phi = result.phi.global_phi.value_or(Ratio(0));
    return result;
}

struct CompositionConfig {
    std::size_t atomic_total = 800;     // including the seed facts
    std::size_t inferred_total = 5000;  // including the seed questions
    std::size_t seed_inferred = kCompositionSeedInferred;
    std::set<int> hop_orders{2, 3};
    std::optional<std::string> input_text;  // defaults to the built-in seed
    std::optional<Ratio> phi_target;        // defaults to inferred_total / atomic_total
    bool exclude_year_answers = true;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    BackendConfig backend;
};

inline PipelineResult run_composition_pipeline(const CompositionConfig& cfg) {
    if (cfg.atomic_total < 1) throw InputError("composition pipeline needs at least 1 atomic fact");
    if (cfg.inferred_total < 1) throw InputError("composition pipeline needs at least 1 inferred fact");

    PipelineResult result;
    result.task = Task::composition;
    result.target_phi = cfg.phi_target.value_or(
        Ratio(static_cast<std::int64_t>(cfg.inferred_total), static_cast<std::int64_t>(cfg.atomic_total)));

    const std::string source = cfg.input_text.value_or(composition_seed_text());
    ParsedGraph parsed;
    try {
        parsed = parse_graph(source);
    } catch (const InputError&) {
        if (!cfg.backend.external()) throw;
        parsed = parse_graph_external(source, cfg.backend);
    }
    result.parse_rejects = parsed.rejects.size();
    if (!parsed.rejects.empty()) {
        result.warnings.push_back(fmt::format("{} input lines rejected by the graph parser", parsed.rejects.size()));
    }
    const KnowledgeGraph& seed_graph = parsed.graph;
    if (!is_acyclic(seed_graph)) result.warnings.push_back("seed graph contains a directed cycle");

    InferredSampleOptions sample_opts;
    sample_opts.hop_orders = cfg.hop_orders;
    sample_opts.exclude_year_answers = cfg.exclude_year_answers;
    sample_opts.jobs = cfg.jobs;

    const std::size_t seed_target = std::min(cfg.seed_inferred, cfg.inferred_total);
    std::vector<InferredFact> seed_paths;
    if (seed_target > 0) {
        seed_paths = augment_inferred(seed_graph, seed_target, kSeedCorpusSeed, sample_opts).facts;
    }

    std::size_t grow = 0;
    if (cfg.atomic_total > seed_graph.edge_count()) {
        grow = cfg.atomic_total - seed_graph.edge_count();
    } else if (cfg.atomic_total < seed_graph.edge_count()) {
        result.warnings.push_back(fmt::format("seed graph already has {} facts (> {} requested); nothing added",
                                              seed_graph.edge_count(), cfg.atomic_total));
    }
    auto grown = augment_atomic(seed_graph, grow, derive_seed(cfg.seed, {1}));
    for (auto& w : grown.warnings) result.warnings.push_back(w);
    const KnowledgeGraph& kg = grown.graph;

    sample_opts.exclude.insert(seed_paths.begin(), seed_paths.end());
    std::vector<InferredFact> new_paths;
    if (cfg.inferred_total > seed_paths.size()) {
        auto sample = augment_inferred(kg, cfg.inferred_total - seed_paths.size(), derive_seed(cfg.seed, {2}),
                                       sample_opts);
        for (auto& w : sample.warnings) result.warnings.push_back(w);
        new_paths = std::move(sample.facts);
    }

    std::vector<InferredFact> all_paths = seed_paths;
    all_paths.insert(all_paths.end(), new_paths.begin(), new_paths.end());
    if (!all_paths.empty()) {
        result.inferred = diversify(kg, all_paths, cfg.backend, derive_seed(cfg.seed, {3}));
    }
    for (std::size_t i = 0; i < seed_paths.size() && i < result.inferred.size(); ++i) {
        result.inferred[i].synthetic = false;
    }
    for (const auto& item : result.inferred) result.fallback_renderings += item.fallback_template ? 1 : 0;

    const std::size_t original = seed_graph.edge_count();
    for (std::size_t i = 0; i < kg.facts().size(); ++i) {
        const auto& f = kg.facts()[i];
        QAItem item;
        item.kind = ItemKind::atomic;
        item.task = Task::composition;
        item.hops = 0;
        item.source_facts = {{kg.label(f.head), kg.label(f.relation), kg.label(f.tail)}};
        item.question = triplet_text(item.source_facts.front());
        item.answer = item.source_facts.front().tail;
        item.synthetic = i >= original;
        result.atomic.push_back(std::move(item));
    }
    result.graph = kg;
    assign_ids(result);
    result.phi = corpus_phi(result.atomic, result.inferred, result.target_phi);
    result.achieved_phi = result.phi.global_phi.value_or(Ratio(0));
    return result;
}

}  // namespace grokforge
