#pragma once

// Augmentation operations: synthetic locations and paragraphs, comparison
// questions, graph parsing, acyclic atomic growth, path sampling and question
// rendering for composition.

#include "grokforge/backend.hpp"
#include "grokforge/error.hpp"
#include "grokforge/kg.hpp"
#include "grokforge/lexicon.hpp"
#include "grokforge/path_enum.hpp"
#include "grokforge/qa.hpp"
#include "grokforge/rational.hpp"
#include "grokforge/rng.hpp"
#include "grokforge/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace grokforge {

// ---------------------------------------------------------------------------
// Locations

struct LocationInfo {
    std::string name;
    std::string city;  // empty when unknown
    std::string country;
    std::string description;  // "<adjective> <kind>"; empty when unknown
};

namespace detail {

inline const lexicon::SeedLocation* find_seed_location(std::string_view name) {
    for (const auto& s : lexicon::kSeedLocations) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

inline std::vector<std::string_view> cities_for(std::string_view country) {
    for (const auto& c : lexicon::kCities) {
        if (c.country == country) return {c.cities.begin(), c.cities.end()};
    }
    return {lexicon::kGenericCities.begin(), lexicon::kGenericCities.end()};
}

inline bool starts_with_word(std::string_view s, std::string_view prefix) {
    return s.size() > prefix.size() && s.substr(0, prefix.size()) == prefix && s[prefix.size()] == ' ';
}

}  // namespace detail

// Recovers city and kind for seed and template-generated labels.
inline LocationInfo describe_location(std::string_view name, std::string_view country) {
    LocationInfo info{std::string(name), "", std::string(country), ""};
    if (const auto* seed = detail::find_seed_location(name); seed && seed->country == country) {
        info.city = seed->city;
        info.description = seed->description;
        return info;
    }
    for (auto city : detail::cities_for(country)) {
        if (!detail::starts_with_word(name, city)) continue;
        info.city = city;
        const auto rest = name.substr(city.size() + 1);
        for (const auto& kind : lexicon::kLandmarkKinds) {
            if (rest == kind.suffix || detail::starts_with_word(rest, kind.suffix)) {
                info.description = kind.noun;
                break;
            }
        }
        break;
    }
    return info;
}

// "Paris Louvre Museum"; labels that already lead with their city are kept.
inline std::string location_display(std::string_view name, std::string_view country) {
    const auto info = describe_location(name, country);
    if (info.city.empty() || detail::starts_with_word(name, info.city) || name == info.city) return std::string(name);
    return info.city + " " + std::string(name);
}

inline QAItem make_location_item(std::string label, std::string country, bool synthetic) {
    QAItem item;
    item.kind = ItemKind::atomic;
    item.task = Task::comparison;
    item.hops = 0;
    item.source_facts = {{std::move(label), "country", std::move(country)}};
    item.question = triplet_text(item.source_facts.front());
    item.answer = item.source_facts.front().tail;
    item.synthetic = synthetic;
    return item;
}

namespace detail {

inline void require_location_item(const QAItem& item) {
    if (item.source_facts.size() != 1) {
        throw InputError("location item '" + item.id + "' must carry exactly one source fact");
    }
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// "Name -- country -- Country", "Name - Country" or "Name, Country".
inline std::optional<std::pair<std::string, std::string>> parse_location_line(std::string_view entry,
                                                                              const std::set<std::string>& countries) {
    std::string name, country;
    if (auto a = entry.find(" -- "); a != std::string_view::npos) {
        const auto b = entry.rfind(" -- ");
        name = trim(entry.substr(0, a));
        country = trim(entry.substr(b + 4));
    } else if (auto dash = entry.rfind(" - "); dash != std::string_view::npos) {
        name = trim(entry.substr(0, dash));
        country = trim(entry.substr(dash + 3));
    } else if (auto comma = entry.rfind(','); comma != std::string_view::npos) {
        name = trim(entry.substr(0, comma));
        country = trim(entry.substr(comma + 1));
    } else {
        return std::nullopt;
    }
    if (name.empty() || !countries.contains(country)) return std::nullopt;
    if (name.find_first_of("\t\n\r") != std::string::npos) return std::nullopt;
    return std::pair{name, country};
}

// Per-country label candidates in seeded order; index-suffixed rounds follow
// once the base lexicon is used up.
class LocationNamer {
public:
    LocationNamer(std::string country, std::uint64_t seed) : country_(std::move(country)), rng_(seed) {
        for (auto city : cities_for(country_)) {
            for (const auto& kind : lexicon::kLandmarkKinds) {
                base_.push_back(std::string(city) + " " + std::string(kind.suffix));
            }
        }
        rng_.shuffle(base_);
    }

    std::string next(const std::set<std::string>& used) {
        while (true) {
            if (pos_ == base_.size()) {
                pos_ = 0;
                ++round_;
            }
            std::string label = base_[pos_++];
            if (round_ > 1) label += " " + std::to_string(round_);
            if (!used.contains(label)) return label;
        }
    }

private:
    std::string country_;
    Rng rng_;
    std::vector<std::string> base_;
    std::size_t pos_ = 0;
    std::size_t round_ = 1;
};

}  // namespace detail

// Emits `count` new (location, country, Country) items, balanced across
// countries within one, never reusing a seed label.
inline std::vector<QAItem> generate_locations(const std::vector<QAItem>& seed_examples, std::size_t count,
                                              const std::vector<std::string>& countries,
                                              const BackendConfig& backend, std::uint64_t seed) {
    if (count < 1) throw InputError("generate_locations: count must be >= 1");
    if (countries.empty()) throw InputError("generate_locations: country list is empty");
    std::set<std::string> country_set(countries.begin(), countries.end());
    if (country_set.size() != countries.size()) throw InputError("generate_locations: duplicate country");

    std::set<std::string> used;
    for (const auto& item : seed_examples) {
        detail::require_location_item(item);
        used.insert(item.source_facts.front().head);
    }

    std::map<std::string, std::size_t> quota;
    for (std::size_t i = 0; i < countries.size(); ++i) {
        quota[countries[i]] = count / countries.size() + (i < count % countries.size() ? 1 : 0);
    }
    std::map<std::string, std::vector<std::string>> produced;

    if (backend.external()) {
        ChatClient client(backend);
        const auto system = prompts::fill(prompts::kAtomicFactGeneration, detail::join(countries, ", "));
        std::string examples;
        for (std::size_t i = 0; i < seed_examples.size() && i < 20; ++i) {
            examples += std::to_string(i + 1) + ". " + triplet_text(seed_examples[i].source_facts.front()) + "\n";
        }
        std::size_t missing = count;
        const std::size_t max_calls = count / std::max<std::size_t>(1, backend.batch_size) + 3;
        for (std::size_t call = 0; call < max_calls && missing > 0; ++call) {
            const std::size_t ask = std::min(missing, std::max<std::size_t>(1, backend.batch_size));
            const auto user = "Examples:\n" + examples + "\nGenerate " + std::to_string(ask) + " new locations.";
            std::string error;
            const auto reply = client.complete(system, user, &error);
            if (!reply) {
                warn("external backend failed for location generation (" + error + "); using templates");
                break;
            }
            for (const auto& [number, entry] : text::numbered_entries(*reply)) {
                (void)number;
                auto parsed = detail::parse_location_line(entry, country_set);
                if (!parsed || used.contains(parsed->first)) continue;
                auto& bucket = produced[parsed->second];
                if (bucket.size() >= quota[parsed->second]) continue;
                used.insert(parsed->first);
                bucket.push_back(parsed->first);
                --missing;
            }
        }
        if (missing > 0) warn(std::to_string(missing) + " locations filled from templates after external generation");
    }

    for (const auto& country : countries) {
        detail::LocationNamer namer(country, derive_seed(seed, {text::fnv1a(country)}));
        auto& bucket = produced[country];
        while (bucket.size() < quota[country]) {
            auto label = namer.next(used);
            used.insert(label);
            bucket.push_back(std::move(label));
        }
    }

    // Round-robin over countries keeps any prefix balanced as well.
    std::vector<QAItem> out;
    out.reserve(count);
    for (std::size_t i = 0; out.size() < count; ++i) {
        for (const auto& country : countries) {
            const auto& bucket = produced[country];
            if (i < bucket.size()) {
                out.push_back(make_location_item(bucket[i], country, true));
                out.back().id = fmt::format("location-{:06d}", out.size());
            }
        }
    }
    return out;
}

namespace detail {

inline constexpr std::array<std::string_view, 3> kParagraphSkeletons = {
    "{display}: The {name} is a {description} in {where}. It dates back to the {century} century and is "
    "known for {feature}, drawing {visitors} visitors every year.",
    "{display}: The {name} is a {description} located in {where}. Known for {feature}, it has welcomed "
    "{visitors} visitors since the {century} century.",
    "{display}: The {name} is a {description} in {where}. Its history reaches back to the {century} "
    "century, and today it is admired for {feature}.",
};

inline std::string template_paragraph(const QAItem& item, std::uint64_t seed) {
    const auto& fact = item.source_facts.front();
    const auto info = describe_location(fact.head, fact.tail);
    Rng rng(seed);
    const auto skeleton = kParagraphSkeletons[rng.below(kParagraphSkeletons.size())];
    std::string description = info.description;
    if (!detail::find_seed_location(fact.head) || info.city.empty()) {
        const auto adjective = lexicon::kAdjectives[rng.below(lexicon::kAdjectives.size())];
        description = std::string(adjective) + " " + (description.empty() ? "landmark" : description);
    }
    std::string paragraph = text::substitute(
        skeleton, {{"display", location_display(fact.head, fact.tail)},
                   {"name", fact.head},
                   {"description", description},
                   {"where", info.city.empty() ? fact.tail : info.city + ", " + fact.tail},
                   {"century", std::string(lexicon::kCenturies[rng.below(lexicon::kCenturies.size())])},
                   {"feature", std::string(lexicon::kFeatures[rng.below(lexicon::kFeatures.size())])},
                   {"visitors", std::string(lexicon::kVisitorCounts[rng.below(lexicon::kVisitorCounts.size())])}});
    return paragraph;
}

}  // namespace detail

// Adds a paragraph rendering to every item; order and count are preserved.
inline std::vector<QAItem> detalize_locations(const std::vector<QAItem>& atomic,
                                              const std::vector<QAItem>& detailed_examples,
                                              const BackendConfig& backend, std::uint64_t seed) {
    if (atomic.empty()) throw InputError("detalize_locations: no atomic items");
    for (const auto& item : atomic) detail::require_location_item(item);
    std::vector<QAItem> out = atomic;
    std::vector<bool> done(out.size(), false);

    if (backend.external()) {
        ChatClient client(backend);
        std::string examples;
        for (std::size_t i = 0; i < detailed_examples.size() && i < 5; ++i) {
            examples += std::to_string(i + 1) + ". " + detailed_examples[i].question + "\n";
        }
        const auto system = prompts::fill(prompts::kDetailedFactGeneration, examples);
        const std::size_t batch = std::max<std::size_t>(1, backend.batch_size);
        std::size_t fallback = 0;
        bool failed = false;
        for (std::size_t begin = 0; begin < out.size() && !failed; begin += batch) {
            const std::size_t end = std::min(out.size(), begin + batch);
            std::string user;
            for (std::size_t i = begin; i < end; ++i) {
                user += std::to_string(i - begin + 1) + ". " + triplet_text(out[i].source_facts.front()) + "\n";
            }
            std::string error;
            const auto reply = client.complete(system, user, &error);
            if (!reply) {
                warn("external backend failed for paragraph generation (" + error + "); using templates");
                failed = true;
                break;
            }
            const auto entries = text::numbered_entries(*reply);
            for (std::size_t i = begin; i < end; ++i) {
                auto it = entries.find(i - begin + 1);
                if (it == entries.end()) {
                    ++fallback;
                    continue;
                }
                out[i].question = it->second;
                done[i] = true;
            }
        }
        if (fallback > 0) warn(std::to_string(fallback) + " paragraphs missing from external replies; using templates");
    }

    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!done[i]) out[i].question = detail::template_paragraph(out[i], derive_seed(seed, {i}));
        out[i].detailed = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Comparison questions

inline constexpr std::array<std::string_view, 4> kComparisonTemplates = {
    "Are {a} and {b} both located in the same country?",
    "Are {a} and {b} located in the same country?",
    "Is {a} in the same country as {b}?",
    "Do {a} and {b} belong to the same country?",
};

inline std::string comparison_question(std::string_view a, std::string_view b, std::size_t template_index) {
    return text::substitute(kComparisonTemplates.at(template_index % kComparisonTemplates.size()),
                            {{"a", std::string(a)}, {"b", std::string(b)}});
}

// Unordered label pair, smaller label first.
using LocationPair = std::pair<std::string, std::string>;

inline LocationPair make_location_pair(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

// Samples distinct unordered pairs; exactly round(target * yes_fraction)
// share a country. Pairs in `exclude` are never drawn.
inline std::vector<QAItem> generate_inferred_comparison(const std::vector<QAItem>& atomic, std::size_t target_count,
                                                        const Ratio& yes_fraction, std::uint64_t seed,
                                                        const std::set<LocationPair>& exclude = {}) {
    if (atomic.size() < 2) throw InputError("generate_inferred_comparison: need at least 2 atomic items");
    if (yes_fraction <= 0 || yes_fraction >= 1) {
        throw InputError("generate_inferred_comparison: yes_fraction must lie strictly between 0 and 1");
    }
    std::vector<const LabeledFact*> locs;
    std::set<std::string> seen;
    for (const auto& item : atomic) {
        detail::require_location_item(item);
        if (seen.insert(item.source_facts.front().head).second) locs.push_back(&item.source_facts.front());
    }

    const Ratio scaled = yes_fraction * Ratio(static_cast<std::int64_t>(target_count)) + Ratio(1, 2);
    const auto yes_target = static_cast<std::size_t>(scaled.numerator() / scaled.denominator());
    const std::size_t no_target = target_count - yes_target;

    std::vector<std::pair<std::uint32_t, std::uint32_t>> yes_pairs, no_pairs;
    for (std::uint32_t i = 0; i < locs.size(); ++i) {
        for (std::uint32_t j = i + 1; j < locs.size(); ++j) {
            if (!exclude.empty() && exclude.contains(make_location_pair(locs[i]->head, locs[j]->head))) continue;
            (locs[i]->tail == locs[j]->tail ? yes_pairs : no_pairs).emplace_back(i, j);
        }
    }
    const std::size_t total = yes_pairs.size() + no_pairs.size();
    if (target_count > total) {
        throw InputError(fmt::format("requested {} comparison pairs but only {} distinct pairs exist (shortfall {})",
                                     target_count, total, target_count - total));
    }
    if (yes_target > yes_pairs.size()) {
        throw InputError(fmt::format("requested {} same-country (Yes) pairs but only {} exist (shortfall {})",
                                     yes_target, yes_pairs.size(), yes_target - yes_pairs.size()));
    }
    if (no_target > no_pairs.size()) {
        throw InputError(fmt::format("requested {} cross-country (No) pairs but only {} exist (shortfall {})",
                                     no_target, no_pairs.size(), no_target - no_pairs.size()));
    }

    Rng rng(seed);
    auto take = [&](std::vector<std::pair<std::uint32_t, std::uint32_t>>& pool, std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
        pool.resize(k);
    };
    take(yes_pairs, yes_target);
    take(no_pairs, no_target);

    std::vector<QAItem> out;
    out.reserve(target_count);
    auto emit = [&](std::pair<std::uint32_t, std::uint32_t> p) {
        const LabeledFact* a = locs[p.first];
        const LabeledFact* b = locs[p.second];
        if (rng.below(2)) std::swap(a, b);
        QAItem item;
        item.kind = ItemKind::inferred;
        item.task = Task::comparison;
        item.hops = 2;
        item.question = comparison_question(location_display(a->head, a->tail), location_display(b->head, b->tail),
                                            rng.below(kComparisonTemplates.size()));
        item.answer = a->tail == b->tail ? "Yes" : "No";
        item.source_facts = {*a, *b};
        item.synthetic = true;
        out.push_back(std::move(item));
    };
    for (auto p : yes_pairs) emit(p);
    for (auto p : no_pairs) emit(p);
    rng.shuffle(out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].id = fmt::format("comparison-pair-{:06d}", i + 1);
    return out;
}

// ---------------------------------------------------------------------------
// Graph parsing

struct ParseReject {
    std::size_t line_no = 0;
    std::string text;
    std::string reason;
};

struct ParsedGraph {
    KnowledgeGraph graph;
    std::vector<ParseReject> rejects;
    std::size_t parsed_lines = 0;
};

namespace detail {

struct BracketTriple {
    std::string head, head_type, relation, tail, tail_type;
};

// "<Avatar; Film><director><James Cameron; Person>"; returns the failure reason
// on error.
inline std::variant<BracketTriple, std::string> parse_bracket_line(std::string_view s) {
    std::array<std::string, 3> parts;
    std::size_t pos = 0;
    for (auto& part : parts) {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
        if (pos >= s.size() || s[pos] != '<') return std::string("expected '<'");
        const auto close = s.find('>', pos + 1);
        const auto reopen = s.find('<', pos + 1);
        if (close == std::string_view::npos || (reopen != std::string_view::npos && reopen < close)) {
            return std::string("missing closing bracket");
        }
        part = std::string(s.substr(pos + 1, close - pos - 1));
        pos = close + 1;
    }
    if (!trim(s.substr(pos)).empty()) return std::string("trailing text after the third element");
    auto split_typed = [](const std::string& raw) {
        const auto semi = raw.rfind(';');
        if (semi == std::string::npos) return std::pair{std::string(trim(raw)), std::string()};
        return std::pair{std::string(trim(std::string_view(raw).substr(0, semi))),
                         std::string(trim(std::string_view(raw).substr(semi + 1)))};
    };
    BracketTriple t;
    std::tie(t.head, t.head_type) = split_typed(parts[0]);
    t.relation = std::string(trim(parts[1]));
    std::tie(t.tail, t.tail_type) = split_typed(parts[2]);
    if (t.head.empty() || t.relation.empty() || t.tail.empty()) return std::string("empty element");
    return t;
}

}  // namespace detail

// Accepts numbered `<obj; Type><relation><obj; Type>` lines and plain
// head<TAB>relation<TAB>tail lines. Blank and '#' lines are skipped; anything
// else is rejected without stopping the parse.
inline ParsedGraph parse_graph(std::string_view input) {
    if (!text::valid_utf8(input)) throw InputError("parse_graph: input is not valid UTF-8");
    ParsedGraph out;
    std::istringstream in{std::string(input)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const auto trimmed = detail::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        auto reject = [&](std::string reason) {
            out.rejects.push_back({line_no, std::string(trimmed), std::move(reason)});
        };
        std::string_view body = trimmed;
        if (auto numbered = text::strip_number(trimmed)) body = numbered->second;
        try {
            if (!body.empty() && body.front() == '<') {
                auto parsed = detail::parse_bracket_line(body);
                if (auto* why = std::get_if<std::string>(&parsed)) {
                    reject(*why);
                    continue;
                }
                const auto& t = std::get<detail::BracketTriple>(parsed);
                const auto fact = out.graph.add_fact(t.head, t.relation, t.tail);
                if (!t.head_type.empty() && out.graph.entity_type(fact.head).empty()) {
                    out.graph.set_entity_type(fact.head, t.head_type);
                }
                if (!t.tail_type.empty() && out.graph.entity_type(fact.tail).empty()) {
                    out.graph.set_entity_type(fact.tail, t.tail_type);
                }
                ++out.parsed_lines;
            } else if (line.find('\t') != std::string_view::npos) {
                const auto fields = split_tsv_line(line, line_no);
                out.graph.add_fact(fields->head, fields->relation, fields->tail);
                ++out.parsed_lines;
            } else {
                reject("unrecognized line format");
            }
        } catch (const InputError& e) {
            reject(e.what());
        }
    }
    if (out.parsed_lines == 0) {
        std::string report = "parse_graph: no parseable lines";
        if (!out.rejects.empty()) report += "; rejects:";
        for (std::size_t i = 0; i < out.rejects.size() && i < 10; ++i) {
            report += fmt::format("\n  line {}: {} ({})", out.rejects[i].line_no, out.rejects[i].text,
                                  out.rejects[i].reason);
        }
        if (out.rejects.size() > 10) report += fmt::format("\n  ... {} more", out.rejects.size() - 10);
        throw InputError(report);
    }
    return out;
}

// Free text goes through the graph-parsing prompt; the numbered reply is
// parsed as above.
inline ParsedGraph parse_graph_external(std::string_view text_input, const BackendConfig& backend) {
    ChatClient client(backend);
    std::string error;
    const auto reply = client.complete(prompts::kGraphParsing, text_input, &error);
    if (!reply) throw Error("graph parsing via external backend failed: " + error);
    return parse_graph(*reply);
}

// ---------------------------------------------------------------------------
// Acyclic atomic growth

inline bool reachable(const KnowledgeGraph& kg, EntityId from, EntityId to) {
    if (from == to) return true;
    std::vector<char> seen(kg.entity_count(), 0);
    std::vector<EntityId> stack{from};
    seen[from.value] = 1;
    while (!stack.empty()) {
        const auto at = stack.back();
        stack.pop_back();
        for (const auto& step : kg.successors(at)) {
            if (step.node == to) return true;
            if (!seen[step.node.value]) {
                seen[step.node.value] = 1;
                stack.push_back(step.node);
            }
        }
    }
    return false;
}

// Kahn's algorithm over directed edges.
inline bool is_acyclic(const KnowledgeGraph& kg) {
    const std::size_t n = kg.entity_count();
    std::vector<std::size_t> indegree(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        for (const auto& step : kg.successors(EntityId{v})) ++indegree[step.node.value];
    }
    std::vector<EntityId> ready;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (indegree[v] == 0) ready.push_back(EntityId{v});
    }
    std::size_t removed = 0;
    while (!ready.empty()) {
        const auto v = ready.back();
        ready.pop_back();
        ++removed;
        for (const auto& step : kg.successors(v)) {
            if (--indegree[step.node.value] == 0) ready.push_back(step.node);
        }
    }
    return removed == n;
}

struct AtomicAugmentOptions {
    double spawn_probability = 0.25;
    std::size_t retry_factor = 50;
};

struct AtomicAugmentResult {
    KnowledgeGraph graph;
    std::vector<AtomicFact> added;
    std::size_t new_entities = 0;
    std::vector<std::string> warnings;
};

namespace detail {

// Fresh labels for spawned entities, shaped by entity type.
class EntityNamer {
public:
    EntityNamer(const KnowledgeGraph& kg, std::uint64_t seed) : kg_(kg), rng_(seed) {}

    std::string next(const std::string& type, const std::string& twin_label) {
        std::string base;
        if (type == "Person") {
            base = fmt::format("{} {}", pick(lexicon::kFirstNames), pick(lexicon::kLastNames));
        } else if (type == "Film") {
            base = fmt::format("The {} {}", pick(lexicon::kTitleAdjectives), pick(lexicon::kTitleNouns));
        } else if (type == "Location") {
            base = fmt::format("{} {}", pick(lexicon::kPlacePrefixes), pick(lexicon::kPlaceRoots));
        } else if (type == "Object") {
            base = fmt::format("{} {} Institute", pick(lexicon::kTitleAdjectives), pick(lexicon::kTitleNouns));
        } else {
            base = twin_label;
        }
        if (!kg_.find_entity(base)) return base;
        for (std::size_t k = 2;; ++k) {
            auto candidate = base + " " + std::to_string(k);
            if (!kg_.find_entity(candidate)) return candidate;
        }
    }

private:
    template <std::size_t N>
    std::string_view pick(const std::array<std::string_view, N>& words) {
        return words[rng_.below(N)];
    }

    const KnowledgeGraph& kg_;
    Rng rng_;
};

}  // namespace detail

// Adds `added_count` edges. Relations are drawn in proportion to current use;
// heads come from entities already seen as heads of the relation, tails from
// entities seen as tails. New entities copy the roles of an existing head
// ("twin") and are spawned only while every relation's b_r would stay at or
// above its starting value. Edges that would close a directed cycle are
// rejected.
inline AtomicAugmentResult augment_atomic(const KnowledgeGraph& kg, std::size_t added_count, std::uint64_t seed,
                                          const AtomicAugmentOptions& opts = {}) {
    AtomicAugmentResult result{kg, {}, 0, {}};
    if (added_count == 0) return result;
    auto& g = result.graph;
    if (g.edge_count() == 0) throw InputError("augment_atomic: graph has no facts to grow from");

    const std::size_t rel_count = g.relation_count();
    const std::uint64_t v0 = g.entity_count();
    std::vector<std::uint64_t> f0(rel_count, 0);
    for (std::uint32_t r = 0; r < rel_count; ++r) f0[r] = g.relation_fact_count(RelationId{r});

    // roles[e] = sorted list of (relation * 2 + is_tail).
    std::vector<std::vector<std::uint32_t>> roles(g.entity_count());
    std::vector<std::vector<EntityId>> heads(rel_count), tails(rel_count);
    auto add_role = [&](EntityId e, std::uint32_t role) {
        auto& rs = roles[e.value];
        auto it = std::lower_bound(rs.begin(), rs.end(), role);
        if (it != rs.end() && *it == role) return;
        rs.insert(it, role);
        (role % 2 == 0 ? heads : tails)[role / 2].push_back(e);
    };
    for (const auto& f : g.facts()) {
        add_role(f.head, f.relation.value * 2);
        add_role(f.tail, f.relation.value * 2 + 1);
    }

    Rng rng(seed);
    detail::EntityNamer namer(g, derive_seed(seed, {1}));
    auto spawn_allowed = [&] {
        const std::uint64_t v_next = g.entity_count() + 1;
        for (std::uint32_t r = 0; r < rel_count; ++r) {
            if (g.relation_fact_count(RelationId{r}) * v0 < f0[r] * v_next) return false;
        }
        return true;
    };

    const std::size_t budget = opts.retry_factor * added_count + 100;
    std::size_t attempts = 0;
    while (result.added.size() < added_count && attempts < budget) {
        ++attempts;
        const auto& sample = g.facts()[rng.below(g.edge_count())];
        const RelationId rel = sample.relation;
        const auto& tail_pool = tails[rel.value];
        const EntityId tail = tail_pool[rng.below(tail_pool.size())];
        const bool spawn = rng.bernoulli(opts.spawn_probability) && spawn_allowed();
        if (spawn) {
            const auto& head_pool = heads[rel.value];
            const EntityId twin = head_pool[rng.below(head_pool.size())];
            const auto type = g.entity_type(twin);
            const EntityId fresh = g.intern_entity(namer.next(type, g.label(twin)));
            if (!type.empty()) g.set_entity_type(fresh, type);
            roles.emplace_back();
            const auto twin_roles = roles[twin.value];
            for (auto role : twin_roles) add_role(fresh, role);
            // A fresh head has no in-edges, so this edge cannot close a cycle.
            result.added.push_back(g.add_fact(fresh, rel, tail));
            ++result.new_entities;
            continue;
        }
        const auto& head_pool = heads[rel.value];
        const EntityId head = head_pool[rng.below(head_pool.size())];
        if (head == tail || g.contains(AtomicFact{head, rel, tail}) || reachable(g, tail, head)) continue;
        result.added.push_back(g.add_fact(head, rel, tail));
    }
    if (result.added.size() < added_count) {
        result.warnings.push_back(fmt::format("augment_atomic placed {} of {} edges within {} attempts",
                                              result.added.size(), added_count, budget));
        warn(result.warnings.back());
    }
    return result;
}

// ---------------------------------------------------------------------------
// Path sampling

struct InferredSampleOptions {
    std::set<int> hop_orders{2, 3};
    Traversal mode = Traversal::directed;
    std::set<InferredFact> exclude;
    // Drops paths whose answer looks like a date (a 4-digit year).
    bool exclude_year_answers = true;
    unsigned jobs = 1;  // enumeration workers; the stream order does not depend on it
};

struct InferredSample {
    std::vector<InferredFact> facts;
    std::uint64_t available = 0;  // eligible paths in the stream
    std::vector<std::string> warnings;
};

// Uniform sample without replacement by reservoir over the deterministic
// enumeration stream (hop orders ascending); output keeps stream order.
inline InferredSample augment_inferred(const KnowledgeGraph& kg, std::size_t target_count, std::uint64_t seed,
                                       const InferredSampleOptions& opts = {}) {
    if (target_count < 1) throw InputError("augment_inferred: target_count must be >= 1");
    if (opts.hop_orders.empty()) throw InputError("augment_inferred: no hop orders requested");
    for (int n : opts.hop_orders) {
        if (n < 2 || n > 3) throw InputError("augment_inferred: hop orders must be 2 or 3");
    }
    InferredSample out;
    Rng rng(seed);
    std::vector<std::pair<std::uint64_t, InferredFact>> reservoir;
    reservoir.reserve(target_count);
    std::uint64_t index = 0;
    for (int n : opts.hop_orders) {
        EnumerateOptions eo;
        eo.hops = n;
        eo.mode = opts.mode;
        eo.jobs = opts.jobs;
        enumerate_inferred(kg, eo, [&](const InferredFact& f) {
            if (opts.exclude_year_answers && text::is_year(kg.label(f.tail()))) return;
            if (!opts.exclude.empty() && opts.exclude.contains(f)) return;
            if (reservoir.size() < target_count) {
                reservoir.emplace_back(index, f);
            } else {
                const auto j = rng.below(index + 1);
                if (j < target_count) reservoir[j] = {index, f};
            }
            ++index;
        });
    }
    out.available = index;
    std::sort(reservoir.begin(), reservoir.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [i, f] : reservoir) out.facts.push_back(std::move(f));
    if (out.facts.size() < target_count) {
        out.warnings.push_back(fmt::format("augment_inferred: only {} eligible paths for a target of {}",
                                           out.facts.size(), target_count));
        warn(out.warnings.back());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Question rendering

struct QuestionTemplates {
    std::string_view key;  // relations joined by '|'
    std::array<std::string_view, 4> phrasings;
};

inline constexpr QuestionTemplates kQuestionBank[] = {
    {"father|cause of death",
     {"Why did {o1}'s father die?", "What did {o1}'s father die of?", "What was the cause of death of {o1}'s father?",
      "How did the father of {o1} die?"}},
    {"father|place of birth",
     {"Where was {o1}'s father born?", "In which city was the father of {o1} born?",
      "What is the birthplace of {o1}'s father?", "Where does {o1}'s father come from?"}},
    {"father|date of birth",
     {"When was {o1}'s father born?", "In what year was the father of {o1} born?",
      "What is the birth year of {o1}'s father?", "Which year was {o1}'s father born in?"}},
    {"father|father",
     {"Who is the paternal grandfather of {o1}?", "Who was the father of {o1}'s father?",
      "Name the father of the father of {o1}.", "Which person is {o1}'s paternal grandfather?"}},
    {"father|educated at",
     {"Where did {o1}'s father study?", "Which institution educated the father of {o1}?",
      "Where was {o1}'s father educated?", "What school did the father of {o1} attend?"}},
    {"director|place of birth",
     {"Where was the director of {o1} born?", "In which city was the director of film {o1} born?",
      "What is the birthplace of the person who directed {o1}?", "Where does the director of {o1} come from?"}},
    {"director|father",
     {"Who is the father of the director of {o1}?", "Who was the father of the person who directed {o1}?",
      "Name the father of {o1}'s director.", "Which person is the father of the director of film {o1}?"}},
    {"director|educated at",
     {"Where did the director of {o1} study?", "Which institution educated the director of {o1}?",
      "Where was the person who directed {o1} educated?", "What school did the director of film {o1} attend?"}},
    {"director|spouse",
     {"Who is the spouse of the director of {o1}?", "Who is married to the director of {o1}?",
      "Name the spouse of the person who directed {o1}.", "Whom did the director of film {o1} marry?"}},
    {"cast member|place of birth",
     {"Where was the actor who starred in {o1} born?", "In which city was the cast member of {o1} born?",
      "What is the birthplace of the performer from {o1}?", "Where does the star of {o1} come from?"}},
    {"cast member|father",
     {"Who is the father of the actor in {o1}?", "Who was the father of the performer who starred in {o1}?",
      "Name the father of {o1}'s cast member.", "Which person is the father of the star of {o1}?"}},
    {"place of birth|country",
     {"In which country was {o1} born?", "Which country is {o1}'s birthplace in?",
      "What country is the place of birth of {o1} located in?", "In what country is the city where {o1} was born?"}},
    {"filming location|country",
     {"In which country was {o1} filmed?", "Which country was the film {o1} shot in?",
      "In what country is the filming location of {o1}?", "Where, by country, was {o1} filmed?"}},
    {"spouse|place of birth",
     {"Where was {o1}'s spouse born?", "In which city was the spouse of {o1} born?",
      "What is the birthplace of the person married to {o1}?", "Where does {o1}'s spouse come from?"}},
    {"director|place of birth|country",
     {"In which country was the director of {o1} born?", "Which country is the birthplace of {o1}'s director in?",
      "In what country was the person who directed {o1} born?",
      "What country does the director of film {o1} come from?"}},
    {"father|place of birth|country",
     {"In which country was {o1}'s father born?", "Which country is the birthplace of {o1}'s father in?",
      "In what country was the father of {o1} born?", "What country does {o1}'s father come from?"}},
    {"father|spouse",
     {"Who is the spouse of {o1}'s father?", "Who is married to the father of {o1}?",
      "Name the wife of {o1}'s father.", "Whom did the father of {o1} marry?"}},
    {"producer|place of birth",
     {"Where was the producer of {o1} born?", "In which city was the producer of film {o1} born?",
      "What is the birthplace of the person who produced {o1}?", "Where does the producer of {o1} come from?"}},
    {"producer|father",
     {"Who is the father of the producer of {o1}?", "Who was the father of the person who produced {o1}?",
      "Name the father of {o1}'s producer.", "Which person is the father of the producer of film {o1}?"}},
    {"educated at|located in",
     {"In which city did {o1} study?", "Where is the institution that educated {o1} located?",
      "In what city is the school {o1} attended?", "Which city hosts the place where {o1} was educated?"}},
    {"father|father|place of birth",
     {"Where was {o1}'s paternal grandfather born?", "In which city was the father of {o1}'s father born?",
      "What is the birthplace of {o1}'s paternal grandfather?", "Where does the grandfather of {o1} on the father's side come from?"}},
    {"director|father|place of birth",
     {"Where was the father of the director of {o1} born?", "In which city was the father of {o1}'s director born?",
      "What is the birthplace of the father of the person who directed {o1}?",
      "Where does the father of the director of film {o1} come from?"}},
    {"cast member|place of birth|country",
     {"In which country was the actor who starred in {o1} born?", "Which country is the birthplace of {o1}'s cast member in?",
      "In what country was the performer from {o1} born?", "What country does the star of {o1} come from?"}},
};

inline constexpr std::array<std::string_view, 4> kGenericTwoHop = {
    "What is the {r2} of the {r1} of {o1}?",
    "Who or what is the {r2} of {o1}'s {r1}?",
    "Which entity is the {r2} of the {r1} of {o1}?",
    "Name the {r2} of {o1}'s {r1}.",
};

inline constexpr std::array<std::string_view, 4> kGenericThreeHop = {
    "What is the {r3} of the {r2} of the {r1} of {o1}?",
    "Who or what is the {r3} of the {r2} of {o1}'s {r1}?",
    "Which entity is the {r3} of the {r2} of the {r1} of {o1}?",
    "Name the {r3} of the {r2} of {o1}'s {r1}.",
};

namespace detail {

inline std::string relation_key(const LabeledPath& p) {
    std::string key;
    for (std::size_t i = 0; i < p.relations.size(); ++i) {
        if (i) key += '|';
        key += p.relations[i];
    }
    return key;
}

inline const QuestionTemplates* find_templates(std::string_view key) {
    for (const auto& t : kQuestionBank) {
        if (t.key == key) return &t;
    }
    return nullptr;
}

inline std::map<std::string, std::string> path_values(const LabeledPath& p) {
    std::map<std::string, std::string> values{{"o1", p.nodes.front()}};
    for (std::size_t i = 0; i < p.relations.size(); ++i) values["r" + std::to_string(i + 1)] = p.relations[i];
    return values;
}

// "<a>answer</a>" split off the end of a formatted question.
inline std::optional<std::pair<std::string, std::string>> split_answer_tag(std::string_view entry) {
    const auto open = entry.rfind("<a>");
    const auto close = entry.rfind("</a>");
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) return std::nullopt;
    return std::pair{std::string(trim(entry.substr(0, open))), std::string(trim(entry.substr(open + 3, close - open - 3)))};
}

}  // namespace detail

// Phrasing index for the k-th path with a given relation chain: a seeded
// per-chain offset plus k, cycling through the available phrasings.
inline std::size_t phrasing_index(std::uint64_t seed, std::string_view key, std::size_t occurrence,
                                  std::size_t phrasings = 4) {
    return (derive_seed(seed, {text::fnv1a(key)}) + occurrence) % phrasings;
}

// One QAItem per path; answer = tail label. Chains without a dedicated
// template use a generic phrasing and are flagged `fallback_template`.
inline std::vector<QAItem> diversify(const KnowledgeGraph& kg, const std::vector<InferredFact>& facts,
                                     const BackendConfig& backend, std::uint64_t seed) {
    if (facts.empty()) throw InputError("diversify: no inferred facts");
    std::vector<QAItem> out;
    out.reserve(facts.size());
    std::map<std::string, std::size_t> occurrences;
    for (const auto& fact : facts) {
        if (fact.hops() < 2) throw InputError("diversify: inferred facts need at least 2 hops");
        const auto path = label_path(kg, fact);
        QAItem item;
        item.kind = ItemKind::inferred;
        item.task = Task::composition;
        item.hops = static_cast<int>(path.hops());
        item.answer = path.nodes.back();
        item.source_facts = path_facts(path);
        item.path = path;
        item.synthetic = true;

        const auto key = detail::relation_key(path);
        const auto k = occurrences[key]++;
        const auto values = detail::path_values(path);
        if (const auto* bank = detail::find_templates(key)) {
            item.question = text::substitute(bank->phrasings[phrasing_index(seed, key, k)], values);
        } else {
            std::string_view pattern;
            if (path.hops() == 2) {
                pattern = kGenericTwoHop[phrasing_index(seed, key, k)];
            } else if (path.hops() == 3) {
                pattern = kGenericThreeHop[phrasing_index(seed, key, k)];
            }
            if (!pattern.empty()) {
                item.question = text::substitute(pattern, values);
            } else {
                // Longer chains: nest "the r_i of" from the outside in.
                std::string q = "What is";
                for (std::size_t i = path.hops(); i-- > 0;) q += " the " + path.relations[i] + " of";
                item.question = q + " " + path.nodes.front() + "?";
            }
            item.fallback_template = true;
        }
        out.push_back(std::move(item));
    }

    if (backend.external()) {
        ChatClient client(backend);
        const std::size_t batch = std::max<std::size_t>(1, backend.batch_size);
        std::size_t kept = 0;
        for (std::size_t begin = 0; begin < out.size(); begin += batch) {
            const std::size_t end = std::min(out.size(), begin + batch);
            std::string user;
            for (std::size_t i = begin; i < end; ++i) {
                const auto& p = *out[i].path;
                user += std::to_string(i - begin + 1) + ". " + p.nodes.front();
                for (const auto& r : p.relations) user += " -> " + r;
                user += " -> " + p.nodes.back() + "\n";
            }
            std::string error;
            const auto reply = client.complete(prompts::kQuestionFormatting, user, &error);
            if (!reply) {
                warn("external backend failed for question formatting (" + error + "); keeping templates");
                break;
            }
            const auto entries = text::numbered_entries(*reply);
            for (std::size_t i = begin; i < end; ++i) {
                auto it = entries.find(i - begin + 1);
                if (it == entries.end()) continue;
                auto parsed = detail::split_answer_tag(it->second);
                // The answer must survive rephrasing unchanged.
                if (!parsed || parsed->first.empty() || parsed->second != out[i].answer) continue;
                out[i].question = parsed->first;
                out[i].fallback_template = false;
                ++kept;
            }
        }
        if (kept < out.size()) {
            warn(std::to_string(out.size() - kept) + " questions kept template phrasing after external formatting");
        }
    }
    return out;
}

}  // namespace grokforge
