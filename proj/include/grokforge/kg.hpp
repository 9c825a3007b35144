#pragma once

// Knowledge graph model: interned entities and relations, directed atomic
// facts, and one-step traversal in either direction.

#include "grokforge/error.hpp"
#include "grokforge/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace grokforge {

struct EntityId {
    std::uint32_t value = 0;
    auto operator<=>(const EntityId&) const = default;
};

struct RelationId {
    std::uint32_t value = 0;
    auto operator<=>(const RelationId&) const = default;
};

struct AtomicFact {
    EntityId head;
    RelationId relation;
    EntityId tail;
    auto operator<=>(const AtomicFact&) const = default;
};

enum class Traversal { directed, undirected };

inline std::string_view to_string(Traversal mode) {
    return mode == Traversal::directed ? "directed" : "undirected";
}

inline Traversal parse_traversal(std::string_view text) {
    if (text == "directed") return Traversal::directed;
    if (text == "undirected") return Traversal::undirected;
    throw InputError("unknown traversal mode '" + std::string(text) + "' (expected directed|undirected)");
}

// One adjacency entry: the relation used and the entity reached.
struct Step {
    RelationId relation;
    EntityId node;
    auto operator<=>(const Step&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\v\f";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

inline std::string checked_label(std::string_view raw, std::string_view what) {
    const auto label = trim(raw);
    if (label.empty()) {
        throw InputError(std::string(what) + " label is empty");
    }
    if (label.find_first_of("\t\n\r") != std::string_view::npos) {
        throw InputError(std::string(what) + " label '" + std::string(label) +
                         "' contains a tab or line break");
    }
    return std::string(label);
}

inline void sorted_insert(std::vector<Step>& steps, Step step) {
    auto it = std::lower_bound(steps.begin(), steps.end(), step);
    if (it == steps.end() || *it != step) steps.insert(it, step);
}

}  // namespace detail

// Single-writer during construction; const access is safe from any number of
// threads once construction has finished.
class KnowledgeGraph {
public:
    EntityId intern_entity(std::string_view label) {
        auto name = detail::checked_label(label, "entity");
        if (auto it = entity_index_.find(name); it != entity_index_.end()) {
            return EntityId{it->second};
        }
        const auto id = static_cast<std::uint32_t>(entity_labels_.size());
        entity_index_.emplace(name, id);
        entity_labels_.push_back(std::move(name));
        entity_types_.emplace_back();
        successors_.emplace_back();
        predecessors_.emplace_back();
        neighbors_.emplace_back();
        return EntityId{id};
    }

    RelationId intern_relation(std::string_view label) {
        auto name = detail::checked_label(label, "relation");
        if (auto it = relation_index_.find(name); it != relation_index_.end()) {
            return RelationId{it->second};
        }
        const auto id = static_cast<std::uint32_t>(relation_labels_.size());
        relation_index_.emplace(name, id);
        relation_labels_.push_back(std::move(name));
        relation_fact_counts_.push_back(0);
        return RelationId{id};
    }

    // Interns labels on first use. Re-adding an existing triplet returns it
    // unchanged. Self-loops are rejected.
    AtomicFact add_fact(std::string_view head, std::string_view relation, std::string_view tail) {
        const auto h = detail::checked_label(head, "head");
        const auto t = detail::checked_label(tail, "tail");
        if (h == t) {
            throw InputError("self-loop rejected: ('" + h + "', '" + std::string(detail::trim(relation)) +
                             "', '" + t + "')");
        }
        const auto r = intern_relation(relation);
        return add_fact(intern_entity(h), r, intern_entity(t));
    }

    AtomicFact add_fact(EntityId head, RelationId relation, EntityId tail) {
        check(head);
        check(tail);
        check(relation);
        if (head == tail) {
            throw InputError("self-loop rejected on entity '" + label(head) + "'");
        }
        const AtomicFact fact{head, relation, tail};
        if (!fact_set_.insert(fact).second) return fact;
        facts_.push_back(fact);
        ++relation_fact_counts_[relation.value];
        detail::sorted_insert(successors_[head.value], Step{relation, tail});
        detail::sorted_insert(predecessors_[tail.value], Step{relation, head});
        detail::sorted_insert(neighbors_[head.value], Step{relation, tail});
        detail::sorted_insert(neighbors_[tail.value], Step{relation, head});
        return fact;
    }

    bool contains(const AtomicFact& fact) const { return fact_set_.contains(fact); }

    std::optional<EntityId> find_entity(std::string_view label) const {
        auto it = entity_index_.find(detail::trim(label));
        if (it == entity_index_.end()) return std::nullopt;
        return EntityId{it->second};
    }

    std::optional<RelationId> find_relation(std::string_view label) const {
        auto it = relation_index_.find(detail::trim(label));
        if (it == relation_index_.end()) return std::nullopt;
        return RelationId{it->second};
    }

    const std::string& label(EntityId id) const {
        check(id);
        return entity_labels_[id.value];
    }

    const std::string& label(RelationId id) const {
        check(id);
        return relation_labels_[id.value];
    }

    // Optional type annotation (Person, Location, ...); empty when unknown.
    const std::string& entity_type(EntityId id) const {
        check(id);
        return entity_types_[id.value];
    }

    void set_entity_type(EntityId id, std::string_view type) {
        check(id);
        entity_types_[id.value] = std::string(detail::trim(type));
    }

    std::size_t entity_count() const { return entity_labels_.size(); }
    std::size_t relation_count() const { return relation_labels_.size(); }
    std::size_t edge_count() const { return facts_.size(); }
    bool empty() const { return entity_labels_.empty(); }

    std::size_t relation_fact_count(RelationId id) const {
        check(id);
        return relation_fact_counts_[id.value];
    }

    // Facts in insertion order.
    const std::vector<AtomicFact>& facts() const { return facts_; }

    // Adjacency sorted by (relation, node). Undirected adjacency merges
    // successors and predecessors without duplicates.
    std::span<const Step> adjacency(EntityId id, Traversal mode) const {
        check(id);
        return mode == Traversal::directed ? std::span<const Step>(successors_[id.value])
                                           : std::span<const Step>(neighbors_[id.value]);
    }

    std::span<const Step> successors(EntityId id) const { return adjacency(id, Traversal::directed); }

    std::span<const Step> predecessors(EntityId id) const {
        check(id);
        return predecessors_[id.value];
    }

    // Entities reachable from `head` in one step of `relation`, ascending.
    std::span<const Step> steps(EntityId head, RelationId relation, Traversal mode) const {
        check(relation);
        const auto adj = adjacency(head, mode);
        auto first = std::lower_bound(adj.begin(), adj.end(), Step{relation, EntityId{0}});
        auto last = std::lower_bound(first, adj.end(), Step{RelationId{relation.value + 1}, EntityId{0}});
        return {first, last};
    }

    std::vector<EntityId> inference_step(EntityId head, RelationId relation, Traversal mode) const {
        std::vector<EntityId> out;
        for (const auto& s : steps(head, relation, mode)) out.push_back(s.node);
        return out;
    }

    void check(EntityId id) const {
        if (id.value >= entity_labels_.size()) {
            throw InputError("unknown entity id " + std::to_string(id.value));
        }
    }

    void check(RelationId id) const {
        if (id.value >= relation_labels_.size()) {
            throw InputError("unknown relation id " + std::to_string(id.value));
        }
    }

private:
    std::vector<std::string> entity_labels_;
    std::vector<std::string> entity_types_;
    std::map<std::string, std::uint32_t, std::less<>> entity_index_;
    std::vector<std::string> relation_labels_;
    std::map<std::string, std::uint32_t, std::less<>> relation_index_;
    std::vector<std::size_t> relation_fact_counts_;
    std::vector<AtomicFact> facts_;
    std::set<AtomicFact> fact_set_;
    std::vector<std::vector<Step>> successors_;
    std::vector<std::vector<Step>> predecessors_;
    std::vector<std::vector<Step>> neighbors_;
};

// b = |F_A| / |V| globally, or |F_A,r| / |V| for one relation.
inline Ratio branching_factor(const KnowledgeGraph& kg, std::optional<RelationId> relation = std::nullopt) {
    if (kg.entity_count() == 0) {
        throw InputError("branching factor of an empty graph is undefined");
    }
    const auto facts = relation ? kg.relation_fact_count(*relation) : kg.edge_count();
    return Ratio(static_cast<std::int64_t>(facts), static_cast<std::int64_t>(kg.entity_count()));
}

// Triplet TSV: `head<TAB>relation<TAB>tail` per line, `#` comments, no header.
inline void write_tsv(const KnowledgeGraph& kg, std::ostream& out) {
    for (const auto& f : kg.facts()) {
        out << kg.label(f.head) << '\t' << kg.label(f.relation) << '\t' << kg.label(f.tail) << '\n';
    }
}

struct TsvLine {
    std::string head, relation, tail;
};

// Splits one TSV line; nullopt for blank and comment lines.
inline std::optional<TsvLine> split_tsv_line(std::string_view line, std::size_t line_no) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty() || line.front() == '#') return std::nullopt;
    const auto a = line.find('\t');
    const auto b = a == std::string_view::npos ? a : line.find('\t', a + 1);
    if (b == std::string_view::npos || line.find('\t', b + 1) != std::string_view::npos) {
        throw InputError("line " + std::to_string(line_no) + ": expected exactly three tab-separated fields");
    }
    return TsvLine{std::string(line.substr(0, a)), std::string(line.substr(a + 1, b - a - 1)),
                   std::string(line.substr(b + 1))};
}

inline KnowledgeGraph read_tsv(std::istream& in) {
    KnowledgeGraph kg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto parsed = split_tsv_line(line, line_no)) {
            try {
                kg.add_fact(parsed->head, parsed->relation, parsed->tail);
            } catch (const InputError& e) {
                throw InputError("line " + std::to_string(line_no) + ": " + e.what());
            }
        }
    }
    return kg;
}

}  // namespace grokforge
