#pragma once

// Question/answer records shared by the augmentation pipelines and the
// splitter, plus their JSONL form.

#include "grokforge/error.hpp"
#include "grokforge/kg.hpp"
#include "grokforge/path_enum.hpp"

#include <nlohmann/json.hpp>

#include <compare>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace grokforge {

enum class ItemKind { atomic, inferred };
enum class Task { comparison, composition };

inline std::string_view to_string(ItemKind k) { return k == ItemKind::atomic ? "atomic" : "inferred"; }
inline std::string_view to_string(Task t) { return t == Task::comparison ? "comparison" : "composition"; }

inline Task parse_task(std::string_view s) {
    if (s == "comparison") return Task::comparison;
    if (s == "composition") return Task::composition;
    throw InputError("unknown task '" + std::string(s) + "' (expected comparison|composition)");
}

// A triplet by label, independent of any one graph's ids.
struct LabeledFact {
    std::string head, relation, tail;
    auto operator<=>(const LabeledFact&) const = default;
};

inline std::string triplet_text(const LabeledFact& f) { return f.head + " -- " + f.relation + " -- " + f.tail; }

// (v0, r1, v1, ..., rn, vn) by label.
struct LabeledPath {
    std::vector<std::string> nodes;
    std::vector<std::string> relations;
    std::size_t hops() const { return relations.size(); }
    auto operator<=>(const LabeledPath&) const = default;
};

inline LabeledPath label_path(const KnowledgeGraph& kg, const InferredFact& f) {
    LabeledPath p;
    for (auto n : f.nodes) p.nodes.push_back(kg.label(n));
    for (auto r : f.relations) p.relations.push_back(kg.label(r));
    return p;
}

// Atomic facts a directed path is built from, in path order.
inline std::vector<LabeledFact> path_facts(const LabeledPath& p) {
    std::vector<LabeledFact> out;
    for (std::size_t i = 0; i < p.relations.size(); ++i) {
        out.push_back({p.nodes[i], p.relations[i], p.nodes[i + 1]});
    }
    return out;
}

// Atomic items keep the training text of the fact in `question` (a triplet
// string, or a paragraph when `detailed`) and the tail label in `answer`.
// Inferred items carry a question whose answer is Yes/No (comparison) or an
// entity label (composition).
struct QAItem {
    std::string id;
    ItemKind kind = ItemKind::atomic;
    Task task = Task::comparison;
    int hops = 0;
    std::string question;
    std::string answer;
    std::optional<LabeledPath> path;
    std::vector<LabeledFact> source_facts;
    bool synthetic = false;
    bool detailed = false;
    std::string split;  // empty until assigned by the splitter
    bool fallback_template = false;  // in-memory only: rendered by the generic fallback
};

// Field order follows the published schema.
inline nlohmann::ordered_json to_json(const QAItem& item) {
    nlohmann::ordered_json j;
    j["id"] = item.id;
    j["kind"] = std::string(to_string(item.kind));
    j["task"] = std::string(to_string(item.task));
    j["hops"] = item.hops;
    j["question"] = item.question;
    j["answer"] = item.answer;
    if (item.path) {
        auto arr = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < item.path->nodes.size(); ++i) {
            arr.push_back(item.path->nodes[i]);
            if (i < item.path->relations.size()) arr.push_back(item.path->relations[i]);
        }
        j["path"] = arr;
    } else {
        j["path"] = nullptr;
    }
    auto facts = nlohmann::ordered_json::array();
    for (const auto& f : item.source_facts) facts.push_back({f.head, f.relation, f.tail});
    j["source_facts"] = facts;
    j["synthetic"] = item.synthetic;
    j["detailed"] = item.detailed;
    j["split"] = item.split.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(item.split);
    return j;
}

inline QAItem qa_item_from_json(const nlohmann::json& j) {
    QAItem item;
    item.id = j.at("id").get<std::string>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind != "atomic" && kind != "inferred") throw InputError("item " + item.id + ": bad kind '" + kind + "'");
    item.kind = kind == "atomic" ? ItemKind::atomic : ItemKind::inferred;
    item.task = parse_task(j.at("task").get<std::string>());
    item.hops = j.at("hops").get<int>();
    item.question = j.at("question").get<std::string>();
    item.answer = j.at("answer").get<std::string>();
    if (const auto& p = j.at("path"); !p.is_null()) {
        LabeledPath path;
        const auto& arr = p;
        if (!arr.is_array() || arr.size() < 5 || arr.size() % 2 == 0) {
            throw InputError("item " + item.id + ": path must be a (2n+1)-tuple with n >= 2");
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            (i % 2 == 0 ? path.nodes : path.relations).push_back(arr[i].get<std::string>());
        }
        item.path = std::move(path);
    }
    for (const auto& f : j.at("source_facts")) {
        if (!f.is_array() || f.size() != 3) throw InputError("item " + item.id + ": source fact must be [h, r, t]");
        item.source_facts.push_back({f[0].get<std::string>(), f[1].get<std::string>(), f[2].get<std::string>()});
    }
    item.synthetic = j.at("synthetic").get<bool>();
    item.detailed = j.at("detailed").get<bool>();
    if (const auto& s = j.at("split"); !s.is_null()) item.split = s.get<std::string>();
    return item;
}

inline void write_jsonl(const std::vector<QAItem>& items, std::ostream& out) {
    for (const auto& item : items) out << to_json(item).dump() << '\n';
}

inline std::vector<QAItem> read_jsonl(std::istream& in) {
    std::vector<QAItem> items;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        try {
            items.push_back(qa_item_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw InputError("JSONL line " + std::to_string(line_no) + ": " + e.what());
        } catch (const InputError& e) {
            throw InputError("JSONL line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return items;
}

// Ratio report over an explicit corpus. Atomic counts come from the distinct
// source facts of atomic items; an inferred item counts once for each
// distinct relation among its source facts, under its hop order.
inline PhiReport corpus_phi(const std::vector<QAItem>& atomic, const std::vector<QAItem>& inferred,
                            std::optional<Ratio> phi_g = std::nullopt) {
    PhiCounts counts;
    std::set<LabeledFact> facts;
    std::set<std::string> entities;
    for (const auto& item : atomic) {
        for (const auto& f : item.source_facts) {
            if (facts.insert(f).second) {
                ++counts.atomic[f.relation];
                entities.insert(f.head);
                entities.insert(f.tail);
            }
        }
    }
    counts.node_count = entities.size();
    std::set<int> hop_orders;
    for (const auto& item : inferred) {
        std::set<std::string> rels;
        for (const auto& f : item.source_facts) rels.insert(f.relation);
        for (const auto& r : rels) ++counts.inferred[r][item.hops];
        ++counts.inferred_total[item.hops];
        hop_orders.insert(item.hops);
    }
    const std::string hop_label = hop_orders.size() == 1 ? std::to_string(*hop_orders.begin()) : "all";
    return make_phi_report(counts, hop_label, "corpus", phi_g);
}

}  // namespace grokforge
