#pragma once

// Train / in-distribution / out-of-distribution partition of an augmented
// corpus, and the on-disk form of the result.

#include "grokforge/error.hpp"
#include "grokforge/path_enum.hpp"
#include "grokforge/qa.hpp"
#include "grokforge/rational.hpp"
#include "grokforge/rng.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace grokforge {

struct SplitPlan {
    Ratio train_inferred_fraction{4, 5};
    Ratio ood_atomic_fraction{1, 10};
    std::uint64_t seed = 0;
};

struct DatasetSplit {
    std::vector<QAItem> train_atomic;
    std::vector<QAItem> train_inferred;
    std::vector<QAItem> id_test;
    std::vector<QAItem> ood_test;
    std::size_t reserved_facts = 0;
    std::size_t reassigned_to_train = 0;  // residue moved out of id_test
    SplitPlan plan;
};

namespace detail {

// round(f * n), halves up.
inline std::size_t round_fraction(const Ratio& f, std::size_t n) {
    const Ratio x = f * Ratio(static_cast<std::int64_t>(n)) + Ratio(1, 2);
    return static_cast<std::size_t>(x.numerator() / x.denominator());
}

inline std::vector<LabeledFact> fact_combination(const QAItem& item) {
    std::vector<LabeledFact> c = item.source_facts;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

inline void check_fraction(const Ratio& f, std::string_view name) {
    if (f <= 0 || f >= 1) {
        throw InputError(std::string(name) + " must lie strictly between 0 and 1 (got " + to_string(f) + ")");
    }
}

}  // namespace detail

inline DatasetSplit split_id_ood(const std::vector<QAItem>& atomic, const std::vector<QAItem>& inferred,
                                 const SplitPlan& plan) {
    detail::check_fraction(plan.train_inferred_fraction, "train_inferred_fraction");
    detail::check_fraction(plan.ood_atomic_fraction, "ood_atomic_fraction");

    std::vector<LabeledFact> facts;
    std::set<LabeledFact> fact_set;
    for (const auto& item : atomic) {
        if (item.kind != ItemKind::atomic) throw InputError("item " + item.id + " is not atomic");
        for (const auto& f : item.source_facts) {
            if (fact_set.insert(f).second) facts.push_back(f);
        }
    }
    for (const auto& item : inferred) {
        if (item.kind != ItemKind::inferred) throw InputError("item " + item.id + " is not inferred");
        for (const auto& f : item.source_facts) {
            if (!fact_set.contains(f)) {
                throw InputError("item " + item.id + " uses a fact missing from the atomic set: " + triplet_text(f));
            }
        }
    }

    DatasetSplit out;
    out.plan = plan;
    Rng rng(derive_seed(plan.seed, {0x5171}));

    // (1) reserve atomic facts; anything touching them is OOD.
    rng.shuffle(facts);
    const std::size_t reserve = detail::round_fraction(plan.ood_atomic_fraction, facts.size());
    const std::set<LabeledFact> reserved(facts.begin(), facts.begin() + static_cast<std::ptrdiff_t>(reserve));
    out.reserved_facts = reserve;

    enum Slot { kTrain, kId, kOod };
    std::vector<Slot> slot(inferred.size(), kTrain);
    std::vector<std::size_t> remainder;
    for (std::size_t i = 0; i < inferred.size(); ++i) {
        bool touches = false;
        for (const auto& f : inferred[i].source_facts) touches = touches || reserved.contains(f);
        if (touches) {
            slot[i] = kOod;
        } else {
            remainder.push_back(i);
        }
    }

    // (2) seeded share of the remainder trains.
    rng.shuffle(remainder);
    const std::size_t train_n = detail::round_fraction(plan.train_inferred_fraction, remainder.size());
    for (std::size_t k = train_n; k < remainder.size(); ++k) slot[remainder[k]] = kId;

    // (3) residue must recombine trained facts; failures move to train until
    // nothing changes.
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<LabeledFact> trained;
        std::set<std::vector<LabeledFact>> trained_combos;
        for (std::size_t i = 0; i < inferred.size(); ++i) {
            if (slot[i] != kTrain) continue;
            for (const auto& f : inferred[i].source_facts) trained.insert(f);
            trained_combos.insert(detail::fact_combination(inferred[i]));
        }
        for (std::size_t i = 0; i < inferred.size(); ++i) {
            if (slot[i] != kId) continue;
            bool ok = !trained_combos.contains(detail::fact_combination(inferred[i]));
            for (const auto& f : inferred[i].source_facts) ok = ok && trained.contains(f);
            if (!ok) {
                slot[i] = kTrain;
                ++out.reassigned_to_train;
                changed = true;
            }
        }
    }
    if (out.reassigned_to_train > 0) {
        warn(std::to_string(out.reassigned_to_train) + " residue items reassigned from id_test to train");
    }

    for (std::size_t i = 0; i < inferred.size(); ++i) {
        QAItem item = inferred[i];
        switch (slot[i]) {
            case kTrain: item.split = "train"; out.train_inferred.push_back(std::move(item)); break;
            case kId: item.split = "id_test"; out.id_test.push_back(std::move(item)); break;
            case kOod: item.split = "ood_test"; out.ood_test.push_back(std::move(item)); break;
        }
    }
    out.train_atomic = atomic;
    for (auto& item : out.train_atomic) item.split = "train";

    if (out.ood_test.empty()) {
        throw InputError("split left ood_test empty; raise ood_atomic_fraction (now " +
                         to_string(plan.ood_atomic_fraction) + ")");
    }
    if (out.id_test.empty()) {
        throw InputError("split left id_test empty; lower train_inferred_fraction (now " +
                         to_string(plan.train_inferred_fraction) + ") or add inferred items");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Emission

enum class CorpusFormat { structured, unstructured };

inline std::string_view to_string(CorpusFormat f) {
    return f == CorpusFormat::structured ? "structured" : "unstructured";
}

inline CorpusFormat parse_corpus_format(std::string_view s) {
    if (s == "structured") return CorpusFormat::structured;
    if (s == "unstructured") return CorpusFormat::unstructured;
    throw InputError("unknown format '" + std::string(s) + "' (expected structured|unstructured)");
}

inline std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << content;
    if (!out) throw InputError("write failed for " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes train.jsonl (atomic then inferred), id_test.jsonl, ood_test.jsonl
// and manifest.json. `extra` is merged into the manifest (e.g. the resolved
// run config). Returns the manifest.
inline nlohmann::json emit_corpus(const DatasetSplit& split, const std::filesystem::path& directory,
                                  CorpusFormat format, const nlohmann::json& extra = nlohmann::json::object()) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec || !std::filesystem::is_directory(directory)) {
        throw InputError("cannot create output directory " + directory.string());
    }

    std::size_t fallbacks = 0;
    auto render_atomic = [&](QAItem item) {
        const auto triplet = item.source_facts.empty() ? item.question : triplet_text(item.source_facts.front());
        if (format == CorpusFormat::structured) {
            item.question = triplet;
            item.detailed = false;
        } else if (!item.detailed) {
            // No paragraph available: the triplet stands in, flagged by detailed=false.
            item.question = triplet;
            ++fallbacks;
        }
        return item;
    };

    std::ostringstream train, id, ood;
    std::vector<QAItem> rendered;
    rendered.reserve(split.train_atomic.size());
    for (const auto& item : split.train_atomic) rendered.push_back(render_atomic(item));
    write_jsonl(rendered, train);
    write_jsonl(split.train_inferred, train);
    write_jsonl(split.id_test, id);
    write_jsonl(split.ood_test, ood);

    nlohmann::json manifest = extra;
    const std::map<std::string, std::string> files{
        {"train.jsonl", train.str()}, {"id_test.jsonl", id.str()}, {"ood_test.jsonl", ood.str()}};
    for (const auto& [name, content] : files) {
        write_text_file(directory / name, content);
        manifest["digests"][name] = sha256_hex(content);
    }
    manifest["counts"] = {{"train_atomic", split.train_atomic.size()},
                          {"train_inferred", split.train_inferred.size()},
                          {"id_test", split.id_test.size()},
                          {"ood_test", split.ood_test.size()},
                          {"inferred_total", split.train_inferred.size() + split.id_test.size() + split.ood_test.size()},
                          {"reserved_atomic_facts", split.reserved_facts},
                          {"reassigned_to_train", split.reassigned_to_train}};
    manifest["format"] = std::string(to_string(format));
    manifest["unstructured_fallbacks"] = fallbacks;
    manifest["seed"] = split.plan.seed;
    manifest["plan"] = {{"train_inferred_fraction", to_string(split.plan.train_inferred_fraction)},
                        {"ood_atomic_fraction", to_string(split.plan.ood_atomic_fraction)}};
    manifest["train_phi"] = to_json(corpus_phi(split.train_atomic, split.train_inferred));
    write_text_file(directory / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

inline std::vector<QAItem> read_jsonl_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path.string());
    try {
        return read_jsonl(in);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

// Re-checks an emitted split directory from scratch; returns violations.
inline std::vector<std::string> validate_split(const std::filesystem::path& directory) {
    std::vector<std::string> problems;
    const auto train = read_jsonl_file(directory / "train.jsonl");
    const auto id = read_jsonl_file(directory / "id_test.jsonl");
    const auto ood = read_jsonl_file(directory / "ood_test.jsonl");

    std::set<LabeledFact> atomic_facts, train_path_facts;
    std::set<std::vector<LabeledFact>> train_combos;
    std::set<std::string> ids;
    auto check_id = [&](const QAItem& item) {
        if (!ids.insert(item.id).second) problems.push_back("duplicate id " + item.id);
    };
    for (const auto& item : train) {
        check_id(item);
        if (item.split != "train") problems.push_back(item.id + ": split field '" + item.split + "' in train.jsonl");
        if (item.kind == ItemKind::atomic) {
            atomic_facts.insert(item.source_facts.begin(), item.source_facts.end());
        } else {
            train_path_facts.insert(item.source_facts.begin(), item.source_facts.end());
            train_combos.insert(detail::fact_combination(item));
        }
    }
    auto check_common = [&](const QAItem& item, std::string_view expected_split) {
        check_id(item);
        if (item.kind != ItemKind::inferred) problems.push_back(item.id + ": atomic item in a test file");
        if (item.split != expected_split) problems.push_back(item.id + ": split field '" + item.split + "'");
        if (item.source_facts.size() < 2) problems.push_back(item.id + ": fewer than 2 source facts");
        for (const auto& f : item.source_facts) {
            if (!atomic_facts.contains(f)) problems.push_back(item.id + ": fact not in train atomic: " + triplet_text(f));
        }
    };
    for (const auto& item : id) {
        check_common(item, "id_test");
        for (const auto& f : item.source_facts) {
            if (!train_path_facts.contains(f)) {
                problems.push_back(item.id + ": ID item fact never seen in a train path: " + triplet_text(f));
            }
        }
        if (train_combos.contains(detail::fact_combination(item))) {
            problems.push_back(item.id + ": ID item combination appears in train");
        }
    }
    for (const auto& item : ood) {
        check_common(item, "ood_test");
        bool unseen = false;
        for (const auto& f : item.source_facts) unseen = unseen || !train_path_facts.contains(f);
        if (!unseen) problems.push_back(item.id + ": OOD item has every fact in train paths");
    }
    if (id.empty()) problems.push_back("id_test is empty");
    if (ood.empty()) problems.push_back("ood_test is empty");
    return problems;
}

}  // namespace grokforge
