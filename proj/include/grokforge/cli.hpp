#pragma once

// Command-line front end: analyze, bounds, simulate, augment, split, validate.
//
// Exit codes: 0 success (or fully generalizable), 1 validation failures,
// 2 partially generalizable, 3 not generalizable, 4 augmentation target
// missed, 64 usage/input error, 70 internal error.

#include "grokforge/augment.hpp"
#include "grokforge/backend.hpp"
#include "grokforge/bounds.hpp"
#include "grokforge/error.hpp"
#include "grokforge/graph_sim.hpp"
#include "grokforge/kg.hpp"
#include "grokforge/path_enum.hpp"
#include "grokforge/pipelines.hpp"
#include "grokforge/qa.hpp"
#include "grokforge/rational.hpp"
#include "grokforge/splitter.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace grokforge::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationFailed = 1,
    kPartiallyGeneralizable = 2,
    kNotGeneralizable = 3,
    kTargetMissed = 4,
    kUsage = 64,
    kInternal = 70,
};

// ---------------------------------------------------------------------------
// Argument helpers

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        auto t = std::string(detail::trim(item));
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

inline std::uint64_t parse_u64(const std::string& s, std::string_view what) {
    try {
        std::size_t used = 0;
        if (s.empty() || s.front() == '-') throw std::invalid_argument("negative");
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw InputError("invalid " + std::string(what) + " '" + s + "'");
    }
}

// "10,20,30" or "10:100:10" (inclusive range).
inline std::vector<std::uint64_t> parse_u64_list(const std::string& text, std::string_view what) {
    std::vector<std::uint64_t> out;
    for (const auto& part : split_list(text)) {
        const auto c1 = part.find(':');
        if (c1 == std::string::npos) {
            out.push_back(parse_u64(part, what));
            continue;
        }
        const auto c2 = part.find(':', c1 + 1);
        if (c2 == std::string::npos) throw InputError("range '" + part + "' must be start:stop:step");
        const auto start = parse_u64(part.substr(0, c1), what);
        const auto stop = parse_u64(part.substr(c1 + 1, c2 - c1 - 1), what);
        const auto step = parse_u64(part.substr(c2 + 1), what);
        if (step == 0 || stop < start) throw InputError("bad range '" + part + "'");
        for (auto v = start; v <= stop; v += step) out.push_back(v);
    }
    if (out.empty()) throw InputError("empty " + std::string(what) + " list");
    return out;
}

inline std::vector<Ratio> parse_ratio_list(const std::string& text, std::string_view what) {
    std::vector<Ratio> out;
    for (const auto& part : split_list(text)) {
        try {
            out.push_back(parse_ratio(part));
        } catch (const std::exception&) {
            throw InputError("invalid " + std::string(what) + " '" + part + "'");
        }
    }
    if (out.empty()) throw InputError("empty " + std::string(what) + " list");
    return out;
}

inline Ratio parse_ratio_arg(const std::string& text, std::string_view what) {
    try {
        return parse_ratio(text);
    } catch (const std::exception&) {
        throw InputError("invalid " + std::string(what) + " '" + text + "'");
    }
}

// Flat `key = value` lines; '#' starts a comment.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read config file " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw InputError(fmt::format("config line {}: expected key = value", line_no));
        }
        auto key = std::string(detail::trim(t.substr(0, eq)));
        auto value = std::string(detail::trim(t.substr(eq + 1)));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        std::replace(key.begin(), key.end(), '_', '-');
        if (key.empty()) throw InputError(fmt::format("config line {}: empty key", line_no));
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

// Appends config entries as `--key=value` for keys not given on the command
// line, so flags take precedence over the file.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    auto given = [&](const std::string& key) {
        for (const auto& a : args) {
            if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
        }
        return false;
    };
    std::vector<std::string> extra;
    for (const auto& [key, value] : read_config_file(path)) {
        if (key == "config") throw InputError("config files cannot include other config files");
        if (!given(key)) extra.push_back("--" + key + "=" + value);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

inline std::string format_double(double v) { return fmt::format("{:.10g}", v); }

inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_text_file(path, content);
    }
}

// ---------------------------------------------------------------------------
// Option sets

struct GlobalArgs {
    std::uint64_t seed = 0;
    bool ci = false;
    unsigned jobs = 1;
    bool debug = false;
    std::string config;
};

struct AnalyzeArgs {
    std::string input;
    std::string hops = "2";
    std::string mode = "undirected";
    bool simple_only = false;
    std::string phi_g;
    int max_hops = 8;
    std::string format = "text";
    std::string out;
};

struct BoundsArgs {
    std::string v = "100";
    std::string b = "2";
    std::string n = "3";
    std::string phi_g = "3.6";
    std::uint64_t cutoff = 10'000'000;
    std::string format = "csv";
    std::string out;
};

struct SimulateArgs {
    std::string v = "10:100:10";
    std::string b = "2";
    std::string n = "3";
    std::size_t trials = 400;
    std::string model = "exact";
    std::string mode = "undirected";
    double budget = 5.0e7;
    std::string out;
};

struct BackendArgs {
    std::string backend = "template";
    std::string endpoint;
    std::string model;
    long timeout_ms = 30'000;
    int retries = 2;
    std::size_t batch_size = 40;
};

struct AugmentArgs {
    std::string task;
    std::size_t atomic = 0;    // 0: task default
    std::size_t inferred = 0;  // 0: task default
    std::string phi_target;
    std::string yes_fraction = "1/2";
    std::string countries;
    bool detailed = false;
    std::string input;
    std::size_t seed_inferred = kCompositionSeedInferred;
    std::string hops = "2,3";
    bool keep_year_answers = false;
    std::string out;
    BackendArgs backend;
};

struct SplitArgs {
    std::string corpus;
    std::string train_fraction = "4/5";
    std::string ood_fraction = "1/10";
    std::string format = "structured";
    std::string out;
};

struct ValidateArgs {
    std::string dir;
};

// ---------------------------------------------------------------------------
// Commands

inline int cmd_analyze(const AnalyzeArgs& a, const GlobalArgs& g, std::ostream& out, std::ostream& err) {
    const auto text = read_text_file(a.input);
    if (detail::trim(text).empty()) throw InputError("graph file " + a.input + " is empty");
    auto parsed = parse_graph(text);
    for (const auto& r : parsed.rejects) {
        err << fmt::format("warning: {}:{}: {} ({})\n", a.input, r.line_no, r.reason, r.text);
    }
    PhiOptions opts;
    if (a.hops == "all") {
        opts.hops = std::nullopt;
    } else {
        const auto n = parse_u64(a.hops, "hop order");
        if (n < 2) throw InputError("hop order must be >= 2 or 'all'");
        opts.hops = static_cast<int>(n);
    }
    opts.mode = parse_traversal(a.mode);
    opts.simple_only = a.simple_only;
    opts.max_hops = a.max_hops;
    opts.jobs = g.jobs;
    if (!a.phi_g.empty()) opts.phi_threshold = parse_ratio_arg(a.phi_g, "phi_G");
    const auto rep = compute_phi(parsed.graph, opts);

    std::ostringstream body;
    if (a.format == "json") {
        body << to_json(rep).dump(2) << '\n';
    } else if (a.format == "csv") {
        write_csv(rep, body);
    } else if (a.format == "text") {
        body << fmt::format("graph: {} entities, {} atomic facts, b = {} ({})\n", rep.node_count, rep.edge_count,
                            to_string(rep.global_b), format_double(to_double(rep.global_b)));
        body << fmt::format("hop order: {} ({}{})\n", rep.hop_order, rep.mode, a.simple_only ? ", simple only" : "");
        body << fmt::format("inferred facts: {}\n", rep.inferred_count);
        if (rep.global_phi) {
            body << fmt::format("phi: {} ({})\n", to_string(*rep.global_phi), format_double(to_double(*rep.global_phi)));
        }
        body << fmt::format("{:<28} {:>8} {:>10} {:>12} {:>12} {:>6}\n", "relation", "atomic", "inferred", "b_r",
                            "phi_r", "meets");
        for (const auto& r : rep.per_relation) {
            body << fmt::format("{:<28} {:>8} {:>10} {:>12} {:>12} {:>6}\n", r.relation, r.atomic_count,
                                r.inferred_count, to_string(r.branching), r.phi ? to_string(*r.phi) : "-",
                                r.meets_threshold ? (*r.meets_threshold ? "yes" : "no") : "-");
        }
        for (const auto& w : rep.warnings) body << "note: " << w << '\n';
        body << "verdict: " << to_string(rep.verdict);
        if (rep.phi_threshold) body << " (phi_G = " << to_string(*rep.phi_threshold) << ")";
        body << '\n';
    } else {
        throw InputError("unknown format '" + a.format + "' (expected text|json|csv)");
    }
    write_output(a.out, body.str(), out);
    switch (rep.verdict) {
        case Generalizability::partial: return kPartiallyGeneralizable;
        case Generalizability::none: return kNotGeneralizable;
        default: return kOk;
    }
}

inline constexpr std::string_view kBoundsHeader = "b,expected_paths,min_branching,min_node_count,n,phi_g,phi_upper,v";

inline int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
    const auto vs = parse_u64_list(a.v, "node count");
    const auto bs = parse_ratio_list(a.b, "branching factor");
    const auto ns = parse_u64_list(a.n, "hop order");
    const auto phis = parse_ratio_list(a.phi_g, "phi_G");
    for (auto n : ns) {
        if (n < 2) {
            throw InputError("n = " + std::to_string(n) +
                             " is not a valid hop order for bounds: inferred facts need n >= 2");
        }
        if (n > 64) throw InputError("hop order " + std::to_string(n) + " is too large");
    }
    for (auto v : vs) {
        if (v < 2) throw InputError("node count must be >= 2 (got " + std::to_string(v) + ")");
    }
    for (const auto& b : bs) {
        if (b <= 0) throw InputError("branching factor must be positive (got " + to_string(b) + ")");
    }
    for (const auto& p : phis) {
        if (p <= 0) throw InputError("phi_G must be positive (got " + to_string(p) + ")");
    }

    struct Row {
        Ratio b;
        int n;
        Ratio phi;
        std::uint64_t v;
    };
    std::vector<Row> rows;
    for (const auto& b : bs) {
        for (auto n : ns) {
            for (const auto& phi : phis) {
                for (auto v : vs) rows.push_back({b, static_cast<int>(n), phi, v});
            }
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        if (x.b != y.b) return x.b < y.b;
        if (x.n != y.n) return x.n < y.n;
        if (x.phi != y.phi) return x.phi < y.phi;
        return x.v < y.v;
    });

    nlohmann::json table = nlohmann::json::array();
    std::ostringstream csv;
    csv << kBoundsHeader << '\n';
    for (const auto& r : rows) {
        const BoundParams p{r.v, r.b, r.n, r.phi};
        const auto expected = expected_path_count(p);
        std::string min_b = "n/a";
        if (r.v >= static_cast<std::uint64_t>(r.n) + 1) min_b = format_double(min_branching_factor(p));
        const auto nc = min_node_count(p, {}, a.cutoff);
        std::string min_v;
        switch (nc.status) {
            case NodeCountStatus::found: min_v = std::to_string(nc.node_count); break;
            case NodeCountStatus::infeasible: min_v = "infeasible"; break;
            case NodeCountStatus::not_found_below_cutoff: min_v = "not found below " + std::to_string(a.cutoff); break;
        }
        const auto upper = format_double(phi_upper_bound(p));
        const auto paths = format_double(expected.value);
        csv << fmt::format("{},{},{},{},{},{},{},{}\n", to_string(r.b), paths, min_b, min_v, r.n, to_string(r.phi),
                           upper, r.v);
        table.push_back({{"b", to_string(r.b)},
                         {"expected_paths", expected.value},
                         {"min_branching", min_b},
                         {"min_node_count", min_v},
                         {"n", r.n},
                         {"phi_g", to_string(r.phi)},
                         {"phi_upper", phi_upper_bound(p)},
                         {"v", r.v}});
    }
    if (a.format == "csv") {
        write_output(a.out, csv.str(), out);
    } else if (a.format == "json") {
        write_output(a.out, table.dump(2) + "\n", out);
    } else {
        throw InputError("unknown format '" + a.format + "' (expected csv|json)");
    }
    return kOk;
}

inline int cmd_simulate(const SimulateArgs& a, const GlobalArgs& g, std::ostream& out) {
    const auto vs = parse_u64_list(a.v, "node count");
    const auto bs = parse_ratio_list(a.b, "branching factor");
    const auto ns = parse_u64_list(a.n, "hop order");
    std::vector<GridPoint> grid;
    for (const auto& b : bs) {
        for (auto n : ns) {
            if (n < 2 || n > 16) throw InputError("simulate hop order must lie in [2, 16]");
            for (auto v : vs) grid.push_back({v, b, static_cast<int>(n)});
        }
    }
    SweepOptions opts;
    opts.trials = a.trials;
    opts.model = parse_graph_model(a.model);
    opts.mode = parse_traversal(a.mode);
    opts.master_seed = g.seed;
    opts.work_budget = a.budget;
    opts.jobs = g.jobs;
    const auto rows = run_sweep(grid, opts);
    std::ostringstream csv;
    write_sweep_csv(rows, csv);
    write_output(a.out, csv.str(), out);
    if (!a.out.empty() && a.out != "-") {
        nlohmann::json manifest;
        manifest["command"] = "simulate";
        manifest["config"] = {{"v", a.v},         {"b", a.b},         {"n", a.n},       {"trials", a.trials},
                              {"model", a.model}, {"mode", a.mode},   {"budget", a.budget}, {"seed", g.seed}};
        manifest["digests"][std::filesystem::path(a.out).filename().string()] = sha256_hex(csv.str());
        manifest["rows"] = rows.size();
        write_text_file(a.out + ".manifest.json", manifest.dump(2) + "\n");
    }
    return kOk;
}

inline BackendConfig make_backend(const BackendArgs& a, bool debug) {
    BackendConfig cfg;
    cfg.mode = parse_backend_mode(a.backend);
    cfg.endpoint = a.endpoint;
    cfg.model = a.model;
    cfg.timeout = std::chrono::milliseconds(a.timeout_ms);
    cfg.retries = a.retries;
    cfg.batch_size = a.batch_size;
    cfg.debug = debug;
    if (cfg.external() && cfg.endpoint.empty()) throw InputError("--endpoint is required with --backend external");
    if (a.timeout_ms <= 0) throw InputError("--timeout-ms must be positive");
    if (a.retries < 0) throw InputError("--retries must be >= 0");
    if (a.batch_size == 0) throw InputError("--batch-size must be >= 1");
    return cfg;
}

inline nlohmann::json phi_summary(const PipelineResult& r) {
    nlohmann::json j;
    j["achieved"] = ratio_json(r.achieved_phi);
    j["target"] = ratio_json(r.target_phi);
    j["target_met"] = r.target_met();
    j["report"] = to_json(r.phi);
    return j;
}

inline int cmd_augment(const AugmentArgs& a, const GlobalArgs& g, std::ostream& out, std::ostream& err) {
    const Task task = parse_task(a.task);
    const auto backend = make_backend(a.backend, g.debug);
    std::optional<Ratio> target;
    if (!a.phi_target.empty()) target = parse_ratio_arg(a.phi_target, "phi target");
    nlohmann::json config = {{"task", a.task},
                             {"seed", g.seed},
                             {"phi_target", a.phi_target},
                             {"backend", a.backend.backend},
                             {"endpoint", a.backend.endpoint},
                             {"model", a.backend.model},
                             {"timeout_ms", a.backend.timeout_ms},
                             {"retries", a.backend.retries},
                             {"batch_size", a.backend.batch_size}};

    PipelineResult result;
    if (task == Task::comparison) {
        ComparisonConfig cfg;
        if (a.atomic) cfg.atomic_total = a.atomic;
        if (a.inferred) cfg.inferred_total = a.inferred;
        cfg.yes_fraction = parse_ratio_arg(a.yes_fraction, "yes fraction");
        if (!a.countries.empty()) cfg.countries = split_list(a.countries);
        cfg.detailed = a.detailed;
        cfg.phi_target = target;
        cfg.seed = g.seed;
        cfg.backend = backend;
        config.update({{"atomic", cfg.atomic_total},
                       {"inferred", cfg.inferred_total},
                       {"yes_fraction", a.yes_fraction},
                       {"countries", cfg.countries},
                       {"detailed", a.detailed}});
        result = run_comparison_pipeline(cfg);
    } else {
        CompositionConfig cfg;
        if (a.atomic) cfg.atomic_total = a.atomic;
        if (a.inferred) cfg.inferred_total = a.inferred;
        cfg.seed_inferred = a.seed_inferred;
        cfg.hop_orders.clear();
        for (auto n : parse_u64_list(a.hops, "hop order")) cfg.hop_orders.insert(static_cast<int>(n));
        if (!a.input.empty()) cfg.input_text = read_text_file(a.input);
        cfg.phi_target = target;
        cfg.exclude_year_answers = !a.keep_year_answers;
        cfg.seed = g.seed;
        cfg.jobs = g.jobs;
        cfg.backend = backend;
        std::vector<int> hops(cfg.hop_orders.begin(), cfg.hop_orders.end());
        config.update({{"atomic", cfg.atomic_total},
                       {"inferred", cfg.inferred_total},
                       {"seed_inferred", cfg.seed_inferred},
                       {"hops", hops},
                       {"input", a.input.empty() ? "builtin" : std::filesystem::path(a.input).filename().string()},
                       {"keep_year_answers", a.keep_year_answers}});
        result = run_composition_pipeline(cfg);
    }

    const std::filesystem::path dir(a.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw InputError("cannot create output directory " + a.out);

    nlohmann::json manifest;
    manifest["command"] = "augment";
    manifest["config"] = config;
    std::ostringstream atomic, inferred;
    write_jsonl(result.atomic, atomic);
    write_jsonl(result.inferred, inferred);
    write_text_file(dir / "atomic.jsonl", atomic.str());
    write_text_file(dir / "inferred.jsonl", inferred.str());
    manifest["digests"]["atomic.jsonl"] = sha256_hex(atomic.str());
    manifest["digests"]["inferred.jsonl"] = sha256_hex(inferred.str());
    if (result.graph) {
        std::ostringstream tsv;
        write_tsv(*result.graph, tsv);
        write_text_file(dir / "graph.tsv", tsv.str());
        manifest["digests"]["graph.tsv"] = sha256_hex(tsv.str());
        manifest["acyclic"] = is_acyclic(*result.graph);
        manifest["entities"] = result.graph->entity_count();
    }
    manifest["counts"] = {{"atomic", result.atomic.size()}, {"inferred", result.inferred.size()}};
    manifest["phi"] = phi_summary(result);
    manifest["fallback_renderings"] = result.fallback_renderings;
    manifest["parse_rejects"] = result.parse_rejects;
    manifest["warnings"] = result.warnings;
    if (task == Task::comparison) {
        std::int64_t yes = 0;
        for (const auto& item : result.inferred) yes += item.answer == "Yes" ? 1 : 0;
        manifest["yes_share"] =
            ratio_json(result.inferred.empty() ? Ratio(0) : Ratio(yes, static_cast<std::int64_t>(result.inferred.size())));
    }
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

    out << fmt::format("{}: {} atomic, {} inferred, phi = {} ({}), target {}\n", a.task, result.atomic.size(),
                       result.inferred.size(), to_string(result.achieved_phi),
                       format_double(to_double(result.achieved_phi)), to_string(result.target_phi));
    if (!result.target_met()) {
        err << fmt::format("error: achieved phi {} is below the target {}\n", to_string(result.achieved_phi),
                           to_string(result.target_phi));
        for (const auto& r : result.phi.per_relation) {
            if (r.inferred_count > 0 && r.phi && *r.phi < result.target_phi) {
                err << fmt::format("  relation '{}': phi_r = {} ({} inferred / {} atomic), short by {} inferred\n",
                                   r.relation, to_string(*r.phi), r.inferred_count, r.atomic_count,
                                   to_string(result.target_phi * Ratio(static_cast<std::int64_t>(r.atomic_count)) -
                                             Ratio(static_cast<std::int64_t>(r.inferred_count))));
            }
        }
        for (const auto& w : result.warnings) err << "  " << w << '\n';
        return kTargetMissed;
    }
    return kOk;
}

inline int cmd_split(const SplitArgs& a, const GlobalArgs& g, std::ostream& out) {
    SplitPlan plan;
    plan.train_inferred_fraction = parse_ratio_arg(a.train_fraction, "train fraction");
    plan.ood_atomic_fraction = parse_ratio_arg(a.ood_fraction, "OOD fraction");
    plan.seed = g.seed;
    const auto format = parse_corpus_format(a.format);
    const std::filesystem::path corpus(a.corpus);
    const auto atomic = read_jsonl_file(corpus / "atomic.jsonl");
    const auto inferred = read_jsonl_file(corpus / "inferred.jsonl");
    const auto split = split_id_ood(atomic, inferred, plan);
    nlohmann::json extra;
    extra["command"] = "split";
    extra["config"] = {{"train_fraction", a.train_fraction},
                       {"ood_fraction", a.ood_fraction},
                       {"format", a.format},
                       {"seed", g.seed}};
    extra["input_digests"] = {{"atomic.jsonl", sha256_hex(read_text_file(corpus / "atomic.jsonl"))},
                              {"inferred.jsonl", sha256_hex(read_text_file(corpus / "inferred.jsonl"))}};
    emit_corpus(split, a.out, format, extra);
    out << fmt::format("split: {} train atomic, {} train inferred, {} id_test, {} ood_test ({} reassigned)\n",
                       split.train_atomic.size(), split.train_inferred.size(), split.id_test.size(),
                       split.ood_test.size(), split.reassigned_to_train);
    return kOk;
}

inline int cmd_validate(const ValidateArgs& a, std::ostream& out) {
    const auto problems = validate_split(a.dir);
    for (const auto& p : problems) out << "violation: " << p << '\n';
    if (!problems.empty()) {
        out << problems.size() << " violations\n";
        return kValidationFailed;
    }
    out << "ok\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// Entry point

inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"grokforge: knowledge-graph generalization ratios, bounds, simulation and corpus augmentation"};
    app.name("grokforge");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    GlobalArgs g;
    app.add_option("--seed", g.seed, "Master seed for every randomized step");
    app.add_flag("--ci", g.ci, "CI mode: randomized commands require an explicit --seed");
    app.add_option("--jobs", g.jobs, "Worker threads; outputs do not depend on this")->check(CLI::Range(1u, 1024u));
    app.add_flag("--debug", g.debug, "Log external backend requests and responses (credential redacted)");
    app.add_option("--config", g.config, "Flat key = value file; command-line flags take precedence");

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Compute phi per relation and the generalizability verdict");
    analyze->add_option("--input", an.input, "Graph file: TSV triplets or numbered <obj; Type><rel><obj; Type> lines")
        ->required();
    analyze->add_option("--hops", an.hops, "Hop order n (>= 2) or 'all'")->capture_default_str();
    analyze->add_option("--mode", an.mode, "directed|undirected")->capture_default_str();
    analyze->add_flag("--simple-only", an.simple_only, "Count only paths whose steps have a unique successor");
    analyze->add_option("--phi-g", an.phi_g, "Threshold phi_G (rational, e.g. 3.6 or 18/5)");
    analyze->add_option("--max-hops", an.max_hops, "Cap for --hops all")->capture_default_str();
    analyze->add_option("--format", an.format, "text|json|csv")->capture_default_str();
    analyze->add_option("--out", an.out, "Output file (default stdout)");

    BoundsArgs bo;
    auto* bounds = app.add_subcommand("bounds", "Tabulate expected path counts and the minimum b_r / |V| bounds");
    bounds->add_option("--v", bo.v, "Node counts: list a,b,c or range start:stop:step")->capture_default_str();
    bounds->add_option("--b", bo.b, "Branching factors (rationals)")->capture_default_str();
    bounds->add_option("--n", bo.n, "Hop orders (>= 2)")->capture_default_str();
    bounds->add_option("--phi-g", bo.phi_g, "Thresholds phi_G (rationals)")->capture_default_str();
    bounds->add_option("--cutoff", bo.cutoff, "Largest node count searched")->capture_default_str();
    bounds->add_option("--format", bo.format, "csv|json")->capture_default_str();
    bounds->add_option("--out", bo.out, "Output file (default stdout)");

    SimulateArgs si;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo sweep of counted paths against the closed form");
    simulate->add_option("--v", si.v, "Node counts: list or start:stop:step")->capture_default_str();
    simulate->add_option("--b", si.b, "Branching factors")->capture_default_str();
    simulate->add_option("--n", si.n, "Hop orders")->capture_default_str();
    simulate->add_option("--trials", si.trials, "Graphs per grid point")->capture_default_str()->check(
        CLI::PositiveNumber);
    simulate->add_option("--model", si.model, "exact|probability (exact-edge-count or edge-probability)")
        ->capture_default_str();
    simulate->add_option("--mode", si.mode, "Path traversal: directed|undirected")->capture_default_str();
    simulate->add_option("--budget", si.budget, "Skip rows whose expected path work exceeds this")
        ->capture_default_str();
    simulate->add_option("--out", si.out, "CSV file (default stdout); a .manifest.json is written beside it");

    AugmentArgs au;
    auto* augment = app.add_subcommand("augment", "Run the comparison or composition augmentation pipeline");
    augment->add_option("--task", au.task, "comparison|composition")->required();
    augment->add_option("--atomic", au.atomic, "Total atomic facts (default 1000 comparison, 800 composition)");
    augment->add_option("--inferred", au.inferred, "Total inferred items (default 8000 comparison, 5000 composition)");
    augment->add_option("--phi-target", au.phi_target, "Required phi (default inferred/atomic)");
    augment->add_option("--yes-fraction", au.yes_fraction, "Share of Yes answers (comparison)")->capture_default_str();
    augment->add_option("--countries", au.countries, "Comma-separated countries (comparison)");
    augment->add_flag("--detailed", au.detailed, "Render atomic facts as paragraphs too (comparison)");
    augment->add_option("--input", au.input, "Seed graph text (composition; default built-in seed)");
    augment->add_option("--seed-inferred", au.seed_inferred, "Seed questions sampled from the input graph (composition)")
        ->capture_default_str();
    augment->add_option("--hops", au.hops, "Hop orders to sample (composition)")->capture_default_str();
    augment->add_flag("--keep-year-answers", au.keep_year_answers, "Allow 4-digit-year answers (composition)");
    augment->add_option("--out", au.out, "Output directory")->required();
    augment->add_option("--backend", au.backend.backend, "template|external")->capture_default_str();
    augment->add_option("--endpoint", au.backend.endpoint, "Chat-completion URL for the external backend");
    augment->add_option("--model", au.backend.model, "Model name for the external backend");
    augment->add_option("--timeout-ms", au.backend.timeout_ms, "Per-request timeout")->capture_default_str();
    augment->add_option("--retries", au.backend.retries, "Retries per request")->capture_default_str();
    augment->add_option("--batch-size", au.backend.batch_size, "Items per external request")->capture_default_str();

    SplitArgs sp;
    auto* split = app.add_subcommand("split", "Partition an augmented corpus into train / id_test / ood_test");
    split->add_option("--corpus", sp.corpus, "Directory with atomic.jsonl and inferred.jsonl")->required();
    split->add_option("--train-fraction", sp.train_fraction, "Share of non-OOD inferred items used for training")
        ->capture_default_str();
    split->add_option("--ood-fraction", sp.ood_fraction, "Share of atomic facts reserved for OOD")
        ->capture_default_str();
    split->add_option("--format", sp.format, "structured|unstructured")->capture_default_str();
    split->add_option("--out", sp.out, "Output directory")->required();

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate", "Re-check an emitted split directory");
    validate->add_option("--dir", va.dir, "Split directory")->required();

    try {
        args = merge_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return kUsage;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        const bool randomized = simulate->parsed() || augment->parsed() || split->parsed();
        if (g.ci && randomized && app.count("--seed") == 0) {
            throw InputError("--ci requires an explicit --seed for randomized commands");
        }
        if (analyze->parsed()) return cmd_analyze(an, g, out, err);
        if (bounds->parsed()) return cmd_bounds(bo, out);
        if (simulate->parsed()) return cmd_simulate(si, g, out);
        if (augment->parsed()) return cmd_augment(au, g, out, err);
        if (split->parsed()) return cmd_split(sp, g, out);
        if (validate->parsed()) return cmd_validate(va, out);
        err << "error: no command given\n";
        return kUsage;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

inline int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(std::move(args));
}

}  // namespace grokforge::cli
