#pragma once

// Closed-form path-count expectation, ratio upper bound, minimum branching
// factor and minimum node count for a random directed graph in which each
// ordered pair of distinct nodes carries an edge with probability b/(|V|-1).

#include "grokforge/error.hpp"
#include "grokforge/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>

namespace grokforge {

using BigRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kInfiniteNodes = std::numeric_limits<std::uint64_t>::max();

struct BoundParams {
    std::uint64_t node_count = 0;  // kInfiniteNodes for the |V| -> infinity limit
    Ratio branching{1};
    int hops = 2;
    Ratio phi_threshold{1};
};

struct PathCountEstimate {
    double value = 0.0;
    bool degenerate = false;  // |V| < n + 1: no n-hop path can exist
    bool log_space = false;
};

// Log-space evaluation of C(V, n+1) (n+1)! (b/(V-1))^n via log-gamma.
inline double expected_path_count_log(std::uint64_t node_count, double b, int hops) {
    const double v = static_cast<double>(node_count);
    if (b == 0.0) return 0.0;
    const double log_value = std::lgamma(v + 1.0) - std::lgamma(v - hops) +
                             hops * (std::log(b) - std::log(v - 1.0));
    return std::exp(log_value);
}

// C(V, n+1) (n+1)! = V (V-1) ... (V-n), so the expectation is
// V * prod_{k=1..n} b (V-k)/(V-1). The product is evaluated directly and the
// log-gamma form is used only when it overflows or underflows.
inline PathCountEstimate expected_path_count(const BoundParams& p) {
    if (p.hops < 1) throw InputError("hops must be >= 1");
    if (p.node_count == kInfiniteNodes) throw InputError("expected path count needs a finite node count");
    if (p.branching < 0) throw InputError("branching factor must be non-negative");
    PathCountEstimate out;
    if (p.node_count < static_cast<std::uint64_t>(p.hops) + 1) {
        out.degenerate = true;
        return out;
    }
    const double b = to_double(p.branching);
    const double v = static_cast<double>(p.node_count);
    double value = v;
    for (int k = 1; k <= p.hops; ++k) {
        value *= b * ((v - k) / (v - 1.0));
    }
    if (b > 0.0 && (!std::isfinite(value) || value == 0.0)) {
        out.value = expected_path_count_log(p.node_count, b, p.hops);
        out.log_space = true;
    } else {
        out.value = value;
    }
    return out;
}

// b^(n-1) * (1/(1 - 1/|V|))^n; the limit b^(n-1) for kInfiniteNodes.
inline double phi_upper_bound(const BoundParams& p) {
    if (p.node_count < 2) throw InputError("phi upper bound needs |V| >= 2");
    if (p.hops < 1) throw InputError("hops must be >= 1");
    const double b = to_double(p.branching);
    const double limit = std::pow(b, p.hops - 1);
    if (p.node_count == kInfiniteNodes) return limit;
    const double v = static_cast<double>(p.node_count);
    return limit * std::pow(v / (v - 1.0), p.hops);
}

// Smallest b_r for which the expected n-hop ratio reaches phi_G:
// (phi_G |V| (|V|-1)^n / (C(|V|, n+1) (n+1)!))^(1/(n-1)).
inline double min_branching_factor(const BoundParams& p) {
    if (p.hops < 2) {
        throw InputError("minimum branching factor is undefined for n = " + std::to_string(p.hops) +
                         " (needs n >= 2 for the (n-1)-th root)");
    }
    if (p.phi_threshold <= 0) throw InputError("phi_G must be positive");
    if (p.node_count == kInfiniteNodes) {
        return std::pow(to_double(p.phi_threshold), 1.0 / (p.hops - 1));
    }
    if (p.node_count < static_cast<std::uint64_t>(p.hops) + 1) {
        throw InputError("minimum branching factor needs |V| >= n + 1");
    }
    const double v = static_cast<double>(p.node_count);
    double ratio = to_double(p.phi_threshold);
    for (int k = 1; k <= p.hops; ++k) ratio *= (v - 1.0) / (v - k);
    return std::pow(ratio, 1.0 / (p.hops - 1));
}

// Exact test b_r^(n-1) >= phi_G * prod_{k=1..n} (V-1)/(V-k).
inline bool branching_sufficient(const BoundParams& p) {
    if (p.hops < 2) throw InputError("branching test needs n >= 2");
    if (p.node_count == kInfiniteNodes || p.node_count < static_cast<std::uint64_t>(p.hops) + 1) {
        throw InputError("branching test needs a finite |V| >= n + 1");
    }
    const BigRational b(BigInt(p.branching.numerator()), BigInt(p.branching.denominator()));
    const BigRational phi(BigInt(p.phi_threshold.numerator()), BigInt(p.phi_threshold.denominator()));
    BigRational lhs = 1;
    for (int i = 0; i < p.hops - 1; ++i) lhs *= b;
    BigRational rhs = phi;
    const BigInt v(p.node_count);
    for (int k = 1; k <= p.hops; ++k) rhs *= BigRational(v - 1, v - k);
    return lhs >= rhs;
}

enum class NodeCountStatus { found, infeasible, not_found_below_cutoff };

struct NodeCountResult {
    NodeCountStatus status = NodeCountStatus::found;
    std::uint64_t node_count = 0;
    BigRational threshold;  // T = max_r phi_G / b_r^(n-1)
};

// Left side of the node-count inequality: prod_{k=1..n} (v-k) / (v-1)^n,
// i.e. Gamma(v) / (Gamma(v-n) (v-1)^n).
inline BigRational gamma_ratio(std::uint64_t v, int hops) {
    BigInt num = 1, den = 1;
    const BigInt bv(v);
    for (int k = 1; k <= hops; ++k) {
        num *= bv - k;
        den *= bv - 1;
    }
    return BigRational(num, den);
}

// Smallest v >= n+2 with gamma_ratio(v, n) >= max_r phi_G / b_r^(n-1).
// gamma_ratio is strictly increasing in v and below 1 for every finite v, so
// T >= 1 is infeasible and otherwise the first satisfying v is located by a
// galloping search followed by bisection over exact rationals.
inline NodeCountResult min_node_count(const BoundParams& p, const std::map<std::string, Ratio>& per_relation_b = {},
                                      std::uint64_t cutoff = 10'000'000) {
    if (p.hops < 2) throw InputError("minimum node count needs n >= 2");
    if (p.phi_threshold < 0) throw InputError("phi_G must be non-negative");
    const BigRational phi(BigInt(p.phi_threshold.numerator()), BigInt(p.phi_threshold.denominator()));

    auto term = [&](const Ratio& b) {
        if (b <= 0) throw InputError("every branching factor must be positive");
        BigRational br(BigInt(b.numerator()), BigInt(b.denominator()));
        BigRational pow = 1;
        for (int i = 0; i < p.hops - 1; ++i) pow *= br;
        return phi / pow;
    };
    NodeCountResult out;
    if (per_relation_b.empty()) {
        out.threshold = term(p.branching);
    } else {
        bool first = true;
        for (const auto& [_, b] : per_relation_b) {
            auto t = term(b);
            if (first || t > out.threshold) out.threshold = t;
            first = false;
        }
    }

    const std::uint64_t lowest = static_cast<std::uint64_t>(p.hops) + 2;
    auto holds = [&](std::uint64_t v) { return gamma_ratio(v, p.hops) >= out.threshold; };
    if (out.threshold >= 1) {
        out.status = NodeCountStatus::infeasible;
        return out;
    }
    if (holds(lowest)) {
        out.node_count = lowest;
        return out;
    }
    std::uint64_t bad = lowest, step = 1, good = 0;
    while (true) {
        const std::uint64_t probe = bad + step;
        if (probe > cutoff) {
            if (bad >= cutoff || !holds(cutoff)) {
                out.status = NodeCountStatus::not_found_below_cutoff;
                out.node_count = cutoff;
                return out;
            }
            good = cutoff;
            break;
        }
        if (holds(probe)) {
            good = probe;
            break;
        }
        bad = probe;
        step *= 2;
    }
    while (good - bad > 1) {
        const std::uint64_t mid = bad + (good - bad) / 2;
        (holds(mid) ? good : bad) = mid;
    }
    out.node_count = good;
    return out;
}

}  // namespace grokforge
