#pragma once

// Human/model comparison metrics and binomial significance.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cogact/attention.hpp"
#include "cogact/error.hpp"

namespace cogact {

struct PredictionPair {
    std::string top;
    std::optional<std::string> second;

    PredictionPair() = default;
    PredictionPair(std::string t, std::optional<std::string> s = std::nullopt) : top(std::move(t)), second(std::move(s)) {
        if (top.empty()) throw UsageError("prediction pair needs a top label");
        if (second && *second == top) throw UsageError("second label must differ from top ('" + top + "')");
    }

    friend bool operator==(const PredictionPair&, const PredictionPair&) = default;
};

enum class Metric { identical, both_match, tops_match, one_matches_top, single_match };

inline constexpr std::array<Metric, 5> all_metrics{Metric::identical, Metric::both_match, Metric::tops_match,
                                                   Metric::one_matches_top, Metric::single_match};

inline const char* to_string(Metric m) {
    switch (m) {
        case Metric::identical: return "identical";
        case Metric::both_match: return "both_match";
        case Metric::tops_match: return "tops_match";
        case Metric::one_matches_top: return "one_matches_top";
        case Metric::single_match: return "single_match";
    }
    return "?";
}

inline Metric parse_metric(const std::string& s) {
    for (auto m : all_metrics)
        if (s == to_string(m)) return m;
    throw UsageError("unknown metric '" + s + "'");
}

struct MetricRow {
    bool identical = false;
    bool both_match = false;
    bool tops_match = false;
    bool one_matches_top = false;
    bool single_match = false;

    bool get(Metric m) const {
        switch (m) {
            case Metric::identical: return identical;
            case Metric::both_match: return both_match;
            case Metric::tops_match: return tops_match;
            case Metric::one_matches_top: return one_matches_top;
            case Metric::single_match: return single_match;
        }
        return false;
    }

    friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

/// An absent second label never matches anything.
inline MetricRow score_pair(const PredictionPair& h, const PredictionPair& m) {
    MetricRow r;
    const bool seconds = h.second && m.second;
    r.identical = h.top == m.top && seconds && *h.second == *m.second;
    r.both_match = seconds && ((h.top == m.top && *h.second == *m.second) || (h.top == *m.second && *h.second == m.top));
    r.tops_match = h.top == m.top;
    r.one_matches_top = h.top == m.top || (m.second && h.top == *m.second);
    r.single_match = r.one_matches_top || (h.second && (*h.second == m.top || (m.second && *h.second == *m.second)));
    return r;
}

/// Top two labels with positive confidence, in the classification's order.
inline PredictionPair extract_pair(const Classification& c) {
    if (c.no_activation) throw UsageError("item is unclassifiable: no chunk activation");
    std::vector<const LabelScore*> pos;
    for (const auto& s : c.ranked)
        if (s.confidence > 0.0) pos.push_back(&s);
    if (pos.empty()) throw UsageError("item is unclassifiable: no positive confidence");
    if (pos.size() == 1) return PredictionPair(pos[0]->name);
    return PredictionPair(pos[0]->name, pos[1]->name);
}

struct MetricTotals {
    std::array<std::size_t, 5> counts{};
    std::size_t n = 0;

    void add(const MetricRow& r) {
        ++n;
        for (std::size_t i = 0; i < all_metrics.size(); ++i) counts[i] += r.get(all_metrics[i]) ? 1 : 0;
    }

    std::size_t operator[](Metric m) const { return counts[static_cast<std::size_t>(m)]; }
};

/// log C(n, k).
inline double log_choose(std::uint64_t n, std::uint64_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

namespace detail {

inline void check_binomial(std::uint64_t n, std::uint64_t k, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("binomial: p must lie in [0, 1]");
    if (k > n) throw UsageError("binomial: k must not exceed n");
}

inline double log_term(std::uint64_t n, std::uint64_t i, double p) {
    return log_choose(n, i) + static_cast<double>(i) * std::log(p) + static_cast<double>(n - i) * std::log1p(-p);
}

}  // namespace detail

/// P(X = k) for X ~ Binomial(n, p).
inline double binomial_pmf(std::uint64_t n, std::uint64_t k, double p) {
    detail::check_binomial(n, k, p);
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    return std::exp(detail::log_term(n, k, p));
}

/// P(X >= k), summed in log space.
inline double binomial_at_least(std::uint64_t n, std::uint64_t k, double p) {
    detail::check_binomial(n, k, p);
    if (k == 0) return 1.0;
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    std::vector<double> logs;
    logs.reserve(n - k + 1);
    for (std::uint64_t i = k; i <= n; ++i) logs.push_back(detail::log_term(n, i, p));
    double mx = -std::numeric_limits<double>::infinity();
    for (double l : logs) mx = std::max(mx, l);
    double s = 0.0;
    for (double l : logs) s += std::exp(l - mx);
    return std::min(1.0, std::exp(mx + std::log(s)));
}

inline double bonferroni(double alpha, std::size_t hypotheses) {
    if (hypotheses < 1) throw UsageError("bonferroni: hypothesis count must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw UsageError("bonferroni: alpha must lie in [0, 1]");
    return alpha / static_cast<double>(hypotheses);
}

enum class ChanceRule { independent_uniform, distinct_pairs };

inline const char* to_string(ChanceRule r) {
    return r == ChanceRule::independent_uniform ? "independent_uniform" : "distinct_pairs";
}

inline ChanceRule parse_chance_rule(const std::string& s) {
    if (s == "independent_uniform") return ChanceRule::independent_uniform;
    if (s == "distinct_pairs") return ChanceRule::distinct_pairs;
    throw UsageError("unknown chance rule '" + s + "' (expected independent_uniform|distinct_pairs)");
}

struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Chance that a random model pair scores 1 on `metric` against a fixed
/// human pair of two distinct labels, by enumerating the random model.
/// independent_uniform draws each slot uniformly (repeats allowed; a
/// repeated label acts as one label and an absent second);
/// distinct_pairs draws uniformly from ordered pairs of distinct labels.
inline Fraction chance_fraction(Metric metric, std::size_t label_count, ChanceRule rule) {
    if (label_count < 2) throw UsageError("chance probability needs at least 2 labels");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < label_count; ++i) labels.push_back("L" + std::to_string(i));
    const PredictionPair human(labels[0], labels[1]);
    Fraction f{0, 0};
    for (std::size_t a = 0; a < label_count; ++a)
        for (std::size_t b = 0; b < label_count; ++b) {
            if (a == b && rule == ChanceRule::distinct_pairs) continue;
            PredictionPair model = a == b ? PredictionPair(labels[a]) : PredictionPair(labels[a], labels[b]);
            ++f.den;
            if (score_pair(human, model).get(metric)) ++f.num;
        }
    return f;
}

inline double chance_probability(Metric metric, std::size_t label_count,
                                 ChanceRule rule = ChanceRule::independent_uniform) {
    return chance_fraction(metric, label_count, rule).value();
}

struct SignificanceLine {
    Metric metric{};
    std::size_t total = 0;
    std::size_t n = 0;
    double p = 0.0;
    double tail = 1.0;
    double threshold = 0.0;
    bool significant = false;
};

inline std::vector<SignificanceLine> significance(const MetricTotals& t, std::size_t label_count, ChanceRule rule,
                                                  double alpha = 0.05) {
    std::vector<SignificanceLine> out;
    const double thr = bonferroni(alpha, all_metrics.size());
    for (auto m : all_metrics) {
        SignificanceLine l;
        l.metric = m;
        l.total = t[m];
        l.n = t.n;
        l.p = chance_probability(m, label_count, rule);
        l.tail = binomial_at_least(t.n, t[m], l.p);
        l.threshold = thr;
        l.significant = l.tail < thr;
        out.push_back(l);
    }
    return out;
}

inline std::string significance_report(const std::vector<SignificanceLine>& lines) {
    std::string out = "metric,total,n,p,tail_probability,threshold,significant\n";
    char buf[256];
    for (const auto& l : lines) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.6g,%.6g,%.6g,%s\n", to_string(l.metric), l.total, l.n, l.p,
                      l.tail, l.threshold, l.significant ? "yes" : "no");
        out += buf;
    }
    return out;
}

struct ScoredItem {
    std::string participant;
    std::string item;
    PredictionPair human;
    PredictionPair model;
    MetricRow row;
};

inline std::string metrics_csv(const std::vector<ScoredItem>& items) {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    std::string out = "participant,item,identical,both_match,tops_match,one_matches_top,single_match\n";
    for (const auto& it : items) {
        out += quote(it.participant) + "," + quote(it.item);
        for (auto m : all_metrics) out += it.row.get(m) ? ",1" : ",0";
        out += "\n";
    }
    return out;
}

}  // namespace cogact
