#pragma once

// Attention window over a stimulus, chunk activation and the confidence
// scores derived from it.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cogact/error.hpp"
#include "cogact/ltm.hpp"
#include "cogact/pattern.hpp"

namespace cogact {

enum class SpanUnit { tokens, measures };
enum class ActivationWeighting { proportional, multiplicative };
enum class ActivationQuantum { image, contents };

inline const char* to_string(SpanUnit u) { return u == SpanUnit::tokens ? "tokens" : "measures"; }
inline const char* to_string(ActivationWeighting w) {
    return w == ActivationWeighting::proportional ? "proportional" : "multiplicative";
}

inline const char* to_string(ActivationQuantum q) { return q == ActivationQuantum::image ? "image" : "contents"; }

inline ActivationQuantum parse_quantum(const std::string& s) {
    if (s == "image") return ActivationQuantum::image;
    if (s == "contents") return ActivationQuantum::contents;
    throw UsageError("unknown activation quantum '" + s + "' (expected image|contents)");
}

inline SpanUnit parse_span_unit(const std::string& s) {
    if (s == "tokens") return SpanUnit::tokens;
    if (s == "measures") return SpanUnit::measures;
    throw UsageError("unknown span unit '" + s + "' (expected tokens|measures)");
}

inline ActivationWeighting parse_weighting(const std::string& s) {
    if (s == "proportional") return ActivationWeighting::proportional;
    if (s == "multiplicative") return ActivationWeighting::multiplicative;
    throw UsageError("unknown activation weighting '" + s + "' (expected proportional|multiplicative)");
}

struct AttentionConfig {
    std::size_t span = 20;      // m, in `unit`
    std::size_t step = 0;       // t, in `unit`; 0 means "same as span"
    std::size_t min_fetch = 2;  // always tokens
    SpanUnit unit = SpanUnit::tokens;
    ActivationWeighting weighting = ActivationWeighting::proportional;
    ActivationQuantum quantum = ActivationQuantum::image;

    std::size_t effective_step() const noexcept { return step == 0 ? span : step; }

    void validate() const {
        if (min_fetch < 2) throw UsageError("min_fetch must be >= 2");
        if (unit == SpanUnit::tokens && span < min_fetch)
            throw UsageError("attention span must be >= min_fetch (" + std::to_string(min_fetch) + ")");
        if (unit == SpanUnit::measures && span < 1) throw UsageError("attention span must be >= 1 measure");
    }
};

/// A stimulus plus optional measure boundaries (token offsets where each
/// measure starts; the first is 0).
struct Stimulus {
    Pattern tokens;
    std::vector<std::size_t> measure_starts;
};

/// Token range [begin, end) of one attention window.
struct Window {
    std::size_t begin = 0;
    std::size_t end = 0;
};

inline std::vector<Window> attention_windows(const Stimulus& s, const AttentionConfig& cfg) {
    cfg.validate();
    const std::size_t n = s.tokens.size();
    std::vector<Window> out;
    if (cfg.unit == SpanUnit::tokens) {
        for (std::size_t o = 0; o < n; o += cfg.effective_step()) out.push_back({o, std::min(o + cfg.span, n)});
        return out;
    }
    std::vector<std::size_t> starts = s.measure_starts;
    if (starts.empty() || starts.front() != 0) starts.insert(starts.begin(), 0);
    for (std::size_t i = 0; i < starts.size(); i += cfg.effective_step()) {
        if (starts[i] >= n) break;
        std::size_t j = i + cfg.span;
        out.push_back({starts[i], j < starts.size() ? std::min(starts[j], n) : n});
    }
    return out;
}

/// Shrinking fetches of one window: the window itself, then each suffix down
/// to min_fetch tokens.
inline std::vector<Pattern> window_suffixes(const Pattern& stim, Window w, std::size_t min_fetch) {
    std::vector<Pattern> out;
    for (std::size_t b = w.begin; b < w.end && w.end - b >= min_fetch; ++b) out.push_back(stim.slice(b, w.end));
    return out;
}

/// Fetches grouped by window, in window order.
inline std::vector<std::vector<Pattern>> grouped_fetches(const Stimulus& s, const AttentionConfig& cfg) {
    if (s.tokens.empty()) throw UsageError("attention window: stimulus must be non-empty");
    std::vector<std::vector<Pattern>> out;
    for (auto w : attention_windows(s, cfg)) out.push_back(window_suffixes(s.tokens, w, cfg.min_fetch));
    return out;
}

inline std::vector<Pattern> window_fetches(const Stimulus& s, const AttentionConfig& cfg) {
    std::vector<Pattern> out;
    for (auto& g : grouped_fetches(s, cfg))
        for (auto& p : g) out.push_back(std::move(p));
    return out;
}

inline std::vector<Pattern> window_fetches(const Pattern& p, const AttentionConfig& cfg) {
    return window_fetches(Stimulus{p, {}}, cfg);
}

struct ActivationTally {
    std::map<NodeId, double> activation;  // keyed by label node

    double total() const {
        double t = 0.0;
        for (const auto& [_, a] : activation) t += a;
        return t;
    }
};

/// Size a recognised chunk contributes: its image length or its path length.
inline std::size_t activation_quantum(const Ltm& ltm, NodeId id, ActivationQuantum q) {
    if (ltm.node(id).is_root()) return 0;
    return q == ActivationQuantum::image ? ltm.node(id).image.size() : ltm.chunk_size(id);
}

/// Credits the node's linked labels with its chunk size.
inline void credit(const Ltm& ltm, ActivationTally& tally, NodeId id, ActivationWeighting w,
                   ActivationQuantum q = ActivationQuantum::image) {
    const Node& n = ltm.node(id);
    if (n.is_root() || n.naming_links.empty()) return;
    const double size = static_cast<double>(activation_quantum(ltm, id, q));
    const double total = static_cast<double>(ltm.total_links(id));
    for (const auto& [label, count] : n.naming_links) {
        const double c = static_cast<double>(count);
        tally.activation[label] += w == ActivationWeighting::proportional ? size * (c / total) : size * c;
    }
}

/// Credits a single fetch.
inline void accumulate(const Ltm& ltm, ActivationTally& tally, const Pattern& fetch,
                       ActivationWeighting w = ActivationWeighting::proportional,
                       ActivationQuantum q = ActivationQuantum::image) {
    if (auto n = ltm.try_recognise(fetch)) credit(ltm, tally, *n, w, q);
}

/// Largest linked chunk recognised among one window's fetches. Ties keep the
/// earlier (longer) fetch.
inline std::optional<NodeId> largest_linked_chunk(const Ltm& ltm, const std::vector<Pattern>& fetches,
                                                  ActivationQuantum q = ActivationQuantum::image) {
    std::optional<NodeId> best;
    std::size_t best_size = 0;
    for (const auto& f : fetches) {
        auto n = ltm.try_recognise(f);
        if (!n || ltm.node(*n).naming_links.empty()) continue;
        std::size_t size = activation_quantum(ltm, *n, q);
        if (!best || size > best_size) {
            best = n;
            best_size = size;
        }
    }
    return best;
}

inline void accumulate_window(const Ltm& ltm, ActivationTally& tally, const std::vector<Pattern>& fetches,
                              ActivationWeighting w = ActivationWeighting::proportional,
                              ActivationQuantum q = ActivationQuantum::image) {
    if (auto n = largest_linked_chunk(ltm, fetches, q)) credit(ltm, tally, *n, w, q);
}

struct LabelScore {
    NodeId label{};
    std::string name;
    double activation = 0.0;
    double confidence = 0.0;
};

struct Classification {
    std::vector<LabelScore> ranked;  // descending confidence, ties by label id
    bool no_activation = true;

    const LabelScore* top() const { return no_activation || ranked.empty() ? nullptr : &ranked.front(); }
};

/// Every node that is the target of some naming link, in creation order.
inline std::vector<NodeId> label_nodes(const Ltm& ltm) {
    std::set<NodeId> s;
    for (const auto& n : ltm.nodes())
        for (const auto& [to, _] : n.naming_links) s.insert(to);
    return {s.begin(), s.end()};
}

inline std::string label_name(const Ltm& ltm, NodeId id) {
    const Node& n = ltm.node(id);
    return n.image.empty() ? ltm.contents(id).to_string() : n.image.to_string();
}

/// Confidence C_i = a_i / sum(a). `labels` fixes the reported label set
/// (labels missing from the tally score 0).
inline Classification confidence(const Ltm& ltm, const ActivationTally& tally, const std::vector<NodeId>& labels) {
    std::set<NodeId> all(labels.begin(), labels.end());
    for (const auto& [l, _] : tally.activation) all.insert(l);
    Classification c;
    const double total = tally.total();
    c.no_activation = !(total > 0.0);
    for (NodeId l : all) {
        LabelScore s;
        s.label = l;
        s.name = label_name(ltm, l);
        if (auto it = tally.activation.find(l); it != tally.activation.end()) s.activation = it->second;
        s.confidence = c.no_activation ? 0.0 : s.activation / total;
        c.ranked.push_back(std::move(s));
    }
    std::stable_sort(c.ranked.begin(), c.ranked.end(),
                     [](const LabelScore& a, const LabelScore& b) { return a.confidence > b.confidence; });
    return c;
}

inline Classification categorise(const Ltm& ltm, const Stimulus& s, const AttentionConfig& cfg) {
    ActivationTally tally;
    for (const auto& g : grouped_fetches(s, cfg)) accumulate_window(ltm, tally, g, cfg.weighting, cfg.quantum);
    return confidence(ltm, tally, label_nodes(ltm));
}

inline Classification categorise(const Ltm& ltm, const Pattern& p, const AttentionConfig& cfg) {
    return categorise(ltm, Stimulus{p, {}}, cfg);
}

/// Image of the node the stimulus sorts to; empty when nothing is recognised.
inline Pattern retrieve(const Ltm& ltm, const Pattern& p) {
    auto n = ltm.try_recognise(p);
    if (!n) return Pattern(p.modality(), std::vector<std::string>{});
    return ltm.node(*n).image;
}

}  // namespace cogact
