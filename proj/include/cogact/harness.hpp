#pragma once

// Training loop, suite evaluation and seed sweeps.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "cogact/attention.hpp"
#include "cogact/config.hpp"
#include "cogact/corpus.hpp"
#include "cogact/error.hpp"
#include "cogact/ltm.hpp"
#include "cogact/stm.hpp"

namespace cogact {

enum class Feature { stm, naming_links };

inline Feature parse_feature(const std::string& s) {
    if (s == "stm") return Feature::stm;
    if (s == "naming_links") return Feature::naming_links;
    throw UsageError("unknown feature '" + s + "' (expected stm|naming_links)");
}

/// A trained (or training) model: both networks, the STM queues and the
/// settings needed to classify new input the same way.
struct Model {
    RunConfig config;
    Tokenizer tokenizer = Tokenizer::words;
    bool lowercase = false;
    Modality visual = Modality::visual();
    Modality verbal = Modality::verbal();
    std::vector<std::string> labels;  // manifest order
    Ltm ltm;
    StmQueue visual_stm{Modality::visual()};
    StmQueue verbal_stm{Modality::verbal()};
    bool stm_enabled = true;
    bool naming_links_enabled = true;

    AttentionConfig attention() const { return config.attention_for(tokenizer); }

    static Model fresh(const RunConfig& cfg, Tokenizer tok, bool lowercase, std::vector<std::string> labels) {
        cfg.validate();
        Model m;
        m.config = cfg;
        m.tokenizer = tok;
        m.lowercase = lowercase;
        m.labels = std::move(labels);
        // Distinct stream from the presentation shuffle.
        m.ltm = Ltm(cfg.ltm_params(), cfg.seed ^ 0x9E3779B97F4A7C15ULL);
        m.visual_stm = StmQueue(m.visual, cfg.stm_size);
        m.verbal_stm = StmQueue(m.verbal, cfg.stm_size);
        m.ltm.root(m.visual);
        m.ltm.root(m.verbal);
        return m;
    }

    Stimulus stimulus_from_text(std::string_view text, const std::string& source = "<input>") const {
        TokenStream ts = tokenize(tokenizer, text, source, lowercase);
        return Stimulus{Pattern(visual, std::move(ts.tokens)), std::move(ts.measure_starts)};
    }
};

/// Returns a copy with `f` switched off for later training. Recognition and
/// classification are unaffected.
inline Model ablate(Model m, Feature f) {
    if (f == Feature::stm) m.stm_enabled = false;
    else m.naming_links_enabled = false;
    return m;
}

inline Model ablate(Model m, const std::string& feature) { return ablate(std::move(m), parse_feature(feature)); }

struct TrainingRun {
    std::uint64_t seed = 0;
    std::size_t epoch_count = 0;
    std::size_t created = 0;
    std::size_t familiarised = 0;
    std::size_t no_change = 0;
    std::size_t links_formed = 0;
    double simulated_time_seconds = 0.0;
    bool converged = false;
    std::vector<std::size_t> structural_per_epoch;
    std::map<std::string, std::size_t> nodes_per_modality;

    /// Epochs whose structural count exceeded the previous epoch's.
    std::vector<std::size_t> monotonicity_violations() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 1; i < structural_per_epoch.size(); ++i)
            if (structural_per_epoch[i] > structural_per_epoch[i - 1]) out.push_back(i + 1);
        return out;
    }
};

inline nlohmann::json to_json(const TrainingRun& r) {
    nlohmann::json j;
    j["seed"] = r.seed;
    j["epochs"] = r.epoch_count;
    j["converged"] = r.converged;
    j["events"] = {{"created_node", r.created}, {"familiarised", r.familiarised}, {"no_change", r.no_change}};
    j["naming_links_formed"] = r.links_formed;
    j["simulated_time_seconds"] = r.simulated_time_seconds;
    j["structural_events_per_epoch"] = r.structural_per_epoch;
    j["nodes"] = r.nodes_per_modality;
    j["monotonicity_violations"] = r.monotonicity_violations();
    return j;
}

namespace detail {

inline void record(TrainingRun& run, const LearnEvent& e, std::size_t& structural) {
    switch (e.kind) {
        case LearnKind::created_node: ++run.created, ++structural; break;
        case LearnKind::familiarised: ++run.familiarised, ++structural; break;
        case LearnKind::no_change: ++run.no_change; break;
    }
}

}  // namespace detail

/// One presentation of a labelled sample: learn both patterns, push the
/// recognised chunks to STM, link co-occupying chunks.
inline void present(Model& m, const Sample& s, TrainingRun& run, std::size_t& structural) {
    detail::record(run, m.ltm.learn(s.visual), structural);
    detail::record(run, m.ltm.learn(s.label), structural);
    if (!m.stm_enabled) return;
    m.visual_stm.push(m.ltm, m.ltm.recognise(s.visual), s.visual);
    m.verbal_stm.push(m.ltm, m.ltm.recognise(s.label), s.label);
    if (!m.naming_links_enabled) return;
    for (auto [v, w] : co_occupancies(m.ltm, m.visual_stm, m.verbal_stm, m.config.link_gate, m.config.link_pairing)) {
        m.ltm.add_naming_link(v, w);
        ++run.links_formed;
    }
}

/// Trains until an epoch makes no structural change or max_epochs is hit
/// (converged = false). Throws NonConvergenceError past the node ceiling.
inline TrainingRun train_on(Model& m, std::vector<Sample> samples) {
    TrainingRun run;
    run.seed = m.config.seed;
    std::size_t tokens = 0;
    for (const auto& s : samples) tokens += s.visual.size() + s.label.size();
    const double ceiling = m.config.node_ceiling_factor * static_cast<double>(std::max<std::size_t>(tokens, 1));
    const double clock_start = m.ltm.clock();
    std::mt19937_64 order_rng(m.config.seed);
    for (std::size_t epoch = 1; epoch <= m.config.max_epochs; ++epoch) {
        if (m.config.presentation == Presentation::shuffled) std::shuffle(samples.begin(), samples.end(), order_rng);
        std::size_t structural = 0;
        for (const auto& s : samples) {
            present(m, s, run, structural);
            if (static_cast<double>(m.ltm.node_count()) > ceiling)
                throw NonConvergenceError("node count " + std::to_string(m.ltm.node_count()) + " exceeded ceiling " +
                                          std::to_string(static_cast<std::size_t>(ceiling)) + " in epoch " +
                                          std::to_string(epoch));
        }
        run.epoch_count = epoch;
        run.structural_per_epoch.push_back(structural);
        if (structural == 0) {
            run.converged = true;
            break;
        }
    }
    run.simulated_time_seconds = m.ltm.clock() - clock_start;
    for (const auto& [mod, _] : m.ltm.roots()) run.nodes_per_modality[mod.name()] = m.ltm.network_size(mod);
    return run;
}

struct TrainResult {
    Model model;
    TrainingRun run;
};

inline TrainResult train(const Manifest& manifest, const RunConfig& cfg) {
    Dataset d = load_dataset(manifest);
    Model m = Model::fresh(cfg, manifest.tokenizer, manifest.lowercase, manifest.labels());
    TrainingRun run = train_on(m, std::move(d.training));
    return {std::move(m), std::move(run)};
}

struct SuiteRow {
    std::string id;
    Classification classification;
    std::optional<std::string> predicted;
    std::optional<std::string> expected;

    std::optional<bool> correct() const {
        if (!expected) return std::nullopt;
        return predicted && *predicted == *expected;
    }
};

struct AnchorResult {
    Anchor anchor;
    std::optional<std::string> predicted;
    bool passed = false;
};

struct SuiteResult {
    std::vector<std::string> labels;
    std::vector<SuiteRow> rows;
    std::size_t correct_count = 0;
    std::size_t total = 0;  // rows with a known label
    double chance_baseline = 0.0;
    std::vector<AnchorResult> anchors;

    bool anchors_passed() const {
        return std::all_of(anchors.begin(), anchors.end(), [](const AnchorResult& a) { return a.passed; });
    }
};

inline SuiteRow classify_item(const Model& m, const TestItem& t) {
    SuiteRow r;
    r.id = t.id;
    r.expected = t.expected;
    r.classification = categorise(m.ltm, t.stimulus, m.attention());
    if (const auto* top = r.classification.top()) r.predicted = top->name;
    return r;
}

inline SuiteResult run_suite(const Model& m, const std::vector<TestItem>& tests,
                             const std::vector<Anchor>& anchors = {}) {
    SuiteResult res;
    res.labels = m.labels;
    for (const auto& t : tests) {
        SuiteRow r = classify_item(m, t);
        if (r.expected) {
            ++res.total;
            if (*r.correct()) ++res.correct_count;
        }
        res.rows.push_back(std::move(r));
    }
    res.chance_baseline = m.labels.empty() ? 0.0 : static_cast<double>(res.total) / static_cast<double>(m.labels.size());
    for (const auto& a : anchors) {
        AnchorResult ar{a, std::nullopt, false};
        for (const auto& r : res.rows)
            if (r.id == a.item) ar.predicted = r.predicted;
        ar.passed = ar.predicted && *ar.predicted == a.label;
        res.anchors.push_back(std::move(ar));
    }
    return res;
}

inline SuiteResult run_suite(const Model& m, const Manifest& manifest) {
    return run_suite(m, load_dataset(manifest).tests, manifest.anchors);
}

inline std::string format_confidence(double c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", c);
    return buf;
}

inline double confidence_of(const Classification& c, const std::string& label) {
    for (const auto& s : c.ranked)
        if (s.name == label) return s.confidence;
    return 0.0;
}

/// test_id, one confidence column per label, predicted, correct.
inline std::string suite_csv(const SuiteResult& r) {
    std::string out = "test_id";
    for (const auto& l : r.labels) out += "," + l;
    out += ",predicted,correct\n";
    for (const auto& row : r.rows) {
        out += row.id;
        for (const auto& l : r.labels) out += "," + format_confidence(confidence_of(row.classification, l));
        out += "," + row.predicted.value_or("-");
        auto c = row.correct();
        out += c ? (*c ? ",1" : ",0") : ",";
        out += "\n";
    }
    return out;
}

inline std::string suite_table(const SuiteResult& r) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-28s", "test");
    out += buf;
    for (const auto& l : r.labels) {
        std::snprintf(buf, sizeof buf, " %10s", l.c_str());
        out += buf;
    }
    out += "  predicted  correct\n";
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%-28s", row.id.c_str());
        out += buf;
        for (const auto& l : r.labels) {
            std::snprintf(buf, sizeof buf, " %10.3f", confidence_of(row.classification, l));
            out += buf;
        }
        auto c = row.correct();
        std::snprintf(buf, sizeof buf, "  %-9s  %s\n", row.predicted.value_or("-").c_str(), c ? (*c ? "yes" : "no") : "");
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "correct %zu/%zu (chance %.2f)\n", r.correct_count, r.total, r.chance_baseline);
    out += buf;
    for (const auto& a : r.anchors) {
        std::snprintf(buf, sizeof buf, "anchor %s -> %s: %s (got %s)\n", a.anchor.item.c_str(), a.anchor.label.c_str(),
                      a.passed ? "ok" : "FAILED", a.predicted.value_or("-").c_str());
        out += buf;
    }
    return out;
}

struct SweepItem {
    std::string id;
    std::map<std::string, std::size_t> votes;  // label (or "-") -> runs
    std::string modal;
    std::optional<std::string> reference;
};

struct SweepReport {
    std::uint64_t first_seed = 0;
    std::size_t runs = 0;
    std::vector<SweepItem> items;
    std::size_t agreement = 0;  // modal label equals reference
    std::size_t compared = 0;   // items with a reference
    std::map<std::string, std::size_t> anchor_passes;  // item -> runs passing
};

/// Trains `count` models with seeds first_seed.. (presentation always
/// shuffled, otherwise the seed would not matter) and reports each test
/// item's modal label. Modal ties go to the label listed first in the
/// manifest.
inline SweepReport seed_sweep(const Manifest& manifest, RunConfig cfg, std::uint64_t first_seed, std::size_t count) {
    cfg.presentation = Presentation::shuffled;
    SweepReport rep;
    rep.first_seed = first_seed;
    rep.runs = count;
    Dataset d = load_dataset(manifest);
    for (const auto& t : d.tests) {
        SweepItem it;
        it.id = t.id;
        if (auto r = manifest.reference_labels.find(t.id); r != manifest.reference_labels.end()) it.reference = r->second;
        rep.items.push_back(std::move(it));
    }
    for (const auto& a : manifest.anchors) rep.anchor_passes[a.item] = 0;
    for (std::size_t k = 0; k < count; ++k) {
        cfg.seed = first_seed + k;
        Model m = Model::fresh(cfg, manifest.tokenizer, manifest.lowercase, manifest.labels());
        train_on(m, d.training);
        SuiteResult res = run_suite(m, d.tests, manifest.anchors);
        for (std::size_t i = 0; i < res.rows.size(); ++i) ++rep.items[i].votes[res.rows[i].predicted.value_or("-")];
        for (const auto& a : res.anchors)
            if (a.passed) ++rep.anchor_passes[a.anchor.item];
    }
    std::vector<std::string> order = manifest.labels();
    order.push_back("-");
    for (auto& it : rep.items) {
        std::size_t best = 0;
        for (const auto& l : order)
            if (auto v = it.votes.find(l); v != it.votes.end() && v->second > best) {
                best = v->second;
                it.modal = l;
            }
        if (it.reference) {
            ++rep.compared;
            if (it.modal == *it.reference) ++rep.agreement;
        }
    }
    return rep;
}

inline std::string sweep_table(const SweepReport& r) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "seed sweep: %zu runs from seed %llu\n", r.runs,
                  static_cast<unsigned long long>(r.first_seed));
    out += buf;
    for (const auto& it : r.items) {
        std::string votes;
        for (const auto& [l, n] : it.votes) votes += " " + l + ":" + std::to_string(n);
        std::snprintf(buf, sizeof buf, "%-12s modal %-6s reference %-6s votes%s\n", it.id.c_str(), it.modal.c_str(),
                      it.reference.value_or("-").c_str(), votes.c_str());
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "agreement with reference: %zu/%zu\n", r.agreement, r.compared);
    out += buf;
    for (const auto& [item, n] : r.anchor_passes) {
        std::snprintf(buf, sizeof buf, "anchor %s held in %zu/%zu runs\n", item.c_str(), n, r.runs);
        out += buf;
    }
    return out;
}

}  // namespace cogact
