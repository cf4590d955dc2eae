#pragma once

// Run configuration. Every field has a default, so "{}" is a valid config.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "cogact/attention.hpp"
#include "cogact/corpus.hpp"
#include "cogact/error.hpp"
#include "cogact/ltm.hpp"
#include "cogact/stm.hpp"

namespace cogact {

enum class Presentation { shuffled, fixed };

inline const char* to_string(Presentation p) { return p == Presentation::shuffled ? "shuffled" : "fixed"; }

inline Presentation parse_presentation(const std::string& s) {
    if (s == "shuffled") return Presentation::shuffled;
    if (s == "fixed") return Presentation::fixed;
    throw UsageError("unknown presentation '" + s + "' (expected shuffled|fixed)");
}

struct RunConfig {
    std::size_t stm_size = 5;
    std::optional<std::size_t> attention_span;        // default: 20 tokens, or 1 measure for music
    std::optional<SpanUnit> attention_unit;           // default: measures for music, tokens otherwise
    std::size_t attention_step = 0;                   // 0: same as span
    std::size_t min_fetch = 2;
    double chunk_probability = 1.0;
    double t_create_seconds = 10.0;
    double t_update_seconds = 2.0;
    std::uint64_t seed = 1;
    std::size_t max_epochs = 1000;
    double node_ceiling_factor = 10.0;
    LinkGate link_gate = LinkGate::nonempty;
    LinkPairing link_pairing = LinkPairing::heads;
    ActivationWeighting activation_weighting = ActivationWeighting::proportional;
    ActivationQuantum activation_quantum = ActivationQuantum::image;
    Presentation presentation = Presentation::shuffled;

    void validate() const {
        if (stm_size < StmQueue::min_capacity || stm_size > StmQueue::max_capacity)
            throw UsageError("stm_size must lie in [2, 9]");
        if (!(chunk_probability >= 0.0 && chunk_probability <= 1.0))
            throw UsageError("chunk_probability must lie in [0, 1]");
        if (!(t_create_seconds >= 0.0 && t_update_seconds >= 0.0)) throw UsageError("learning costs must be >= 0");
        if (max_epochs < 1) throw UsageError("max_epochs must be >= 1");
        if (!(node_ceiling_factor > 0.0)) throw UsageError("node_ceiling_factor must be > 0");
        attention_for(Tokenizer::words).validate();
    }

    LtmParams ltm_params() const { return {chunk_probability, t_create_seconds, t_update_seconds}; }

    /// Attention settings with tokenizer-dependent defaults filled in.
    AttentionConfig attention_for(Tokenizer t) const {
        AttentionConfig a;
        const bool music = t == Tokenizer::music_frames;
        a.unit = attention_unit.value_or(music ? SpanUnit::measures : SpanUnit::tokens);
        a.span = attention_span.value_or(a.unit == SpanUnit::measures ? 1 : 20);
        a.step = attention_step;
        a.min_fetch = min_fetch;
        a.weighting = activation_weighting;
        a.quantum = activation_quantum;
        return a;
    }
};

inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["stm_size"] = c.stm_size;
    j["attention_span"] = c.attention_span ? nlohmann::json(*c.attention_span) : nlohmann::json(nullptr);
    j["attention_unit"] = c.attention_unit ? nlohmann::json(to_string(*c.attention_unit)) : nlohmann::json(nullptr);
    j["attention_step"] = c.attention_step;
    j["min_fetch"] = c.min_fetch;
    j["chunk_probability"] = c.chunk_probability;
    j["t_create_seconds"] = c.t_create_seconds;
    j["t_update_seconds"] = c.t_update_seconds;
    j["seed"] = c.seed;
    j["max_epochs"] = c.max_epochs;
    j["node_ceiling_factor"] = c.node_ceiling_factor;
    j["link_gate"] = to_string(c.link_gate);
    j["link_pairing"] = to_string(c.link_pairing);
    j["activation_weighting"] = to_string(c.activation_weighting);
    j["activation_quantum"] = to_string(c.activation_quantum);
    j["presentation"] = to_string(c.presentation);
    return j;
}

inline RunConfig config_from_json(const nlohmann::json& j, const std::string& where = "config") {
    if (!j.is_object()) throw LoadError(where + ": top level must be an object");
    RunConfig c;
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& k = it.key();
            const auto& v = it.value();
            if (k == "stm_size") c.stm_size = v.get<std::size_t>();
            else if (k == "attention_span") c.attention_span = v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>());
            else if (k == "attention_unit")
                c.attention_unit = v.is_null() ? std::nullopt : std::optional(parse_span_unit(v.get<std::string>()));
            else if (k == "attention_step") c.attention_step = v.is_null() ? 0 : v.get<std::size_t>();
            else if (k == "min_fetch") c.min_fetch = v.get<std::size_t>();
            else if (k == "chunk_probability") c.chunk_probability = v.get<double>();
            else if (k == "t_create_seconds") c.t_create_seconds = v.get<double>();
            else if (k == "t_update_seconds") c.t_update_seconds = v.get<double>();
            else if (k == "seed") c.seed = v.get<std::uint64_t>();
            else if (k == "max_epochs") c.max_epochs = v.get<std::size_t>();
            else if (k == "node_ceiling_factor") c.node_ceiling_factor = v.get<double>();
            else if (k == "link_gate") c.link_gate = parse_link_gate(v.get<std::string>());
            else if (k == "link_pairing") c.link_pairing = parse_link_pairing(v.get<std::string>());
            else if (k == "activation_weighting") c.activation_weighting = parse_weighting(v.get<std::string>());
            else if (k == "activation_quantum") c.activation_quantum = parse_quantum(v.get<std::string>());
            else if (k == "presentation") c.presentation = parse_presentation(v.get<std::string>());
            else throw LoadError(where + ": unknown key '" + k + "'");
        }
        c.validate();
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(where + ": " + e.what());
    } catch (const UsageError& e) {
        throw LoadError(where + ": " + e.what());
    }
    return c;
}

inline RunConfig load_config(const std::filesystem::path& p) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(p));
    } catch (const nlohmann::json::parse_error& e) {
        throw LoadError(p.string() + ": " + e.what());
    }
    return config_from_json(j, p.string());
}

}  // namespace cogact
