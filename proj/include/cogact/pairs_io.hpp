#pragma once

// Reading prediction pairs: participant TSV fixtures and suite CSVs.

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cogact/corpus.hpp"
#include "cogact/error.hpp"
#include "cogact/metrics.hpp"

namespace cogact {

struct PairRecord {
    std::string participant;
    std::string item;
    PredictionPair pair;
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find('\t', start);
        out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos) return out;
        start = pos + 1;
    }
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
            else if (c == '"') quoted = false;
            else cur += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

inline std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        if (!l.empty() && l.back() == '\r') l.pop_back();
        out.push_back(std::move(l));
    }
    return out;
}

}  // namespace detail

/// participant<TAB>item<TAB>top<TAB>second, with "-" for an absent second.
inline std::vector<PairRecord> parse_pairs_tsv(const std::string& text, const std::string& source = "<pairs>") {
    auto lines = detail::lines_of(text);
    if (lines.empty() || lines[0] != "participant\titem\ttop\tsecond")
        throw LoadError(source + ": expected header 'participant<TAB>item<TAB>top<TAB>second'");
    std::vector<PairRecord> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto f = detail::split_tabs(lines[i]);
        if (f.size() != 4) throw LoadError(source, i + 1, 1, "expected 4 tab-separated fields");
        try {
            out.push_back({f[0], f[1], PredictionPair(f[2], f[3] == "-" ? std::nullopt : std::optional(f[3]))});
        } catch (const UsageError& e) {
            throw LoadError(source, i + 1, 1, e.what());
        }
    }
    return out;
}

/// Pairs from a suite CSV (test_id, label columns, predicted, correct). Rows
/// without activation are skipped. Ties keep column order.
inline std::vector<PairRecord> parse_suite_csv_pairs(const std::string& text, const std::string& participant,
                                                     const std::string& source = "<suite>") {
    auto lines = detail::lines_of(text);
    if (lines.empty()) throw LoadError(source + ": empty file");
    auto header = detail::split_csv(lines[0]);
    if (header.size() < 4 || header.front() != "test_id" || header[header.size() - 2] != "predicted" ||
        header.back() != "correct")
        throw LoadError(source + ": not a suite CSV (expected test_id,<labels>,predicted,correct)");
    std::vector<std::string> labels(header.begin() + 1, header.end() - 2);
    std::vector<PairRecord> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto f = detail::split_csv(lines[i]);
        if (f.size() != header.size()) throw LoadError(source, i + 1, 1, "wrong field count");
        std::vector<std::pair<double, std::size_t>> conf;
        for (std::size_t k = 0; k < labels.size(); ++k) {
            double v = 0.0;
            try {
                v = std::stod(f[k + 1]);
            } catch (const std::logic_error&) {
                throw LoadError(source, i + 1, 1, "bad confidence '" + f[k + 1] + "'");
            }
            if (v > 0.0) conf.emplace_back(v, k);
        }
        if (conf.empty()) continue;
        std::stable_sort(conf.begin(), conf.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        PredictionPair p = conf.size() == 1 ? PredictionPair(labels[conf[0].second])
                                            : PredictionPair(labels[conf[0].second], labels[conf[1].second]);
        out.push_back({participant, f[0], p});
    }
    return out;
}

inline bool looks_like_suite_csv(const std::string& text) { return text.rfind("test_id,", 0) == 0; }

inline std::vector<PairRecord> load_pairs(const std::filesystem::path& p, const std::string& participant = "model") {
    std::string text = read_file(p);
    if (looks_like_suite_csv(text)) return parse_suite_csv_pairs(text, participant, p.string());
    return parse_pairs_tsv(text, p.string());
}

/// Scores human against model pairs joined on (participant, item). A suite
/// CSV carries no participant, so its rows join on item alone.
inline std::vector<ScoredItem> score_fixture(const std::vector<PairRecord>& human, const std::vector<PairRecord>& model,
                                             bool join_on_item_only = false) {
    std::map<std::pair<std::string, std::string>, const PairRecord*> index;
    for (const auto& m : model) {
        auto key = std::make_pair(join_on_item_only ? std::string() : m.participant, m.item);
        if (!index.emplace(key, &m).second) throw LoadError("duplicate model row for item '" + m.item + "'");
    }
    std::vector<ScoredItem> out;
    for (const auto& h : human) {
        auto key = std::make_pair(join_on_item_only ? std::string() : h.participant, h.item);
        auto it = index.find(key);
        if (it == index.end()) throw LoadError("no model prediction for " + h.participant + " / " + h.item);
        out.push_back({h.participant, h.item, h.pair, it->second->pair, score_pair(h.pair, it->second->pair)});
    }
    return out;
}

/// Largest number of distinct labels used (by either side) for one participant.
inline std::size_t max_labels_per_participant(const std::vector<ScoredItem>& items) {
    std::map<std::string, std::set<std::string>> per;
    for (const auto& it : items)
        for (const auto* p : {&it.human, &it.model}) {
            per[it.participant].insert(p->top);
            if (p->second) per[it.participant].insert(*p->second);
        }
    std::size_t best = 0;
    for (const auto& [_, s] : per) best = std::max(best, s.size());
    return best;
}

}  // namespace cogact
