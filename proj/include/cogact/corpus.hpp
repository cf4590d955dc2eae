#pragma once

// Tokenizers, sample splitting and dataset manifests.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cogact/attention.hpp"
#include "cogact/error.hpp"
#include "cogact/pattern.hpp"

namespace cogact {

enum class Tokenizer { words, chars, logic_bits, music_frames, chess_rows };

inline const char* to_string(Tokenizer t) {
    switch (t) {
        case Tokenizer::words: return "words";
        case Tokenizer::chars: return "chars";
        case Tokenizer::logic_bits: return "logic_bits";
        case Tokenizer::music_frames: return "music_frames";
        case Tokenizer::chess_rows: return "chess_rows";
    }
    return "?";
}

inline Tokenizer parse_tokenizer(const std::string& s) {
    for (auto t : {Tokenizer::words, Tokenizer::chars, Tokenizer::logic_bits, Tokenizer::music_frames,
                   Tokenizer::chess_rows})
        if (s == to_string(t)) return t;
    throw UsageError("unknown tokenizer '" + s + "' (expected words|chars|logic_bits|music_frames|chess_rows)");
}

/// Tokens plus the token offset at which each measure starts. Only the music
/// tokenizer fills measure_starts.
struct TokenStream {
    std::vector<std::string> tokens;
    std::vector<std::size_t> measure_starts;
};

inline std::vector<std::string> tokenize_words(std::string_view text, bool lowercase = false) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_token_space(text[i])) ++i;
        std::size_t j = i;
        while (j < text.size() && !is_token_space(text[j])) ++j;
        if (j > i) {
            std::string w(text.substr(i, j - i));
            if (lowercase)
                std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            out.push_back(std::move(w));
        }
        i = j;
    }
    return out;
}

/// One token per non-whitespace character (UTF-8 sequences kept whole).
inline std::vector<std::string> tokenize_chars(std::string_view text) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < text.size();) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
        len = std::min(len, text.size() - i);
        if (!is_token_space(text[i])) out.emplace_back(text.substr(i, len));
        i += len;
    }
    return out;
}

namespace detail {

inline void advance_position(char c, std::size_t& line, std::size_t& col) {
    if (c == '\n') {
        ++line;
        col = 1;
    } else {
        ++col;
    }
}

}  // namespace detail

/// Binary digits, one token each; whitespace is ignored.
inline std::vector<std::string> tokenize_logic_bits(std::string_view text, const std::string& source = "<input>") {
    std::vector<std::string> out;
    std::size_t line = 1, col = 1;
    for (char c : text) {
        if (c == '0' || c == '1')
            out.emplace_back(1, c);
        else if (!is_token_space(c))
            throw LoadError(source, line, col, std::string("unexpected character '") + c + "' in logic_bits input");
        detail::advance_position(c, line, col);
    }
    return out;
}

namespace detail {

struct Note {
    std::string text;
    int pitch = 0;
};

inline int pitch_of(char letter, char accidental, int octave) {
    static const std::map<char, int> base{{'C', 0}, {'D', 2}, {'E', 4}, {'F', 5}, {'G', 7}, {'A', 9}, {'B', 11}};
    int p = base.at(letter) + octave * 12;
    if (accidental == '#') ++p;
    if (accidental == 'b') --p;
    return p;
}

}  // namespace detail

/// Frame-text music format. Items are separated by whitespace. "|" closes a
/// measure. Any other item is one frame: one or more notes written
/// <letter A-G>[#|b]<octave digit>. Notes of a chord are re-emitted in
/// ascending pitch order. Lines starting with '#' are comments.
inline TokenStream tokenize_music_frames(std::string_view text, const std::string& source = "<input>") {
    TokenStream out;
    bool measure_open = false;
    std::size_t line = 1, col = 1, i = 0;
    auto open_measure = [&] {
        if (!measure_open) {
            out.measure_starts.push_back(out.tokens.size());
            measure_open = true;
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (is_token_space(c)) {
            detail::advance_position(c, line, col);
            ++i;
            continue;
        }
        if (c == '#' && col == 1) {
            while (i < text.size() && text[i] != '\n') ++i, ++col;
            continue;
        }
        const std::size_t start_col = col;
        std::size_t j = i;
        while (j < text.size() && !is_token_space(text[j])) ++j;
        std::string_view item = text.substr(i, j - i);
        if (item == "|") {
            open_measure();
            measure_open = false;
        } else {
            std::vector<detail::Note> notes;
            std::size_t k = 0;
            while (k < item.size()) {
                const std::size_t note_col = start_col + k;
                char letter = item[k];
                if (letter < 'A' || letter > 'G')
                    throw LoadError(source, line, note_col, "expected note letter A-G in frame '" + std::string(item) + "'");
                ++k;
                char accidental = 0;
                if (k < item.size() && (item[k] == '#' || item[k] == 'b')) accidental = item[k++];
                if (k >= item.size() || item[k] < '0' || item[k] > '9')
                    throw LoadError(source, line, start_col + k, "expected octave digit in frame '" + std::string(item) + "'");
                int octave = item[k++] - '0';
                std::string t(1, letter);
                if (accidental) t += accidental;
                t += static_cast<char>('0' + octave);
                notes.push_back({t, detail::pitch_of(letter, accidental, octave)});
            }
            std::stable_sort(notes.begin(), notes.end(),
                             [](const detail::Note& a, const detail::Note& b) { return a.pitch < b.pitch; });
            std::string frame;
            for (const auto& n : notes) frame += n.text;
            open_measure();
            out.tokens.push_back(std::move(frame));
        }
        col += j - i;
        i = j;
    }
    return out;
}

/// Boards written as 8 lines of 8 symbols from "KQRBNPkqrbnp." (rank 8
/// first, as in FEN). Boards are separated by blank lines; '#' lines are
/// comments. One token per row.
inline std::vector<std::string> tokenize_chess_rows(std::string_view text, const std::string& source = "<input>") {
    static constexpr std::string_view alphabet = "KQRBNPkqrbnp.";
    std::vector<std::string> out;
    std::size_t line_no = 0, rows_in_board = 0, board_start = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    auto close_board = [&] {
        if (rows_in_board != 0 && rows_in_board != 8)
            throw LoadError(source, board_start, 1,
                            "board has " + std::to_string(rows_in_board) + " rows, expected 8");
        rows_in_board = 0;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        while (!trimmed.empty() && is_token_space(trimmed.back())) trimmed.pop_back();
        if (trimmed.empty()) {
            close_board();
            continue;
        }
        if (trimmed[0] == '#') continue;
        if (rows_in_board == 0) board_start = line_no;
        if (trimmed.size() != 8)
            throw LoadError(source, line_no, 1, "row has " + std::to_string(trimmed.size()) + " symbols, expected 8");
        for (std::size_t c = 0; c < trimmed.size(); ++c)
            if (alphabet.find(trimmed[c]) == std::string_view::npos)
                throw LoadError(source, line_no, c + 1, std::string("unknown piece symbol '") + trimmed[c] + "'");
        out.push_back(trimmed);
        if (++rows_in_board == 8) rows_in_board = 0;
    }
    close_board();
    return out;
}

inline TokenStream tokenize(Tokenizer t, std::string_view text, const std::string& source = "<input>",
                            bool lowercase = false) {
    switch (t) {
        case Tokenizer::words: return {tokenize_words(text, lowercase), {}};
        case Tokenizer::chars: return {tokenize_chars(text), {}};
        case Tokenizer::logic_bits: return {tokenize_logic_bits(text, source), {}};
        case Tokenizer::music_frames: return tokenize_music_frames(text, source);
        case Tokenizer::chess_rows: return {tokenize_chess_rows(text, source), {}};
    }
    throw UsageError("unknown tokenizer");
}

enum class SplitUnit { whole, n_words, n_measures, n_rows };

inline const char* to_string(SplitUnit u) {
    switch (u) {
        case SplitUnit::whole: return "whole";
        case SplitUnit::n_words: return "n_words";
        case SplitUnit::n_measures: return "n_measures";
        case SplitUnit::n_rows: return "n_rows";
    }
    return "?";
}

inline SplitUnit parse_split_unit(const std::string& s) {
    for (auto u : {SplitUnit::whole, SplitUnit::n_words, SplitUnit::n_measures, SplitUnit::n_rows})
        if (s == to_string(u)) return u;
    throw UsageError("unknown split unit '" + s + "' (expected whole|n_words|n_measures|n_rows)");
}

struct SplitSpec {
    SplitUnit unit = SplitUnit::whole;
    std::size_t size = 1;
};

/// Consecutive, non-overlapping samples; the short remainder is kept. Empty
/// pieces (e.g. runs of empty measures) are skipped.
inline std::vector<std::vector<std::string>> split_samples(const TokenStream& s, SplitSpec spec) {
    std::vector<std::vector<std::string>> out;
    const auto& t = s.tokens;
    if (t.empty()) return out;
    if (spec.unit != SplitUnit::whole && spec.size == 0) throw UsageError("split size must be >= 1");
    std::vector<std::size_t> cuts;
    switch (spec.unit) {
        case SplitUnit::whole: cuts = {0}; break;
        case SplitUnit::n_words:
        case SplitUnit::n_rows:
            for (std::size_t i = 0; i < t.size(); i += spec.size) cuts.push_back(i);
            break;
        case SplitUnit::n_measures: {
            auto starts = s.measure_starts;
            if (starts.empty() || starts.front() != 0) starts.insert(starts.begin(), 0);
            for (std::size_t i = 0; i < starts.size(); i += spec.size) cuts.push_back(starts[i]);
            break;
        }
    }
    cuts.push_back(t.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        out.emplace_back(t.begin() + static_cast<std::ptrdiff_t>(cuts[i]), t.begin() + static_cast<std::ptrdiff_t>(cuts[i + 1]));
    }
    return out;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw LoadError("cannot read file '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Category {
    std::string label;
    std::vector<std::filesystem::path> training_files;
    std::vector<std::filesystem::path> test_files;
};

struct Anchor {
    std::string item;
    std::string label;
};

struct Manifest {
    static constexpr int schema_version = 1;

    std::string name;
    Tokenizer tokenizer = Tokenizer::words;
    bool lowercase = false;
    SplitSpec split;
    std::vector<Category> categories;
    std::vector<std::filesystem::path> transfer_files;
    std::vector<Anchor> anchors;
    std::map<std::string, std::string> reference_labels;  // item -> label, reported only
    std::filesystem::path base_dir;

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        for (const auto& c : categories) out.push_back(c.label);
        return out;
    }
};

inline std::string item_id(const std::filesystem::path& p) { return p.stem().string(); }

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw LoadError(where + ": unknown key '" + it.key() + "'");
    }
}

inline std::vector<std::filesystem::path> path_list(const nlohmann::json& j, const char* key,
                                                    const std::filesystem::path& base, const std::string& where) {
    std::vector<std::filesystem::path> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) throw LoadError(where + ": '" + key + "' must be a list of paths");
    for (const auto& v : j.at(key)) {
        if (!v.is_string()) throw LoadError(where + ": '" + key + "' entries must be strings");
        std::filesystem::path p = v.get<std::string>();
        out.push_back(p.is_absolute() ? p : base / p);
    }
    return out;
}

}  // namespace detail

inline std::set<std::string> seen_labels(const Manifest& m) {
    std::set<std::string> s;
    for (const auto& c : m.categories) s.insert(c.label);
    return s;
}

/// Parses and validates a manifest. Every referenced file must exist.
inline Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir,
                               const std::string& where = "manifest") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw LoadError(where + ": " + e.what());
    }
    if (!j.is_object()) throw LoadError(where + ": top level must be an object");
    detail::reject_unknown_keys(j, {"schema", "name", "tokenizer", "lowercase", "split", "categories",
                                    "transfer_files", "anchors", "reference_labels"},
                                where);
    Manifest m;
    m.base_dir = base_dir;
    try {
        int schema = j.at("schema").get<int>();
        if (schema != Manifest::schema_version)
            throw LoadError(where + ": unsupported manifest schema " + std::to_string(schema) + " (expected " +
                            std::to_string(Manifest::schema_version) + ")");
        m.name = j.value("name", std::string{});
        m.tokenizer = parse_tokenizer(j.at("tokenizer").get<std::string>());
        m.lowercase = j.value("lowercase", false);
        if (j.contains("split")) {
            const auto& s = j.at("split");
            detail::reject_unknown_keys(s, {"unit", "size"}, where + ": split");
            m.split.unit = parse_split_unit(s.at("unit").get<std::string>());
            m.split.size = s.value("size", std::size_t{1});
            if (m.split.unit != SplitUnit::whole && m.split.size == 0) throw LoadError(where + ": split size must be >= 1");
        }
        if (!j.contains("categories") || !j.at("categories").is_array() || j.at("categories").empty())
            throw LoadError(where + ": 'categories' must be a non-empty list");
        std::set<std::string> seen;
        for (const auto& c : j.at("categories")) {
            detail::reject_unknown_keys(c, {"label", "training_files", "test_files"}, where + ": category");
            Category cat;
            cat.label = c.at("label").get<std::string>();
            validate_primitive(cat.label);
            if (!seen.insert(cat.label).second) throw LoadError(where + ": duplicate label '" + cat.label + "'");
            cat.training_files = detail::path_list(c, "training_files", base_dir, where);
            cat.test_files = detail::path_list(c, "test_files", base_dir, where);
            m.categories.push_back(std::move(cat));
        }
        m.transfer_files = detail::path_list(j, "transfer_files", base_dir, where);
        if (j.contains("anchors"))
            for (const auto& a : j.at("anchors")) {
                detail::reject_unknown_keys(a, {"item", "label"}, where + ": anchor");
                m.anchors.push_back({a.at("item").get<std::string>(), a.at("label").get<std::string>()});
            }
        if (j.contains("reference_labels"))
            for (auto it = j.at("reference_labels").begin(); it != j.at("reference_labels").end(); ++it)
                m.reference_labels[it.key()] = it.value().get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(where + ": " + e.what());
    } catch (const UsageError& e) {
        throw LoadError(where + ": " + e.what());
    }

    std::set<std::string> labels(seen_labels(m));
    std::set<std::string> items;
    auto check_file = [&](const std::filesystem::path& p) {
        if (!std::filesystem::is_regular_file(p)) throw LoadError(where + ": missing file '" + p.string() + "'");
    };
    for (const auto& c : m.categories) {
        for (const auto& p : c.training_files) check_file(p);
        for (const auto& p : c.test_files) {
            check_file(p);
            if (!items.insert(item_id(p)).second) throw LoadError(where + ": duplicate test item '" + item_id(p) + "'");
        }
    }
    for (const auto& p : m.transfer_files) {
        check_file(p);
        if (!items.insert(item_id(p)).second) throw LoadError(where + ": duplicate test item '" + item_id(p) + "'");
    }
    for (const auto& a : m.anchors) {
        if (!items.count(a.item)) throw LoadError(where + ": anchor refers to unknown item '" + a.item + "'");
        if (!labels.count(a.label)) throw LoadError(where + ": anchor refers to unknown label '" + a.label + "'");
    }
    for (const auto& [item, label] : m.reference_labels) {
        if (!items.count(item)) throw LoadError(where + ": reference label for unknown item '" + item + "'");
        if (!labels.count(label)) throw LoadError(where + ": reference label '" + label + "' is not a category");
    }
    return m;
}

inline Manifest load_manifest(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path)) throw LoadError("manifest not found: '" + path.string() + "'");
    return parse_manifest(read_file(path), path.parent_path(), path.string());
}

struct Sample {
    Pattern visual;
    Pattern label;
};

struct TestItem {
    std::string id;
    Stimulus stimulus;
    std::optional<std::string> expected;  // absent for transfer items
};

struct Dataset {
    std::vector<Sample> training;
    std::vector<TestItem> tests;
};

inline Stimulus load_stimulus(const Manifest& m, const std::filesystem::path& p, const Modality& visual) {
    TokenStream ts = tokenize(m.tokenizer, read_file(p), p.string(), m.lowercase);
    if (ts.tokens.empty()) throw LoadError("'" + p.string() + "' contains no tokens");
    return Stimulus{Pattern(visual, std::move(ts.tokens)), std::move(ts.measure_starts)};
}

/// Training samples in manifest order (category, file, position) and test
/// items (category tests, then transfer items).
inline Dataset load_dataset(const Manifest& m, const Modality& visual = Modality::visual(),
                            const Modality& verbal = Modality::verbal()) {
    Dataset d;
    for (const auto& c : m.categories) {
        Pattern label(verbal, std::vector<std::string>{c.label});
        for (const auto& p : c.training_files) {
            TokenStream ts = tokenize(m.tokenizer, read_file(p), p.string(), m.lowercase);
            for (auto& body : split_samples(ts, m.split)) d.training.push_back({Pattern(visual, std::move(body)), label});
        }
    }
    for (const auto& c : m.categories)
        for (const auto& p : c.test_files) d.tests.push_back({item_id(p), load_stimulus(m, p, visual), c.label});
    for (const auto& p : m.transfer_files) d.tests.push_back({item_id(p), load_stimulus(m, p, visual), std::nullopt});
    if (d.training.empty()) throw LoadError("manifest '" + m.name + "' yields no training samples");
    return d;
}

}  // namespace cogact
