// Writes the desk-scale two-category word corpus: one ~10 KB training stream
// per category plus held-out test files and a manifest.
//
// Only raw mt19937_64 output is used (no std distributions), so the bytes
// are identical across standard libraries.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

class Source {
public:
    explicit Source(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
    // Skewed toward low indices.
    std::size_t skewed(std::size_t n) {
        double u = uniform();
        return static_cast<std::size_t>(u * u * static_cast<double>(n));
    }

private:
    std::mt19937_64 rng_;
};

struct Category {
    std::string label;
    std::vector<std::string> onsets;
    std::vector<std::string> codas;
};

std::vector<std::string> make_vocabulary(const Category& c, Source& src, std::size_t size) {
    std::vector<std::string> words;
    while (words.size() < size) {
        std::string w = c.onsets[src.below(c.onsets.size())] + c.codas[src.below(c.codas.size())];
        if (src.uniform() < 0.4) w += c.onsets[src.below(c.onsets.size())] + c.codas[src.below(c.codas.size())];
        bool dup = false;
        for (const auto& x : words) dup = dup || x == w;
        if (!dup) words.push_back(w);
    }
    return words;
}

std::vector<std::vector<std::string>> make_phrases(const std::vector<std::string>& vocab,
                                                   const std::vector<std::string>& shared, Source& src,
                                                   std::size_t count) {
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<std::string> p;
        std::size_t len = 2 + src.below(4);
        for (std::size_t k = 0; k < len; ++k)
            p.push_back(src.uniform() < 0.25 ? shared[src.skewed(shared.size())] : vocab[src.skewed(vocab.size())]);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<std::string> emit_words(const std::vector<std::vector<std::string>>& phrases,
                                    const std::vector<std::string>& shared, Source& src, std::size_t min_words,
                                    std::size_t min_bytes) {
    std::vector<std::string> words;
    std::size_t bytes = 0;
    while (words.size() < min_words || bytes < min_bytes) {
        if (src.uniform() < 0.8) {
            for (const auto& w : phrases[src.skewed(phrases.size())]) {
                words.push_back(w);
                bytes += w.size() + 1;
            }
        } else {
            words.push_back(shared[src.below(shared.size())]);
            bytes += words.back().size() + 1;
        }
    }
    return words;
}

void write_words(const fs::path& p, const std::vector<std::string>& words) {
    std::ofstream out(p, std::ios::binary);
    std::size_t col = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (col > 0 && col + words[i].size() + 1 > 72) {
            out << '\n';
            col = 0;
        } else if (col > 0) {
            out << ' ';
            ++col;
        }
        out << words[i];
        col += words[i].size();
    }
    out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate the synthetic two-category word corpus"};
    std::string out_dir;
    std::uint64_t seed = 20240611;
    std::size_t bytes = 10240, tests = 20, test_words = 60;
    app.add_option("--out", out_dir, "Output directory")->required();
    app.add_option("--seed", seed, "Generator seed");
    app.add_option("--bytes", bytes, "Minimum bytes per training stream");
    app.add_option("--tests", tests, "Test files per category");
    app.add_option("--test-words", test_words, "Words per test file");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::string> shared{"the", "a",    "of",  "and", "to",   "in",   "it",  "was",
                                          "he",  "she",  "on",  "at",  "with", "but",  "had", "for",
                                          "his", "her",  "not", "as",  "they", "from", "by",  "that"};
    const std::vector<Category> cats{
        {"alpha", {"b", "d", "g", "br", "dr", "gl", "bl"}, {"ar", "on", "um", "ask", "old", "urn"}},
        {"beta", {"s", "t", "v", "st", "tr", "sk", "vl"}, {"ee", "is", "ilt", "ene", "ith", "ipe"}},
    };

    fs::path out(out_dir);
    fs::create_directories(out / "test");
    Source src(seed);
    nlohmann::json manifest;
    manifest["schema"] = 1;
    manifest["name"] = "synthetic-two-author";
    manifest["tokenizer"] = "words";
    manifest["split"] = {{"unit", "n_words"}, {"size", 20}};
    manifest["categories"] = nlohmann::json::array();
    for (const auto& c : cats) {
        auto vocab = make_vocabulary(c, src, 60);
        auto phrases = make_phrases(vocab, shared, src, 40);
        const std::string train = c.label + "_train.txt";
        write_words(out / train, emit_words(phrases, shared, src, 0, bytes));
        nlohmann::json cat;
        cat["label"] = c.label;
        cat["training_files"] = {train};
        cat["test_files"] = nlohmann::json::array();
        for (std::size_t t = 1; t <= tests; ++t) {
            char name[64];
            std::snprintf(name, sizeof name, "test/%s_%02zu.txt", c.label.c_str(), t);
            auto words = emit_words(phrases, shared, src, test_words, 0);
            words.resize(test_words);
            write_words(out / name, words);
            cat["test_files"].push_back(name);
        }
        manifest["categories"].push_back(cat);
    }
    std::ofstream(out / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
    return 0;
}
