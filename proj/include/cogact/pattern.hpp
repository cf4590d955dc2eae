#pragma once

// Patterns are ordered sequences of symbolic primitives (tokens) within one
// modality. Everything the memory stores, retrieves and compares is a
// Pattern, and the three functions at the bottom of this file (equal,
// matches, difference) are the only way patterns are compared.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogact/error.hpp"

namespace cogact {

/// Name of a pattern space ("visual", "verbal", ...). Each modality has its
/// own discrimination network and short-term memory.
class Modality {
public:
    Modality() = default;
    explicit Modality(std::string name) : name_(std::move(name)) {
        if (name_.empty()) throw UsageError("modality name must be non-empty");
        for (char c : name_)
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
                throw UsageError("modality name must not contain whitespace: '" + name_ + "'");
    }

    static Modality visual() { return Modality("visual"); }
    static Modality verbal() { return Modality("verbal"); }

    const std::string& name() const noexcept { return name_; }

    friend bool operator==(const Modality&, const Modality&) = default;
    friend auto operator<=>(const Modality&, const Modality&) = default;

private:
    std::string name_;
};

inline bool is_token_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

/// Throws UsageError unless `token` is a valid primitive: non-empty, no whitespace.
inline void validate_primitive(std::string_view token) {
    if (token.empty()) throw UsageError("primitive must be non-empty");
    if (std::any_of(token.begin(), token.end(), is_token_space))
        throw UsageError("primitive must not contain whitespace: '" + std::string(token) + "'");
}

class Pattern {
public:
    using value_type = std::string;
    using const_iterator = std::vector<std::string>::const_iterator;

    Pattern() = default;

    Pattern(Modality modality, std::vector<std::string> items)
        : modality_(std::move(modality)), items_(std::move(items)) {
        for (const auto& t : items_) validate_primitive(t);
    }

    Pattern(Modality modality, std::initializer_list<std::string_view> items) : modality_(std::move(modality)) {
        items_.reserve(items.size());
        for (auto t : items) {
            validate_primitive(t);
            items_.emplace_back(t);
        }
    }

    /// Parses the canonical text form: tokens separated by single spaces.
    /// An empty line is the empty pattern.
    static Pattern parse(Modality modality, std::string_view line) {
        std::vector<std::string> items;
        if (line.empty()) return Pattern(std::move(modality), std::move(items));
        std::size_t start = 0;
        while (true) {
            auto pos = line.find(' ', start);
            auto tok = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
            if (tok.empty()) throw UsageError("canonical pattern text must use single spaces between tokens");
            items.emplace_back(tok);
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        return Pattern(std::move(modality), std::move(items));
    }

    /// Canonical text form (inverse of parse).
    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (i) out += ' ';
            out += items_[i];
        }
        return out;
    }

    const Modality& modality() const noexcept { return modality_; }
    const std::vector<std::string>& items() const noexcept { return items_; }
    std::span<const std::string> view() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    const std::string& operator[](std::size_t i) const { return items_[i]; }
    const std::string& front() const { return items_.front(); }
    const_iterator begin() const noexcept { return items_.begin(); }
    const_iterator end() const noexcept { return items_.end(); }

    /// Items [from, end). Clamped, never throws.
    Pattern suffix(std::size_t from) const {
        from = std::min(from, items_.size());
        return Pattern(modality_, std::vector<std::string>(items_.begin() + static_cast<std::ptrdiff_t>(from), items_.end()),
                       Trusted{});
    }

    Pattern first(std::size_t n) const {
        n = std::min(n, items_.size());
        return Pattern(modality_, std::vector<std::string>(items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(n)),
                       Trusted{});
    }

    Pattern slice(std::size_t from, std::size_t to) const {
        to = std::min(to, items_.size());
        from = std::min(from, to);
        return Pattern(modality_,
                       std::vector<std::string>(items_.begin() + static_cast<std::ptrdiff_t>(from),
                                                items_.begin() + static_cast<std::ptrdiff_t>(to)),
                       Trusted{});
    }

    Pattern concat(const Pattern& tail) const {
        if (tail.modality_ != modality_) throw UsageError("cannot concatenate patterns of different modalities");
        auto items = items_;
        items.insert(items.end(), tail.items_.begin(), tail.items_.end());
        return Pattern(modality_, std::move(items), Trusted{});
    }

    void push_back(const std::string& token) {
        validate_primitive(token);
        items_.push_back(token);
    }

    friend bool operator==(const Pattern&, const Pattern&) = default;

private:
    struct Trusted {};
    Pattern(Modality modality, std::vector<std::string> items, Trusted)
        : modality_(std::move(modality)), items_(std::move(items)) {}

    Modality modality_;
    std::vector<std::string> items_;
};

namespace detail {

inline void require_same_modality(const Pattern& a, const Pattern& b, const char* op) {
    if (a.modality() != b.modality())
        throw UsageError(std::string(op) + ": modality mismatch ('" + a.modality().name() + "' vs '" +
                         b.modality().name() + "')");
}

inline bool is_prefix(std::span<const std::string> a, std::span<const std::string> b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace detail

/// Length of the longest common prefix of the two item sequences.
inline std::size_t common_prefix_length(std::span<const std::string> a, std::span<const std::string> b) {
    auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
    return static_cast<std::size_t>(ia - a.begin());
}

/// Element-wise identity, including length.
inline bool equal(const Pattern& a, const Pattern& b) {
    detail::require_same_modality(a, b, "equal");
    return a.items() == b.items();
}

/// True iff `a` is a (possibly equal) prefix of `b`. The empty pattern
/// matches everything.
inline bool matches(const Pattern& a, const Pattern& b) {
    detail::require_same_modality(a, b, "matches");
    return detail::is_prefix(a.view(), b.view());
}

/// `a` with its longest common prefix with `b` removed.
inline Pattern difference(const Pattern& a, const Pattern& b) {
    detail::require_same_modality(a, b, "difference");
    return a.suffix(common_prefix_length(a.view(), b.view()));
}

}  // namespace cogact
