#pragma once

// Text snapshot of a Model. Line oriented; tokens never contain whitespace so
// every list is "<count> item item ...". Doubles use %.17g so reading back
// reproduces the exact bits.
//
//   cogact-snapshot <version>
//   tokenizer <name>
//   lowercase <0|1>
//   config <json>
//   labels <n> <label>...
//   features <stm 0|1> <naming_links 0|1>
//   params <chunk_probability> <t_create> <t_update>
//   clock <seconds>
//   rng <engine state>
//   nodes <n>
//   node <id> <modality> <parent|-> <complete 0|1> <end_test 0|1> <created> <updated>
//   test <n> <token>...
//   image <n> <token>...
//   children <n> <id>...
//   links <n> <id>:<count>...
//   stm <modality> <capacity> <n>
//   slot <node id> <n> <token>...
//   end

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cogact/config.hpp"
#include "cogact/corpus.hpp"
#include "cogact/error.hpp"
#include "cogact/harness.hpp"
#include "cogact/ltm.hpp"

namespace cogact {

inline constexpr int snapshot_version = 1;
inline constexpr const char* snapshot_magic = "cogact-snapshot";

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_tokens(std::string& out, const char* tag, const Pattern& p) {
    out += tag;
    out += ' ' + std::to_string(p.size());
    for (const auto& t : p) out += ' ' + t;
    out += '\n';
}

inline void write_stm(std::string& out, const StmQueue& q) {
    out += "stm " + q.modality().name() + " " + std::to_string(q.capacity()) + " " + std::to_string(q.size()) + "\n";
    for (const auto& e : q.slots()) {
        out += "slot " + std::to_string(to_index(e.node));
        write_tokens(out, "", e.elicited);
    }
}

class LineReader {
public:
    LineReader(std::string_view text, std::string source) : in_(std::string(text)), source_(std::move(source)) {}

    std::vector<std::string> next(const char* expected_tag) {
        std::string line;
        if (!std::getline(in_, line)) fail(std::string("unexpected end of file, expected '") + expected_tag + "'");
        ++line_no_;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        for (std::string f; ls >> f;) fields.push_back(std::move(f));
        if (fields.empty() || fields[0] != expected_tag)
            fail(std::string("expected '") + expected_tag + "' line, got '" + line + "'");
        return fields;
    }

    /// Rest of the line after the tag, verbatim.
    std::string next_raw(const char* expected_tag) {
        std::string line;
        if (!std::getline(in_, line)) fail(std::string("unexpected end of file, expected '") + expected_tag + "'");
        ++line_no_;
        const std::string prefix = std::string(expected_tag) + " ";
        if (line.rfind(prefix, 0) != 0) fail(std::string("expected '") + expected_tag + "' line");
        return line.substr(prefix.size());
    }

    [[noreturn]] void fail(const std::string& what) const { throw LoadError(source_, line_no_, 1, what); }

    std::uint64_t to_u64(const std::string& s) const {
        try {
            std::size_t pos = 0;
            auto v = std::stoull(s, &pos);
            if (pos != s.size()) fail("bad integer '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("bad integer '" + s + "'");
        }
    }

    double to_double(const std::string& s) const {
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) fail("bad number '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("bad number '" + s + "'");
        }
    }

    /// "<tag> <n> items..." with exactly n items after the count.
    std::vector<std::string> counted(const std::vector<std::string>& f, std::size_t skip = 1) const {
        if (f.size() < skip + 1) fail("missing count");
        std::size_t n = to_u64(f[skip]);
        if (f.size() != skip + 1 + n) fail("count " + std::to_string(n) + " does not match item count");
        return {f.begin() + static_cast<std::ptrdiff_t>(skip + 1), f.end()};
    }

private:
    std::istringstream in_;
    std::string source_;
    std::size_t line_no_ = 0;
};

inline StmQueue read_stm(LineReader& r, const Ltm& ltm) {
    auto f = r.next("stm");
    if (f.size() != 4) r.fail("malformed stm line");
    StmQueue q{Modality(f[1]), static_cast<std::size_t>(r.to_u64(f[2]))};
    std::size_t n = r.to_u64(f[3]);
    std::vector<StmEntry> entries;
    for (std::size_t i = 0; i < n; ++i) {
        auto s = r.next("slot");
        if (s.size() < 3) r.fail("malformed slot line");
        NodeId id{static_cast<std::uint32_t>(r.to_u64(s[1]))};
        if (!ltm.contains(id)) r.fail("slot refers to unknown node");
        entries.push_back({id, Pattern(q.modality(), r.counted(s, 2))});
    }
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) q.push(ltm, it->node, it->elicited);
    return q;
}

}  // namespace detail

inline std::string write_snapshot(const Model& m) {
    std::string out;
    out += std::string(snapshot_magic) + " " + std::to_string(snapshot_version) + "\n";
    out += std::string("tokenizer ") + to_string(m.tokenizer) + "\n";
    out += std::string("lowercase ") + (m.lowercase ? "1" : "0") + "\n";
    out += "config " + to_json(m.config).dump() + "\n";
    out += "labels " + std::to_string(m.labels.size());
    for (const auto& l : m.labels) out += " " + l;
    out += "\n";
    out += std::string("features ") + (m.stm_enabled ? "1" : "0") + " " + (m.naming_links_enabled ? "1" : "0") + "\n";
    const auto& p = m.ltm.params();
    out += "params " + detail::fmt_double(p.chunk_probability) + " " + detail::fmt_double(p.t_create_seconds) + " " +
           detail::fmt_double(p.t_update_seconds) + "\n";
    out += "clock " + detail::fmt_double(m.ltm.clock()) + "\n";
    std::ostringstream rng;
    rng << m.ltm.rng();
    out += "rng " + rng.str() + "\n";
    out += "nodes " + std::to_string(m.ltm.node_count()) + "\n";
    for (const auto& n : m.ltm.nodes()) {
        out += "node " + std::to_string(to_index(n.id)) + " " + n.modality.name() + " " +
               (n.parent ? std::to_string(to_index(*n.parent)) : std::string("-")) + " " +
               (n.image_complete ? "1" : "0") + " " + (n.end_test ? "1" : "0") + " " + detail::fmt_double(n.created_at) +
               " " + detail::fmt_double(n.updated_at) + "\n";
        detail::write_tokens(out, "test", n.test);
        detail::write_tokens(out, "image", n.image);
        out += "children " + std::to_string(n.children.size());
        for (auto c : n.children) out += " " + std::to_string(to_index(c));
        out += "\nlinks " + std::to_string(n.naming_links.size());
        for (const auto& [to, count] : n.naming_links) out += " " + std::to_string(to_index(to)) + ":" + std::to_string(count);
        out += "\n";
    }
    detail::write_stm(out, m.visual_stm);
    detail::write_stm(out, m.verbal_stm);
    out += "end\n";
    return out;
}

namespace detail {

inline Model read_snapshot_unchecked(std::string_view text, const std::string& source) {
    LineReader r(text, source);
    {
        std::string first(text.substr(0, text.find('\n')));
        std::istringstream hs(first);
        std::string magic, version;
        hs >> magic >> version;
        if (magic != snapshot_magic) throw LoadError(source + ": not a cogact snapshot");
        if (version != std::to_string(snapshot_version))
            throw LoadError(source + ": snapshot schema version " + version +
                            " is not supported (this build reads version " + std::to_string(snapshot_version) + ")");
        r.next(snapshot_magic);
    }
    Model m;
    m.tokenizer = parse_tokenizer(r.next("tokenizer").at(1));
    m.lowercase = r.next("lowercase").at(1) == "1";
    try {
        m.config = config_from_json(nlohmann::json::parse(r.next_raw("config")), source + ": config");
    } catch (const nlohmann::json::parse_error& e) {
        throw LoadError(source + ": config: " + e.what());
    }
    m.labels = r.counted(r.next("labels"));
    auto feat = r.next("features");
    if (feat.size() != 3) r.fail("malformed features line");
    m.stm_enabled = feat[1] == "1";
    m.naming_links_enabled = feat[2] == "1";

    Ltm::Raw raw;
    auto pf = r.next("params");
    if (pf.size() != 4) r.fail("malformed params line");
    raw.params = {r.to_double(pf[1]), r.to_double(pf[2]), r.to_double(pf[3])};
    auto cf = r.next("clock");
    if (cf.size() != 2) r.fail("malformed clock line");
    raw.clock = r.to_double(cf[1]);
    {
        std::istringstream rs(r.next_raw("rng"));
        rs >> raw.rng;
        if (!rs) r.fail("malformed rng state");
    }
    auto nf = r.next("nodes");
    if (nf.size() != 2) r.fail("malformed nodes line");
    const std::size_t count = r.to_u64(nf[1]);
    for (std::size_t i = 0; i < count; ++i) {
        auto f = r.next("node");
        if (f.size() != 8) r.fail("malformed node line");
        Node n;
        n.id = NodeId{static_cast<std::uint32_t>(r.to_u64(f[1]))};
        n.modality = Modality(f[2]);
        if (f[3] != "-") n.parent = NodeId{static_cast<std::uint32_t>(r.to_u64(f[3]))};
        n.image_complete = f[4] == "1";
        n.end_test = f[5] == "1";
        n.created_at = r.to_double(f[6]);
        n.updated_at = r.to_double(f[7]);
        n.test = Pattern(n.modality, r.counted(r.next("test")));
        n.image = Pattern(n.modality, r.counted(r.next("image")));
        for (const auto& c : r.counted(r.next("children")))
            n.children.push_back(NodeId{static_cast<std::uint32_t>(r.to_u64(c))});
        for (const auto& l : r.counted(r.next("links"))) {
            auto colon = l.find(':');
            if (colon == std::string::npos) r.fail("malformed link '" + l + "'");
            n.naming_links[NodeId{static_cast<std::uint32_t>(r.to_u64(l.substr(0, colon)))}] =
                r.to_u64(l.substr(colon + 1));
        }
        raw.nodes.push_back(std::move(n));
    }
    try {
        m.ltm = Ltm::from_raw(std::move(raw));
    } catch (const LoadError& e) {
        throw LoadError(source + ": " + e.what());
    }
    m.visual_stm = read_stm(r, m.ltm);
    m.verbal_stm = read_stm(r, m.ltm);
    r.next("end");
    return m;
}

}  // namespace detail

inline Model read_snapshot(std::string_view text, const std::string& source = "<snapshot>") {
    try {
        return detail::read_snapshot_unchecked(text, source);
    } catch (const UsageError& e) {
        // Bad enum names, modalities or STM capacities inside the file.
        throw LoadError(source + ": " + e.what());
    }
}

inline void save_snapshot(const Model& m, const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw LoadError("cannot write snapshot '" + p.string() + "'");
    out << write_snapshot(m);
    if (!out) throw LoadError("failed writing snapshot '" + p.string() + "'");
}

inline Model load_snapshot(const std::filesystem::path& p) { return read_snapshot(read_file(p), p.string()); }

}  // namespace cogact
