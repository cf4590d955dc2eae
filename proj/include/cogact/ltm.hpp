#pragma once

// Long-term memory: one discrimination network per modality, all nodes held
// in a single table so naming links can point across modalities.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cogact/error.hpp"
#include "cogact/pattern.hpp"

namespace cogact {

enum class NodeId : std::uint32_t {};

inline std::uint32_t to_index(NodeId id) noexcept { return static_cast<std::uint32_t>(id); }

struct Node {
    NodeId id{};
    Modality modality;
    std::optional<NodeId> parent;  // empty for roots
    Pattern test;                  // empty for roots and end-test nodes
    Pattern image;
    bool image_complete = false;   // stands in for the end marker
    bool end_test = false;         // matches only when the input is exhausted
    std::vector<NodeId> children;  // insertion order; first match wins
    std::map<NodeId, std::uint64_t> naming_links;
    double created_at = 0.0;
    double updated_at = 0.0;

    bool is_root() const noexcept { return !parent.has_value(); }
};

enum class LearnKind { created_node, familiarised, no_change };

inline const char* to_string(LearnKind k) {
    switch (k) {
        case LearnKind::created_node: return "created_node";
        case LearnKind::familiarised: return "familiarised";
        case LearnKind::no_change: return "no_change";
    }
    return "?";
}

struct LearnEvent {
    LearnKind kind = LearnKind::no_change;
    NodeId node{};
    double cost_seconds = 0.0;
};

struct LtmParams {
    double chunk_probability = 1.0;
    double t_create_seconds = 10.0;
    double t_update_seconds = 2.0;
};

class Ltm {
public:
    Ltm() = default;
    explicit Ltm(LtmParams params, std::uint64_t seed = 0) : params_(params), rng_(seed) { validate(params_); }

    static void validate(const LtmParams& p) {
        if (!(p.chunk_probability >= 0.0 && p.chunk_probability <= 1.0))
            throw UsageError("chunk_probability must lie in [0, 1]");
        if (!(p.t_create_seconds >= 0.0) || !(p.t_update_seconds >= 0.0))
            throw UsageError("learning costs must be non-negative");
    }

    const LtmParams& params() const noexcept { return params_; }
    double clock() const noexcept { return clock_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }

    bool contains(NodeId id) const noexcept { return to_index(id) < nodes_.size(); }

    const Node& node(NodeId id) const {
        if (!contains(id)) throw UsageError("unknown node id " + std::to_string(to_index(id)));
        return nodes_[to_index(id)];
    }

    /// Root of the modality's network, created on first use.
    NodeId root(const Modality& m) {
        if (auto it = roots_.find(m); it != roots_.end()) return it->second;
        Node n;
        n.id = next_id();
        n.modality = m;
        n.test = Pattern(m, std::vector<std::string>{});
        n.image = n.test;
        n.created_at = n.updated_at = clock_;
        nodes_.push_back(std::move(n));
        roots_.emplace(m, nodes_.back().id);
        return nodes_.back().id;
    }

    std::optional<NodeId> find_root(const Modality& m) const {
        if (auto it = roots_.find(m); it != roots_.end()) return it->second;
        return std::nullopt;
    }

    const std::map<Modality, NodeId>& roots() const noexcept { return roots_; }

    /// Number of nodes reachable from the modality's root, root included.
    std::size_t network_size(const Modality& m) const {
        auto r = find_root(m);
        if (!r) return 0;
        std::size_t count = 0;
        std::vector<NodeId> stack{*r};
        while (!stack.empty()) {
            auto id = stack.back();
            stack.pop_back();
            ++count;
            for (auto c : node(id).children) stack.push_back(c);
        }
        return count;
    }

    /// Concatenated test links from the root down to `id`.
    Pattern contents(NodeId id) const {
        std::vector<const Node*> path;
        for (const Node* n = &node(id); !n->is_root(); n = &node(*n->parent)) path.push_back(n);
        std::vector<std::string> items;
        for (auto it = path.rbegin(); it != path.rend(); ++it)
            items.insert(items.end(), (*it)->test.begin(), (*it)->test.end());
        return Pattern(node(id).modality, std::move(items));
    }

    /// Number of primitives on the path to the node; 0 for roots.
    std::size_t chunk_size(NodeId id) const {
        std::size_t size = 0;
        for (const Node* n = &node(id); !n->is_root(); n = &node(*n->parent)) size += n->test.size();
        return size;
    }

    /// Sorts `p` through its modality's network. Never mutates; an unknown
    /// modality yields nullopt.
    std::optional<NodeId> try_recognise(const Pattern& p) const {
        auto r = find_root(p.modality());
        if (!r) return std::nullopt;
        NodeId current = *r;
        std::size_t consumed = 0;
        const auto items = p.view();
        for (;;) {
            const auto rest = items.subspan(consumed);
            std::optional<NodeId> next;
            for (auto c : nodes_[to_index(current)].children) {
                const Node& child = nodes_[to_index(c)];
                if (child.end_test ? rest.empty() : detail::is_prefix(child.test.view(), rest)) {
                    next = c;
                    break;
                }
            }
            if (!next) return current;
            consumed += nodes_[to_index(*next)].test.size();
            current = *next;
        }
    }

    /// Like try_recognise but creates the modality's root if needed.
    NodeId recognise(const Pattern& p) {
        if (auto n = try_recognise(p)) return *n;
        return root(p.modality());
    }

    /// Whether the node's image can stand for `p`: a complete image must equal
    /// it, an incomplete one must be a prefix of it.
    bool image_matches(NodeId id, const Pattern& p) const {
        const Node& n = node(id);
        return n.image_complete ? equal(n.image, p) : matches(n.image, p);
    }

    LearnEvent learn(const Pattern& p) {
        if (p.empty()) throw UsageError("learn: pattern must be non-empty");
        if (params_.chunk_probability < 1.0) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            if (!(u(rng_) < params_.chunk_probability)) return {LearnKind::no_change, recognise(p), 0.0};
        }
        NodeId n = recognise(p);
        if (!node(n).is_root() && image_matches(n, p)) return familiarise(n, p);
        return discriminate(n, p);
    }

    LearnEvent familiarise(NodeId id, const Pattern& p) {
        check_modality(id, p, "familiarise");
        Node* n = &nodes_[to_index(id)];
        if (n->is_root()) return discriminate(id, p);
        if (n->image_complete) {
            if (equal(n->image, p)) return {LearnKind::no_change, id, 0.0};
            return discriminate(id, p);
        }
        Pattern d = difference(p, n->image);
        if (d.empty()) {
            if (!equal(n->image, p)) return discriminate(id, p);  // image longer than p
            n->image_complete = true;
            return touch(id);
        }
        NodeId r = recognise(d);
        if (node(r).is_root()) return add_primitive_event(d.front(), p.modality());
        n = &nodes_[to_index(id)];
        n->image.push_back(d.front());
        if (equal(n->image, p)) n->image_complete = true;
        return touch(id);
    }

    LearnEvent discriminate(NodeId id, const Pattern& p) {
        check_modality(id, p, "discriminate");
        Pattern base = contents(id);
        Pattern d = difference(p, base);
        if (d.empty()) {
            // p is exactly the node's path but the image says otherwise.
            NodeId c = attach(id, Pattern(p.modality(), std::vector<std::string>{}), p, true, true);
            return created(c);
        }
        NodeId r = recognise(d);
        if (node(r).is_root()) return add_primitive_event(d.front(), p.modality());
        if (node(r).image.empty()) return familiarise(r, d);
        Pattern test = matches(node(r).image, d) ? node(r).image : contents(r);
        Pattern image = base.concat(test);
        bool complete = equal(image, p);
        NodeId c = attach(id, std::move(test), std::move(image), complete, false);
        return created(c);
    }

    void add_naming_link(NodeId from, NodeId to) {
        if (!contains(from) || !contains(to)) throw UsageError("add_naming_link: unknown node");
        if (node(from).is_root() || node(to).is_root()) throw UsageError("add_naming_link: root cannot be linked");
        ++nodes_[to_index(from)].naming_links[to];
    }

    std::uint64_t total_links(NodeId id) const {
        std::uint64_t total = 0;
        for (const auto& [_, c] : node(id).naming_links) total += c;
        return total;
    }

    /// Total naming-link count over all nodes.
    std::uint64_t naming_link_total() const {
        std::uint64_t total = 0;
        for (const auto& n : nodes_)
            for (const auto& [_, c] : n.naming_links) total += c;
        return total;
    }

    // Structural builders for fixtures and snapshot loading. They bypass the
    // learning rules and the clock.
    NodeId add_child(NodeId parent, Pattern test, Pattern image, bool complete = false) {
        if (test.empty()) throw UsageError("add_child: test must be non-empty");
        return attach(parent, std::move(test), std::move(image), complete, false);
    }

    NodeId add_primitive(const Modality& m, const std::string& token, bool with_image = false, bool complete = false) {
        Pattern test(m, std::vector<std::string>{token});
        Pattern image = with_image ? test : Pattern(m, std::vector<std::string>{});
        return add_child(root(m), std::move(test), std::move(image), complete);
    }

    void set_image(NodeId id, Pattern image, bool complete) {
        Node& n = mutable_node(id);
        if (image.modality() != n.modality) throw UsageError("set_image: modality mismatch");
        n.image = std::move(image);
        n.image_complete = complete;
    }

    std::mt19937_64& rng() noexcept { return rng_; }
    const std::mt19937_64& rng() const noexcept { return rng_; }

    // Raw restore hooks used by the snapshot reader.
    struct Raw {
        LtmParams params;
        double clock = 0.0;
        std::mt19937_64 rng;
        std::vector<Node> nodes;
    };

    static Ltm from_raw(Raw raw) {
        Ltm ltm;
        validate(raw.params);
        ltm.params_ = raw.params;
        ltm.clock_ = raw.clock;
        ltm.rng_ = raw.rng;
        for (std::size_t i = 0; i < raw.nodes.size(); ++i) {
            const Node& n = raw.nodes[i];
            if (to_index(n.id) != i) throw LoadError("node ids must be dense and ascending");
            if (n.is_root()) {
                if (!ltm.roots_.emplace(n.modality, n.id).second)
                    throw LoadError("duplicate root for modality '" + n.modality.name() + "'");
            } else if (to_index(*n.parent) >= i) {
                throw LoadError("node " + std::to_string(i) + " precedes its parent");
            }
            for (auto c : n.children)
                if (to_index(c) >= raw.nodes.size()) throw LoadError("child id out of range");
            for (const auto& [to, count] : n.naming_links)
                if (to_index(to) >= raw.nodes.size() || count == 0) throw LoadError("bad naming link");
        }
        ltm.nodes_ = std::move(raw.nodes);
        return ltm;
    }

private:
    NodeId next_id() const { return NodeId{static_cast<std::uint32_t>(nodes_.size())}; }

    Node& mutable_node(NodeId id) {
        if (!contains(id)) throw UsageError("unknown node id " + std::to_string(to_index(id)));
        return nodes_[to_index(id)];
    }

    void check_modality(NodeId id, const Pattern& p, const char* op) const {
        if (node(id).modality != p.modality())
            throw UsageError(std::string(op) + ": pattern modality does not match node");
    }

    NodeId attach(NodeId parent, Pattern test, Pattern image, bool complete, bool end_test) {
        const Modality m = node(parent).modality;
        if (test.modality() != m || image.modality() != m) throw UsageError("attach: modality mismatch");
        Node n;
        n.id = next_id();
        n.modality = m;
        n.parent = parent;
        n.test = std::move(test);
        n.image = std::move(image);
        n.image_complete = complete;
        n.end_test = end_test;
        n.created_at = n.updated_at = clock_;
        nodes_.push_back(std::move(n));
        nodes_[to_index(parent)].children.push_back(nodes_.back().id);
        return nodes_.back().id;
    }

    LearnEvent add_primitive_event(const std::string& token, const Modality& m) {
        Pattern test(m, std::vector<std::string>{token});
        return created(attach(root(m), std::move(test), Pattern(m, std::vector<std::string>{}), false, false));
    }

    LearnEvent created(NodeId id) {
        clock_ += params_.t_create_seconds;
        nodes_[to_index(id)].created_at = nodes_[to_index(id)].updated_at = clock_;
        return {LearnKind::created_node, id, params_.t_create_seconds};
    }

    LearnEvent touch(NodeId id) {
        clock_ += params_.t_update_seconds;
        nodes_[to_index(id)].updated_at = clock_;
        return {LearnKind::familiarised, id, params_.t_update_seconds};
    }

    LtmParams params_;
    double clock_ = 0.0;
    std::mt19937_64 rng_{0};
    std::vector<Node> nodes_;
    std::map<Modality, NodeId> roots_;
};

}  // namespace cogact
