#pragma once

#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cogact/error.hpp"
#include "cogact/ltm.hpp"
#include "cogact/pattern.hpp"

namespace cogact {

/// When a chunk sitting in STM counts as "fully learned" for link formation.
enum class LinkGate {
    elicited,  // image equals the pattern that put the node in STM
    nonempty,  // image complete or non-empty
};

/// Which slots of two queues are paired when looking for co-occupancy.
enum class LinkPairing {
    heads,       // most recent entries only
    positional,  // every index present in both queues
};

inline const char* to_string(LinkGate g) { return g == LinkGate::elicited ? "elicited" : "nonempty"; }
inline const char* to_string(LinkPairing p) { return p == LinkPairing::heads ? "heads" : "positional"; }

inline LinkGate parse_link_gate(const std::string& s) {
    if (s == "elicited") return LinkGate::elicited;
    if (s == "nonempty") return LinkGate::nonempty;
    throw UsageError("unknown link gate '" + s + "' (expected elicited|nonempty)");
}

inline LinkPairing parse_link_pairing(const std::string& s) {
    if (s == "heads") return LinkPairing::heads;
    if (s == "positional") return LinkPairing::positional;
    throw UsageError("unknown link pairing '" + s + "' (expected heads|positional)");
}

struct StmEntry {
    NodeId node{};
    Pattern elicited;  // the pattern whose recognition produced the node
};

class StmQueue {
public:
    static constexpr std::size_t min_capacity = 2;
    static constexpr std::size_t max_capacity = 9;

    explicit StmQueue(Modality modality, std::size_t capacity = 5) : modality_(std::move(modality)), capacity_(capacity) {
        if (capacity_ < min_capacity || capacity_ > max_capacity)
            throw UsageError("STM capacity must lie in [2, 9], got " + std::to_string(capacity_));
    }

    const Modality& modality() const noexcept { return modality_; }
    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t size() const noexcept { return slots_.size(); }
    bool empty() const noexcept { return slots_.empty(); }

    /// Slots, most recent first.
    const std::deque<StmEntry>& slots() const noexcept { return slots_; }
    const StmEntry* head() const noexcept { return slots_.empty() ? nullptr : &slots_.front(); }

    /// Pushes a node to the head. Root nodes are ignored. Returns the evicted
    /// node when the queue was full.
    std::optional<NodeId> push(const Ltm& ltm, NodeId id, Pattern elicited) {
        if (ltm.node(id).is_root()) return std::nullopt;
        if (ltm.node(id).modality != modality_) throw UsageError("STM push: node modality does not match queue");
        slots_.push_front({id, std::move(elicited)});
        if (slots_.size() <= capacity_) return std::nullopt;
        NodeId evicted = slots_.back().node;
        slots_.pop_back();
        return evicted;
    }

    void clear() noexcept { slots_.clear(); }

private:
    Modality modality_;
    std::size_t capacity_;
    std::deque<StmEntry> slots_;
};

inline bool fully_learned(const Ltm& ltm, const StmEntry& e, LinkGate gate) {
    const Node& n = ltm.node(e.node);
    if (gate == LinkGate::nonempty) return n.image_complete || !n.image.empty();
    return n.image.modality() == e.elicited.modality() && equal(n.image, e.elicited);
}

/// Head pair when both heads pass the gate.
inline std::optional<std::pair<NodeId, NodeId>> co_occupancy(const Ltm& ltm, const StmQueue& visual,
                                                             const StmQueue& verbal,
                                                             LinkGate gate = LinkGate::nonempty) {
    const StmEntry* a = visual.head();
    const StmEntry* b = verbal.head();
    if (!a || !b) return std::nullopt;
    if (!fully_learned(ltm, *a, gate) || !fully_learned(ltm, *b, gate)) return std::nullopt;
    return std::make_pair(a->node, b->node);
}

/// All pairs selected by the pairing rule that pass the gate.
inline std::vector<std::pair<NodeId, NodeId>> co_occupancies(const Ltm& ltm, const StmQueue& visual,
                                                             const StmQueue& verbal, LinkGate gate,
                                                             LinkPairing pairing) {
    std::vector<std::pair<NodeId, NodeId>> out;
    if (pairing == LinkPairing::heads) {
        if (auto p = co_occupancy(ltm, visual, verbal, gate)) out.push_back(*p);
        return out;
    }
    const std::size_t n = std::min(visual.size(), verbal.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = visual.slots()[i];
        const auto& b = verbal.slots()[i];
        if (fully_learned(ltm, a, gate) && fully_learned(ltm, b, gate)) out.emplace_back(a.node, b.node);
    }
    return out;
}

/// One line per slot: "<position> <node id> <contents>".
inline std::string dump(const Ltm& ltm, const StmQueue& q) {
    std::string out = "stm " + q.modality().name() + " " + std::to_string(q.size()) + "/" +
                      std::to_string(q.capacity()) + "\n";
    std::size_t i = 0;
    for (const auto& e : q.slots())
        out += "  " + std::to_string(i++) + " " + std::to_string(to_index(e.node)) + " [" +
               ltm.contents(e.node).to_string() + "]\n";
    return out;
}

}  // namespace cogact
