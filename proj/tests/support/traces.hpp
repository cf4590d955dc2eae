#pragma once

// The four hand-drawn learning traces (one discrimination with an unknown
// primitive, one-step discrimination with a filled image, filling an empty
// image, extending an image). Each returns the list of mismatches; empty
// means the trace reproduced exactly.

#include <string>
#include <vector>

#include "cogact/ltm.hpp"

namespace cogact::test {

inline Pattern vis(std::initializer_list<std::string_view> items) { return Pattern(Modality::visual(), items); }

class TraceCheck {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    std::vector<std::string> failures() const { return failures_; }

private:
    std::vector<std::string> failures_;
};

inline std::vector<std::string> trace_new_primitive() {
    TraceCheck c;
    Ltm ltm;
    NodeId root = ltm.root(Modality::visual());
    NodeId a = ltm.add_primitive(Modality::visual(), "A", true, true);
    LearnEvent e = ltm.learn(vis({"B"}));
    c.expect(e.kind == LearnKind::created_node, "learn([B]) should create a node");
    c.expect(ltm.node_count() == 3, "network should hold root, A, B");
    const auto& kids = ltm.node(root).children;
    c.expect(kids.size() == 2 && kids[0] == a && kids[1] == e.node, "root children should be [A, B]");
    c.expect(ltm.node(e.node).test == vis({"B"}), "new node test should be [B]");
    c.expect(ltm.node(e.node).image.empty(), "new node image should be empty");
    c.expect(ltm.node(a).image == vis({"A"}), "A's image should be untouched");
    return c.failures();
}

inline std::vector<std::string> trace_single_shot() {
    TraceCheck c;
    Ltm ltm;
    NodeId root = ltm.root(Modality::visual());
    NodeId a = ltm.add_primitive(Modality::visual(), "A", true, true);
    NodeId b = ltm.add_primitive(Modality::visual(), "B", true, true);
    LearnEvent e = ltm.learn(vis({"A", "B"}));
    c.expect(e.kind == LearnKind::created_node, "learn([A,B]) should create a node");
    c.expect(ltm.node_count() == 4, "exactly one node should be added");
    c.expect(ltm.node(root).children == std::vector<NodeId>{a, b}, "root children should stay [A, B]");
    c.expect(ltm.node(a).children == std::vector<NodeId>{e.node}, "new node should hang under A");
    c.expect(ltm.node(e.node).test == vis({"B"}), "new node test should be [B]");
    c.expect(ltm.node(e.node).image == vis({"A", "B"}), "new node image should be [A,B]");
    c.expect(ltm.recognise(vis({"A", "B"})) == e.node, "[A,B] should now sort to the new node");
    return c.failures();
}

inline std::vector<std::string> trace_fill_empty_image() {
    TraceCheck c;
    Ltm ltm;
    NodeId a = ltm.add_primitive(Modality::visual(), "A");
    LearnEvent e = ltm.learn(vis({"A", "X"}));
    c.expect(e.kind == LearnKind::familiarised, "learn([A,X]) should familiarise");
    c.expect(e.node == a, "the A node should be the one familiarised");
    c.expect(ltm.node_count() == 2, "no node should be added");
    c.expect(ltm.node(a).test == vis({"A"}), "test link should stay [A]");
    c.expect(ltm.node(a).image == vis({"A"}), "image should become [A]");
    return c.failures();
}

inline std::vector<std::string> trace_extend_image() {
    TraceCheck c;
    Ltm ltm;
    NodeId a = ltm.add_primitive(Modality::visual(), "A", true, false);
    ltm.add_primitive(Modality::visual(), "B", true, true);
    LearnEvent e = ltm.learn(vis({"A", "B"}));
    c.expect(e.kind == LearnKind::familiarised, "learn([A,B]) should familiarise");
    c.expect(e.node == a, "the A node should be the one familiarised");
    c.expect(ltm.node_count() == 3, "no node should be added");
    c.expect(ltm.node(a).image == vis({"A", "B"}), "image should become [A,B]");
    c.expect(ltm.node(a).children.empty(), "A should gain no children");
    return c.failures();
}

}  // namespace cogact::test
