#include <gtest/gtest.h>

#include "cogact/cogact.hpp"
#include "traces.hpp"
#include "paths.hpp"

using namespace cogact;
using cogact::test::vis;

namespace {

const Modality kV = Modality::visual();

// Root, A (image A B C), A/B (image A B), C (image C).
struct Fig2 {
    Ltm ltm;
    NodeId root, a, ab, c;
    Fig2() {
        root = ltm.root(kV);
        a = ltm.add_child(root, vis({"A"}), vis({"A", "B", "C"}), true);
        ab = ltm.add_child(a, vis({"B"}), vis({"A", "B"}), true);
        c = ltm.add_child(root, vis({"C"}), vis({"C"}), true);
    }
};

std::string failures(const std::vector<std::string>& f) {
    std::string s;
    for (const auto& x : f) s += x + "; ";
    return s;
}

}  // namespace

TEST(Recognise, SmallNetworkExamples) {
    Fig2 f;
    EXPECT_EQ(f.ltm.recognise(vis({"D"})), f.root);
    EXPECT_EQ(f.ltm.recognise(vis({"A", "B"})), f.ab);
    EXPECT_EQ(f.ltm.recognise(vis({"A", "B", "C"})), f.ab);
    EXPECT_EQ(f.ltm.node(f.ltm.recognise(vis({"A", "B"}))).image, vis({"A", "B"}));
    EXPECT_EQ(f.ltm.recognise(vis({"A", "C"})), f.a);
    EXPECT_EQ(f.ltm.recognise(vis({})), f.root);
}

TEST(Recognise, DoesNotMutate) {
    Fig2 f;
    const auto count = f.ltm.node_count();
    const Pattern img = f.ltm.node(f.a).image;
    for (int i = 0; i < 3; ++i) EXPECT_EQ(f.ltm.recognise(vis({"A", "B", "X"})), f.ab);
    EXPECT_EQ(f.ltm.node_count(), count);
    EXPECT_EQ(f.ltm.node(f.a).image, img);
    EXPECT_EQ(f.ltm.clock(), 0.0);
}

TEST(Recognise, UnknownModalityHasNoNetwork) {
    Fig2 f;
    EXPECT_FALSE(f.ltm.try_recognise(Pattern(Modality::verbal(), {"A"})).has_value());
}

TEST(LearningTraces, DiscriminationAddsUnknownPrimitive) {
    auto f = test::trace_new_primitive();
    EXPECT_TRUE(f.empty()) << failures(f);
}

TEST(LearningTraces, SingleShotDiscriminationFillsImage) {
    auto f = test::trace_single_shot();
    EXPECT_TRUE(f.empty()) << failures(f);
}

TEST(LearningTraces, FamiliarisationFillsEmptyImage) {
    auto f = test::trace_fill_empty_image();
    EXPECT_TRUE(f.empty()) << failures(f);
}

TEST(LearningTraces, FamiliarisationExtendsImage) {
    auto f = test::trace_extend_image();
    EXPECT_TRUE(f.empty()) << failures(f);
}

TEST(Learn, ChainOfPrimitivesFromEmptyNet) {
    Ltm ltm;
    NodeId root = ltm.root(kV);
    LearnEvent a = ltm.learn(vis({"A"}));
    LearnEvent b = ltm.learn(vis({"B"}));
    ASSERT_EQ(a.kind, LearnKind::created_node);
    ASSERT_EQ(b.kind, LearnKind::created_node);
    EXPECT_EQ(ltm.node(root).children, (std::vector<NodeId>{a.node, b.node}));
    EXPECT_EQ(ltm.node(a.node).test, vis({"A"}));
    EXPECT_EQ(ltm.node(b.node).test, vis({"B"}));
}

TEST(Learn, EmptyPatternIsUsageError) {
    Ltm ltm;
    EXPECT_THROW(ltm.learn(vis({})), UsageError);
}

TEST(Familiarise, ZeroDifferenceIsNoChange) {
    Ltm ltm;
    NodeId n = ltm.add_primitive(kV, "A");
    ltm.add_primitive(kV, "B", true, true);
    NodeId ab = ltm.add_child(n, vis({"B"}), vis({"A", "B"}), true);
    LearnEvent e = ltm.familiarise(ab, vis({"A", "B"}));
    EXPECT_EQ(e.kind, LearnKind::no_change);
    EXPECT_EQ(e.cost_seconds, 0.0);
    EXPECT_EQ(ltm.learn(vis({"A", "B"})).kind, LearnKind::no_change);
}

// Hand-executed four-outcome rule: image [A], p = [A,Q].
//   d = difference([A,Q], [A]) = [Q]; recognise([Q]) = root (Q unknown)
//   -> outcome 2: a primitive node for Q under root, empty image; the
//      A node is left alone.
TEST(Familiarise, UnknownRemainderLearnsPrimitive) {
    Ltm ltm;
    NodeId root = ltm.root(kV);
    NodeId a = ltm.add_primitive(kV, "A", true, false);
    LearnEvent e = ltm.learn(vis({"A", "Q"}));
    ASSERT_EQ(e.kind, LearnKind::created_node);
    EXPECT_EQ(ltm.node(e.node).parent, root);
    EXPECT_EQ(ltm.node(e.node).test, vis({"Q"}));
    EXPECT_TRUE(ltm.node(e.node).image.empty());
    EXPECT_EQ(ltm.node(a).image, vis({"A"}));
    // next presentation extends A's image with the now known Q
    LearnEvent f = ltm.learn(vis({"A", "Q"}));
    EXPECT_EQ(f.kind, LearnKind::familiarised);
    EXPECT_EQ(ltm.node(a).image, vis({"A", "Q"}));
    EXPECT_TRUE(ltm.node(a).image_complete);
}

TEST(Discriminate, NewPrimitiveAtRoot) {
    Ltm ltm;
    NodeId root = ltm.root(kV);
    NodeId z = ltm.add_primitive(kV, "Z", true, true);
    LearnEvent e = ltm.discriminate(root, vis({"Q"}));
    ASSERT_EQ(e.kind, LearnKind::created_node);
    EXPECT_EQ(ltm.node(root).children, (std::vector<NodeId>{z, e.node}));
    EXPECT_EQ(ltm.node(e.node).test, vis({"Q"}));
}

TEST(Discriminate, RetrievedEmptyImageIsFamiliarised) {
    Ltm ltm;
    NodeId a = ltm.add_primitive(kV, "A", true, true);
    NodeId b = ltm.add_primitive(kV, "B");
    LearnEvent e = ltm.discriminate(a, vis({"A", "B"}));
    EXPECT_EQ(e.kind, LearnKind::familiarised);
    EXPECT_EQ(e.node, b);
    EXPECT_EQ(ltm.node(b).image, vis({"B"}));
}

TEST(Discriminate, PatternEqualToPathGetsEndTestChild) {
    Ltm ltm;
    NodeId a = ltm.add_primitive(kV, "A", false);
    ltm.set_image(a, vis({"A", "B"}), true);
    LearnEvent e = ltm.learn(vis({"A"}));
    ASSERT_EQ(e.kind, LearnKind::created_node);
    const Node& n = ltm.node(e.node);
    EXPECT_TRUE(n.end_test);
    EXPECT_EQ(n.parent, a);
    EXPECT_EQ(n.image, vis({"A"}));
    EXPECT_TRUE(n.image_complete);
    EXPECT_EQ(ltm.recognise(vis({"A"})), e.node);
    EXPECT_EQ(ltm.recognise(vis({"A", "B"})), a);
    EXPECT_EQ(ltm.learn(vis({"A"})).kind, LearnKind::no_change);
}

TEST(Learn, RepeatedPresentationReachesFixedPoint) {
    Ltm ltm;
    const Pattern p = vis({"A", "B", "C"});
    std::vector<LearnKind> kinds;
    for (int i = 0; i < 50; ++i) {
        kinds.push_back(ltm.learn(p).kind);
        if (kinds.back() == LearnKind::no_change) break;
    }
    ASSERT_EQ(kinds.back(), LearnKind::no_change);
    EXPECT_EQ(ltm.node(ltm.recognise(p)).image, p);
    EXPECT_EQ(ltm.learn(p).kind, LearnKind::no_change);
}

TEST(Learn, CostsFollowTheClock) {
    Ltm ltm;
    LearnEvent a = ltm.learn(vis({"A"}));
    EXPECT_EQ(a.cost_seconds, 10.0);
    EXPECT_EQ(ltm.clock(), 10.0);
    EXPECT_EQ(ltm.node(a.node).created_at, 10.0);
    LearnEvent f = ltm.learn(vis({"A"}));
    EXPECT_EQ(f.kind, LearnKind::familiarised);
    EXPECT_EQ(f.cost_seconds, 2.0);
    EXPECT_EQ(ltm.clock(), 12.0);
    EXPECT_EQ(ltm.node(a.node).updated_at, 12.0);

    Ltm custom(LtmParams{1.0, 7.0, 0.5});
    custom.learn(vis({"A"}));
    custom.learn(vis({"A"}));
    EXPECT_EQ(custom.clock(), 7.5);
}

TEST(Learn, ChunkProbabilityGatesLearning) {
    Ltm never(LtmParams{0.0, 10.0, 2.0}, 3);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(never.learn(vis({"A", "B"})).kind, LearnKind::no_change);
    EXPECT_EQ(never.node_count(), 1u);

    auto events = [](std::uint64_t seed) {
        Ltm ltm(LtmParams{0.5, 10.0, 2.0}, seed);
        std::vector<LearnKind> k;
        for (int i = 0; i < 40; ++i) k.push_back(ltm.learn(vis({"A", "B", "C"})).kind);
        return k;
    };
    auto a = events(11), b = events(11);
    EXPECT_EQ(a, b);
    EXPECT_NE(std::count(a.begin(), a.end(), LearnKind::no_change), 0);
    EXPECT_THROW(Ltm(LtmParams{1.5, 10.0, 2.0}), UsageError);
}

TEST(NamingLinks, CountsAccumulate) {
    Ltm ltm;
    NodeId v = ltm.add_primitive(kV, "A", true, true);
    NodeId w = ltm.add_primitive(Modality::verbal(), "T", true, true);
    ltm.add_naming_link(v, w);
    EXPECT_EQ(ltm.node(v).naming_links.at(w), 1u);
    ltm.add_naming_link(v, w);
    ltm.add_naming_link(v, w);
    EXPECT_EQ(ltm.node(v).naming_links.at(w), 3u);
    EXPECT_EQ(ltm.total_links(v), 3u);
    EXPECT_THROW(ltm.add_naming_link(ltm.root(kV), w), UsageError);
    EXPECT_THROW(ltm.add_naming_link(v, ltm.root(Modality::verbal())), UsageError);
    EXPECT_THROW(ltm.add_naming_link(v, NodeId{999}), UsageError);
}

TEST(ChunkSize, CountsPathPrimitives) {
    Ltm ltm;
    NodeId a = ltm.add_primitive(kV, "A");
    NodeId ab = ltm.add_child(a, vis({"B"}), vis({}));
    EXPECT_EQ(ltm.chunk_size(ltm.root(kV)), 0u);
    EXPECT_EQ(ltm.chunk_size(a), 1u);
    EXPECT_EQ(ltm.chunk_size(ab), 2u);
    NodeId deep = ltm.add_child(ab, vis({"C", "D", "E"}), vis({}));
    EXPECT_EQ(ltm.chunk_size(deep), 5u);
}

// Path length of the node "Liverpool" sorts to after training, counted by
// walking the tests by hand.
TEST(ChunkSize, OcclusionWordNode) {
    auto [m, run] = train(load_manifest(test::suite_manifest("occlusion")), RunConfig{});
    Pattern word(kV, tokenize_chars("Liverpool"));
    NodeId n = m.ltm.recognise(word);
    std::size_t by_hand = 0;
    for (const Node* x = &m.ltm.node(n); x->parent; x = &m.ltm.node(*x->parent)) by_hand += x->test.size();
    EXPECT_EQ(m.ltm.chunk_size(n), by_hand);
    EXPECT_EQ(m.ltm.node(n).image, word);
    EXPECT_EQ(activation_quantum(m.ltm, n, ActivationQuantum::image), 9u);
    EXPECT_EQ(activation_quantum(m.ltm, n, ActivationQuantum::contents), by_hand);
}

TEST(Modalities, NetworksAreSeparate) {
    Ltm ltm;
    ltm.learn(vis({"A"}));
    Pattern w(Modality::verbal(), {"A"});
    EXPECT_EQ(ltm.recognise(w), ltm.root(Modality::verbal()));
    ltm.learn(w);
    EXPECT_EQ(ltm.network_size(kV), 2u);
    EXPECT_EQ(ltm.network_size(Modality::verbal()), 2u);
    EXPECT_THROW(ltm.familiarise(ltm.recognise(vis({"A"})), w), UsageError);
}
