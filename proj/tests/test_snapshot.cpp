#include <gtest/gtest.h>

#include "cogact/cogact.hpp"
#include "paths.hpp"

using namespace cogact;

namespace {

Model trained(const std::string& suite) {
    return train(load_manifest(test::suite_manifest(suite)), test::suite_config(suite)).model;
}

std::string load_error(const std::string& text) {
    try {
        read_snapshot(text, "m.snapshot");
    } catch (const LoadError& e) {
        return e.what();
    }
    return "<no LoadError>";
}

std::string replace_line(std::string text, const std::string& tag, const std::string& with) {
    auto at = text.find("\n" + tag + " ");
    auto end = text.find('\n', at + 1);
    return text.replace(at + 1, end - at - 1, with);
}

}  // namespace

TEST(Snapshot, RoundTripIsByteExact) {
    for (const char* s : {"xor", "five_four", "occlusion"}) {
        Model m = trained(s);
        std::string text = write_snapshot(m);
        EXPECT_EQ(write_snapshot(read_snapshot(text)), text) << s;
    }
}

TEST(Snapshot, RoundTripPreservesBehaviour) {
    auto man = load_manifest(test::suite_manifest("occlusion"));
    Model m = trained("occlusion");
    Model back = read_snapshot(write_snapshot(m));
    EXPECT_EQ(suite_csv(run_suite(m, man)), suite_csv(run_suite(back, man)));
    EXPECT_EQ(retrieve(m.ltm, m.stimulus_from_text("Livzrpool").tokens),
              retrieve(back.ltm, back.stimulus_from_text("Livzrpool").tokens));
    // Further training continues identically, including the RNG state.
    RunConfig cfg;
    cfg.chunk_probability = 0.5;
    Model a = Model::fresh(cfg, Tokenizer::chars, false, {"A", "B"});
    auto d = load_dataset(man);
    train_on(a, d.training);
    Model b = read_snapshot(write_snapshot(a));
    train_on(a, d.training);
    train_on(b, d.training);
    EXPECT_EQ(write_snapshot(a), write_snapshot(b));
}

TEST(Snapshot, HeaderAndLayout) {
    std::string text = write_snapshot(trained("xor"));
    EXPECT_EQ(text.rfind("cogact-snapshot 1\ntokenizer logic_bits\n", 0), 0u);
    EXPECT_NE(text.find("\nlabels 2 T F\n"), std::string::npos);
    EXPECT_NE(text.find("\nfeatures 1 1\n"), std::string::npos);
    EXPECT_NE(text.find("\nparams 1 10 2\n"), std::string::npos);
    EXPECT_EQ(text.substr(text.size() - 4), "end\n");
}

TEST(Snapshot, AblationFlagsPersist) {
    Model m = ablate(ablate(trained("xor"), Feature::stm), Feature::naming_links);
    Model back = read_snapshot(write_snapshot(m));
    EXPECT_FALSE(back.stm_enabled);
    EXPECT_FALSE(back.naming_links_enabled);
}

TEST(Snapshot, OtherVersionsRejected) {
    std::string text = write_snapshot(trained("xor"));
    std::string old = "cogact-snapshot 0" + text.substr(text.find('\n'));
    EXPECT_EQ(load_error(old), "m.snapshot: snapshot schema version 0 is not supported (this build reads version 1)");
    EXPECT_EQ(load_error("garbage\n"), "m.snapshot: not a cogact snapshot");
}

TEST(Snapshot, MalformedInputIsLoadError) {
    std::string text = write_snapshot(trained("xor"));
    EXPECT_NE(load_error(text.substr(0, text.size() / 2)).find("m.snapshot:"), std::string::npos);
    EXPECT_NE(load_error(replace_line(text, "clock", "clock soon")).find("bad number 'soon'"), std::string::npos);
    EXPECT_NE(load_error(replace_line(text, "labels", "labels 3 T F")).find("does not match item count"),
              std::string::npos);
    EXPECT_NE(load_error(replace_line(text, "tokenizer", "tokenizer midi")).find("m.snapshot"), std::string::npos);
    EXPECT_NE(load_error(text.substr(0, text.size() - 4)).find("unexpected end of file"), std::string::npos);
}

TEST(Snapshot, DanglingReferencesRejected) {
    std::string text = write_snapshot(trained("xor"));
    auto at = text.find("\nchildren ");
    auto end = text.find('\n', at + 1);
    std::string bad = text.substr(0, at + 1) + "children 1 999" + text.substr(end);
    EXPECT_THROW(read_snapshot(bad), LoadError);
}

TEST(Snapshot, FileSaveAndLoad) {
    auto dir = test::scratch_dir("snapshot");
    Model m = trained("five_four");
    save_snapshot(m, dir / "m.snapshot");
    EXPECT_EQ(write_snapshot(load_snapshot(dir / "m.snapshot")), write_snapshot(m));
    EXPECT_THROW(load_snapshot(dir / "absent.snapshot"), LoadError);
}
