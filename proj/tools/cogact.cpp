// cogact command-line front end.
//
// Exit codes: 0 ok, 1 usage, 2 bad manifest/config/input file, 3 training
// did not converge, 4 no activation for the input, 5 an anchor failed under
// --check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cogact/cogact.hpp"

namespace fs = std::filesystem;
using namespace cogact;

namespace {

constexpr int exit_load = 2;
constexpr int exit_nonconvergence = 3;
constexpr int exit_no_activation = 4;
constexpr int exit_anchor = 5;

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string format = "table";
};

void add_common(CLI::App* app, Common& c, bool with_seed = true) {
    app->add_option("--config", c.config_path, "JSON run configuration");
    if (with_seed) app->add_option("--seed", c.seed, "RNG seed (overrides the config)");
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "table"}));
}

RunConfig resolve_config(const Common& c) {
    RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
    if (c.seed) cfg.seed = *c.seed;
    return cfg;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw LoadError("cannot write '" + p.string() + "'");
    out << text;
}

/// Run directory: config.json, model.snapshot, run.json (+ results.csv).
void write_run_dir(const fs::path& dir, const Model& m, const TrainingRun& run) {
    fs::create_directories(dir);
    write_text(dir / "config.json", to_json(m.config).dump(2) + "\n");
    save_snapshot(m, dir / "model.snapshot");
    nlohmann::json log = to_json(run);
    log["node_count"] = m.ltm.node_count();
    log["naming_link_total"] = m.ltm.naming_link_total();
    write_text(dir / "run.json", log.dump(2) + "\n");
}

void print_run(const TrainingRun& run, const Model& m) {
    std::printf("epochs %zu  converged %s  created %zu  familiarised %zu  links %zu  simulated %.0f s\n",
                run.epoch_count, run.converged ? "yes" : "no", run.created, run.familiarised, run.links_formed,
                run.simulated_time_seconds);
    for (const auto& [mod, n] : run.nodes_per_modality) std::printf("nodes %s %zu\n", mod.c_str(), n);
    if (auto v = run.monotonicity_violations(); !v.empty())
        std::fprintf(stderr, "note: learning events rose between epochs in %zu place(s)\n", v.size());
    (void)m;
}

Stimulus read_stimulus(const Model& m, const std::string& input, const std::string& text) {
    if (!text.empty()) return m.stimulus_from_text(text, "<text>");
    if (input.empty()) throw UsageError("give --input FILE or --text STRING");
    return m.stimulus_from_text(read_file(input), input);
}

int cmd_train(const std::string& manifest_path, const Common& c, const std::string& out_dir) {
    Manifest man = load_manifest(manifest_path);
    RunConfig cfg = resolve_config(c);
    auto [model, run] = train(man, cfg);
    write_run_dir(out_dir, model, run);
    print_run(run, model);
    if (!run.converged) {
        std::fprintf(stderr, "error: no fixed point after %zu epochs (max_epochs)\n", run.epoch_count);
        return exit_nonconvergence;
    }
    return 0;
}

int cmd_categorise(const std::string& model_path, const std::string& input, const std::string& text,
                   const std::string& format) {
    Model m = load_snapshot(model_path);
    Stimulus s = read_stimulus(m, input, text);
    if (s.tokens.empty()) throw LoadError("input contains no tokens");
    Classification c = categorise(m.ltm, s, m.attention());
    if (c.no_activation) {
        std::fprintf(stderr, "no-activation: no learned chunk in the input is linked to a label\n");
        return exit_no_activation;
    }
    if (format == "csv") std::printf("label,confidence\n");
    for (const auto& r : c.ranked) {
        if (format == "csv") std::printf("%s,%.6f\n", r.name.c_str(), r.confidence);
        else std::printf("%s %.3f\n", r.name.c_str(), r.confidence);
    }
    return 0;
}

int cmd_retrieve(const std::string& model_path, const std::string& input, const std::string& text) {
    Model m = load_snapshot(model_path);
    Stimulus s = read_stimulus(m, input, text);
    std::printf("%s\n", retrieve(m.ltm, s.tokens).to_string().c_str());
    return 0;
}

int cmd_run_suite(const std::string& manifest_path, const std::string& model_path, const Common& c,
                  const std::string& out_dir, bool check, std::size_t sweep) {
    Manifest man = load_manifest(manifest_path);
    Model model;
    std::optional<TrainingRun> run;
    if (!model_path.empty()) {
        model = load_snapshot(model_path);
    } else {
        auto r = train(man, resolve_config(c));
        model = std::move(r.model);
        run = r.run;
        if (!run->converged) {
            std::fprintf(stderr, "error: no fixed point after %zu epochs (max_epochs)\n", run->epoch_count);
            return exit_nonconvergence;
        }
    }
    SuiteResult res = run_suite(model, man);
    const std::string csv = suite_csv(res);
    if (!out_dir.empty()) {
        if (run) write_run_dir(out_dir, model, *run);
        else fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "results.csv", csv);
    }
    std::fputs(c.format == "csv" ? csv.c_str() : suite_table(res).c_str(), stdout);
    if (sweep > 0) {
        SweepReport rep = seed_sweep(man, model.config, model.config.seed, sweep);
        std::string text = sweep_table(rep);
        std::fputs(text.c_str(), stdout);
        if (!out_dir.empty()) write_text(fs::path(out_dir) / "sweep.txt", text);
    }
    if (check && !res.anchors_passed()) {
        std::fprintf(stderr, "error: acceptance anchor failed\n");
        return exit_anchor;
    }
    return 0;
}

int cmd_eval(const std::string& human_path, const std::string& model_path, std::size_t labels,
             const std::string& rule, double alpha, const std::string& metrics_out, const std::string& format) {
    auto human = load_pairs(human_path);
    std::string model_text = read_file(model_path);
    const bool suite = looks_like_suite_csv(model_text);
    auto model = suite ? parse_suite_csv_pairs(model_text, "model", model_path) : parse_pairs_tsv(model_text, model_path);
    if (human.empty()) throw LoadError(human_path + ": no prediction rows");
    if (model.empty()) throw LoadError(model_path + ": no prediction rows");
    auto scored = score_fixture(human, model, suite);
    MetricTotals totals;
    std::map<std::string, MetricTotals> per;
    for (const auto& s : scored) {
        totals.add(s.row);
        per[s.participant].add(s.row);
    }
    if (labels == 0) labels = std::max<std::size_t>(2, max_labels_per_participant(scored));
    const std::string csv = metrics_csv(scored);
    if (!metrics_out.empty()) write_text(metrics_out, csv);
    if (format == "csv" && metrics_out.empty()) std::fputs(csv.c_str(), stdout);
    std::printf("participant,n,identical,both_match,tops_match,one_matches_top,single_match\n");
    auto line = [](const std::string& name, const MetricTotals& t) {
        std::printf("%s,%zu", name.c_str(), t.n);
        for (auto m : all_metrics) std::printf(",%zu", t[m]);
        std::printf("\n");
    };
    for (const auto& [p, t] : per) line(p, t);
    line("total", totals);
    std::fputs(significance_report(significance(totals, labels, parse_chance_rule(rule), alpha)).c_str(), stdout);
    return 0;
}

int cmd_inspect(const std::string& model_path, bool nodes, bool stm) {
    Model m = load_snapshot(model_path);
    std::printf("snapshot schema %d  tokenizer %s  labels", snapshot_version, to_string(m.tokenizer));
    for (const auto& l : m.labels) std::printf(" %s", l.c_str());
    std::printf("\nnodes %zu  naming links %llu  clock %.0f s\n", m.ltm.node_count(),
                static_cast<unsigned long long>(m.ltm.naming_link_total()), m.ltm.clock());
    for (const auto& [mod, root] : m.ltm.roots()) std::printf("network %s %zu\n", mod.name().c_str(), m.ltm.network_size(mod));
    if (nodes) {
        for (const auto& n : m.ltm.nodes()) {
            std::printf("%u %s [%s] image [%s]%s", to_index(n.id), n.modality.name().c_str(),
                        m.ltm.contents(n.id).to_string().c_str(), n.image.to_string().c_str(),
                        n.image_complete ? " complete" : "");
            for (const auto& [to, count] : n.naming_links)
                std::printf(" ->%s x%llu", label_name(m.ltm, to).c_str(), static_cast<unsigned long long>(count));
            std::printf("\n");
        }
    }
    if (stm) std::fputs((dump(m.ltm, m.visual_stm) + dump(m.ltm, m.verbal_stm)).c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chunking-based concept learner"};
    app.set_version_flag("--version", std::string("cogact ") + version_string + " (snapshot schema " +
                                          std::to_string(snapshot_version) + ")");
    app.require_subcommand(1);

    Common train_c;
    std::string train_manifest, train_out;
    auto* train_cmd = app.add_subcommand("train", "Train on a manifest and write a run directory");
    train_cmd->add_option("manifest", train_manifest, "Dataset manifest (JSON)")->required();
    train_cmd->add_option("--out", train_out, "Run directory")->required();
    add_common(train_cmd, train_c);

    Common cat_c;
    std::string cat_model, cat_input, cat_text;
    auto* cat_cmd = app.add_subcommand("categorise", "Rank labels for a stimulus");
    cat_cmd->alias("categorize");
    cat_cmd->add_option("--model", cat_model, "Model snapshot")->required();
    cat_cmd->add_option("--input", cat_input, "Stimulus file");
    cat_cmd->add_option("--text", cat_text, "Stimulus text");
    add_common(cat_cmd, cat_c, false);

    std::string ret_model, ret_input, ret_text;
    auto* ret_cmd = app.add_subcommand("retrieve", "Print the chunk image the stimulus sorts to");
    ret_cmd->add_option("--model", ret_model, "Model snapshot")->required();
    ret_cmd->add_option("--input", ret_input, "Stimulus file");
    ret_cmd->add_option("--text", ret_text, "Stimulus text");

    Common suite_c;
    std::string suite_manifest, suite_model, suite_out;
    bool suite_check = false;
    std::size_t suite_sweep = 0;
    auto* suite_cmd = app.add_subcommand("run-suite", "Train (or load) a model and classify the manifest's tests");
    suite_cmd->add_option("manifest", suite_manifest, "Dataset manifest (JSON)")->required();
    suite_cmd->add_option("--model", suite_model, "Use this snapshot instead of training");
    suite_cmd->add_option("--out", suite_out, "Run directory");
    suite_cmd->add_flag("--check", suite_check, "Exit nonzero if any anchor fails");
    suite_cmd->add_option("--sweep", suite_sweep, "Also report modal labels over this many seeds");
    add_common(suite_cmd, suite_c);

    std::string eval_human, eval_model, eval_rule = "independent_uniform", eval_metrics_out, eval_format = "table";
    std::size_t eval_labels = 0;
    double eval_alpha = 0.05;
    auto* eval_cmd = app.add_subcommand("eval", "Score model predictions against human ones");
    eval_cmd->alias("eval-metrics");
    eval_cmd->add_option("--human", eval_human, "Human pairs (TSV)")->required();
    eval_cmd->add_option("--model", eval_model, "Model pairs (TSV) or suite results CSV")->required();
    eval_cmd->add_option("--labels", eval_labels, "Labels per rating (default: most distinct labels seen by one participant)");
    eval_cmd->add_option("--rule", eval_rule, "Chance model")
        ->check(CLI::IsMember({"independent_uniform", "distinct_pairs"}));
    eval_cmd->add_option("--alpha", eval_alpha, "Family-wise alpha");
    eval_cmd->add_option("--metrics-out", eval_metrics_out, "Write the per-item metrics CSV here");
    eval_cmd->add_option("--format", eval_format, "Output format")->check(CLI::IsMember({"csv", "table"}));

    std::string insp_model;
    bool insp_nodes = false, insp_stm = false;
    auto* insp_cmd = app.add_subcommand("inspect", "Summarise a model snapshot");
    insp_cmd->add_option("--model", insp_model, "Model snapshot")->required();
    insp_cmd->add_flag("--nodes", insp_nodes, "List every node");
    insp_cmd->add_flag("--stm", insp_stm, "Dump the STM queues");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version land here too, with exit code 0.
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*train_cmd) return cmd_train(train_manifest, train_c, train_out);
        if (*cat_cmd) return cmd_categorise(cat_model, cat_input, cat_text, cat_c.format);
        if (*ret_cmd) return cmd_retrieve(ret_model, ret_input, ret_text);
        if (*suite_cmd) return cmd_run_suite(suite_manifest, suite_model, suite_c, suite_out, suite_check, suite_sweep);
        if (*eval_cmd)
            return cmd_eval(eval_human, eval_model, eval_labels, eval_rule, eval_alpha, eval_metrics_out, eval_format);
        if (*insp_cmd) return cmd_inspect(insp_model, insp_nodes, insp_stm);
    } catch (const LoadError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_load;
    } catch (const NonConvergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_nonconvergence;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_load;
    }
    return 0;
}
