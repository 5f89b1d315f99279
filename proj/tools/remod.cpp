// remod: relation extraction over semantic-dependency graphlets, with
// knowledge-graph verification. Each pipeline stage is a subcommand that
// reads and writes artifacts under the work directory.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "remod/pipeline.hpp"

namespace {

constexpr const char* kStages[] = {"synth",  "ingest",   "parse", "stitch", "embed",
                                   "weight", "features", "train", "eval",   "project",
                                   "factcheck", "match", "all"};

constexpr const char* kStageHelp[] = {
    "generate a deterministic synthetic corpus, graphlets, KG, and claims",
    "load the snippet corpus, filter by length, write stats",
    "parse graphlet files and contract equivalent nodes",
    "stitch contracted graphlets into the corpus graph",
    "run biased random walks and train node embeddings",
    "attach angular-distance edge weights to the corpus graph",
    "compute subject-object shortest-path feature vectors",
    "balance, split, and train the relation classifier",
    "evaluate the classifier on the held-out test split",
    "project feature vectors to 2D (PCA) for plotting",
    "score extracted triples against the knowledge graph",
    "claim-matching baseline over the claim corpus",
    "run every stage in order",
};

} // namespace

int main(int argc, char** argv) {
    remod::pipeline::PipelineConfig cfg;

    // The config file is applied before flag parsing so that any flag of
    // the same name overrides the file value.
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc)
            config_path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0)
            config_path = arg.substr(9);
    }
    if (!config_path.empty()) {
        try {
            remod::pipeline::apply_config(cfg,
                                          remod::pipeline::parse_config_file(config_path));
        } catch (const std::exception& e) {
            std::cerr << "error: config file '" << config_path << "': " << e.what() << "\n";
            return 2;
        }
    }
    std::string workdir = cfg.workdir.string();

    CLI::App app{"REMOD relation extraction and fact-verification pipeline"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_echo;
    app.add_option("--config", config_echo, "key = value config file; flags override it");

    app.add_option("--workdir", workdir, "artifact directory")->capture_default_str();
    app.add_option("--corpus", cfg.corpus, "snippet corpus JSONL (default <workdir>/corpus.jsonl)");
    app.add_option("--graphlets", cfg.graphlets, "graphlet directory (default <workdir>/graphlets)");
    app.add_option("--kg", cfg.kg, "knowledge graph TSV (default <workdir>/kg.tsv)");
    app.add_option("--triples", cfg.triples, "extracted triples TSV (default <workdir>/triples.tsv)");
    app.add_option("--claims", cfg.claims, "claim corpus JSONL (default <workdir>/claims.jsonl)");
    app.add_option("--verdicts", cfg.verdicts, "verdict mapping JSON (default <workdir>/verdicts.json)");

    app.add_option("--seed", cfg.seed, "global seed")->capture_default_str();
    app.add_option("--variant", cfg.variant, "graph variant: du|dw|uu|uw")
        ->check(CLI::IsMember({"du", "dw", "uu", "uw"}))
        ->capture_default_str();
    app.add_option("--half_width", cfg.half_width, "length filter half-width in sigmas")
        ->capture_default_str();
    app.add_option("--p", cfg.p, "walk return parameter")->capture_default_str();
    app.add_option("--q", cfg.q, "walk in-out parameter")->capture_default_str();
    app.add_option("--walks", cfg.walks, "walks per node")->capture_default_str();
    app.add_option("--walk_length", cfg.walk_length, "nodes per walk")->capture_default_str();
    app.add_option("--dim", cfg.dim, "embedding dimension")->capture_default_str();
    app.add_option("--window", cfg.window, "skip-gram context window")->capture_default_str();
    app.add_option("--negatives", cfg.negatives, "negative samples per positive")
        ->capture_default_str();
    app.add_option("--embed_epochs", cfg.embed_epochs, "embedding training epochs")
        ->capture_default_str();
    app.add_option("--alias_budget_mb", cfg.alias_budget_mb,
                   "memory cap for memoized walk transition tables")
        ->capture_default_str();
    app.add_option("--classifier", cfg.classifier, "softmax_regression | wide_mlp")
        ->check(CLI::IsMember({"softmax_regression", "wide_mlp"}))
        ->capture_default_str();
    app.add_option("--clf_lr", cfg.clf_lr, "classifier learning rate")->capture_default_str();
    app.add_option("--clf_epochs", cfg.clf_epochs, "classifier epochs")->capture_default_str();
    app.add_option("--clf_batch", cfg.clf_batch, "classifier batch size")->capture_default_str();
    app.add_option("--clf_hidden", cfg.clf_hidden, "hidden width of the wide MLP")
        ->capture_default_str();
    app.add_option("--k", cfg.k, "claim-matching neighbors")->capture_default_str();
    app.add_option("--match_filter", cfg.match_filter,
                   "claim corpus filter: all | same | publisher:<name>")
        ->capture_default_str();
    app.add_flag("--drop_misclassified,!--no_drop_misclassified", cfg.drop_misclassified,
                 "drop triples whose relation was misclassified before fact-checking");
    app.add_option("--threads", cfg.threads, "worker cap for parallel stages")
        ->capture_default_str();
    app.add_option("--synth_classes", cfg.synth_classes, "synthetic classes (2..5)")
        ->capture_default_str();
    app.add_option("--synth_per_class", cfg.synth_per_class, "synthetic records per class")
        ->capture_default_str();

    for (std::size_t i = 0; i < std::size(kStages); ++i)
        app.add_subcommand(kStages[i], kStageHelp[i]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    cfg.workdir = workdir;
    try {
        for (CLI::App* sub : app.get_subcommands()) {
            remod::pipeline::run_stage(sub->get_name(), cfg);
            std::cout << "stage '" << sub->get_name() << "' complete; artifacts in "
                      << cfg.workdir.string() << "\n";
        }
    } catch (const remod::pipeline::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
