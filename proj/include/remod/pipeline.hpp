#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "remod/classifier.hpp"
#include "remod/corpus_graph.hpp"
#include "remod/factcheck.hpp"
#include "remod/graphlet.hpp"
#include "remod/ingest.hpp"
#include "remod/node2vec.hpp"
#include "remod/path_features.hpp"
#include "remod/synthetic.hpp"
#include "remod/util.hpp"

namespace remod::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

// Bad arguments, bad config, missing upstream artifacts: exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

struct PipelineConfig {
    fs::path workdir = "remod_out";
    // Empty string means "resolve under workdir with the stock name".
    std::string corpus;
    std::string graphlets;
    std::string kg;
    std::string triples;
    std::string claims;
    std::string verdicts;

    std::uint64_t seed = 42;
    std::string variant = "uu"; // du|dw|uu|uw
    double half_width = 0.5;

    double p = 2.0;
    double q = 3.0;
    int walks = 200;
    int walk_length = 200;
    int dim = 256;
    int window = 50;
    int negatives = 5;
    int embed_epochs = 5;
    int alias_budget_mb = 256;

    std::string classifier = "wide_mlp";
    double clf_lr = 0.05;
    int clf_epochs = 60;
    int clf_batch = 32;
    int clf_hidden = 1024;

    int k = 5;
    std::string match_filter = "all"; // all | same | publisher:<name>
    bool drop_misclassified = true;

    unsigned threads = 1;
    int synth_classes = 5;
    int synth_per_class = 200;

    fs::path resolve(const std::string& override_path, const char* stock_name) const {
        if (!override_path.empty()) return fs::path(override_path);
        return workdir / stock_name;
    }

    fs::path corpus_path() const { return resolve(corpus, "corpus.jsonl"); }
    fs::path graphlets_dir() const { return resolve(graphlets, "graphlets"); }
    fs::path kg_path() const { return resolve(kg, "kg.tsv"); }
    fs::path triples_path() const { return resolve(triples, "triples.tsv"); }
    fs::path claims_path() const { return resolve(claims, "claims.jsonl"); }
    fs::path verdicts_path() const { return resolve(verdicts, "verdicts.json"); }

    fs::path filtered_path() const { return workdir / "filtered.jsonl"; }
    fs::path stats_path() const { return workdir / "stats.csv"; }
    fs::path contracted_dir() const { return workdir / "contracted"; }
    fs::path parse_skipped_path() const { return workdir / "parse_skipped.json"; }
    fs::path nodes_path() const { return workdir / "graph.nodes.tsv"; }
    fs::path edges_path() const { return workdir / "graph.edges.tsv"; }
    fs::path weighted_path() const { return workdir / "graph.weighted.tsv"; }
    fs::path embeddings_path() const { return workdir / "embeddings.tsv"; }
    fs::path embed_report_path() const { return workdir / "embed_report.json"; }
    fs::path features_path() const { return workdir / "features.tsv"; }
    fs::path paths_audit_path() const { return workdir / "paths.tsv"; }
    fs::path feature_skipped_path() const { return workdir / "feature_skipped.json"; }
    fs::path model_path() const { return workdir / "model.json"; }
    fs::path split_path() const { return workdir / "split.json"; }
    fs::path train_report_path() const { return workdir / "train_report.json"; }
    fs::path metrics_path() const { return workdir / "metrics.json"; }
    fs::path predictions_path() const { return workdir / "predictions.tsv"; }
    fs::path projection_path() const { return workdir / "projection.csv"; }
    fs::path verification_path() const { return workdir / "verification.json"; }
    fs::path match_report_path() const { return workdir / "match_report.json"; }
    fs::path manifest_dir() const { return workdir / "manifests"; }

    graph::GraphVariant graph_variant() const { return graph::variant_from_code(variant); }
};

// Key-value config file: `key = value` per line, '#' comments. Every key
// has a CLI flag of the same name.
inline std::map<std::string, std::string> parse_config_file(const fs::path& path) {
    std::map<std::string, std::string> kv;
    std::istringstream in(read_text_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto trim = [](std::string s) {
            std::size_t b = s.find_first_not_of(" \t\r");
            std::size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(line_no, "expected 'key = value'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

inline void apply_config(PipelineConfig& cfg, const std::map<std::string, std::string>& kv) {
    auto as_u64 = [](const std::string& v) { return std::stoull(v); };
    auto as_int = [](const std::string& v) { return std::stoi(v); };
    auto as_double = [](const std::string& v) { return std::stod(v); };
    auto as_bool = [](const std::string& v) {
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw Error("expected boolean, got '" + v + "'");
    };
    for (const auto& [key, value] : kv) {
        try {
            if (key == "workdir") cfg.workdir = value;
            else if (key == "corpus") cfg.corpus = value;
            else if (key == "graphlets") cfg.graphlets = value;
            else if (key == "kg") cfg.kg = value;
            else if (key == "triples") cfg.triples = value;
            else if (key == "claims") cfg.claims = value;
            else if (key == "verdicts") cfg.verdicts = value;
            else if (key == "seed") cfg.seed = as_u64(value);
            else if (key == "variant") cfg.variant = value;
            else if (key == "half_width") cfg.half_width = as_double(value);
            else if (key == "p") cfg.p = as_double(value);
            else if (key == "q") cfg.q = as_double(value);
            else if (key == "walks") cfg.walks = as_int(value);
            else if (key == "walk_length") cfg.walk_length = as_int(value);
            else if (key == "dim") cfg.dim = as_int(value);
            else if (key == "window") cfg.window = as_int(value);
            else if (key == "negatives") cfg.negatives = as_int(value);
            else if (key == "embed_epochs") cfg.embed_epochs = as_int(value);
            else if (key == "alias_budget_mb") cfg.alias_budget_mb = as_int(value);
            else if (key == "classifier") cfg.classifier = value;
            else if (key == "clf_lr") cfg.clf_lr = as_double(value);
            else if (key == "clf_epochs") cfg.clf_epochs = as_int(value);
            else if (key == "clf_batch") cfg.clf_batch = as_int(value);
            else if (key == "clf_hidden") cfg.clf_hidden = as_int(value);
            else if (key == "k") cfg.k = as_int(value);
            else if (key == "match_filter") cfg.match_filter = value;
            else if (key == "drop_misclassified") cfg.drop_misclassified = as_bool(value);
            else if (key == "threads") cfg.threads = static_cast<unsigned>(as_int(value));
            else if (key == "synth_classes") cfg.synth_classes = as_int(value);
            else if (key == "synth_per_class") cfg.synth_per_class = as_int(value);
            else throw ValidationError("unknown config key '" + key + "'");
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception& e) {
            throw ValidationError("bad value for config key '" + key + "': " + e.what());
        }
    }
}

namespace detail {

inline void require_artifact(const fs::path& path, const char* producer_stage) {
    if (!fs::exists(path))
        throw ValidationError("missing artifact '" + path.string() + "'; run the '" +
                              producer_stage + "' stage first");
}

inline std::string hash_directory(const fs::path& dir) {
    std::vector<std::string> entries;
    for (const auto& item : fs::recursive_directory_iterator(dir)) {
        if (!item.is_regular_file()) continue;
        fs::path rel = fs::relative(item.path(), dir);
        entries.push_back(rel.generic_string() + ":" + hash_file_hex(item.path()));
    }
    std::sort(entries.begin(), entries.end());
    std::string combined;
    for (const std::string& e : entries) combined += e + "\n";
    return fnv1a64_hex(combined);
}

inline std::string hash_artifact(const fs::path& path) {
    return fs::is_directory(path) ? hash_directory(path) : hash_file_hex(path);
}

// Manifest records labeled input/output hashes plus the config slice
// that shaped the stage. No timestamps: reruns are byte-identical.
inline void write_manifest(const PipelineConfig& cfg, const std::string& stage,
                           json config_echo,
                           const std::vector<std::pair<std::string, fs::path>>& inputs,
                           const std::vector<std::pair<std::string, fs::path>>& outputs,
                           json extra = json::object()) {
    json m;
    m["format_version"] = 1;
    m["tool"] = "remod";
    m["stage"] = stage;
    m["config"] = std::move(config_echo);
    json in = json::object();
    for (const auto& [label, path] : inputs) in[label] = hash_artifact(path);
    json out = json::object();
    for (const auto& [label, path] : outputs) out[label] = hash_artifact(path);
    m["inputs"] = in;
    m["outputs"] = out;
    if (!extra.empty()) m["extra"] = extra;
    write_file_atomic(cfg.manifest_dir() / (stage + ".json"), m.dump(2) + "\n");
}

inline fs::path graphlet_file(const fs::path& dir, const SnippetRecord& rec) {
    return dir / to_string(rec.relation) / (rec.id + ".nt");
}

} // namespace detail

inline void run_synth(const PipelineConfig& cfg) {
    synth::SynthConfig sc;
    sc.num_classes = cfg.synth_classes;
    sc.per_class = cfg.synth_per_class;
    sc.seed = cfg.seed;
    synth::SynthOutput out = synth::generate_synthetic_corpus(sc);

    write_file_atomic(cfg.corpus_path(), ingest::serialize_snippet_corpus(out.records));
    fs::path gdir = cfg.graphlets_dir();
    for (const auto& [relation, files] : out.graphlets)
        for (const auto& [id, text] : files)
            write_file_atomic(gdir / relation / (id + ".nt"), text);
    write_file_atomic(cfg.kg_path(), out.kg_tsv);
    write_file_atomic(cfg.triples_path(), out.triples_tsv);
    write_file_atomic(cfg.claims_path(), ingest::serialize_claim_corpus(out.claims));
    write_file_atomic(cfg.verdicts_path(), out.verdicts_json);

    detail::write_manifest(cfg, "synth",
                           {{"seed", cfg.seed},
                            {"synth_classes", cfg.synth_classes},
                            {"synth_per_class", cfg.synth_per_class}},
                           {},
                           {{"corpus", cfg.corpus_path()},
                            {"graphlets", gdir},
                            {"kg", cfg.kg_path()},
                            {"triples", cfg.triples_path()},
                            {"claims", cfg.claims_path()},
                            {"verdicts", cfg.verdicts_path()}});
}

inline void run_ingest(const PipelineConfig& cfg) {
    detail::require_artifact(cfg.corpus_path(), "synth");
    std::vector<SnippetRecord> records = ingest::load_snippet_corpus(cfg.corpus_path());
    auto [retained, stats] = ingest::filter_by_length(records, cfg.half_width);
    write_file_atomic(cfg.filtered_path(), ingest::serialize_snippet_corpus(retained));
    write_file_atomic(cfg.stats_path(), ingest::stats_to_csv(stats));
    detail::write_manifest(cfg, "ingest", {{"half_width", cfg.half_width}},
                           {{"corpus", cfg.corpus_path()}},
                           {{"filtered", cfg.filtered_path()}, {"stats", cfg.stats_path()}},
                           {{"loaded", records.size()}, {"retained", retained.size()}});
}

inline void run_parse(const PipelineConfig& cfg) {
    detail::require_artifact(cfg.filtered_path(), "ingest");
    detail::require_artifact(cfg.graphlets_dir(), "synth");
    std::vector<SnippetRecord> records = ingest::load_snippet_corpus(cfg.filtered_path());

    std::vector<std::optional<std::string>> contracted(records.size());
    std::vector<std::optional<json>> skipped(records.size());
    parallel_for(records.size(), cfg.threads, [&](std::size_t i) {
        fs::path file = detail::graphlet_file(cfg.graphlets_dir(), records[i]);
        if (!fs::exists(file)) {
            skipped[i] = json{{"id", records[i].id}, {"reason", "graphlet_missing"}};
            return;
        }
        try {
            rdf::RdfGraphlet g = rdf::parse_graphlet(read_text_file(file), records[i].id);
            contracted[i] = rdf::serialize_graphlet(rdf::contract_equivalents(g));
        } catch (const ParseError& e) {
            skipped[i] = json{{"id", records[i].id}, {"reason", "parse_error"},
                              {"detail", e.what()}};
        }
    });

    json skip_list = json::array();
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (contracted[i])
            write_file_atomic(detail::graphlet_file(cfg.contracted_dir(), records[i]),
                              *contracted[i]);
        if (skipped[i]) skip_list.push_back(*skipped[i]);
    }
    write_file_atomic(cfg.parse_skipped_path(), skip_list.dump(2) + "\n");
    detail::write_manifest(cfg, "parse", json::object(),
                           {{"filtered", cfg.filtered_path()},
                            {"graphlets", cfg.graphlets_dir()}},
                           {{"contracted", cfg.contracted_dir()},
                            {"parse_skipped", cfg.parse_skipped_path()}},
                           {{"skipped", skip_list.size()}});
}

inline void run_stitch(const PipelineConfig& cfg) {
    detail::require_artifact(cfg.filtered_path(), "ingest");
    detail::require_artifact(cfg.contracted_dir(), "parse");
    std::vector<SnippetRecord> records = ingest::load_snippet_corpus(cfg.filtered_path());
    std::vector<rdf::RdfGraphlet> graphlets;
    for (const SnippetRecord& rec : records) {
        fs::path file = detail::graphlet_file(cfg.contracted_dir(), rec);
        if (!fs::exists(file)) continue; // recorded by the parse stage
        graphlets.push_back(rdf::parse_graphlet(read_text_file(file), rec.id));
    }
    graph::CorpusGraph g = graph::stitch(graphlets);
    write_file_atomic(cfg.nodes_path(), graph::nodes_to_tsv(g));
    write_file_atomic(cfg.edges_path(), graph::edges_to_tsv(g));
    detail::write_manifest(cfg, "stitch", json::object(),
                           {{"filtered", cfg.filtered_path()},
                            {"contracted", cfg.contracted_dir()}},
                           {{"nodes", cfg.nodes_path()}, {"edges", cfg.edges_path()}},
                           {{"nodes", g.node_count()}, {"edges", g.edge_count()}});
}

inline void run_embed(const PipelineConfig& cfg) {
    detail::require_artifact(cfg.edges_path(), "stitch");
    detail::require_artifact(cfg.nodes_path(), "stitch");
    graph::CorpusGraph g = graph::graph_from_tsv(read_text_file(cfg.edges_path()),
                                                 read_text_file(cfg.nodes_path()));

    embed::WalkConfig wc;
    wc.p = cfg.p;
    wc.q = cfg.q;
    wc.num_walks_per_node = cfg.walks;
    wc.walk_length = cfg.walk_length;
    wc.seed = derive_seed(cfg.seed, 0x77616c6bull); // walk stream
    wc.alias_budget_bytes = static_cast<std::size_t>(cfg.alias_budget_mb) << 20;
    std::vector<std::vector<graph::NodeId>> walks = embed::generate_walks(g, wc, cfg.threads);

    embed::TrainConfig tc;
    tc.dim = cfg.dim;
    tc.window = cfg.window;
    tc.negatives_per_positive = cfg.negatives;
    tc.epochs = cfg.embed_epochs;
    tc.seed = derive_seed(cfg.seed, 0x747261696eull); // train stream
    embed::TrainReport report;
    embed::EmbeddingMatrix emb = embed::train_embeddings(walks, g.node_uris, tc, &report);

    write_file_atomic(cfg.embeddings_path(), embed::embeddings_to_tsv(emb));
    json rj;
    rj["untrained_nodes"] = report.untrained_uris;
    rj["pairs_processed"] = report.pairs_processed;
    rj["final_learning_rate"] = report.final_learning_rate;
    write_file_atomic(cfg.embed_report_path(), rj.dump(2) + "\n");
    detail::write_manifest(cfg, "embed",
                           {{"p", cfg.p},
                            {"q", cfg.q},
                            {"walks", cfg.walks},
                            {"walk_length", cfg.walk_length},
                            {"dim", cfg.dim},
                            {"window", cfg.window},
                            {"negatives", cfg.negatives},
                            {"embed_epochs", cfg.embed_epochs},
                            {"seed", cfg.seed}},
                           {{"edges", cfg.edges_path()}, {"nodes", cfg.nodes_path()}},
                           {{"embeddings", cfg.embeddings_path()},
                            {"embed_report", cfg.embed_report_path()}});
}

inline void run_weight(const PipelineConfig& cfg) {
    detail::require_artifact(cfg.edges_path(), "stitch");
    detail::require_artifact(cfg.nodes_path(), "stitch");
    detail::require_artifact(cfg.embeddings_path(), "embed");
    graph::CorpusGraph g = graph::graph_from_tsv(read_text_file(cfg.edges_path()),
                                                 read_text_file(cfg.nodes_path()));
    embed::EmbeddingMatrix emb = embed::embeddings_from_tsv(read_text_file(cfg.embeddings_path()));
    graph::weight_edges(g, [&](const std::string& uri) { return emb.vector_for(uri); });
    write_file_atomic(cfg.weighted_path(), graph::edges_to_tsv(g));
    detail::write_manifest(cfg, "weight", json::object(),
                           {{"edges", cfg.edges_path()},
                            {"nodes", cfg.nodes_path()},
                            {"embeddings", cfg.embeddings_path()}},
                           {{"weighted", cfg.weighted_path()}});
}

inline void run_features(const PipelineConfig& cfg) {
    detail::require_artifact(cfg.filtered_path(), "ingest");
    detail::require_artifact(cfg.contracted_dir(), "parse");
    detail::require_artifact(cfg.embeddings_path(), "embed");
    std::vector<SnippetRecord> records = ingest::load_snippet_corpus(cfg.filtered_path());
    embed::EmbeddingMatrix emb = embed::embeddings_from_tsv(read_text_file(cfg.embeddings_path()));
    graph::GraphVariant variant = cfg.graph_variant();

    std::vector<std::optional<paths::PathFeature>> feats(records.size());
    std::vector<std::optional<json>> skipped(records.size());
    parallel_for(records.size(), cfg.threads, [&](std::size_t i) {
        const SnippetRecord& rec = records[i];
        fs::path file = detail::graphlet_file(cfg.contracted_dir(), rec);
        if (!fs::exists(file)) {
            skipped[i] = json{{"id", rec.id}, {"reason", "graphlet_missing"}};
            return;
        }
        try {
            rdf::RdfGraphlet g = rdf::parse_graphlet(read_text_file(file), rec.id);
            feats[i] = paths::compute_path_feature(g, rec, emb, variant);
        } catch (const TerminalNotFound& e) {
            skipped[i] = json{{"id", rec.id}, {"reason", "terminal_not_found"},
                              {"detail", e.what()}};
        } catch (const NoPathError& e) {
            skipped[i] = json{{"id", rec.id}, {"reason", "no_path"}, {"detail", e.what()}};
        } catch (const Error& e) {
            skipped[i] = json{{"id", rec.id}, {"reason", "error"}, {"detail", e.what()}};
        }
    });

    paths::FeatureTable table;
    table.dim = emb.dim;
    std::vector<paths::PathFeature> audit;
    json skip_list = json::array();
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (feats[i]) {
            table.rows.push_back({records[i].id, records[i].effective_label(),
                                  feats[i]->vector});
            audit.push_back(std::move(*feats[i]));
        }
        if (skipped[i]) skip_list.push_back(*skipped[i]);
    }
    write_file_atomic(cfg.features_path(), paths::features_to_tsv(table));
    write_file_atomic(cfg.paths_audit_path(), paths::paths_to_tsv(audit));
    write_file_atomic(cfg.feature_skipped_path(), skip_list.dump(2) + "\n");
    detail::write_manifest(cfg, "features", {{"variant", cfg.variant}},
                           {{"filtered", cfg.filtered_path()},
                            {"contracted", cfg.contracted_dir()},
                            {"embeddings", cfg.embeddings_path()}},
                           {{"features", cfg.features_path()},
                            {"paths", cfg.paths_audit_path()},
                            {"feature_skipped", cfg.feature_skipped_path()}},
                           {{"rows", table.rows.size()}, {"skipped", skip_list.size()}});
}

inline void run_train(const PipelineConfig& cfg) {
    detail::require_artifact(cfg.features_path(), "features");
    paths::FeatureTable table = paths::features_from_tsv(read_text_file(cfg.features_path()));
    std::vector<classify::Sample> samples;
    for (const paths::FeatureRow& row : table.rows)
        if (row.label != RelationLabel::none)
            samples.push_back({row.snippet_id, row.vector, row.label});

    std::uint64_t split_seed = derive_seed(cfg.seed, 0x73706c69ull);
    classify::DatasetSplit split = classify::balance_and_split(samples, split_seed);
    classify::TrainHyperparams hp;
    hp.learning_rate = cfg.clf_lr;
    hp.epochs = cfg.clf_epochs;
    hp.batch_size = cfg.clf_batch;
    hp.hidden_width = cfg.clf_hidden;
    hp.seed = derive_seed(cfg.seed, 0x636c6673ull);
    classify::ClassifierKind kind = classify::classifier_kind_from_string(cfg.classifier);
    classify::ClassifierModel model = classify::train_classifier(split, kind, hp);

    write_file_atomic(cfg.model_path(), classify::model_to_json(model).dump(2) + "\n");
    json sj;
    sj["seed"] = split_seed;
    auto ids = [](const std::vector<classify::Sample>& part) {
        std::vector<std::string> out;
        for (const classify::Sample& s : part) out.push_back(s.snippet_id);
        return out;
    };
    sj["train"] = ids(split.train);
    sj["validation"] = ids(split.validation);
    sj["test"] = ids(split.test);
    write_file_atomic(cfg.split_path(), sj.dump(2) + "\n");
    json tr;
    tr["classifier"] = cfg.classifier;
    tr["train_size"] = split.train.size();
    tr["validation_size"] = split.validation.size();
    tr["test_size"] = split.test.size();
    tr["best_epoch"] = model.meta.best_epoch;
    tr["best_validation_loss"] = model.meta.best_validation_loss;
    tr["final_train_loss"] = model.meta.final_train_loss;
    write_file_atomic(cfg.train_report_path(), tr.dump(2) + "\n");
    detail::write_manifest(cfg, "train",
                           {{"classifier", cfg.classifier},
                            {"clf_lr", cfg.clf_lr},
                            {"clf_epochs", cfg.clf_epochs},
                            {"clf_batch", cfg.clf_batch},
                            {"clf_hidden", cfg.clf_hidden},
                            {"seed", cfg.seed}},
                           {{"features", cfg.features_path()}},
                           {{"model", cfg.model_path()},
                            {"split", cfg.split_path()},
                            {"train_report", cfg.train_report_path()}});
}

inline void run_eval(const PipelineConfig& cfg) {
    detail::require_artifact(cfg.model_path(), "train");
    detail::require_artifact(cfg.split_path(), "train");
    detail::require_artifact(cfg.features_path(), "features");
    classify::ClassifierModel model =
        classify::model_from_json(json::parse(read_text_file(cfg.model_path())));
    json sj = json::parse(read_text_file(cfg.split_path()));
    paths::FeatureTable table = paths::features_from_tsv(read_text_file(cfg.features_path()));
    std::map<std::string, const paths::FeatureRow*> by_id;
    for (const paths::FeatureRow& row : table.rows) by_id[row.snippet_id] = &row;

    std::vector<classify::Sample> test;
    for (const auto& id : sj.at("test")) {
        auto it = by_id.find(id.get<std::string>());
        if (it == by_id.end())
            throw ValidationError("split references unknown snippet '" +
                                  id.get<std::string>() + "'; re-run the 'features' stage");
        test.push_back({it->second->snippet_id, it->second->vector, it->second->label});
    }
    classify::Metrics metrics = classify::evaluate(model, test);
    for (const std::string& name : metrics.auc_skipped_classes)
        std::fprintf(stderr, "warning: class '%s' absent from the test set; "
                             "its OvR AUC is excluded from the macro average\n",
                     name.c_str());
    write_file_atomic(cfg.metrics_path(), classify::metrics_to_json(metrics).dump(2) + "\n");

    std::string pred = "#id\ttrue\tpredicted";
    for (const std::string& c : model.classes) pred += "\tp(" + c + ")";
    pred += "\n";
    for (const classify::Sample& s : test) {
        std::vector<double> probs = model.probabilities(s.vector);
        int arg = static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
        pred += s.snippet_id;
        pred += '\t';
        pred += to_string(s.label);
        pred += '\t';
        pred += model.classes[static_cast<std::size_t>(arg)];
        for (double v : probs) {
            pred += '\t';
            pred += format_double(v);
        }
        pred += '\n';
    }
    write_file_atomic(cfg.predictions_path(), pred);
    detail::write_manifest(cfg, "eval", json::object(),
                           {{"model", cfg.model_path()},
                            {"split", cfg.split_path()},
                            {"features", cfg.features_path()}},
                           {{"metrics", cfg.metrics_path()},
                            {"predictions", cfg.predictions_path()}},
                           {{"macro_auc", metrics.macro_auc}});
}

inline void run_project(const PipelineConfig& cfg) {
    detail::require_artifact(cfg.features_path(), "features");
    paths::FeatureTable table = paths::features_from_tsv(read_text_file(cfg.features_path()));
    if (table.rows.size() < 2)
        throw ValidationError("projection requires at least 2 feature rows");
    std::vector<std::vector<double>> vectors;
    for (const paths::FeatureRow& row : table.rows) vectors.push_back(row.vector);
    std::vector<std::pair<double, double>> coords = classify::project_2d(vectors);

    std::string csv = "# method=pca components=2\nsnippet_id,label,x,y\n";
    char buf[96];
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        std::snprintf(buf, sizeof(buf), ",%.9g,%.9g\n", coords[i].first, coords[i].second);
        csv += table.rows[i].snippet_id;
        csv += ',';
        csv += to_string(table.rows[i].label);
        csv += buf;
    }
    write_file_atomic(cfg.projection_path(), csv);
    detail::write_manifest(cfg, "project", {{"method", "pca"}},
                           {{"features", cfg.features_path()}},
                           {{"projection", cfg.projection_path()}});
}

inline void run_factcheck(const PipelineConfig& cfg) {
    detail::require_artifact(cfg.kg_path(), "synth");
    detail::require_artifact(cfg.triples_path(), "synth");
    factcheck::KnowledgeGraph kg = factcheck::load_kg(read_text_file(cfg.kg_path()));

    struct TripleRow {
        std::string id, subject, object;
        std::optional<bool> label;
    };
    std::vector<TripleRow> rows;
    {
        std::istringstream in(read_text_file(cfg.triples_path()));
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            std::vector<std::string> cols = split(line, '\t');
            if (cols.size() != 3 && cols.size() != 4)
                throw ParseError(line_no, "expected 'id<TAB>subject<TAB>object[<TAB>label]'");
            TripleRow row{cols[0], cols[1], cols[2], std::nullopt};
            if (cols.size() == 4) row.label = cols[3] == "1";
            rows.push_back(std::move(row));
        }
    }

    std::size_t dropped_misclassified = 0;
    if (cfg.drop_misclassified && fs::exists(cfg.predictions_path())) {
        std::set<std::string> correct;
        std::istringstream in(read_text_file(cfg.predictions_path()));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::vector<std::string> cols = split(line, '\t');
            if (cols.size() >= 3 && cols[1] == cols[2]) correct.insert(cols[0]);
        }
        std::vector<TripleRow> kept;
        for (TripleRow& row : rows) {
            if (correct.count(row.id))
                kept.push_back(std::move(row));
            else
                ++dropped_misclassified;
        }
        rows = std::move(kept);
    }

    json per_claim = json::array();
    json skipped = json::array();
    std::vector<double> scores;
    std::vector<bool> labels;
    for (const TripleRow& row : rows) {
        if (!kg.has(row.subject) || !kg.has(row.object)) {
            skipped.push_back({{"id", row.id}, {"reason", "entity_not_in_kg"}});
            continue;
        }
        double score = factcheck::kl_truth_score(kg, row.subject, row.object);
        json entry = {{"id", row.id},
                      {"subject", row.subject},
                      {"object", row.object},
                      {"score", score}};
        if (row.label) {
            entry["label"] = *row.label;
            scores.push_back(score);
            labels.push_back(*row.label);
        }
        per_claim.push_back(std::move(entry));
    }

    json report;
    report["algorithm"] = "knowledge_linker";
    report["drop_misclassified"] = cfg.drop_misclassified;
    report["dropped_misclassified"] = dropped_misclassified;
    report["per_claim"] = per_claim;
    report["skipped"] = skipped;
    bool have_both = std::count(labels.begin(), labels.end(), true) > 0 &&
                     std::count(labels.begin(), labels.end(), false) > 0;
    report["auc"] = have_both ? json(factcheck::verification_auc(scores, labels)) : json(nullptr);
    write_file_atomic(cfg.verification_path(), report.dump(2) + "\n");
    detail::write_manifest(cfg, "factcheck",
                           {{"drop_misclassified", cfg.drop_misclassified}},
                           {{"kg", cfg.kg_path()}, {"triples", cfg.triples_path()}},
                           {{"verification", cfg.verification_path()}});
}

inline void run_match(const PipelineConfig& cfg) {
    detail::require_artifact(cfg.claims_path(), "synth");
    std::vector<ClaimRecord> claims = ingest::load_claim_corpus(cfg.claims_path());
    factcheck::VerdictMapping mapping;
    if (fs::exists(cfg.verdicts_path()))
        mapping = factcheck::verdict_mapping_from_json(
            json::parse(read_text_file(cfg.verdicts_path())));

    std::vector<ClaimRecord> mappable;
    json excluded = json::array();
    for (const ClaimRecord& claim : claims) {
        try {
            (void)factcheck::map_verdict(claim.rating_text, claim.publisher, mapping);
            mappable.push_back(claim);
        } catch (const Error& e) {
            excluded.push_back({{"id", claim.id}, {"reason", "unmapped_rating"},
                                {"detail", e.what()}});
        }
    }
    factcheck::ClaimCorpusIndex index = factcheck::ClaimCorpusIndex::build(mappable, mapping);

    factcheck::CorpusFilter filter = factcheck::CorpusFilter::all;
    std::string publisher_filter;
    if (cfg.match_filter == "same") {
        filter = factcheck::CorpusFilter::same_publisher_before_date;
    } else if (cfg.match_filter.rfind("publisher:", 0) == 0) {
        filter = factcheck::CorpusFilter::single_publisher;
        publisher_filter = cfg.match_filter.substr(10);
    } else if (cfg.match_filter != "all") {
        throw ValidationError("unknown match_filter '" + cfg.match_filter +
                              "' (expected all | same | publisher:<name>)");
    }

    json per_claim = json::array();
    std::vector<double> scores;
    std::vector<bool> labels;
    for (std::size_t i = 0; i < mappable.size(); ++i) {
        double truth = index.entries[i].truth_score;
        json entry = {{"id", mappable[i].id}, {"truth_score", truth}};
        try {
            factcheck::ClaimMatchResult r = factcheck::claim_match_score(
                mappable[i], index, static_cast<std::size_t>(cfg.k), filter, publisher_filter);
            entry["score"] = r.score;
            entry["matched"] = r.matched;
            if (r.truncated) entry["note"] = "fewer than k candidates";
            scores.push_back(r.score);
            labels.push_back(truth >= 0.5);
        } catch (const Error& e) {
            entry["error"] = e.what();
        }
        per_claim.push_back(std::move(entry));
    }

    json report;
    report["baseline"] = "log_tf_cosine_claim_matching";
    report["k"] = cfg.k;
    report["filter"] = cfg.match_filter;
    report["per_claim"] = per_claim;
    report["excluded"] = excluded;
    bool have_both = std::count(labels.begin(), labels.end(), true) > 0 &&
                     std::count(labels.begin(), labels.end(), false) > 0;
    report["auc"] = have_both ? json(factcheck::verification_auc(scores, labels)) : json(nullptr);
    write_file_atomic(cfg.match_report_path(), report.dump(2) + "\n");
    detail::write_manifest(cfg, "match",
                           {{"k", cfg.k}, {"match_filter", cfg.match_filter}},
                           {{"claims", cfg.claims_path()}},
                           {{"match_report", cfg.match_report_path()}});
}

// The stage order mirrors the extraction-then-verification pipeline;
// fact-checking stages run when their inputs are present.
inline void run_all(const PipelineConfig& cfg) {
    run_ingest(cfg);
    run_parse(cfg);
    run_stitch(cfg);
    run_embed(cfg);
    run_weight(cfg);
    run_features(cfg);
    run_train(cfg);
    run_eval(cfg);
    run_project(cfg);
    if (fs::exists(cfg.kg_path()) && fs::exists(cfg.triples_path())) run_factcheck(cfg);
    if (fs::exists(cfg.claims_path())) run_match(cfg);
}

inline void run_stage(const std::string& stage, const PipelineConfig& cfg) {
    if (stage == "synth") return run_synth(cfg);
    if (stage == "ingest") return run_ingest(cfg);
    if (stage == "parse") return run_parse(cfg);
    if (stage == "stitch") return run_stitch(cfg);
    if (stage == "embed") return run_embed(cfg);
    if (stage == "weight") return run_weight(cfg);
    if (stage == "features") return run_features(cfg);
    if (stage == "train") return run_train(cfg);
    if (stage == "eval") return run_eval(cfg);
    if (stage == "project") return run_project(cfg);
    if (stage == "factcheck") return run_factcheck(cfg);
    if (stage == "match") return run_match(cfg);
    if (stage == "all") return run_all(cfg);
    throw ValidationError("unknown stage '" + stage + "'");
}

} // namespace remod::pipeline
