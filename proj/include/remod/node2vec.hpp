#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "remod/corpus_graph.hpp"
#include "remod/rng.hpp"
#include "remod/util.hpp"

namespace remod::embed {

using graph::CorpusGraph;
using graph::NodeId;

struct WalkConfig {
    double p = 2.0;             // return parameter
    double q = 3.0;             // in-out parameter
    int num_walks_per_node = 200;
    int walk_length = 200;      // node count including the start
    std::uint64_t seed = 42;
    std::size_t alias_budget_bytes = 256ull << 20;

    void validate() const {
        if (p <= 0 || q <= 0) throw Error("walk parameters p and q must be > 0");
        if (num_walks_per_node <= 0) throw Error("num_walks_per_node must be positive");
        if (walk_length <= 0) throw Error("walk_length must be positive");
    }
};

struct TrainConfig {
    int dim = 256;
    int window = 50;
    int negatives_per_positive = 5;
    int epochs = 5;
    double learning_rate_initial = 0.025;
    double learning_rate_floor = 0.0001;
    std::uint64_t seed = 42;

    void validate() const {
        if (dim <= 0 || window <= 0 || negatives_per_positive <= 0 || epochs <= 0)
            throw Error("dim, window, negatives_per_positive, epochs must be positive");
        if (!(learning_rate_initial > learning_rate_floor) || learning_rate_floor < 0)
            throw Error("learning rate schedule requires initial > floor >= 0");
    }
};

struct EmbeddingMatrix {
    int dim = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> uris;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<double> values; // row-major |uris| x dim

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * static_cast<std::size_t>(dim),
                static_cast<std::size_t>(dim)};
    }

    bool contains(const std::string& uri) const { return index.count(uri) != 0; }

    std::span<const double> vector_for(const std::string& uri) const {
        auto it = index.find(uri);
        if (it == index.end()) throw Error("no embedding for node '" + uri + "'");
        return row(it->second);
    }
};

// Walker's alias method (Vose). Sampling always draws one index and one
// coin, so walk reproduction is independent of table caching.
struct AliasTable {
    std::vector<double> accept;
    std::vector<std::uint32_t> alias;

    explicit AliasTable(std::span<const double> weights) {
        std::size_t n = weights.size();
        accept.assign(n, 0.0);
        alias.assign(n, 0);
        double total = 0.0;
        for (double w : weights) total += w;
        std::vector<double> scaled(n);
        std::vector<std::uint32_t> small, large;
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = weights[i] * static_cast<double>(n) / total;
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
        }
        while (!small.empty() && !large.empty()) {
            std::uint32_t s = small.back();
            small.pop_back();
            std::uint32_t l = large.back();
            large.pop_back();
            accept[s] = scaled[s];
            alias[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        for (std::uint32_t i : large) accept[i] = 1.0;
        for (std::uint32_t i : small) accept[i] = 1.0;
    }

    std::size_t sample(Rng& rng) const {
        std::size_t i = rng.uniform_index(accept.size());
        double coin = rng.next_double();
        return coin < accept[i] ? i : alias[i];
    }

    std::size_t bytes() const {
        return accept.size() * (sizeof(double) + sizeof(std::uint32_t)) + 64;
    }
};

// Second-order bias over the current node's neighbors: alpha = 1/p for
// stepping back to prev, 1 for neighbors of prev, 1/q otherwise. The
// first step (prev < 0) is uniform. Output is normalized to sum 1.
inline std::vector<double> transition_weights(const CorpusGraph& g, NodeId prev, NodeId cur,
                                              std::span<const NodeId> candidates, double p,
                                              double q) {
    if (candidates.empty())
        throw Error("no transition candidates at node '" + g.node_uris[cur] + "'");
    std::vector<double> probs(candidates.size());
    if (prev < 0) {
        double u = 1.0 / static_cast<double>(candidates.size());
        std::fill(probs.begin(), probs.end(), u);
        return probs;
    }
    const std::vector<NodeId>& prev_nbrs = g.und_neighbors[prev];
    double total = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        NodeId x = candidates[i];
        double alpha;
        if (x == prev)
            alpha = 1.0 / p;
        else if (std::binary_search(prev_nbrs.begin(), prev_nbrs.end(), x))
            alpha = 1.0;
        else
            alpha = 1.0 / q;
        probs[i] = alpha;
        total += alpha;
    }
    for (double& v : probs) v /= total;
    return probs;
}

namespace detail {

// Lazily memoized per-(prev, cur) alias tables, capped by a byte budget.
// Over budget, tables are built, used, and discarded; the sampled draws
// are identical either way.
class TransitionSampler {
public:
    TransitionSampler(const CorpusGraph& g, const WalkConfig& cfg) : g_(g), cfg_(cfg) {}

    NodeId step(NodeId prev, NodeId cur, Rng& rng) {
        const std::vector<NodeId>& cands = g_.und_neighbors[cur];
        std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(prev)) << 32) |
                            static_cast<std::uint32_t>(cur);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return cands[it->second.sample(rng)];
        }
        AliasTable table(transition_weights(g_, prev, cur, cands, cfg_.p, cfg_.q));
        std::size_t idx = table.sample(rng);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (!cache_.count(key) && used_bytes_ + table.bytes() <= cfg_.alias_budget_bytes) {
                used_bytes_ += table.bytes();
                cache_.emplace(key, std::move(table));
            }
        }
        return cands[idx];
    }

private:
    const CorpusGraph& g_;
    const WalkConfig& cfg_;
    std::mutex mutex_;
    std::unordered_map<std::uint64_t, AliasTable> cache_;
    std::size_t used_bytes_ = 0;
};

} // namespace detail

// Exactly num_walks_per_node walks per node on the undirected view, each
// starting at that node. Walks are shorter than walk_length only when an
// isolated node is the start. Each walk owns an RNG derived from
// (seed, node, walk_index), so parallel and serial schedules produce
// identical output.
inline std::vector<std::vector<NodeId>> generate_walks(const CorpusGraph& g,
                                                       const WalkConfig& cfg,
                                                       unsigned threads = 1) {
    cfg.validate();
    if (g.node_count() == 0) throw Error("cannot walk an empty graph");
    std::size_t n = g.node_count();
    std::size_t per_node = static_cast<std::size_t>(cfg.num_walks_per_node);
    std::vector<std::vector<NodeId>> walks(n * per_node);
    detail::TransitionSampler sampler(g, cfg);

    parallel_for(n, threads, [&](std::size_t node) {
        for (std::size_t w = 0; w < per_node; ++w) {
            Rng rng(derive_seed(cfg.seed, node, w));
            std::vector<NodeId>& walk = walks[node * per_node + w];
            walk.reserve(cfg.walk_length);
            NodeId cur = static_cast<NodeId>(node);
            walk.push_back(cur);
            const std::vector<NodeId>& first = g.und_neighbors[cur];
            if (first.empty()) continue;
            NodeId prev = cur;
            cur = first[rng.uniform_index(first.size())];
            walk.push_back(cur);
            while (walk.size() < static_cast<std::size_t>(cfg.walk_length)) {
                NodeId next = sampler.step(prev, cur, rng);
                prev = cur;
                cur = next;
                walk.push_back(cur);
            }
        }
    });
    return walks;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// One skip-gram observation: center, its positive context, and the
// sampled negatives.
struct SgnsSample {
    NodeId center = 0;
    NodeId context = 0;
    std::vector<NodeId> negatives;
};

// -log sigma(u_o . v_c) - sum_n log sigma(-u_n . v_c) over the batch.
// U holds input (center) vectors, W output (context) vectors.
inline double sgns_loss(std::span<const double> U, std::span<const double> W, int dim,
                        std::span<const SgnsSample> batch) {
    auto row = [&](std::span<const double> m, NodeId i) {
        return m.subspan(static_cast<std::size_t>(i) * dim, dim);
    };
    auto dot = [&](std::span<const double> a, std::span<const double> b) {
        double s = 0.0;
        for (int d = 0; d < dim; ++d) s += a[d] * b[d];
        return s;
    };
    double loss = 0.0;
    for (const SgnsSample& s : batch) {
        loss -= std::log(sigmoid(dot(row(W, s.context), row(U, s.center))));
        for (NodeId n : s.negatives)
            loss -= std::log(sigmoid(-dot(row(W, n), row(U, s.center))));
    }
    return loss;
}

// Analytic batch gradient of sgns_loss with respect to U and W.
inline void sgns_gradient(std::span<const double> U, std::span<const double> W, int dim,
                          std::span<const SgnsSample> batch, std::span<double> dU,
                          std::span<double> dW) {
    std::fill(dU.begin(), dU.end(), 0.0);
    std::fill(dW.begin(), dW.end(), 0.0);
    auto row = [&](std::span<const double> m, NodeId i) {
        return m.subspan(static_cast<std::size_t>(i) * dim, dim);
    };
    for (const SgnsSample& s : batch) {
        std::span<const double> vc = row(U, s.center);
        double* du_c = dU.data() + static_cast<std::size_t>(s.center) * dim;
        {
            std::span<const double> uo = row(W, s.context);
            double g = sigmoid(std::inner_product(uo.begin(), uo.end(), vc.begin(), 0.0)) - 1.0;
            double* dw_o = dW.data() + static_cast<std::size_t>(s.context) * dim;
            for (int d = 0; d < dim; ++d) {
                dw_o[d] += g * vc[d];
                du_c[d] += g * uo[d];
            }
        }
        for (NodeId n : s.negatives) {
            std::span<const double> un = row(W, n);
            double g = sigmoid(std::inner_product(un.begin(), un.end(), vc.begin(), 0.0));
            double* dw_n = dW.data() + static_cast<std::size_t>(n) * dim;
            for (int d = 0; d < dim; ++d) {
                dw_n[d] += g * vc[d];
                du_c[d] += g * un[d];
            }
        }
    }
}

struct TrainReport {
    std::vector<std::string> untrained_uris; // kept their initialization vectors
    std::size_t pairs_processed = 0;
    double final_learning_rate = 0.0;
    // SGNS objective on a fixed probe batch (same pairs and negatives)
    // before and after training.
    std::size_t probe_pairs = 0;
    double probe_initial_loss = 0.0;
    double probe_final_loss = 0.0;
};

// Skip-gram with negative sampling over the walk corpus by sequential
// SGD; negatives come from the unigram^{3/4} distribution of walk
// tokens. Returns the input vectors. Deterministic for a fixed seed.
inline EmbeddingMatrix train_embeddings(const std::vector<std::vector<NodeId>>& walks,
                                        const std::vector<std::string>& node_uris,
                                        const TrainConfig& cfg, TrainReport* report = nullptr) {
    cfg.validate();
    if (walks.empty()) throw Error("cannot train embeddings from an empty walk set");
    std::size_t n = node_uris.size();
    std::size_t dim = static_cast<std::size_t>(cfg.dim);

    std::vector<std::uint64_t> counts(n, 0);
    std::size_t total_tokens_per_epoch = 0;
    for (const auto& walk : walks) {
        total_tokens_per_epoch += walk.size();
        for (NodeId v : walk) counts[static_cast<std::size_t>(v)] += 1;
    }

    EmbeddingMatrix emb;
    emb.dim = cfg.dim;
    emb.seed = cfg.seed;
    emb.uris = node_uris;
    for (std::size_t i = 0; i < n; ++i) emb.index.emplace(node_uris[i], i);
    emb.values.resize(n * dim);
    Rng init_rng(derive_seed(cfg.seed, 0x696e6974ull));
    for (double& v : emb.values) v = (init_rng.next_double() - 0.5) / static_cast<double>(dim);
    std::vector<double> out_vecs(n * dim, 0.0);

    // Negative-sampling table over nodes that actually appear in walks.
    std::vector<NodeId> neg_nodes;
    std::vector<double> neg_weights;
    for (std::size_t i = 0; i < n; ++i) {
        if (counts[i] > 0) {
            neg_nodes.push_back(static_cast<NodeId>(i));
            neg_weights.push_back(std::pow(static_cast<double>(counts[i]), 0.75));
        }
    }
    if (neg_nodes.empty()) throw Error("walks contain no tokens");
    AliasTable neg_table(neg_weights);
    Rng train_rng(derive_seed(cfg.seed, 0x6e656773ull));

    // Fixed probe batch for before/after loss bookkeeping.
    std::vector<SgnsSample> probe;
    {
        Rng probe_rng(derive_seed(cfg.seed, 0x70726f62ull));
        for (const auto& walk : walks) {
            if (probe.size() >= 2000) break;
            std::ptrdiff_t len = static_cast<std::ptrdiff_t>(walk.size());
            for (std::ptrdiff_t i = 0; i < len && probe.size() < 2000; ++i) {
                std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - cfg.window);
                std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len - 1, i + cfg.window);
                for (std::ptrdiff_t j = lo; j <= hi && probe.size() < 2000; ++j) {
                    if (j == i) continue;
                    SgnsSample s;
                    s.center = walk[static_cast<std::size_t>(i)];
                    s.context = walk[static_cast<std::size_t>(j)];
                    for (int k = 0; k < cfg.negatives_per_positive; ++k)
                        s.negatives.push_back(neg_nodes[neg_table.sample(probe_rng)]);
                    probe.push_back(std::move(s));
                }
            }
        }
    }
    double probe_initial =
        probe.empty() ? 0.0 : sgns_loss(emb.values, out_vecs, cfg.dim, probe);

    double total_tokens =
        static_cast<double>(total_tokens_per_epoch) * static_cast<double>(cfg.epochs);
    std::size_t processed = 0;
    std::size_t pairs = 0;
    double lr = cfg.learning_rate_initial;
    std::vector<double> acc(dim);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (const auto& walk : walks) {
            std::ptrdiff_t len = static_cast<std::ptrdiff_t>(walk.size());
            for (std::ptrdiff_t i = 0; i < len; ++i) {
                lr = std::max(cfg.learning_rate_floor,
                              cfg.learning_rate_initial *
                                  (1.0 - static_cast<double>(processed) / total_tokens));
                NodeId center = walk[static_cast<std::size_t>(i)];
                double* v_c = emb.values.data() + static_cast<std::size_t>(center) * dim;
                std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - cfg.window);
                std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len - 1, i + cfg.window);
                for (std::ptrdiff_t j = lo; j <= hi; ++j) {
                    if (j == i) continue;
                    NodeId context = walk[static_cast<std::size_t>(j)];
                    std::fill(acc.begin(), acc.end(), 0.0);
                    for (int k = 0; k <= cfg.negatives_per_positive; ++k) {
                        NodeId target;
                        double label;
                        if (k == 0) {
                            target = context;
                            label = 1.0;
                        } else {
                            target = neg_nodes[neg_table.sample(train_rng)];
                            label = 0.0;
                            if (target == context) continue;
                        }
                        double* w_t = out_vecs.data() + static_cast<std::size_t>(target) * dim;
                        double f = 0.0;
                        for (std::size_t d = 0; d < dim; ++d) f += w_t[d] * v_c[d];
                        double g = (label - sigmoid(f)) * lr;
                        for (std::size_t d = 0; d < dim; ++d) {
                            acc[d] += g * w_t[d];
                            w_t[d] += g * v_c[d];
                        }
                    }
                    for (std::size_t d = 0; d < dim; ++d) v_c[d] += acc[d];
                    ++pairs;
                }
                ++processed;
            }
        }
    }

    for (double v : emb.values)
        if (!std::isfinite(v)) throw Error("non-finite embedding value after training");

    if (report) {
        report->untrained_uris.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (counts[i] == 0) report->untrained_uris.push_back(node_uris[i]);
        report->pairs_processed = pairs;
        report->final_learning_rate = lr;
        report->probe_pairs = probe.size();
        report->probe_initial_loss = probe_initial;
        report->probe_final_loss =
            probe.empty() ? 0.0 : sgns_loss(emb.values, out_vecs, cfg.dim, probe);
    }
    return emb;
}

// TSV layout: `#dim=<d> seed=<s>` header, then `uri<TAB>f1<TAB>...<TAB>f_dim`.
inline std::string embeddings_to_tsv(const EmbeddingMatrix& emb) {
    std::string out = "#dim=" + std::to_string(emb.dim) + " seed=" + std::to_string(emb.seed) + "\n";
    for (std::size_t i = 0; i < emb.uris.size(); ++i) {
        out += emb.uris[i];
        std::span<const double> r = emb.row(i);
        for (double v : r) {
            out += '\t';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

inline EmbeddingMatrix embeddings_from_tsv(const std::string& text) {
    EmbeddingMatrix emb;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            int dim = 0;
            unsigned long long seed = 0;
            if (std::sscanf(line.c_str(), "#dim=%d seed=%llu", &dim, &seed) != 2)
                throw ParseError(line_no, "bad embedding header");
            emb.dim = dim;
            emb.seed = seed;
            continue;
        }
        std::vector<std::string> cols = split(line, '\t');
        if (emb.dim == 0) throw ParseError(line_no, "embedding header missing");
        if (cols.size() != static_cast<std::size_t>(emb.dim) + 1)
            throw ParseError(line_no, "expected " + std::to_string(emb.dim + 1) + " columns");
        emb.index.emplace(cols[0], emb.uris.size());
        emb.uris.push_back(cols[0]);
        for (int d = 0; d < emb.dim; ++d)
            emb.values.push_back(parse_double(cols[static_cast<std::size_t>(d) + 1], line_no));
    }
    if (emb.uris.empty()) throw Error("embedding file contains no vectors");
    return emb;
}

} // namespace remod::embed
