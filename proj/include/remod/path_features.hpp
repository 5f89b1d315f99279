#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "remod/corpus_graph.hpp"
#include "remod/graphlet.hpp"
#include "remod/node2vec.hpp"
#include "remod/records.hpp"

namespace remod::paths {

using graph::GraphVariant;

// Traversal view over a graphlet or the corpus graph. Node ids are
// assigned in lexicographic URI order so that id order doubles as the
// tie-breaking order.
struct PathGraph {
    std::vector<std::string> uris;
    std::unordered_map<std::string, int> index;
    std::vector<std::vector<int>> out;
    std::vector<std::vector<int>> in;
    std::vector<std::vector<int>> und;
    std::unordered_map<std::uint64_t, double> pair_weights;
    bool weighted = false;

    static std::uint64_t pair_key(int a, int b) {
        int lo = std::min(a, b), hi = std::max(a, b);
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(lo)) << 32) |
               static_cast<std::uint32_t>(hi);
    }

    double weight_of(int a, int b) const {
        auto it = pair_weights.find(pair_key(a, b));
        if (it == pair_weights.end())
            throw Error("edge weight missing for (" + uris[a] + ", " + uris[b] + ")");
        return it->second;
    }

    bool has(const std::string& uri) const { return index.count(uri) != 0; }

    int id_of(const std::string& uri) const {
        auto it = index.find(uri);
        if (it == index.end()) throw Error("node not in path graph: '" + uri + "'");
        return it->second;
    }

private:
    void assign_nodes(std::vector<std::string> names) {
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
        uris = std::move(names);
        for (std::size_t i = 0; i < uris.size(); ++i) index.emplace(uris[i], static_cast<int>(i));
        out.assign(uris.size(), {});
        in.assign(uris.size(), {});
        und.assign(uris.size(), {});
    }

    void add_edge(int s, int o) {
        out[s].push_back(o);
        in[o].push_back(s);
        und[s].push_back(o);
        und[o].push_back(s);
    }

    void finish() {
        auto dedupe = [](std::vector<int>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        for (std::size_t i = 0; i < uris.size(); ++i) {
            dedupe(out[i]);
            dedupe(in[i]);
            dedupe(und[i]);
        }
    }

public:
    static PathGraph from_graphlet(const rdf::RdfGraphlet& g) {
        PathGraph pg;
        pg.assign_nodes(g.nodes);
        for (const rdf::Triple& t : g.edges) pg.add_edge(pg.index.at(t.subject), pg.index.at(t.object));
        pg.finish();
        return pg;
    }

    static PathGraph from_corpus(const graph::CorpusGraph& g) {
        PathGraph pg;
        pg.assign_nodes(g.node_uris);
        for (const graph::CorpusEdge& e : g.edges)
            pg.add_edge(pg.index.at(g.node_uris[e.src]), pg.index.at(g.node_uris[e.dst]));
        pg.finish();
        if (g.weighted) {
            for (const graph::CorpusEdge& e : g.edges) {
                int a = pg.index.at(g.node_uris[e.src]);
                int b = pg.index.at(g.node_uris[e.dst]);
                pg.pair_weights.emplace(pair_key(a, b), g.weight_of(e.src, e.dst));
            }
            pg.weighted = true;
        }
        return pg;
    }

    // Angular-distance weights from the corpus-level embedding.
    void apply_weights(const embed::EmbeddingMatrix& emb) {
        pair_weights.clear();
        for (int u = 0; u < static_cast<int>(uris.size()); ++u) {
            for (int v : out[u]) {
                std::uint64_t key = pair_key(u, v);
                if (pair_weights.count(key)) continue;
                pair_weights.emplace(key, graph::angular_distance(emb.vector_for(uris[u]),
                                                                  emb.vector_for(uris[v]),
                                                                  uris[u], uris[v]));
            }
        }
        weighted = true;
    }

    // Explicit weights, keyed per undirected pair; used by tests.
    void set_weight(const std::string& a, const std::string& b, double w) {
        pair_weights[pair_key(id_of(a), id_of(b))] = w;
        weighted = true;
    }
};

namespace detail {

inline const std::vector<int>& backward_neighbors(const PathGraph& g, int u, bool directed) {
    return directed ? g.in[u] : g.und[u];
}

inline const std::vector<int>& forward_neighbors(const PathGraph& g, int u, bool directed) {
    return directed ? g.out[u] : g.und[u];
}

// Cost-to-target for every node: hop counts (BFS) or weighted distances
// (Dijkstra over nonnegative weights), searching the reversed view.
inline std::vector<double> cost_to_target(const PathGraph& g, int t, GraphVariant variant) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.uris.size(), kInf);
    dist[t] = 0.0;
    if (!variant.weighted) {
        std::queue<int> frontier;
        frontier.push(t);
        while (!frontier.empty()) {
            int u = frontier.front();
            frontier.pop();
            for (int v : backward_neighbors(g, u, variant.directed)) {
                if (dist[v] == kInf) {
                    dist[v] = dist[u] + 1.0;
                    frontier.push(v);
                }
            }
        }
        return dist;
    }
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, t);
    std::vector<char> done(g.uris.size(), 0);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (int v : backward_neighbors(g, u, variant.directed)) {
            double nd = dist[u] + g.weight_of(v, u);
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    return dist;
}

} // namespace detail

// Fewest-edge (unweighted) or minimal-weight-sum path from s to t.
// Among equal-cost paths, the lexicographically smallest URI sequence
// wins: a depth-first search over tight edges (those that keep the
// cost-to-target optimal), visiting neighbors in URI order, returns the
// first simple path it completes.
inline std::vector<std::string> shortest_path(const PathGraph& g, const std::string& s_uri,
                                              const std::string& t_uri, GraphVariant variant) {
    if (variant.weighted && !g.weighted)
        throw Error("weighted variant requested but the graph has no edge weights");
    int s = g.id_of(s_uri);
    int t = g.id_of(t_uri);
    if (s == t) return {g.uris[s]};

    std::vector<double> dist = detail::cost_to_target(g, t, variant);
    if (dist[s] == std::numeric_limits<double>::infinity())
        throw NoPathError("no path from '" + s_uri + "' to '" + t_uri + "' (" +
                          graph::variant_code(variant) + ")");

    auto edge_cost = [&](int u, int v) { return variant.weighted ? g.weight_of(u, v) : 1.0; };
    auto tight = [&](int u, int v) { return dist[u] == dist[v] + edge_cost(u, v); };

    struct Frame {
        int node;
        std::size_t next;
    };
    std::vector<char> on_path(g.uris.size(), 0);
    std::vector<Frame> stack{{s, 0}};
    std::vector<int> path{s};
    on_path[s] = 1;
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.node == t) break;
        const std::vector<int>& nbrs = detail::forward_neighbors(g, f.node, variant.directed);
        bool advanced = false;
        while (f.next < nbrs.size()) {
            int v = nbrs[f.next++];
            if (on_path[v] || !tight(f.node, v)) continue;
            stack.push_back({v, 0});
            path.push_back(v);
            on_path[v] = 1;
            advanced = true;
            break;
        }
        if (!advanced && stack.back().node != t) {
            on_path[stack.back().node] = 0;
            stack.pop_back();
            path.pop_back();
        }
    }
    if (path.empty() || path.back() != t)
        throw NoPathError("no path from '" + s_uri + "' to '" + t_uri + "' (" +
                          graph::variant_code(variant) + ")");

    std::vector<std::string> uris;
    uris.reserve(path.size());
    for (int v : path) uris.push_back(g.uris[v]);
    return uris;
}

// Resolves the record's subject and object to graphlet nodes: exact URI
// match first, then a unique case-insensitive local-name match of the
// entity text with spaces as underscores.
inline std::pair<std::string, std::string> locate_terminals(const rdf::RdfGraphlet& g,
                                                            const SnippetRecord& rec) {
    auto resolve = [&](const std::optional<std::string>& uri, const std::string& text,
                       const char* role) -> std::string {
        if (uri && g.has_node(*uri)) return *uri;
        std::string wanted = to_lower(text);
        std::replace(wanted.begin(), wanted.end(), ' ', '_');
        std::vector<std::string> candidates;
        for (const std::string& node : g.nodes)
            if (to_lower(std::string(rdf::uri_local_name(node))) == wanted)
                candidates.push_back(node);
        if (candidates.size() == 1) return candidates[0];
        std::string msg = std::string(role) + " terminal not found for snippet '" +
                          rec.id + "' (entity '" + text + "')";
        if (!candidates.empty()) {
            msg += "; ambiguous candidates:";
            for (const std::string& c : candidates) msg += " " + c;
        }
        throw TerminalNotFound(msg);
    };
    std::string subject = resolve(rec.subject_uri, rec.subject_text, "subject");
    std::string object = resolve(rec.object_uri, rec.object_text, "object");
    return {subject, object};
}

// Component-wise mean of the path-node vectors.
inline std::vector<double> path_vector(const std::vector<std::string>& path,
                                       const embed::EmbeddingMatrix& emb) {
    if (path.empty()) throw Error("path must contain at least one node");
    std::vector<double> mean(static_cast<std::size_t>(emb.dim), 0.0);
    for (const std::string& uri : path) {
        std::span<const double> v = emb.vector_for(uri);
        for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += v[d];
    }
    double inv = 1.0 / static_cast<double>(path.size());
    for (double& v : mean) v *= inv;
    return mean;
}

struct PathFeature {
    std::string snippet_id;
    std::vector<std::string> path;
    std::vector<double> vector;
    GraphVariant variant;
};

// Full per-snippet feature: locate terminals, walk the snippet's own
// contracted graphlet under the chosen variant, average the corpus-level
// node vectors along the path.
inline PathFeature compute_path_feature(const rdf::RdfGraphlet& graphlet,
                                        const SnippetRecord& rec,
                                        const embed::EmbeddingMatrix& emb,
                                        GraphVariant variant) {
    auto [subject, object] = locate_terminals(graphlet, rec);
    PathGraph pg = PathGraph::from_graphlet(graphlet);
    if (variant.weighted) pg.apply_weights(emb);
    PathFeature feature;
    feature.snippet_id = rec.id;
    feature.variant = variant;
    feature.path = shortest_path(pg, subject, object, variant);
    feature.vector = path_vector(feature.path, emb);
    return feature;
}

struct FeatureRow {
    std::string snippet_id;
    RelationLabel label = RelationLabel::none;
    std::vector<double> vector;
};

struct FeatureTable {
    int dim = 0;
    std::vector<FeatureRow> rows;
};

// TSV: `snippet_id<TAB>relation<TAB>f1<TAB>...<TAB>f_dim`.
inline std::string features_to_tsv(const FeatureTable& table) {
    std::string out;
    for (const FeatureRow& row : table.rows) {
        out += row.snippet_id;
        out += '\t';
        out += to_string(row.label);
        for (double v : row.vector) {
            out += '\t';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

inline FeatureTable features_from_tsv(const std::string& text) {
    FeatureTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() < 3) throw ParseError(line_no, "expected id, relation, features");
        FeatureRow row;
        row.snippet_id = cols[0];
        row.label = relation_from_string(cols[1]);
        for (std::size_t i = 2; i < cols.size(); ++i)
            row.vector.push_back(parse_double(cols[i], line_no));
        if (table.dim == 0)
            table.dim = static_cast<int>(row.vector.size());
        else if (table.dim != static_cast<int>(row.vector.size()))
            throw ParseError(line_no, "inconsistent feature dimension");
        table.rows.push_back(std::move(row));
    }
    return table;
}

// Audit export: `snippet_id<TAB>uri1|uri2|...`.
inline std::string paths_to_tsv(const std::vector<PathFeature>& features) {
    std::string out;
    for (const PathFeature& f : features) {
        out += f.snippet_id;
        out += '\t';
        for (std::size_t i = 0; i < f.path.size(); ++i) {
            if (i) out += '|';
            out += f.path[i];
        }
        out += '\n';
    }
    return out;
}

} // namespace remod::paths
