#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "remod/graphlet.hpp"
#include "remod/util.hpp"

namespace remod::graph {

using NodeId = std::int32_t;

struct GraphVariant {
    bool directed = false;
    bool weighted = false;
};

inline GraphVariant variant_from_code(const std::string& code) {
    if (code == "uu") return {false, false};
    if (code == "uw") return {false, true};
    if (code == "du") return {true, false};
    if (code == "dw") return {true, true};
    throw Error("unknown graph variant '" + code + "' (expected du|dw|uu|uw)");
}

inline std::string variant_code(GraphVariant v) {
    return std::string(1, v.directed ? 'd' : 'u') + (v.weighted ? 'w' : 'u');
}

// (1/pi) * arccos(cosine similarity), a metric in [0, 1]. Evaluated as
// 2*atan2(|u - v|, |u + v|) over the unit vectors, which stays accurate
// where arccos is ill-conditioned (cosine near +-1) and never needs the
// overshoot clamp.
inline double angular_distance(std::span<const double> a, std::span<const double> b,
                               const std::string& node_a = "", const std::string& node_b = "") {
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0) throw Error("zero-norm embedding vector for node '" + node_a + "'");
    if (nb == 0.0) throw Error("zero-norm embedding vector for node '" + node_b + "'");
    double inv_a = 1.0 / std::sqrt(na), inv_b = 1.0 / std::sqrt(nb);
    double diff_sq = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double ua = a[i] * inv_a, ub = b[i] * inv_b;
        diff_sq += (ua - ub) * (ua - ub);
        sum_sq += (ua + ub) * (ua + ub);
    }
    double angle = 2.0 * std::atan2(std::sqrt(diff_sq), std::sqrt(sum_sq));
    return angle / std::numbers::pi;
}

struct CorpusEdge {
    NodeId src = 0;
    NodeId dst = 0;
    std::string predicate;
};

// Union of all contracted graphlets; same URI means same vertex. Edges
// are stored directed as parsed with duplicate (u, v, predicate) triples
// collapsed. Traversal ignores predicates.
struct CorpusGraph {
    std::vector<std::string> node_uris;                 // id -> uri
    std::unordered_map<std::string, NodeId> node_index; // uri -> id
    std::vector<CorpusEdge> edges;
    std::map<std::string, std::vector<NodeId>> snippet_nodes;

    // Built by finalize(): sorted unique neighbor lists.
    std::vector<std::vector<NodeId>> out_neighbors;
    std::vector<std::vector<NodeId>> in_neighbors;
    std::vector<std::vector<NodeId>> und_neighbors;

    bool weighted = false;
    std::unordered_map<std::uint64_t, double> pair_weights; // key(min,max) -> w

    static std::uint64_t pair_key(NodeId a, NodeId b) {
        NodeId lo = std::min(a, b), hi = std::max(a, b);
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(lo)) << 32) |
               static_cast<std::uint32_t>(hi);
    }

    std::size_t node_count() const { return node_uris.size(); }
    std::size_t edge_count() const { return edges.size(); }

    NodeId intern(const std::string& uri) {
        auto it = node_index.find(uri);
        if (it != node_index.end()) return it->second;
        NodeId id = static_cast<NodeId>(node_uris.size());
        node_uris.push_back(uri);
        node_index.emplace(uri, id);
        return id;
    }

    NodeId id_of(const std::string& uri) const {
        auto it = node_index.find(uri);
        if (it == node_index.end()) throw Error("node not in corpus graph: '" + uri + "'");
        return it->second;
    }

    double weight_of(NodeId a, NodeId b) const {
        auto it = pair_weights.find(pair_key(a, b));
        if (it == pair_weights.end())
            throw Error("edge weight missing for (" + node_uris[a] + ", " + node_uris[b] + ")");
        return it->second;
    }

    void finalize() {
        std::size_t n = node_uris.size();
        out_neighbors.assign(n, {});
        in_neighbors.assign(n, {});
        und_neighbors.assign(n, {});
        for (const CorpusEdge& e : edges) {
            out_neighbors[e.src].push_back(e.dst);
            in_neighbors[e.dst].push_back(e.src);
            und_neighbors[e.src].push_back(e.dst);
            und_neighbors[e.dst].push_back(e.src);
        }
        auto dedupe = [](std::vector<NodeId>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        for (std::size_t i = 0; i < n; ++i) {
            dedupe(out_neighbors[i]);
            dedupe(in_neighbors[i]);
            dedupe(und_neighbors[i]);
        }
    }
};

// Stitches contracted graphlets into one corpus graph. Node set is the
// union of URIs; duplicate (u, v, predicate) edges across graphlets
// collapse to one edge.
inline CorpusGraph stitch(const std::vector<rdf::RdfGraphlet>& graphlets) {
    CorpusGraph g;
    std::set<std::tuple<NodeId, NodeId, std::string>> seen_edges;
    for (const rdf::RdfGraphlet& piece : graphlets) {
        std::vector<NodeId>& members = g.snippet_nodes[piece.snippet_id];
        for (const std::string& uri : piece.nodes) members.push_back(g.intern(uri));
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (const rdf::Triple& t : piece.edges) {
            NodeId s = g.intern(t.subject);
            NodeId o = g.intern(t.object);
            if (seen_edges.emplace(s, o, t.predicate).second)
                g.edges.push_back({s, o, t.predicate});
        }
    }
    g.finalize();
    return g;
}

// Assigns every edge the angular distance between its endpoint vectors.
// Weights are symmetric and keyed by the undirected node pair.
template <typename VectorLookup>
void weight_edges(CorpusGraph& g, const VectorLookup& vectors) {
    g.pair_weights.clear();
    for (const CorpusEdge& e : g.edges) {
        std::uint64_t key = CorpusGraph::pair_key(e.src, e.dst);
        if (g.pair_weights.count(key)) continue;
        std::span<const double> a = vectors(g.node_uris[e.src]);
        std::span<const double> b = vectors(g.node_uris[e.dst]);
        g.pair_weights.emplace(
            key, angular_distance(a, b, g.node_uris[e.src], g.node_uris[e.dst]));
    }
    g.weighted = true;
}

// TSV exports: edge list `src<TAB>predicate<TAB>dst[<TAB>weight]` and the
// node index `id<TAB>uri`.
inline std::string edges_to_tsv(const CorpusGraph& g) {
    std::string out;
    for (const CorpusEdge& e : g.edges) {
        out += g.node_uris[e.src];
        out += '\t';
        out += e.predicate;
        out += '\t';
        out += g.node_uris[e.dst];
        if (g.weighted) {
            out += '\t';
            out += format_double(g.pair_weights.at(CorpusGraph::pair_key(e.src, e.dst)));
        }
        out += '\n';
    }
    return out;
}

inline std::string nodes_to_tsv(const CorpusGraph& g) {
    std::string out;
    for (std::size_t i = 0; i < g.node_uris.size(); ++i) {
        out += std::to_string(i);
        out += '\t';
        out += g.node_uris[i];
        out += '\n';
    }
    return out;
}

// Rebuilds a graph from the edge-list export. When the node-index export
// is supplied too, node ids match the original graph and isolated nodes
// survive the round trip.
inline CorpusGraph graph_from_tsv(const std::string& edges_tsv,
                                  const std::string& nodes_tsv = "") {
    CorpusGraph g;
    if (!nodes_tsv.empty()) {
        std::istringstream nodes_in(nodes_tsv);
        std::string node_line;
        std::size_t node_line_no = 0;
        while (std::getline(nodes_in, node_line)) {
            ++node_line_no;
            if (node_line.empty()) continue;
            std::vector<std::string> cols = split(node_line, '\t');
            if (cols.size() != 2) throw ParseError(node_line_no, "expected 'id<TAB>uri'");
            if (g.intern(cols[1]) != static_cast<NodeId>(std::stoll(cols[0])))
                throw ParseError(node_line_no, "node index is not a contiguous bijection");
        }
    }
    std::set<std::tuple<NodeId, NodeId, std::string>> seen_edges;
    std::istringstream in(edges_tsv);
    std::string line;
    std::size_t line_no = 0;
    bool any_weight = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 3 && cols.size() != 4)
            throw ParseError(line_no, "expected 3 or 4 tab-separated columns");
        NodeId s = g.intern(cols[0]);
        NodeId o = g.intern(cols[2]);
        if (seen_edges.emplace(s, o, cols[1]).second) g.edges.push_back({s, o, cols[1]});
        if (cols.size() == 4) {
            any_weight = true;
            g.pair_weights.emplace(CorpusGraph::pair_key(s, o), parse_double(cols[3], line_no));
        }
    }
    g.weighted = any_weight;
    g.finalize();
    return g;
}

} // namespace remod::graph
