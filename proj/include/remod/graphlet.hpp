#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "remod/error.hpp"
#include "remod/util.hpp"

namespace remod::rdf {

// URIs travel as canonical absolute strings (angle brackets trimmed).
// Literal objects live in the reserved "literal:" namespace. Blank nodes
// are file-scoped: when the parser knows the snippet id, `_:x` becomes
// `bnode://<snippet_id>/x` so stitching never merges blanks across
// files; without an id the label is kept as-is.
inline constexpr std::string_view kLiteralNs = "literal:";
inline constexpr std::string_view kBlankNs = "bnode://";

inline bool is_literal_uri(std::string_view uri) { return uri.rfind(kLiteralNs, 0) == 0; }
inline bool is_blank_uri(std::string_view uri) { return uri.rfind("_:", 0) == 0; }

// Namespace/local split at the last '#', else the last '/', else the
// first ':' (covers compact forms like "literal:1987-03-01").
inline std::size_t local_name_offset(std::string_view uri) {
    if (auto pos = uri.rfind('#'); pos != std::string_view::npos) return pos + 1;
    if (auto pos = uri.rfind('/'); pos != std::string_view::npos) return pos + 1;
    if (auto pos = uri.find(':'); pos != std::string_view::npos) return pos + 1;
    return 0;
}

inline std::string_view uri_namespace(std::string_view uri) {
    return uri.substr(0, local_name_offset(uri));
}

inline std::string_view uri_local_name(std::string_view uri) {
    return uri.substr(local_name_offset(uri));
}

struct Triple {
    std::string subject;
    std::string predicate;
    std::string object;

    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Directed labeled multigraph parsed from one snippet's RDF triples.
// Nodes and edges keep first-appearance order; exact duplicate triples
// collapse (set semantics).
struct RdfGraphlet {
    std::string snippet_id;
    std::vector<std::string> nodes;
    std::vector<Triple> edges;

    bool has_node(std::string_view uri) const {
        return std::find(nodes.begin(), nodes.end(), uri) != nodes.end();
    }
};

namespace detail {

inline void append_node(RdfGraphlet& g, std::set<std::string>& seen, const std::string& uri) {
    if (seen.insert(uri).second) g.nodes.push_back(uri);
}

struct Term {
    std::string value;
    bool ok = false;
};

inline void skip_ws(std::string_view line, std::size_t& i) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
}

// One N-Triples term: <uri>, _:label, or a quoted literal with optional
// ^^<type> / @lang suffix (suffix is dropped; the lexical form is kept).
inline Term parse_term(std::string_view line, std::size_t& i, std::size_t line_no,
                       const std::string& snippet_id) {
    skip_ws(line, i);
    if (i >= line.size()) return {};
    if (line[i] == '<') {
        std::size_t end = line.find('>', i + 1);
        if (end == std::string_view::npos) throw ParseError(line_no, "unterminated URI");
        Term t{std::string(line.substr(i + 1, end - i - 1)), true};
        if (t.value.empty()) throw ParseError(line_no, "empty URI");
        i = end + 1;
        return t;
    }
    if (line[i] == '_' && i + 1 < line.size() && line[i + 1] == ':') {
        std::size_t end = i + 2;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
        std::string label(line.substr(i + 2, end - i - 2));
        i = end;
        if (snippet_id.empty()) return {"_:" + label, true};
        return {std::string(kBlankNs) + snippet_id + "/" + label, true};
    }
    if (line[i] == '"') {
        std::string lexical;
        std::size_t j = i + 1;
        while (j < line.size() && line[j] != '"') {
            if (line[j] == '\\') {
                if (j + 1 >= line.size()) throw ParseError(line_no, "dangling escape in literal");
                char c = line[j + 1];
                switch (c) {
                    case 'n': lexical += '\n'; break;
                    case 't': lexical += '\t'; break;
                    case 'r': lexical += '\r'; break;
                    case '"': lexical += '"'; break;
                    case '\\': lexical += '\\'; break;
                    default: throw ParseError(line_no, std::string("unsupported escape '\\") + c + "'");
                }
                j += 2;
            } else {
                lexical += line[j];
                ++j;
            }
        }
        if (j >= line.size()) throw ParseError(line_no, "unterminated literal");
        ++j; // closing quote
        if (j < line.size() && line[j] == '@') {
            while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        } else if (j + 1 < line.size() && line[j] == '^' && line[j + 1] == '^') {
            j += 2;
            if (j < line.size() && line[j] == '<') {
                std::size_t end = line.find('>', j);
                if (end == std::string_view::npos)
                    throw ParseError(line_no, "unterminated datatype URI");
                j = end + 1;
            }
        }
        i = j;
        return {std::string(kLiteralNs) + lexical, true};
    }
    return {};
}

} // namespace detail

// N-Triples subset: each non-empty line is `<s> <p> <o> .`; lines
// starting with '#' are comments.
inline RdfGraphlet parse_graphlet(std::string_view text, std::string snippet_id = "") {
    RdfGraphlet g;
    g.snippet_id = std::move(snippet_id);
    std::set<std::string> seen_nodes;
    std::set<Triple> seen_edges;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string_view line = text.substr(
            start, nl == std::string_view::npos ? text.size() - start : nl - start);
        ++line_no;
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::size_t i = 0;
        detail::skip_ws(line, i);
        if (i >= line.size()) continue;
        if (line[i] == '#') continue;

        detail::Term s = detail::parse_term(line, i, line_no, g.snippet_id);
        detail::Term p = detail::parse_term(line, i, line_no, g.snippet_id);
        detail::Term o = detail::parse_term(line, i, line_no, g.snippet_id);
        if (!s.ok || !p.ok || !o.ok)
            throw ParseError(line_no, "expected three terms '<s> <p> <o> .'");
        detail::skip_ws(line, i);
        if (i >= line.size() || line[i] != '.')
            throw ParseError(line_no, "missing terminating '.'");
        ++i;
        detail::skip_ws(line, i);
        if (i < line.size()) throw ParseError(line_no, "trailing content after '.'");

        detail::append_node(g, seen_nodes, s.value);
        detail::append_node(g, seen_nodes, o.value);
        Triple t{std::move(s.value), std::move(p.value), std::move(o.value)};
        if (seen_edges.insert(t).second) g.edges.push_back(std::move(t));
    }
    return g;
}

namespace detail {

inline std::string render_term(const std::string& uri) {
    if (is_blank_uri(uri)) return uri;
    if (is_literal_uri(uri)) {
        std::string lexical(uri.substr(kLiteralNs.size()));
        std::string quoted = "\"";
        for (char c : lexical) {
            switch (c) {
                case '"': quoted += "\\\""; break;
                case '\\': quoted += "\\\\"; break;
                case '\n': quoted += "\\n"; break;
                case '\t': quoted += "\\t"; break;
                case '\r': quoted += "\\r"; break;
                default: quoted += c;
            }
        }
        return quoted + "\"";
    }
    return "<" + uri + ">";
}

} // namespace detail

inline std::string serialize_graphlet(const RdfGraphlet& g) {
    std::string out;
    for (const Triple& t : g.edges) {
        out += detail::render_term(t.subject);
        out += " ";
        out += detail::render_term(t.predicate);
        out += " ";
        out += detail::render_term(t.object);
        out += " .\n";
    }
    return out;
}

// Which predicates merge their endpoints, and which namespace wins the
// merged vertex's name. Earlier preferred patterns rank higher; unlisted
// namespaces rank between preferred and local ones.
struct EquivalenceRule {
    std::vector<std::string> equivalence_predicates = {
        "http://www.w3.org/2002/07/owl#sameAs",
        "http://www.w3.org/2002/07/owl#equivalentClass",
        "owl:sameAs",
        "owl:equivalentClass",
    };
    std::vector<std::string> preferred_namespaces = {"dbpedia.org", "dbpedia:"};
    std::vector<std::string> local_namespaces = {
        "ontologydesignpatterns.org/ont/fred",
        "fred:",
        std::string(kLiteralNs),
        std::string(kBlankNs),
        "_:",
    };

    bool is_equivalence(const std::string& predicate) const {
        return std::find(equivalence_predicates.begin(), equivalence_predicates.end(),
                         predicate) != equivalence_predicates.end();
    }

    std::size_t rank(std::string_view uri) const {
        for (std::size_t i = 0; i < preferred_namespaces.size(); ++i)
            if (uri.find(preferred_namespaces[i]) != std::string_view::npos) return i;
        for (const std::string& ns : local_namespaces)
            if (uri.find(ns) != std::string_view::npos) return preferred_namespaces.size() + 1;
        return preferred_namespaces.size();
    }
};

struct ContractionStats {
    std::size_t merged_nodes = 0;             // nodes absorbed into a canonical vertex
    std::size_t equivalence_edges_removed = 0;
    std::size_t self_loops_removed = 0;
    std::size_t duplicate_edges_collapsed = 0;
};

namespace detail {

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace detail

// Merges nodes joined by equivalence predicates into one vertex named by
// the highest-priority namespace URI (ties: lexicographically smallest).
// Equivalence edges vanish; re-attached edges that became self-loops or
// exact duplicates are dropped.
inline RdfGraphlet contract_equivalents(const RdfGraphlet& g, const EquivalenceRule& rule = {},
                                        ContractionStats* stats_out = nullptr) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i]] = i;

    detail::UnionFind uf(g.nodes.size());
    ContractionStats stats;
    for (const Triple& t : g.edges) {
        if (rule.is_equivalence(t.predicate)) {
            uf.unite(index.at(t.subject), index.at(t.object));
            stats.equivalence_edges_removed += 1;
        }
    }

    // Canonical name per component: best (rank, uri) among members.
    std::vector<std::string> canonical(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        std::size_t root = uf.find(i);
        const std::string& uri = g.nodes[i];
        std::string& best = canonical[root];
        if (best.empty() || std::pair(rule.rank(uri), std::string_view(uri)) <
                                std::pair(rule.rank(best), std::string_view(best))) {
            best = uri;
        }
    }

    RdfGraphlet out;
    out.snippet_id = g.snippet_id;
    std::set<std::string> seen_nodes;
    std::set<Triple> seen_edges;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const std::string& name = canonical[uf.find(i)];
        if (name != g.nodes[i]) stats.merged_nodes += 1;
        detail::append_node(out, seen_nodes, name);
    }
    for (const Triple& t : g.edges) {
        if (rule.is_equivalence(t.predicate)) continue;
        Triple mapped{canonical[uf.find(index.at(t.subject))], t.predicate,
                      canonical[uf.find(index.at(t.object))]};
        if (mapped.subject == mapped.object) {
            stats.self_loops_removed += 1;
            continue;
        }
        if (!seen_edges.insert(mapped).second) {
            stats.duplicate_edges_collapsed += 1;
            continue;
        }
        out.edges.push_back(std::move(mapped));
    }

    if (stats_out) *stats_out = stats;
    return out;
}

} // namespace remod::rdf
