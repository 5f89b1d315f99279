#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "remod/records.hpp"
#include "remod/roc.hpp"
#include "remod/util.hpp"

namespace remod::factcheck {

// Undirected simple graph over entity URIs with a degree table.
struct KnowledgeGraph {
    std::vector<std::string> uris;
    std::unordered_map<std::string, int> index;
    std::vector<std::vector<int>> adjacency; // sorted unique

    bool has(const std::string& uri) const { return index.count(uri) != 0; }

    int id_of(const std::string& uri) const {
        auto it = index.find(uri);
        if (it == index.end())
            throw Error("entity not in knowledge graph: '" + uri + "'");
        return it->second;
    }

    std::size_t degree(int v) const { return adjacency[static_cast<std::size_t>(v)].size(); }

    std::size_t edge_count() const {
        std::size_t total = 0;
        for (const auto& nbrs : adjacency) total += nbrs.size();
        return total / 2;
    }

    int intern(const std::string& uri) {
        auto it = index.find(uri);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(uris.size());
        uris.push_back(uri);
        index.emplace(uri, id);
        adjacency.emplace_back();
        return id;
    }

    void add_edge(const std::string& a, const std::string& b) {
        if (a == b) return; // simple graph; a self-loop would store a degree-0 node
        int u = intern(a), v = intern(b);
        adjacency[static_cast<std::size_t>(u)].push_back(v);
        adjacency[static_cast<std::size_t>(v)].push_back(u);
    }

    void finish() {
        for (auto& nbrs : adjacency) {
            std::sort(nbrs.begin(), nbrs.end());
            nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        }
    }
};

// TSV edge list `s<TAB>p<TAB>o`; predicates are ignored for adjacency and
// duplicate lines collapse.
inline KnowledgeGraph load_kg(const std::string& tsv_text) {
    KnowledgeGraph kg;
    std::istringstream in(tsv_text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 3 || cols[0].empty() || cols[1].empty() || cols[2].empty())
            throw ParseError(line_no, "expected 's<TAB>p<TAB>o'");
        kg.add_edge(cols[0], cols[2]);
    }
    kg.finish();
    return kg;
}

// Knowledge-Linker-style truth score: the best simple path s -> o scored
// by [1 + sum over interior nodes of log degree]^{-1}. Low-degree
// (specific) intermediates are rewarded; a direct edge scores 1; no path
// scores 0. Computed as a nonnegative-cost shortest-path search where
// entering interior node v costs log k(v).
inline double kl_truth_score(const KnowledgeGraph& kg, const std::string& s_uri,
                             const std::string& o_uri) {
    int s = kg.id_of(s_uri);
    int o = kg.id_of(o_uri);
    if (s == o) return 1.0;

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(kg.uris.size(), kInf);
    std::vector<char> done(kg.uris.size(), 0);
    dist[static_cast<std::size_t>(s)] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (done[static_cast<std::size_t>(u)]) continue;
        done[static_cast<std::size_t>(u)] = 1;
        if (u == o) break;
        for (int v : kg.adjacency[static_cast<std::size_t>(u)]) {
            // Only interior nodes pay the degree penalty.
            double step = v == o ? 0.0 : std::log(static_cast<double>(kg.degree(v)));
            double nd = d + step;
            if (nd < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    double cost = dist[static_cast<std::size_t>(o)];
    if (cost == kInf) return 0.0;
    return 1.0 / (1.0 + cost);
}

// Ordered verdict scale per publisher; scores in [0, 1], monotone in
// list order. The default scale maps False to 0 and True to 1.
struct VerdictMapping {
    using Scale = std::vector<std::pair<std::string, double>>;
    Scale default_scale = {{"false", 0.0}, {"true", 1.0}};
    std::map<std::string, Scale> per_publisher;

    static void validate_scale(const Scale& scale, const std::string& owner) {
        double prev = -1.0;
        for (const auto& [text, score] : scale) {
            if (score < 0.0 || score > 1.0)
                throw Error("verdict score out of [0,1] for '" + owner + "'");
            if (score < prev)
                throw Error("verdict scores not monotone in list order for '" + owner + "'");
            prev = score;
        }
    }
};

// Config format: `{publisher: [[text, score], ...]}` with "default" as a
// reserved publisher key.
inline VerdictMapping verdict_mapping_from_json(const nlohmann::json& j) {
    VerdictMapping mapping;
    for (auto it = j.begin(); it != j.end(); ++it) {
        VerdictMapping::Scale scale;
        for (const auto& entry : it.value()) {
            if (!entry.is_array() || entry.size() != 2)
                throw Error("verdict mapping entries must be [text, score] pairs");
            scale.emplace_back(to_lower(entry[0].get<std::string>()), entry[1].get<double>());
        }
        VerdictMapping::validate_scale(scale, it.key());
        if (it.key() == "default")
            mapping.default_scale = std::move(scale);
        else
            mapping.per_publisher[it.key()] = std::move(scale);
    }
    return mapping;
}

// Exact case-insensitive match of the rating text against the
// publisher's scale (falling back to the default scale).
inline double map_verdict(const std::string& rating_text, const std::string& publisher,
                          const VerdictMapping& mapping) {
    const VerdictMapping::Scale* scale = &mapping.default_scale;
    if (auto it = mapping.per_publisher.find(publisher); it != mapping.per_publisher.end())
        scale = &it->second;
    std::string wanted = to_lower(rating_text);
    for (const auto& [text, score] : *scale)
        if (text == wanted) return score;
    std::string known;
    for (const auto& [text, score] : *scale) {
        if (!known.empty()) known += ", ";
        known += "'" + text + "'";
    }
    throw Error("unmapped rating '" + rating_text + "' for publisher '" + publisher +
                "'; known ratings: " + known);
}

namespace detail {

inline const std::set<std::string>& stop_words() {
    static const std::set<std::string> words = {
        "a",    "an",   "and",  "are",  "as",   "at",   "be",    "been", "but",  "by",
        "did",  "do",   "does", "for",  "from", "had",  "has",   "have", "he",   "her",
        "his",  "in",   "is",   "it",   "its",  "no",   "not",   "of",   "on",   "or",
        "said", "says", "she",  "that", "the",  "their", "them", "they", "this", "to",
        "was",  "were", "what", "when", "where", "which", "who",  "will", "with", "would",
    };
    return words;
}

inline std::vector<std::string> content_terms(const std::string& text) {
    std::vector<std::string> terms;
    std::string current;
    for (char c : to_lower(text)) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current += c;
        } else if (!current.empty()) {
            if (!stop_words().count(current)) terms.push_back(current);
            current.clear();
        }
    }
    if (!current.empty() && !stop_words().count(current)) terms.push_back(current);
    return terms;
}

// Log-scaled term-frequency vector, L2-normalized.
inline std::map<std::string, double> term_vector(const std::string& text) {
    std::map<std::string, double> tf;
    for (const std::string& term : content_terms(text)) tf[term] += 1.0;
    double norm_sq = 0.0;
    for (auto& [term, count] : tf) {
        count = 1.0 + std::log(count);
        norm_sq += count * count;
    }
    if (norm_sq > 0.0) {
        double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [term, count] : tf) count *= inv;
    }
    return tf;
}

inline double cosine(const std::map<std::string, double>& a,
                     const std::map<std::string, double>& b) {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    double dot = 0.0;
    for (const auto& [term, w] : small) {
        auto it = large.find(term);
        if (it != large.end()) dot += w * it->second;
    }
    return dot;
}

} // namespace detail

// Claim corpus indexed for similarity search; every entry carries its
// mapped truth score.
struct ClaimCorpusIndex {
    struct Entry {
        std::string id;
        std::string publisher;
        IsoDate date;
        double truth_score = 0.0;
        std::map<std::string, double> terms;
    };
    std::vector<Entry> entries;

    static ClaimCorpusIndex build(const std::vector<ClaimRecord>& claims,
                                  const VerdictMapping& mapping) {
        ClaimCorpusIndex index;
        for (const ClaimRecord& claim : claims) {
            Entry e;
            e.id = claim.id;
            e.publisher = claim.publisher;
            e.date = claim.date();
            e.truth_score = claim.rating_score
                                ? *claim.rating_score
                                : map_verdict(claim.rating_text, claim.publisher, mapping);
            e.terms = detail::term_vector(claim.claim_text);
            index.entries.push_back(std::move(e));
        }
        return index;
    }
};

enum class CorpusFilter { all, single_publisher, same_publisher_before_date };

struct ClaimMatchResult {
    double score = 0.0;
    std::size_t matched = 0; // how many neighbors were averaged
    bool truncated = false;  // fewer than k candidates were available
};

// Scores a claim as the unweighted mean of the truth scores of its k
// most similar corpus claims (the query claim itself is excluded).
inline ClaimMatchResult claim_match_score(const ClaimRecord& claim, const ClaimCorpusIndex& index,
                                          std::size_t k, CorpusFilter filter = CorpusFilter::all,
                                          const std::string& publisher_filter = "") {
    if (k < 1) throw Error("claim matching requires k >= 1");
    std::map<std::string, double> query = detail::term_vector(claim.claim_text);
    IsoDate query_date = claim.date();

    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < index.entries.size(); ++i) {
        const auto& e = index.entries[i];
        if (e.id == claim.id) continue; // no trivially perfect self-match
        if (filter == CorpusFilter::single_publisher && e.publisher != publisher_filter) continue;
        if (filter == CorpusFilter::same_publisher_before_date &&
            (e.publisher != claim.publisher || !(e.date < query_date)))
            continue;
        ranked.emplace_back(detail::cosine(query, e.terms), i);
    }
    if (ranked.empty()) throw Error("claim matching corpus is empty after filtering");
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return index.entries[a.second].id < index.entries[b.second].id;
    });

    ClaimMatchResult result;
    result.truncated = ranked.size() < k;
    std::size_t take = std::min(k, ranked.size());
    for (std::size_t i = 0; i < take; ++i)
        result.score += index.entries[ranked[i].second].truth_score;
    result.score /= static_cast<double>(take);
    result.matched = take;
    return result;
}

// ROC AUC of truth scores against boolean verdicts, midrank ties.
inline double verification_auc(std::span<const double> scores, const std::vector<bool>& labels) {
    return roc::roc_auc(scores, labels);
}

} // namespace remod::factcheck
