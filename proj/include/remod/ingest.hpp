#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "remod/records.hpp"
#include "remod/util.hpp"

namespace remod::ingest {

using nlohmann::json;

namespace detail {

inline const json& require_field(const json& obj, const char* name, std::size_t line_no) {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null())
        throw ParseError(line_no, std::string("missing field '") + name + "'");
    return *it;
}

inline std::string require_string(const json& obj, const char* name, std::size_t line_no) {
    const json& v = require_field(obj, name, line_no);
    if (!v.is_string())
        throw ParseError(line_no, std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

inline std::uint32_t require_count(const json& obj, const char* name, std::size_t line_no) {
    const json& v = require_field(obj, name, line_no);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ParseError(line_no, std::string("field '") + name + "' must be a non-negative count");
    return v.get<std::uint32_t>();
}

inline std::optional<std::string> optional_string(const json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return it->get<std::string>();
}

} // namespace detail

inline SnippetRecord snippet_from_json(const json& obj, std::size_t line_no) {
    SnippetRecord rec;
    rec.id = detail::require_string(obj, "id", line_no);
    rec.snippet = detail::require_string(obj, "snippet", line_no);
    rec.relation = relation_from_string(detail::require_string(obj, "relation", line_no));
    rec.subject_text = detail::require_string(obj, "subject_text", line_no);
    rec.object_text = detail::require_string(obj, "object_text", line_no);
    rec.subject_uri = detail::optional_string(obj, "subject_uri");
    rec.object_uri = detail::optional_string(obj, "object_uri");
    rec.votes_yes = detail::require_count(obj, "votes_yes", line_no);
    rec.votes_no = detail::require_count(obj, "votes_no", line_no);
    rec.votes_skip = detail::require_count(obj, "votes_skip", line_no);
    if (rec.votes_yes + rec.votes_no + rec.votes_skip < 1)
        throw ParseError(line_no, "votes must sum to at least 1");
    Majority derived = majority_of_votes(rec.votes_yes, rec.votes_no, rec.votes_skip);
    if (auto stated = detail::optional_string(obj, "majority")) {
        rec.majority = majority_from_string(*stated);
        if (rec.majority != derived)
            throw ParseError(line_no, "majority '" + *stated +
                                          "' contradicts votes (expected '" +
                                          to_string(derived) + "')");
    } else {
        rec.majority = derived;
    }
    return rec;
}

inline json snippet_to_json(const SnippetRecord& rec) {
    json obj;
    obj["id"] = rec.id;
    obj["snippet"] = rec.snippet;
    obj["relation"] = to_string(rec.relation);
    obj["subject_text"] = rec.subject_text;
    obj["object_text"] = rec.object_text;
    if (rec.subject_uri) obj["subject_uri"] = *rec.subject_uri;
    if (rec.object_uri) obj["object_uri"] = *rec.object_uri;
    obj["votes_yes"] = rec.votes_yes;
    obj["votes_no"] = rec.votes_no;
    obj["votes_skip"] = rec.votes_skip;
    obj["majority"] = to_string(rec.majority);
    return obj;
}

inline ClaimRecord claim_from_json(const json& obj, std::size_t line_no) {
    ClaimRecord rec;
    rec.id = detail::require_string(obj, "id", line_no);
    rec.claim_text = detail::require_string(obj, "claim_text", line_no);
    rec.publisher = detail::require_string(obj, "publisher", line_no);
    rec.rating_text = detail::require_string(obj, "rating_text", line_no);
    if (auto it = obj.find("rating_score"); it != obj.end() && !it->is_null()) {
        if (!it->is_number())
            throw ParseError(line_no, "field 'rating_score' must be a number");
        rec.rating_score = it->get<double>();
    }
    rec.review_date = detail::require_string(obj, "review_date", line_no);
    parse_iso_date(rec.review_date, line_no);
    return rec;
}

inline json claim_to_json(const ClaimRecord& rec) {
    json obj;
    obj["id"] = rec.id;
    obj["claim_text"] = rec.claim_text;
    obj["publisher"] = rec.publisher;
    obj["rating_text"] = rec.rating_text;
    if (rec.rating_score) obj["rating_score"] = *rec.rating_score;
    obj["review_date"] = rec.review_date;
    return obj;
}

namespace detail {

template <typename Record, typename FromJson>
std::vector<Record> load_jsonl(const std::filesystem::path& path, FromJson from_json) {
    std::string text = read_text_file(path);
    std::vector<Record> records;
    std::set<std::string> seen_ids;
    std::size_t line_no = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!obj.is_object()) throw ParseError(line_no, "line is not a JSON object");
        Record rec = from_json(obj, line_no);
        if (!seen_ids.insert(rec.id).second)
            throw ParseError(line_no, "duplicate id '" + rec.id + "'");
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace detail

// One JSON object per line; order preserved; duplicate ids rejected.
inline std::vector<SnippetRecord> load_snippet_corpus(const std::filesystem::path& path) {
    return detail::load_jsonl<SnippetRecord>(path, snippet_from_json);
}

inline std::vector<ClaimRecord> load_claim_corpus(const std::filesystem::path& path) {
    return detail::load_jsonl<ClaimRecord>(path, claim_from_json);
}

inline std::string serialize_snippet_corpus(const std::vector<SnippetRecord>& records) {
    std::string out;
    for (const auto& rec : records) out += snippet_to_json(rec).dump() + "\n";
    return out;
}

inline std::string serialize_claim_corpus(const std::vector<ClaimRecord>& records) {
    std::string out;
    for (const auto& rec : records) out += claim_to_json(rec).dump() + "\n";
    return out;
}

inline std::size_t word_length(const SnippetRecord& rec) {
    return whitespace_tokens(rec.snippet).size();
}

// Keeps, per relation, the records whose word count lies within
// [mean - half_width*sigma, mean + half_width*sigma], endpoints included.
// Sigma is the population standard deviation of the unfiltered group.
inline std::pair<std::vector<SnippetRecord>, CorpusStats>
filter_by_length(const std::vector<SnippetRecord>& records, double half_width = 0.5) {
    if (half_width < 0) throw Error("half_width must be >= 0");

    struct Group {
        std::size_t count = 0;
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    std::map<RelationLabel, Group> groups;
    std::vector<std::size_t> lengths(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        lengths[i] = word_length(records[i]);
        Group& g = groups[records[i].relation];
        g.count += 1;
        g.sum += static_cast<double>(lengths[i]);
        g.sum_sq += static_cast<double>(lengths[i]) * static_cast<double>(lengths[i]);
    }

    std::map<RelationLabel, RelationStats> stats;
    for (const auto& [rel, g] : groups) {
        RelationStats rs;
        rs.relation = rel;
        rs.count = g.count;
        rs.mean_length_words = g.sum / static_cast<double>(g.count);
        double var = g.sum_sq / static_cast<double>(g.count) -
                     rs.mean_length_words * rs.mean_length_words;
        rs.stddev_length_words = var > 0 ? std::sqrt(var) : 0.0;
        stats[rel] = rs;
    }

    std::vector<SnippetRecord> retained;
    retained.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const RelationStats& rs = stats[records[i].relation];
        double lo = rs.mean_length_words - half_width * rs.stddev_length_words;
        double hi = rs.mean_length_words + half_width * rs.stddev_length_words;
        double len = static_cast<double>(lengths[i]);
        if (len >= lo && len <= hi) {
            retained.push_back(records[i]);
            stats[records[i].relation].retained_count += 1;
        }
    }

    CorpusStats cs;
    for (RelationLabel rel : kRelations)
        if (auto it = stats.find(rel); it != stats.end()) cs.per_relation.push_back(it->second);
    if (auto it = stats.find(RelationLabel::none); it != stats.end())
        cs.per_relation.push_back(it->second);
    return {std::move(retained), std::move(cs)};
}

inline std::string stats_to_csv(const CorpusStats& stats) {
    std::string out = "relation,count,mean,std,retained\n";
    char buf[160];
    for (const auto& rs : stats.per_relation) {
        std::snprintf(buf, sizeof(buf), "%s,%zu,%.6f,%.6f,%zu\n", to_string(rs.relation),
                      rs.count, rs.mean_length_words, rs.stddev_length_words,
                      rs.retained_count);
        out += buf;
    }
    return out;
}

using SynonymTable = std::map<RelationLabel, std::vector<std::string>>;

// WordNet-derived search phrases per relation.
inline SynonymTable default_synonyms() {
    return {
        {RelationLabel::institution, {"attend", "university", "college", "graduate"}},
        {RelationLabel::education, {"graduate", "degree"}},
        {RelationLabel::date_of_birth, {"born", "born on"}},
        {RelationLabel::place_of_birth,
         {"born", "birthplace", "place of birth", "place of origin"}},
        {RelationLabel::place_of_death,
         {"deceased", "died", "perished", "passed away", "expired"}},
    };
}

namespace detail {

inline bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Case-insensitive containment of the whole phrase, delimited by
// non-word characters ("born" must not fire inside "stubborn").
inline bool contains_phrase(const std::string& text_lower, const std::string& phrase_lower) {
    if (phrase_lower.empty()) return false;
    std::size_t pos = 0;
    while ((pos = text_lower.find(phrase_lower, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !is_word_char(text_lower[pos - 1]);
        std::size_t end = pos + phrase_lower.size();
        bool right_ok = end >= text_lower.size() || !is_word_char(text_lower[end]);
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

} // namespace detail

// A claim matching phrases from several relations is returned once per
// matching relation, in claim order then relation order.
inline std::vector<std::pair<ClaimRecord, RelationLabel>>
select_claims_by_keywords(const std::vector<ClaimRecord>& claims, const SynonymTable& synonyms) {
    if (synonyms.empty()) throw Error("synonym table must not be empty");
    std::vector<std::pair<ClaimRecord, RelationLabel>> selected;
    for (const ClaimRecord& claim : claims) {
        std::string text = to_lower(claim.claim_text);
        for (const auto& [relation, phrases] : synonyms) {
            for (const std::string& phrase : phrases) {
                if (detail::contains_phrase(text, to_lower(phrase))) {
                    selected.emplace_back(claim, relation);
                    break;
                }
            }
        }
    }
    return selected;
}

} // namespace remod::ingest
