#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "remod/error.hpp"

namespace remod {

// The five GREC relations plus `none` for records whose majority vote is
// "no relation".
enum class RelationLabel {
    institution,
    education,
    date_of_birth,
    place_of_birth,
    place_of_death,
    none,
};

inline constexpr std::array<RelationLabel, 5> kRelations = {
    RelationLabel::institution,   RelationLabel::education,
    RelationLabel::date_of_birth, RelationLabel::place_of_birth,
    RelationLabel::place_of_death,
};

inline const char* to_string(RelationLabel r) {
    switch (r) {
        case RelationLabel::institution: return "institution";
        case RelationLabel::education: return "education";
        case RelationLabel::date_of_birth: return "date_of_birth";
        case RelationLabel::place_of_birth: return "place_of_birth";
        case RelationLabel::place_of_death: return "place_of_death";
        case RelationLabel::none: return "none";
    }
    return "none";
}

inline RelationLabel relation_from_string(const std::string& s) {
    if (s == "institution") return RelationLabel::institution;
    if (s == "education") return RelationLabel::education;
    if (s == "date_of_birth") return RelationLabel::date_of_birth;
    if (s == "place_of_birth") return RelationLabel::place_of_birth;
    if (s == "place_of_death") return RelationLabel::place_of_death;
    if (s == "none") return RelationLabel::none;
    throw Error("unknown relation label: '" + s + "'");
}

enum class Majority { yes, no, skip };

inline const char* to_string(Majority m) {
    switch (m) {
        case Majority::yes: return "yes";
        case Majority::no: return "no";
        case Majority::skip: return "skip";
    }
    return "skip";
}

inline Majority majority_from_string(const std::string& s) {
    if (s == "yes") return Majority::yes;
    if (s == "no") return Majority::no;
    if (s == "skip") return Majority::skip;
    throw Error("unknown majority value: '" + s + "'");
}

// Strict plurality; any tie for the top count resolves to skip.
inline Majority majority_of_votes(std::uint32_t yes, std::uint32_t no, std::uint32_t skip) {
    if (yes > no && yes > skip) return Majority::yes;
    if (no > yes && no > skip) return Majority::no;
    return Majority::skip;
}

// One annotated corpus entry (GREC addenda layout).
struct SnippetRecord {
    std::string id;
    std::string snippet;
    RelationLabel relation = RelationLabel::none;
    std::string subject_text;
    std::string object_text;
    std::optional<std::string> subject_uri;
    std::optional<std::string> object_uri;
    std::uint32_t votes_yes = 0;
    std::uint32_t votes_no = 0;
    std::uint32_t votes_skip = 0;
    Majority majority = Majority::skip;

    // Class label used downstream: the annotated relation only when the
    // majority vote confirms its presence.
    RelationLabel effective_label() const {
        return majority == Majority::yes ? relation : RelationLabel::none;
    }
};

struct IsoDate {
    int year = 0;
    int month = 0;
    int day = 0;

    friend auto operator<=>(const IsoDate&, const IsoDate&) = default;
};

inline IsoDate parse_iso_date(const std::string& s, std::size_t line_no = 0) {
    IsoDate d;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &d.year, &d.month, &d.day, &extra) != 3 ||
        d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) {
        throw ParseError(line_no, "review_date not ISO-8601 (YYYY-MM-DD): '" + s + "'");
    }
    return d;
}

// One ClaimReview entry.
struct ClaimRecord {
    std::string id;
    std::string claim_text;
    std::string publisher;
    std::string rating_text;
    std::optional<double> rating_score; // present only after verdict mapping
    std::string review_date;            // ISO-8601, validated on load

    IsoDate date() const { return parse_iso_date(review_date); }
};

// Per-relation length statistics reported by the filter.
struct RelationStats {
    RelationLabel relation = RelationLabel::none;
    std::size_t count = 0;
    double mean_length_words = 0.0;
    double stddev_length_words = 0.0;
    std::size_t retained_count = 0;
};

struct CorpusStats {
    std::vector<RelationStats> per_relation;
};

} // namespace remod
