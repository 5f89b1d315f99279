#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "remod/graphlet.hpp"
#include "remod/ingest.hpp"
#include "remod/records.hpp"
#include "remod/rng.hpp"

namespace remod::synth {

struct SynthConfig {
    int num_classes = 5;     // 2..5, mapped onto the relation labels
    int per_class = 200;
    std::uint64_t seed = 42;

    void validate() const {
        if (num_classes < 2 || num_classes > 5)
            throw Error("synthetic corpus requires 2..5 classes");
        if (per_class < 1) throw Error("per_class must be positive");
    }
};

struct SynthOutput {
    std::vector<SnippetRecord> records;
    // relation -> snippet id -> N-Triples text
    std::map<std::string, std::map<std::string, std::string>> graphlets;
    std::string kg_tsv;
    std::string triples_tsv; // id, subject, object, truth label
    std::vector<ClaimRecord> claims;
    std::string verdicts_json;
};

namespace detail {

inline const std::string kBase = "http://synth.example.org/";
inline const std::string kFredLocal = "http://www.ontologydesignpatterns.org/ont/fred/";
inline const std::string kSameAs = "http://www.w3.org/2002/07/owl#sameAs";

inline std::string nt(const std::string& s, const std::string& p, const std::string& o) {
    auto term = [](const std::string& uri) {
        if (rdf::is_literal_uri(uri))
            return "\"" + std::string(rdf::uri_local_name(uri)) + "\"";
        return "<" + uri + ">";
    };
    return term(s) + " " + term(p) + " " + term(o) + " .\n";
}

inline std::string zero_pad(int v, int width) {
    std::string s = std::to_string(v);
    while (static_cast<int>(s.size()) < width) s = "0" + s;
    return s;
}

// Class templates: phrase echoes the relation's keyword vocabulary so
// keyword selection has something to find in the claims.
inline const char* claim_phrase(RelationLabel rel) {
    switch (rel) {
        case RelationLabel::institution: return "attended the university of";
        case RelationLabel::education: return "received a degree from";
        case RelationLabel::date_of_birth: return "was born on";
        case RelationLabel::place_of_birth: return "was born in";
        case RelationLabel::place_of_death: return "died in";
        default: return "relates to";
    }
}

} // namespace detail

// Deterministic corpus with one distinct subject-object path motif per
// class: class c routes through L_c = 2 + c shared hub nodes drawn from
// small per-position pools, so labels are exactly recoverable by path
// inspection. A shared Person node keeps the stitched graph connected.
// Odd classes store one hub edge against the subject->object direction
// on every second record, which starves the directed traversal variant.
// Half the records reach their first hub only through a parser-local
// alias joined by sameAs, so contraction is load-bearing end to end.
inline SynthOutput generate_synthetic_corpus(const SynthConfig& cfg) {
    cfg.validate();
    using namespace detail;
    SynthOutput out;
    const int hub_pool = 8;
    const std::string person = kBase + "onto/Person";
    const std::string kg_hub = kBase + "kg/hub";
    const std::string isa = kBase + "pred/isa";

    std::string kg;
    std::string triples;

    for (int c = 0; c < cfg.num_classes; ++c) {
        RelationLabel rel = kRelations[static_cast<std::size_t>(c)];
        std::string rel_name = to_string(rel);
        int motif_len = 2 + c;
        bool asymmetric = (c % 2) == 1;
        std::string object_type = kBase + "onto/" + rel_name + "_target";
        std::string rel_pred = kBase + "pred/" + rel_name;

        for (int i = 0; i < cfg.per_class; ++i) {
            Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(c) * 1000003ull,
                                static_cast<std::uint64_t>(i)));
            SnippetRecord rec;
            rec.id = rel_name + "_" + zero_pad(i, 4);
            rec.relation = rel;
            std::string subject = kBase + "entity/" + rel_name + "/s" + std::to_string(i);
            rec.subject_uri = subject;
            rec.subject_text = "Subject " + rel_name + " " + std::to_string(i);

            std::string object;
            if (rel == RelationLabel::date_of_birth) {
                std::string date = std::to_string(1900 + i % 100) + "-" +
                                   zero_pad(1 + i % 12, 2) + "-" + zero_pad(1 + i % 28, 2);
                object = "literal:" + date;
                rec.object_text = date;
            } else {
                object = kBase + "entity/" + rel_name + "/o" + std::to_string(i);
                rec.object_text = "Object " + rel_name + " " + std::to_string(i);
            }
            rec.object_uri = object;

            // Snippet text: class-specific base length, ~10% long outliers
            // for the length filter to drop.
            std::size_t target_words = static_cast<std::size_t>(12 + 2 * c);
            if (i % 10 == 9) target_words += 15;
            std::string text = rec.subject_text + " " + claim_phrase(rel) + " " + rec.object_text;
            std::size_t have = whitespace_tokens(text).size();
            for (std::size_t w = have; w < target_words; ++w)
                text += " filler" + std::to_string(w % 7);
            rec.snippet = text;

            if (i % 37 == 5) {
                rec.votes_yes = 1;
                rec.votes_no = 4;
                rec.votes_skip = 0;
            } else if (i % 41 == 7) {
                rec.votes_yes = 1;
                rec.votes_no = 1;
                rec.votes_skip = 3;
            } else {
                rec.votes_yes = 4;
                rec.votes_no = 1;
                rec.votes_skip = 0;
            }
            rec.majority = majority_of_votes(rec.votes_yes, rec.votes_no, rec.votes_skip);

            // Hub choices per motif position.
            std::vector<std::string> hubs;
            for (int k = 0; k < motif_len; ++k) {
                int j = static_cast<int>(rng.uniform_index(hub_pool));
                hubs.push_back(kBase + "motif/" + rel_name + "/" + std::to_string(k) + "/h" +
                               std::to_string(j));
            }

            std::string doc;
            doc += nt(subject, isa, person);
            bool aliased = (i % 2) == 1;
            std::string first_tail = subject;
            if (aliased) {
                std::string alias = kFredLocal + rel_name + "_s" + std::to_string(i);
                doc += nt(alias, kSameAs, subject);
                first_tail = alias;
            }
            auto pred = [&](int k) {
                return kBase + "pred/" + rel_name + "/link" + std::to_string(k);
            };
            doc += nt(first_tail, pred(0), hubs[0]);
            for (int k = 0; k + 1 < motif_len; ++k) {
                bool reverse = asymmetric && (i % 2 == 0) && k == 0;
                if (reverse)
                    doc += nt(hubs[static_cast<std::size_t>(k) + 1], pred(k + 1),
                              hubs[static_cast<std::size_t>(k)]);
                else
                    doc += nt(hubs[static_cast<std::size_t>(k)], pred(k + 1),
                              hubs[static_cast<std::size_t>(k) + 1]);
            }
            doc += nt(hubs.back(), pred(motif_len), object);
            if (rel != RelationLabel::date_of_birth) doc += nt(object, isa, object_type);

            out.graphlets[rel_name][rec.id] = doc;

            // Knowledge-graph support: every entity touches the shared
            // high-degree hub; true facts also get the direct edge, except
            // for a small ambiguous slice.
            bool truth = rng.next_double() < 0.5;
            kg += subject + "\t" + kBase + "pred/via" + "\t" + kg_hub + "\n";
            kg += object + "\t" + kBase + "pred/via" + "\t" + kg_hub + "\n";
            if (truth && i % 11 != 3) kg += subject + "\t" + rel_pred + "\t" + object + "\n";
            if (rec.majority == Majority::yes) {
                triples += rec.id + "\t" + subject + "\t" + object + "\t" +
                           (truth ? "1" : "0") + "\n";
            }

            out.records.push_back(std::move(rec));
        }
    }
    out.kg_tsv = std::move(kg);
    out.triples_tsv = std::move(triples);

    // Claim corpus: base claims with one near-duplicate each; PolitiFact
    // entries use the six-point scale, others the default True/False.
    static const char* kPolitiFactScale[6] = {"Pants on Fire", "False",     "Mostly False",
                                              "Half True",     "Mostly True", "True"};
    const char* publishers[3] = {"politifact", "snopes", "examplefact"};
    int base_claims = 24;
    for (int b = 0; b < base_claims; ++b) {
        Rng rng(derive_seed(cfg.seed, 0xc1a13b05ull, static_cast<std::uint64_t>(b)));
        int c = b % cfg.num_classes;
        RelationLabel rel = kRelations[static_cast<std::size_t>(c)];
        std::string publisher = publishers[b % 3];
        std::string rating;
        if (publisher == std::string("politifact"))
            rating = kPolitiFactScale[rng.uniform_index(6)];
        else
            rating = rng.next_double() < 0.5 ? "False" : "True";
        std::string who = "Candidate " + std::to_string(b);
        std::string what = "Landmark " + std::to_string(b);
        for (int v = 0; v < 2; ++v) {
            ClaimRecord claim;
            claim.id = "claim_" + std::to_string(b) + "_" + std::to_string(v);
            claim.publisher = publisher;
            claim.rating_text = rating;
            claim.claim_text = who + " " + claim_phrase(rel) + " " + what +
                               (v == 1 ? " according to online reports" : " last year");
            claim.review_date = "2019-" + zero_pad(1 + b % 12, 2) + "-" + zero_pad(1 + v + b % 26, 2);
            out.claims.push_back(std::move(claim));
        }
    }

    out.verdicts_json =
        "{\n"
        "  \"default\": [[\"False\", 0.0], [\"True\", 1.0]],\n"
        "  \"politifact\": [[\"Pants on Fire\", 0.0], [\"False\", 0.2], [\"Mostly False\", 0.4],\n"
        "                 [\"Half True\", 0.6], [\"Mostly True\", 0.8], [\"True\", 1.0]]\n"
        "}\n";
    return out;
}

} // namespace remod::synth
