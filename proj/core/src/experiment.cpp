#include "qfuse/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "numfmt.hpp"
#include "rng.hpp"

namespace qfuse {

std::string_view to_string(PairScope scope) {
    switch (scope) {
        case PairScope::RelevantOnly: return "relevant-only";
        case PairScope::All: return "all";
    }
    return "?";
}

std::string config_fingerprint(const ExperimentConfig& config) {
    std::string canonical;
    canonical += "target_subset_size=" + std::to_string(config.target_subset_size);
    canonical += ";violation_tolerance=" +
                 detail::fmt_double(config.violation_tolerance);
    canonical += ";image_aggregation=";
    canonical += to_string(config.image_aggregation);
    canonical += ";pair_scope=";
    canonical += to_string(config.pair_scope);
    canonical += ";expansion_terms=" + std::to_string(config.expansion_terms);
    canonical += ";seed=" + std::to_string(config.seed);
    const std::uint64_t hash = detail::fnv1a64(canonical);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(hash));
    return buf;
}

QuerySubset build_subset(std::string_view query_id, const Qrels& qrels,
                         const Corpus& corpus, int target_size,
                         std::uint64_t seed) {
    if (!qrels.has_query(query_id)) {
        throw std::domain_error("no relevance judgments for query " +
                                std::string(query_id));
    }
    if (target_size < 0) {
        throw std::domain_error("subset target size must be non-negative");
    }
    QuerySubset subset;
    subset.query_id = std::string(query_id);
    subset.target_size = target_size;

    std::vector<std::string> others;
    for (const auto& doc : corpus) {
        if (qrels.is_relevant(query_id, doc.doc_id)) {
            subset.relevant_ids.push_back(doc.doc_id);
        } else {
            others.push_back(doc.doc_id);
        }
    }
    std::sort(subset.relevant_ids.begin(), subset.relevant_ids.end());

    const std::size_t wanted =
        static_cast<std::size_t>(target_size) > subset.relevant_ids.size()
            ? static_cast<std::size_t>(target_size) - subset.relevant_ids.size()
            : 0;
    if (wanted > 0 && !others.empty()) {
        std::sort(others.begin(), others.end());
        detail::DeterministicRng rng(seed ^ detail::fnv1a64(query_id));
        rng.shuffle(others);
        others.resize(std::min(wanted, others.size()));
        std::sort(others.begin(), others.end());
        subset.filler_ids = std::move(others);
    }
    return subset;
}

std::vector<std::pair<std::string, std::string>> enumerate_relevant_pairs(
    const QuerySubset& subset) {
    std::vector<std::string> ids = subset.relevant_ids;
    std::sort(ids.begin(), ids.end());
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(ids.size() * (ids.size() > 0 ? ids.size() - 1 : 0) / 2);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            pairs.emplace_back(ids[i], ids[j]);
        }
    }
    return pairs;
}

namespace {

std::vector<std::pair<std::string, std::string>> enumerate_all_pairs(
    const QuerySubset& subset) {
    std::vector<std::string> ids = subset.relevant_ids;
    ids.insert(ids.end(), subset.filler_ids.begin(), subset.filler_ids.end());
    std::sort(ids.begin(), ids.end());
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(ids.size() * (ids.size() > 0 ? ids.size() - 1 : 0) / 2);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            pairs.emplace_back(ids[i], ids[j]);
        }
    }
    return pairs;
}

}  // namespace

ExperimentReport run_experiment(std::span<const MultimodalQuery> queries,
                                const Corpus& corpus, const Qrels& qrels,
                                const ExperimentConfig& config) {
    if (config.target_subset_size < 0) {
        throw std::domain_error("subset target size must be non-negative");
    }
    ExperimentReport report;
    report.seed = config.seed;
    report.config_fingerprint = config_fingerprint(config);

    std::int64_t queries_with_violation = 0;
    for (const auto& query : queries) {
        const QuerySubset subset =
            build_subset(query.query_id, qrels, corpus,
                         config.target_subset_size, config.seed);

        std::set<std::string, std::less<>> member_ids(
            subset.relevant_ids.begin(), subset.relevant_ids.end());
        member_ids.insert(subset.filler_ids.begin(), subset.filler_ids.end());

        Corpus subset_corpus;
        subset_corpus.reserve(member_ids.size());
        for (const auto& doc : corpus) {
            if (member_ids.contains(doc.doc_id)) subset_corpus.push_back(doc);
        }

        ScoringOptions scoring;
        scoring.expansion_terms = config.expansion_terms;
        scoring.image_aggregation = config.image_aggregation;
        const std::vector<ScoredDocument> scored =
            score_corpus(query, subset_corpus, qrels, scoring);

        std::map<std::string, const ScoredDocument*, std::less<>> scored_by_id;
        for (const auto& doc : scored) scored_by_id[doc.doc_id] = &doc;

        const auto pairs = config.pair_scope == PairScope::RelevantOnly
                               ? enumerate_relevant_pairs(subset)
                               : enumerate_all_pairs(subset);

        QueryStats stats{0, 0, 0.0, 0.0};
        for (const auto& [id1, id2] : pairs) {
            const ChshResult chsh = chsh_from_document_pair(
                *scored_by_id.at(id1), *scored_by_id.at(id2),
                config.violation_tolerance);
            ++stats.pair_count;
            if (chsh.violates_classical) ++stats.violating_pairs;
            stats.max_s = std::max(stats.max_s, chsh.s_value);
        }
        if (stats.pair_count > 0) {
            stats.violation_pct = 100.0 *
                                  static_cast<double>(stats.violating_pairs) /
                                  static_cast<double>(stats.pair_count);
        }
        if (stats.violating_pairs > 0) ++queries_with_violation;

        if (!report.per_query.emplace(query.query_id, stats).second) {
            throw std::domain_error("duplicate query id " + query.query_id);
        }
    }

    report.queries_with_violation_pct =
        queries.empty() ? 0.0
                        : 100.0 * static_cast<double>(queries_with_violation) /
                              static_cast<double>(queries.size());
    return report;
}

}  // namespace qfuse
