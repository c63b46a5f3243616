#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qfuse/chsh.hpp"
#include "qfuse/retrieval.hpp"

namespace qfuse {

/// Seed used when the caller does not pick one.
inline constexpr std::uint64_t kDefaultSeed = 42;

/// The documents evaluated for one query: all of its relevant documents plus
/// random filler up to the target size. Both id lists are sorted ascending.
struct QuerySubset {
    std::string query_id;
    std::vector<std::string> relevant_ids;
    std::vector<std::string> filler_ids;
    int target_size;
};

/// Correlation statistic for one document pair.
struct PairResult {
    std::string doc_id_1;
    std::string doc_id_2;
    ChshResult chsh;
};

/// Aggregated pair statistics for one query.
struct QueryStats {
    std::int64_t pair_count;
    std::int64_t violating_pairs;
    /// violating_pairs / pair_count * 100, or 0 when there are no pairs.
    double violation_pct;
    /// Largest s value over the pairs, or 0 when there are no pairs.
    double max_s;
};

struct ExperimentReport {
    std::map<std::string, QueryStats> per_query;
    /// Percentage of queries with at least one violating pair.
    double queries_with_violation_pct;
    std::uint64_t seed;
    /// Stable hash of the configuration that produced the report.
    std::string config_fingerprint;
};

/// Which document pairs of a subset are tested: only pairs of relevant
/// documents, or all pairs.
enum class PairScope { RelevantOnly, All };

std::string_view to_string(PairScope scope);

struct ExperimentConfig {
    int target_subset_size = 300;
    double violation_tolerance = kDefaultViolationTolerance;
    ImageAggregation image_aggregation = ImageAggregation::Mean;
    PairScope pair_scope = PairScope::RelevantOnly;
    int expansion_terms = 10;
    std::uint64_t seed = kDefaultSeed;
};

/// Stable fingerprint of a configuration: a 64-bit FNV-1a hash of its
/// canonical text form, as 16 lowercase hex digits.
std::string config_fingerprint(const ExperimentConfig& config);

/// Selects the evaluation subset for one query: every relevant document
/// present in the corpus, topped up with uniformly sampled non-relevant
/// documents to the target size. Filler sampling is deterministic in
/// (seed, query_id). Throws std::domain_error if the qrels do not know the
/// query.
QuerySubset build_subset(std::string_view query_id, const Qrels& qrels,
                         const Corpus& corpus, int target_size = 300,
                         std::uint64_t seed = kDefaultSeed);

/// All unordered pairs of the subset's relevant documents, each pair in
/// lexicographic order, pairs sorted lexicographically. Size n*(n-1)/2.
std::vector<std::pair<std::string, std::string>> enumerate_relevant_pairs(
    const QuerySubset& subset);

/// Runs the full pipeline over every query: subset selection, per-subset
/// tf-idf scoring, pair correlation statistics, aggregation. Throws on the
/// first error rather than emitting a partial report.
ExperimentReport run_experiment(std::span<const MultimodalQuery> queries,
                                const Corpus& corpus, const Qrels& qrels,
                                const ExperimentConfig& config = {});

/// Shape parameters for a generated dataset.
struct SyntheticSpec {
    int n_queries = 5;
    int docs_per_query = 300;
    /// Inclusive range the per-query relevant-document count is drawn from.
    std::pair<int, int> relevant_range = {11, 98};
    int vocab_size = 500;
    int feature_dim = 2048;
    std::uint64_t seed = kDefaultSeed;
};

struct SyntheticDataset {
    Corpus corpus;
    std::vector<MultimodalQuery> queries;
    Qrels qrels;
};

/// Generates a corpus, queries, and qrels with the given shape. Each query
/// gets its own relevant documents, clustered around a query topic in both
/// modalities; a shared background pool provides filler. Deterministic in
/// the shape parameters, including the seed. Throws std::domain_error on
/// nonsensical shape parameters.
SyntheticDataset generate_synthetic_dataset(const SyntheticSpec& spec);

}  // namespace qfuse
