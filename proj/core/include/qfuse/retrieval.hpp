#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfuse/hilbert.hpp"

namespace qfuse {

struct TextDocument {
    std::string doc_id;
    std::string text;
};

/// Dense image embedding.
struct FeatureVector {
    std::vector<double> values;
};

/// A document carrying both modalities.
struct MultimodalDocument {
    std::string doc_id;
    std::string text;
    FeatureVector image_features;
};

using Corpus = std::vector<MultimodalDocument>;

/// A query with a text side and one to three example image embeddings.
struct MultimodalQuery {
    std::string query_id;
    std::string text;
    std::vector<FeatureVector> sample_image_features;
};

/// Per-modality relevance of one document to one query.
struct ScoredDocument {
    std::string doc_id;
    RelevanceProbability p_text;
    RelevanceProbability p_image;
};

/// Binary relevance judgments keyed by query id.
class Qrels {
public:
    void add(std::string query_id, std::string doc_id);
    bool is_relevant(std::string_view query_id, std::string_view doc_id) const;
    bool has_query(std::string_view query_id) const;
    /// Relevant doc ids for a query, sorted ascending. Empty if unknown.
    std::vector<std::string> relevant_ids(std::string_view query_id) const;
    std::vector<std::string> query_ids() const;
    std::size_t judgment_count() const;

private:
    std::map<std::string, std::set<std::string, std::less<>>, std::less<>>
        judgments_;
};

/// Sparse tf-idf document vector: term ids sorted ascending, parallel
/// weights, and the Euclidean norm of the weights.
struct TfidfVector {
    std::vector<std::uint32_t> term_ids;
    std::vector<double> weights;
    double norm;
};

/// Inverted vocabulary plus per-document tf-idf vectors for a fixed
/// collection. Weights use raw term counts times idf = ln(N / df).
class TfidfIndex {
public:
    std::size_t document_count() const noexcept { return vectors_.size(); }
    std::size_t vocabulary_size() const noexcept { return term_ids_.size(); }

    /// idf of a term, or 0 if the term is out of vocabulary.
    double idf(std::string_view term) const;

    /// Vector of the document at the given position in the indexed
    /// collection.
    const TfidfVector& document_vector(std::size_t position) const;

    /// Vectorizes free text against this index's vocabulary and idf table.
    /// Out-of-vocabulary terms are dropped.
    TfidfVector vectorize(std::string_view text) const;

private:
    friend TfidfIndex build_tfidf_index(std::span<const TextDocument> docs);

    std::map<std::string, std::uint32_t, std::less<>> term_ids_;
    std::vector<double> idf_;
    std::vector<TfidfVector> vectors_;
};

/// Lowercases ASCII, splits on anything outside [a-z0-9], and drops
/// single-character tokens and stopwords.
std::vector<std::string> tokenize(std::string_view text);

/// Membership test against the fixed English stopword list used by
/// tokenize().
bool is_stopword(std::string_view token);

TfidfIndex build_tfidf_index(std::span<const TextDocument> docs);
TfidfIndex build_tfidf_index(const Corpus& corpus);

/// Appends to the query the k most frequent terms across the given documents
/// (ties broken lexicographically), skipping terms already present in the
/// query. Terms are appended once each, in rank order.
std::string expand_query(std::string_view query_text,
                         std::span<const TextDocument> relevant_docs,
                         int k = 10);

/// Cosine similarity clamped into [0, 1]. Zero if either vector has zero
/// norm. Throws std::domain_error on dimension mismatch.
RelevanceProbability cosine_relevance(const FeatureVector& a,
                                      const FeatureVector& b);
RelevanceProbability cosine_relevance(const TfidfVector& a,
                                      const TfidfVector& b);

/// How multiple query sample images combine into one relevance value.
enum class ImageAggregation { Mean, Max };

std::string_view to_string(ImageAggregation agg);

/// Image-side relevance of a document: cosine against each query sample,
/// aggregated. Throws std::domain_error if the query has no samples.
RelevanceProbability image_relevance(const MultimodalQuery& query,
                                     const FeatureVector& doc_features,
                                     ImageAggregation agg = ImageAggregation::Mean);

struct ScoringOptions {
    /// Number of expansion terms drawn from the query's relevant documents.
    int expansion_terms = 10;
    ImageAggregation image_aggregation = ImageAggregation::Mean;
};

/// Scores every corpus document against the query on both modalities. The
/// text side matches tf-idf vectors against the query expanded with terms
/// from its relevant documents per the qrels. Results follow corpus order.
std::vector<ScoredDocument> score_corpus(const MultimodalQuery& query,
                                         const Corpus& corpus,
                                         const TfidfIndex& index,
                                         const Qrels& qrels,
                                         const ScoringOptions& options = {});

/// Convenience overload that builds the tf-idf index over the corpus first.
std::vector<ScoredDocument> score_corpus(const MultimodalQuery& query,
                                         const Corpus& corpus,
                                         const Qrels& qrels,
                                         const ScoringOptions& options = {});

}  // namespace qfuse
