#include "qfuse/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfuse {

std::string_view to_string(ImageAggregation agg) {
    switch (agg) {
        case ImageAggregation::Mean: return "mean";
        case ImageAggregation::Max: return "max";
    }
    return "?";
}

void Qrels::add(std::string query_id, std::string doc_id) {
    judgments_[std::move(query_id)].insert(std::move(doc_id));
}

bool Qrels::is_relevant(std::string_view query_id,
                        std::string_view doc_id) const {
    auto it = judgments_.find(query_id);
    return it != judgments_.end() && it->second.contains(doc_id);
}

bool Qrels::has_query(std::string_view query_id) const {
    return judgments_.contains(query_id);
}

std::vector<std::string> Qrels::relevant_ids(std::string_view query_id) const {
    auto it = judgments_.find(query_id);
    if (it == judgments_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::vector<std::string> Qrels::query_ids() const {
    std::vector<std::string> ids;
    ids.reserve(judgments_.size());
    for (const auto& [qid, _] : judgments_) ids.push_back(qid);
    return ids;
}

std::size_t Qrels::judgment_count() const {
    std::size_t n = 0;
    for (const auto& [_, docs] : judgments_) n += docs.size();
    return n;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.size() >= 2 && !is_stopword(current)) {
            tokens.push_back(current);
        }
        current.clear();
    };
    for (char raw : text) {
        char c = raw;
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            current.push_back(c);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

namespace {

std::map<std::string, std::size_t, std::less<>> term_counts(
    std::string_view text) {
    std::map<std::string, std::size_t, std::less<>> counts;
    for (auto& tok : tokenize(text)) ++counts[std::move(tok)];
    return counts;
}

}  // namespace

double TfidfIndex::idf(std::string_view term) const {
    auto it = term_ids_.find(term);
    return it == term_ids_.end() ? 0.0 : idf_[it->second];
}

const TfidfVector& TfidfIndex::document_vector(std::size_t position) const {
    return vectors_.at(position);
}

TfidfVector TfidfIndex::vectorize(std::string_view text) const {
    TfidfVector v;
    double norm_sq = 0.0;
    for (const auto& [term, count] : term_counts(text)) {
        auto it = term_ids_.find(term);
        if (it == term_ids_.end()) continue;
        const double w = static_cast<double>(count) * idf_[it->second];
        v.term_ids.push_back(it->second);
        v.weights.push_back(w);
        norm_sq += w * w;
    }
    v.norm = std::sqrt(norm_sq);
    return v;
}

TfidfIndex build_tfidf_index(std::span<const TextDocument> docs) {
    if (docs.empty()) {
        throw std::domain_error("cannot index an empty corpus");
    }
    TfidfIndex index;
    std::vector<std::map<std::string, std::size_t, std::less<>>> counts;
    counts.reserve(docs.size());
    std::map<std::string, std::uint32_t, std::less<>> df;
    for (const auto& doc : docs) {
        counts.push_back(term_counts(doc.text));
        for (const auto& [term, _] : counts.back()) ++df[term];
    }

    std::uint32_t next_id = 0;
    for (const auto& [term, _] : df) index.term_ids_[term] = next_id++;

    index.idf_.resize(df.size());
    const double n = static_cast<double>(docs.size());
    for (const auto& [term, doc_freq] : df) {
        index.idf_[index.term_ids_[term]] =
            std::log(n / static_cast<double>(doc_freq));
    }

    index.vectors_.reserve(docs.size());
    for (const auto& doc_counts : counts) {
        TfidfVector v;
        double norm_sq = 0.0;
        for (const auto& [term, count] : doc_counts) {
            const std::uint32_t id = index.term_ids_[term];
            const double w = static_cast<double>(count) * index.idf_[id];
            v.term_ids.push_back(id);
            v.weights.push_back(w);
            norm_sq += w * w;
        }
        v.norm = std::sqrt(norm_sq);
        index.vectors_.push_back(std::move(v));
    }
    return index;
}

TfidfIndex build_tfidf_index(const Corpus& corpus) {
    std::vector<TextDocument> docs;
    docs.reserve(corpus.size());
    for (const auto& doc : corpus) docs.push_back({doc.doc_id, doc.text});
    return build_tfidf_index(docs);
}

std::string expand_query(std::string_view query_text,
                         std::span<const TextDocument> relevant_docs, int k) {
    if (k < 0) {
        throw std::domain_error("expansion term count must be non-negative");
    }
    const auto query_tokens = tokenize(query_text);
    const std::set<std::string, std::less<>> in_query(query_tokens.begin(),
                                                      query_tokens.end());
    std::map<std::string, std::size_t, std::less<>> freq;
    for (const auto& doc : relevant_docs) {
        for (auto& tok : tokenize(doc.text)) ++freq[std::move(tok)];
    }

    std::vector<std::pair<std::string_view, std::size_t>> ranked;
    ranked.reserve(freq.size());
    for (const auto& [term, count] : freq) {
        if (!in_query.contains(term)) ranked.emplace_back(term, count);
    }
    // Map order is lexicographic, so a stable sort on count keeps ties
    // lexicographic.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) {
                         return a.second > b.second;
                     });
    if (ranked.size() > static_cast<std::size_t>(k)) ranked.resize(k);

    std::string expanded(query_text);
    for (const auto& [term, _] : ranked) {
        expanded += ' ';
        expanded += term;
    }
    return expanded;
}

RelevanceProbability cosine_relevance(const FeatureVector& a,
                                      const FeatureVector& b) {
    if (a.values.size() != b.values.size()) {
        throw std::domain_error(
            "feature dimension mismatch: " + std::to_string(a.values.size()) +
            " vs " + std::to_string(b.values.size()));
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) return RelevanceProbability(0.0);
    return RelevanceProbability::clamped(dot / std::sqrt(na * nb));
}

RelevanceProbability cosine_relevance(const TfidfVector& a,
                                      const TfidfVector& b) {
    if (a.norm == 0.0 || b.norm == 0.0) return RelevanceProbability(0.0);
    double dot = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.term_ids.size() && j < b.term_ids.size()) {
        if (a.term_ids[i] < b.term_ids[j]) {
            ++i;
        } else if (a.term_ids[i] > b.term_ids[j]) {
            ++j;
        } else {
            dot += a.weights[i] * b.weights[j];
            ++i;
            ++j;
        }
    }
    return RelevanceProbability::clamped(dot / (a.norm * b.norm));
}

RelevanceProbability image_relevance(const MultimodalQuery& query,
                                     const FeatureVector& doc_features,
                                     ImageAggregation agg) {
    if (query.sample_image_features.empty()) {
        throw std::domain_error("query " + query.query_id +
                                " has no sample image features");
    }
    double sum = 0.0;
    double best = 0.0;
    for (const auto& sample : query.sample_image_features) {
        const double c = cosine_relevance(sample, doc_features).value();
        sum += c;
        best = std::max(best, c);
    }
    const double value =
        agg == ImageAggregation::Max
            ? best
            : sum / static_cast<double>(query.sample_image_features.size());
    return RelevanceProbability::clamped(value);
}

std::vector<ScoredDocument> score_corpus(const MultimodalQuery& query,
                                         const Corpus& corpus,
                                         const TfidfIndex& index,
                                         const Qrels& qrels,
                                         const ScoringOptions& options) {
    if (index.document_count() != corpus.size()) {
        throw std::domain_error(
            "index covers " + std::to_string(index.document_count()) +
            " documents but the corpus has " + std::to_string(corpus.size()));
    }
    std::vector<TextDocument> relevant_docs;
    for (const auto& doc : corpus) {
        if (qrels.is_relevant(query.query_id, doc.doc_id)) {
            relevant_docs.push_back({doc.doc_id, doc.text});
        }
    }
    const std::string expanded =
        expand_query(query.text, relevant_docs, options.expansion_terms);
    const TfidfVector qvec = index.vectorize(expanded);

    std::vector<ScoredDocument> scored;
    scored.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        try {
            scored.push_back(
                {corpus[i].doc_id,
                 cosine_relevance(qvec, index.document_vector(i)),
                 image_relevance(query, corpus[i].image_features,
                                 options.image_aggregation)});
        } catch (const std::domain_error& e) {
            throw std::domain_error("scoring document " + corpus[i].doc_id +
                                    " for query " + query.query_id + ": " +
                                    e.what());
        }
    }
    return scored;
}

std::vector<ScoredDocument> score_corpus(const MultimodalQuery& query,
                                         const Corpus& corpus,
                                         const Qrels& qrels,
                                         const ScoringOptions& options) {
    return score_corpus(query, corpus, build_tfidf_index(corpus), qrels,
                        options);
}

}  // namespace qfuse
