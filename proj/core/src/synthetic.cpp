#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfuse/experiment.hpp"
#include "rng.hpp"

namespace qfuse {

namespace {

constexpr int kTokensPerDocument = 30;
constexpr int kTopicTerms = 8;
constexpr int kSampleVectorsPerQuery = 3;
constexpr double kSampleJitter = 0.08;
constexpr double kRelevantJitter = 0.15;
constexpr double kTopicTokenShare = 0.6;

std::vector<std::string> make_vocabulary(int size) {
    static constexpr std::string_view consonants = "bdfgklmnprst";
    static constexpr std::string_view vowels = "aeiou";
    const int syllable_count =
        static_cast<int>(consonants.size() * vowels.size());
    auto syllable = [&](int i) {
        std::string s;
        s += consonants[i / vowels.size()];
        s += vowels[i % vowels.size()];
        return s;
    };
    std::vector<std::string> vocab;
    vocab.reserve(size);
    for (int n = 0; static_cast<int>(vocab.size()) < size; ++n) {
        std::string word;
        if (n < syllable_count * syllable_count) {
            word = syllable(n / syllable_count) + syllable(n % syllable_count);
        } else {
            const int m = n - syllable_count * syllable_count;
            if (m >= syllable_count * syllable_count * syllable_count) {
                throw std::domain_error("vocabulary size is too large");
            }
            word = syllable(m / (syllable_count * syllable_count)) +
                   syllable((m / syllable_count) % syllable_count) +
                   syllable(m % syllable_count);
        }
        if (is_stopword(word)) continue;
        vocab.push_back(std::move(word));
    }
    return vocab;
}

std::string padded_id(const char* prefix, int index, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%0*d", prefix,
                  std::clamp(width, 1, 10), index);
    return buf;
}

int digits(int n) {
    int d = 1;
    while (n >= 10) {
        n /= 10;
        ++d;
    }
    return d;
}

std::string join_tokens(const std::vector<std::string_view>& tokens) {
    std::string text;
    for (const auto& t : tokens) {
        if (!text.empty()) text += ' ';
        text += t;
    }
    return text;
}

FeatureVector uniform_features(detail::DeterministicRng& rng, int dim) {
    FeatureVector f;
    f.values.reserve(dim);
    for (int d = 0; d < dim; ++d) f.values.push_back(rng.next_unit());
    return f;
}

FeatureVector jittered_features(detail::DeterministicRng& rng,
                                const FeatureVector& center, double jitter) {
    FeatureVector f;
    f.values.reserve(center.values.size());
    for (double c : center.values) {
        const double v = c + jitter * (2.0 * rng.next_unit() - 1.0);
        f.values.push_back(std::max(0.0, v));
    }
    return f;
}

}  // namespace

SyntheticDataset generate_synthetic_dataset(const SyntheticSpec& spec) {
    if (spec.n_queries < 1) {
        throw std::domain_error("need at least one query");
    }
    if (spec.docs_per_query < 1) {
        throw std::domain_error("need at least one document per query");
    }
    if (spec.vocab_size < 1) {
        throw std::domain_error("vocabulary must not be empty");
    }
    if (spec.feature_dim < 1) {
        throw std::domain_error("feature dimension must be positive");
    }
    if (spec.relevant_range.first < 1 ||
        spec.relevant_range.first > spec.relevant_range.second ||
        spec.relevant_range.second > spec.docs_per_query) {
        throw std::domain_error(
            "relevant-count range must satisfy 1 <= min <= max <= documents "
            "per query");
    }

    const std::vector<std::string> vocab = make_vocabulary(spec.vocab_size);
    const int topic_size = std::min(kTopicTerms, spec.vocab_size);
    detail::DeterministicRng rng(spec.seed);

    SyntheticDataset dataset;

    const int bg_width = std::max(5, digits(spec.docs_per_query));
    Corpus background;
    background.reserve(spec.docs_per_query);
    for (int i = 1; i <= spec.docs_per_query; ++i) {
        std::vector<std::string_view> tokens;
        tokens.reserve(kTokensPerDocument);
        for (int t = 0; t < kTokensPerDocument; ++t) {
            tokens.push_back(vocab[rng.next_below(vocab.size())]);
        }
        background.push_back({padded_id("bg", i, bg_width),
                              join_tokens(tokens),
                              uniform_features(rng, spec.feature_dim)});
    }

    const int q_width = std::max(2, digits(spec.n_queries));
    const int r_width = std::max(3, digits(spec.relevant_range.second));
    for (int q = 1; q <= spec.n_queries; ++q) {
        const std::string query_id = padded_id("q", q, q_width);

        const int span =
            spec.relevant_range.second - spec.relevant_range.first + 1;
        const int relevant_count =
            spec.relevant_range.first +
            static_cast<int>(rng.next_below(static_cast<std::uint64_t>(span)));

        std::vector<std::string_view> topic;
        while (static_cast<int>(topic.size()) < topic_size) {
            std::string_view term = vocab[rng.next_below(vocab.size())];
            if (std::find(topic.begin(), topic.end(), term) == topic.end()) {
                topic.push_back(term);
            }
        }

        const FeatureVector centroid = uniform_features(rng, spec.feature_dim);

        MultimodalQuery query;
        query.query_id = query_id;
        query.text = join_tokens(topic);
        for (int s = 0; s < kSampleVectorsPerQuery; ++s) {
            query.sample_image_features.push_back(
                jittered_features(rng, centroid, kSampleJitter));
        }
        dataset.queries.push_back(std::move(query));

        for (int r = 1; r <= relevant_count; ++r) {
            std::vector<std::string_view> tokens;
            tokens.reserve(kTokensPerDocument);
            for (int t = 0; t < kTokensPerDocument; ++t) {
                if (rng.next_unit() < kTopicTokenShare) {
                    tokens.push_back(topic[rng.next_below(topic.size())]);
                } else {
                    tokens.push_back(vocab[rng.next_below(vocab.size())]);
                }
            }
            std::string doc_id = query_id + "-" + padded_id("r", r, r_width);
            dataset.qrels.add(query_id, doc_id);
            dataset.corpus.push_back(
                {std::move(doc_id), join_tokens(tokens),
                 jittered_features(rng, centroid, kRelevantJitter)});
        }
    }

    dataset.corpus.insert(dataset.corpus.end(),
                          std::make_move_iterator(background.begin()),
                          std::make_move_iterator(background.end()));
    return dataset;
}

}  // namespace qfuse
