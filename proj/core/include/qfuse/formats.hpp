#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>

#include "qfuse/experiment.hpp"
#include "qfuse/retrieval.hpp"

namespace qfuse {

/// A malformed or unreadable input file. The message carries the file path
/// and, where it applies, the line number.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reads one document per line: {"doc_id": ..., "text": ...,
/// "image_features": [...]}. Validates ids (nonempty, unique), features
/// (finite, consistent dimension across the file).
Corpus load_corpus(const std::filesystem::path& path);

/// Reads one query per line: {"query_id": ..., "text": ...,
/// "sample_image_features": [[...], ...]} with 1 to 3 sample vectors.
std::vector<MultimodalQuery> load_queries(const std::filesystem::path& path);

/// Reads tab-separated "query_id<TAB>doc_id<TAB>rel" lines with rel 0 or 1.
/// Only rel = 1 lines become judgments.
Qrels load_qrels(const std::filesystem::path& path);

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
void save_queries(std::span<const MultimodalQuery> queries,
                  const std::filesystem::path& path);
void save_qrels(const Qrels& qrels, const std::filesystem::path& path);

/// Serializes a report with sorted keys, so equal reports produce identical
/// bytes.
std::string report_to_json(const ExperimentReport& report);

/// Header "query_id,pair_count,violating_pairs,violation_pct,max_s" plus one
/// row per query, sorted by query id.
std::string report_to_csv(const ExperimentReport& report);

/// One line per document: {"doc_id": ..., "p_text": ..., "p_image": ...}.
std::string scored_documents_to_jsonl(std::span<const ScoredDocument> docs);

/// Writes content through a temp file plus rename, so readers never observe
/// a half-written file.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

}  // namespace qfuse
