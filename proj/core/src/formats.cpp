#include "qfuse/formats.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qfuse {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line,
                       const std::string& what) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path.string() + ": cannot open file");
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t") == std::string::npos;
}

ordered_json parse_object(const std::filesystem::path& path, std::size_t line_no,
                          const std::string& line) {
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) fail(path, line_no, "invalid JSON");
    if (!j.is_object()) fail(path, line_no, "expected a JSON object");
    return j;
}

std::string string_field(const ordered_json& j, const char* key,
                         const std::filesystem::path& path,
                         std::size_t line_no) {
    if (!j.contains(key) || !j[key].is_string()) {
        fail(path, line_no, std::string("missing string field \"") + key + "\"");
    }
    return j[key].get<std::string>();
}

std::vector<double> number_array(const ordered_json& arr,
                                 const std::filesystem::path& path,
                                 std::size_t line_no, const std::string& owner) {
    if (!arr.is_array() || arr.empty()) {
        fail(path, line_no, owner + ": expected a non-empty number array");
    }
    std::vector<double> values;
    values.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) {
            fail(path, line_no, owner + ": feature values must be numbers");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            fail(path, line_no, owner + ": feature values must be finite");
        }
        values.push_back(d);
    }
    return values;
}

std::string fmt_double_json(double v) {
    return ordered_json(v).dump();
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path) {
    Corpus corpus;
    std::set<std::string, std::less<>> seen;
    std::size_t expected_dim = 0;
    std::size_t line_no = 0;
    for (const auto& line : read_lines(path)) {
        ++line_no;
        if (blank(line)) continue;
        const ordered_json j = parse_object(path, line_no, line);
        MultimodalDocument doc;
        doc.doc_id = string_field(j, "doc_id", path, line_no);
        if (doc.doc_id.empty()) fail(path, line_no, "empty doc_id");
        if (!seen.insert(doc.doc_id).second) {
            fail(path, line_no, "duplicate doc_id \"" + doc.doc_id + "\"");
        }
        doc.text = string_field(j, "text", path, line_no);
        if (!j.contains("image_features")) {
            fail(path, line_no, "missing field \"image_features\"");
        }
        doc.image_features.values = number_array(
            j["image_features"], path, line_no, "document " + doc.doc_id);
        if (corpus.empty()) {
            expected_dim = doc.image_features.values.size();
        } else if (doc.image_features.values.size() != expected_dim) {
            fail(path, line_no,
                 "document " + doc.doc_id + " has " +
                     std::to_string(doc.image_features.values.size()) +
                     " feature values, expected " +
                     std::to_string(expected_dim));
        }
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

std::vector<MultimodalQuery> load_queries(const std::filesystem::path& path) {
    std::vector<MultimodalQuery> queries;
    std::set<std::string, std::less<>> seen;
    std::size_t expected_dim = 0;
    bool have_dim = false;
    std::size_t line_no = 0;
    for (const auto& line : read_lines(path)) {
        ++line_no;
        if (blank(line)) continue;
        const ordered_json j = parse_object(path, line_no, line);
        MultimodalQuery query;
        query.query_id = string_field(j, "query_id", path, line_no);
        if (query.query_id.empty()) fail(path, line_no, "empty query_id");
        if (!seen.insert(query.query_id).second) {
            fail(path, line_no, "duplicate query_id \"" + query.query_id + "\"");
        }
        query.text = string_field(j, "text", path, line_no);
        if (!j.contains("sample_image_features") ||
            !j["sample_image_features"].is_array()) {
            fail(path, line_no, "missing array field \"sample_image_features\"");
        }
        const auto& samples = j["sample_image_features"];
        if (samples.empty() || samples.size() > 3) {
            fail(path, line_no,
                 "query " + query.query_id + " must carry 1 to 3 sample "
                 "image vectors, found " + std::to_string(samples.size()));
        }
        for (const auto& sample : samples) {
            FeatureVector f;
            f.values = number_array(sample, path, line_no,
                                    "query " + query.query_id);
            if (!have_dim) {
                expected_dim = f.values.size();
                have_dim = true;
            } else if (f.values.size() != expected_dim) {
                fail(path, line_no,
                     "query " + query.query_id + " has a sample with " +
                         std::to_string(f.values.size()) +
                         " feature values, expected " +
                         std::to_string(expected_dim));
            }
            query.sample_image_features.push_back(std::move(f));
        }
        queries.push_back(std::move(query));
    }
    return queries;
}

Qrels load_qrels(const std::filesystem::path& path) {
    Qrels qrels;
    std::size_t line_no = 0;
    for (const auto& line : read_lines(path)) {
        ++line_no;
        if (blank(line)) continue;
        const auto first_tab = line.find('\t');
        const auto second_tab =
            first_tab == std::string::npos ? std::string::npos
                                           : line.find('\t', first_tab + 1);
        if (second_tab == std::string::npos ||
            line.find('\t', second_tab + 1) != std::string::npos) {
            fail(path, line_no,
                 "expected three tab-separated fields "
                 "(query_id, doc_id, rel)");
        }
        const std::string query_id = line.substr(0, first_tab);
        const std::string doc_id =
            line.substr(first_tab + 1, second_tab - first_tab - 1);
        const std::string rel = line.substr(second_tab + 1);
        if (query_id.empty() || doc_id.empty()) {
            fail(path, line_no, "empty query_id or doc_id");
        }
        if (rel != "0" && rel != "1") {
            fail(path, line_no, "rel must be 0 or 1, found \"" + rel + "\"");
        }
        if (rel == "1") qrels.add(query_id, doc_id);
    }
    return qrels;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::string out;
    for (const auto& doc : corpus) {
        ordered_json j;
        j["doc_id"] = doc.doc_id;
        j["text"] = doc.text;
        j["image_features"] = doc.image_features.values;
        out += j.dump();
        out += '\n';
    }
    write_file_atomic(path, out);
}

void save_queries(std::span<const MultimodalQuery> queries,
                  const std::filesystem::path& path) {
    std::string out;
    for (const auto& query : queries) {
        ordered_json j;
        j["query_id"] = query.query_id;
        j["text"] = query.text;
        auto samples = ordered_json::array();
        for (const auto& f : query.sample_image_features) {
            samples.push_back(f.values);
        }
        j["sample_image_features"] = std::move(samples);
        out += j.dump();
        out += '\n';
    }
    write_file_atomic(path, out);
}

void save_qrels(const Qrels& qrels, const std::filesystem::path& path) {
    std::string out;
    for (const auto& query_id : qrels.query_ids()) {
        for (const auto& doc_id : qrels.relevant_ids(query_id)) {
            out += query_id;
            out += '\t';
            out += doc_id;
            out += "\t1\n";
        }
    }
    write_file_atomic(path, out);
}

std::string report_to_json(const ExperimentReport& report) {
    ordered_json j;
    j["config_fingerprint"] = report.config_fingerprint;
    ordered_json per_query;
    for (const auto& [query_id, stats] : report.per_query) {
        ordered_json q;
        q["max_s"] = stats.max_s;
        q["pair_count"] = stats.pair_count;
        q["violating_pairs"] = stats.violating_pairs;
        q["violation_pct"] = stats.violation_pct;
        per_query[query_id] = std::move(q);
    }
    j["per_query"] = std::move(per_query);
    j["queries_with_violation_pct"] = report.queries_with_violation_pct;
    j["seed"] = report.seed;
    return j.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& report) {
    std::string out = "query_id,pair_count,violating_pairs,violation_pct,max_s\n";
    for (const auto& [query_id, stats] : report.per_query) {
        out += query_id;
        out += ',';
        out += std::to_string(stats.pair_count);
        out += ',';
        out += std::to_string(stats.violating_pairs);
        out += ',';
        out += fmt_double_json(stats.violation_pct);
        out += ',';
        out += fmt_double_json(stats.max_s);
        out += '\n';
    }
    return out;
}

std::string scored_documents_to_jsonl(std::span<const ScoredDocument> docs) {
    std::string out;
    for (const auto& doc : docs) {
        ordered_json j;
        j["doc_id"] = doc.doc_id;
        j["p_text"] = doc.p_text.value();
        j["p_image"] = doc.p_image.value();
        out += j.dump();
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ParseError("cannot write file " + tmp.string());
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw ParseError("failed writing file " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace qfuse
