#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qfuse/chsh.hpp"
#include "qfuse/experiment.hpp"
#include "qfuse/formats.hpp"
#include "qfuse/retrieval.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

std::string sanitize_id(std::string_view id) {
    std::string out;
    out.reserve(id.size());
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '_' ||
                        c == '-';
        out.push_back(ok ? c : '_');
    }
    return out;
}

qfuse::ImageAggregation parse_aggregation(const std::string& name) {
    if (name == "mean") return qfuse::ImageAggregation::Mean;
    if (name == "max") return qfuse::ImageAggregation::Max;
    throw std::domain_error("unknown image aggregation \"" + name +
                            "\" (expected mean or max)");
}

qfuse::PairScope parse_pair_scope(const std::string& name) {
    if (name == "relevant-only") return qfuse::PairScope::RelevantOnly;
    if (name == "all") return qfuse::PairScope::All;
    throw std::domain_error("unknown pair scope \"" + name +
                            "\" (expected relevant-only or all)");
}

ordered_json chsh_to_json(const qfuse::ChshResult& r) {
    ordered_json j;
    j["e_tt"] = r.e_tt;
    j["e_ti"] = r.e_ti;
    j["e_it"] = r.e_it;
    j["e_ii"] = r.e_ii;
    j["s_value"] = r.s_value;
    j["violates_classical"] = r.violates_classical;
    j["exceeds_tsirelson"] = r.exceeds_tsirelson;
    return j;
}

struct IoPaths {
    std::string corpus;
    std::string queries;
    std::string qrels;
};

void add_io_options(CLI::App* cmd, IoPaths& paths) {
    cmd->add_option("--corpus", paths.corpus, "Corpus JSONL file")
        ->required();
    cmd->add_option("--queries", paths.queries, "Queries JSONL file")
        ->required();
    cmd->add_option("--qrels", paths.qrels, "Relevance judgments TSV file")
        ->required();
}

int run_score(const IoPaths& paths, const std::string& out_dir,
              int expansion_terms, const std::string& aggregation) {
    const qfuse::Corpus corpus = qfuse::load_corpus(paths.corpus);
    const auto queries = qfuse::load_queries(paths.queries);
    const qfuse::Qrels qrels = qfuse::load_qrels(paths.qrels);
    const qfuse::TfidfIndex index = qfuse::build_tfidf_index(corpus);

    qfuse::ScoringOptions options;
    options.expansion_terms = expansion_terms;
    options.image_aggregation = parse_aggregation(aggregation);

    std::filesystem::create_directories(out_dir);
    for (const auto& query : queries) {
        const auto scored =
            qfuse::score_corpus(query, corpus, index, qrels, options);
        const auto path = std::filesystem::path(out_dir) /
                          ("scores_" + sanitize_id(query.query_id) + ".jsonl");
        qfuse::write_file_atomic(path,
                                 qfuse::scored_documents_to_jsonl(scored));
    }
    std::cerr << "scored " << corpus.size() << " documents for "
              << queries.size() << " queries into " << out_dir << "\n";
    return kExitOk;
}

int run_pair_chsh(const IoPaths& paths, const std::string& query_id,
                  std::string doc1, std::string doc2, double tolerance) {
    if (doc1 == doc2) {
        throw std::domain_error("need two distinct documents, got \"" + doc1 +
                                "\" twice");
    }
    if (doc2 < doc1) std::swap(doc1, doc2);

    const qfuse::Corpus corpus = qfuse::load_corpus(paths.corpus);
    const auto queries = qfuse::load_queries(paths.queries);
    const qfuse::Qrels qrels = qfuse::load_qrels(paths.qrels);

    const qfuse::MultimodalQuery* query = nullptr;
    for (const auto& q : queries) {
        if (q.query_id == query_id) query = &q;
    }
    if (!query) {
        throw std::domain_error("query \"" + query_id +
                                "\" not found in " + paths.queries);
    }

    const auto scored = qfuse::score_corpus(*query, corpus, qrels);
    const qfuse::ScoredDocument* s1 = nullptr;
    const qfuse::ScoredDocument* s2 = nullptr;
    for (const auto& s : scored) {
        if (s.doc_id == doc1) s1 = &s;
        if (s.doc_id == doc2) s2 = &s;
    }
    if (!s1 || !s2) {
        throw std::domain_error("document \"" + (s1 ? doc2 : doc1) +
                                "\" not found in " + paths.corpus);
    }

    const qfuse::ChshResult result =
        qfuse::chsh_from_document_pair(*s1, *s2, tolerance);
    ordered_json j;
    j["query_id"] = query_id;
    j["doc_id_1"] = doc1;
    j["doc_id_2"] = doc2;
    j["p_text_1"] = s1->p_text.value();
    j["p_image_1"] = s1->p_image.value();
    j["p_text_2"] = s2->p_text.value();
    j["p_image_2"] = s2->p_image.value();
    j.update(chsh_to_json(result));
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_experiment_cmd(const IoPaths& paths, const std::string& out_path,
                       const std::string& csv_path,
                       const qfuse::ExperimentConfig& config) {
    const qfuse::Corpus corpus = qfuse::load_corpus(paths.corpus);
    const auto queries = qfuse::load_queries(paths.queries);
    const qfuse::Qrels qrels = qfuse::load_qrels(paths.qrels);

    const qfuse::ExperimentReport report =
        qfuse::run_experiment(queries, corpus, qrels, config);

    qfuse::write_file_atomic(out_path, qfuse::report_to_json(report));
    if (!csv_path.empty()) {
        qfuse::write_file_atomic(csv_path, qfuse::report_to_csv(report));
    }
    std::cerr << "queries: " << report.per_query.size()
              << ", queries with violation: "
              << report.queries_with_violation_pct << "%\n";
    return kExitOk;
}

int run_quantum_demo(const std::vector<double>& angles,
                     const std::string& bell_kind,
                     const std::vector<double>& weights,
                     const std::vector<double>& product, double tolerance) {
    qfuse::CompositeState state = [&] {
        if (!product.empty()) {
            const auto d1 = qfuse::state_from_probability(
                qfuse::RelevanceProbability(product[0]),
                qfuse::Modality::Text);
            const auto d2 = qfuse::state_from_probability(
                qfuse::RelevanceProbability(product[1]),
                qfuse::Modality::Text);
            return qfuse::tensor_product(d1, d2);
        }
        const qfuse::BellStateKind kind = [&] {
            if (bell_kind == "phi-plus") return qfuse::BellStateKind::PhiPlus;
            if (bell_kind == "psi-plus") return qfuse::BellStateKind::PsiPlus;
            throw std::domain_error("unknown bell state \"" + bell_kind +
                                    "\" (expected phi-plus or psi-plus)");
        }();
        std::optional<qfuse::BellWeights> w;
        if (!weights.empty()) {
            w = qfuse::BellWeights{weights[0], weights[1]};
        }
        return qfuse::bell_state(kind, w);
    }();

    const qfuse::MeasurementSetting a(angles[0]);
    const qfuse::MeasurementSetting a_prime(angles[1]);
    const qfuse::MeasurementSetting b(angles[2]);
    const qfuse::MeasurementSetting b_prime(angles[3]);
    const qfuse::ChshResult result =
        qfuse::quantum_chsh(state, a, a_prime, b, b_prime, tolerance);

    ordered_json j;
    if (!product.empty()) {
        j["state"] = {{"product_p1", product[0]}, {"product_p2", product[1]}};
    } else {
        j["state"] = {{"bell", bell_kind}};
    }
    j["coefficients"] = state.coefficients();
    j["angles"] = angles;
    j.update(chsh_to_json(result));
    j["classical_bound"] = qfuse::kClassicalBound;
    j["tsirelson_bound"] = qfuse::kTsirelsonBound;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_synth(const std::string& out_dir, const qfuse::SyntheticSpec& spec) {
    const qfuse::SyntheticDataset dataset =
        qfuse::generate_synthetic_dataset(spec);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    qfuse::save_corpus(dataset.corpus, dir / "corpus.jsonl");
    qfuse::save_queries(dataset.queries, dir / "queries.jsonl");
    qfuse::save_qrels(dataset.qrels, dir / "qrels.tsv");
    std::cerr << "wrote " << dataset.corpus.size() << " documents, "
              << dataset.queries.size() << " queries, "
              << dataset.qrels.judgment_count() << " judgments to " << out_dir
              << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Models per-modality document relevance as two-level quantum states "
        "and tests document pairs against the classical correlation bound."};
    app.require_subcommand(1);

    IoPaths score_paths;
    std::string score_out;
    int score_expansion = 10;
    std::string score_agg = "mean";
    auto* score = app.add_subcommand(
        "score", "Score every corpus document against every query");
    add_io_options(score, score_paths);
    score->add_option("--out", score_out, "Output directory for score files")
        ->required();
    score->add_option("--expansion-terms", score_expansion,
                      "Expansion terms taken from relevant documents")
        ->check(CLI::NonNegativeNumber);
    score->add_option("--image-aggregation", score_agg,
                      "How sample-image cosines combine: mean or max");

    IoPaths pair_paths;
    std::string pair_query, pair_doc1, pair_doc2;
    double pair_tolerance = qfuse::kDefaultViolationTolerance;
    auto* pair = app.add_subcommand(
        "pair-chsh",
        "Correlation statistic for one scored document pair "
        "(documents are ordered by id)");
    add_io_options(pair, pair_paths);
    pair->add_option("--query", pair_query, "Query id")->required();
    pair->add_option("--doc1", pair_doc1, "First document id")->required();
    pair->add_option("--doc2", pair_doc2, "Second document id")->required();
    pair->add_option("--tolerance", pair_tolerance,
                     "Slack over the classical bound")
        ->check(CLI::PositiveNumber);

    IoPaths exp_paths;
    std::string exp_out, exp_csv;
    qfuse::ExperimentConfig exp_config;
    std::string exp_agg = "mean", exp_scope = "relevant-only";
    auto* experiment = app.add_subcommand(
        "experiment", "Pair statistics over every query's document subset");
    add_io_options(experiment, exp_paths);
    experiment->add_option("--out", exp_out, "Report JSON path")->required();
    experiment->add_option("--csv", exp_csv, "Optional per-query CSV path");
    experiment->add_option("--seed", exp_config.seed, "Subset sampling seed");
    experiment->add_option("--target-subset-size",
                           exp_config.target_subset_size,
                           "Documents evaluated per query")
        ->check(CLI::NonNegativeNumber);
    experiment->add_option("--violation-tolerance",
                           exp_config.violation_tolerance,
                           "Slack over the classical bound")
        ->check(CLI::PositiveNumber);
    experiment->add_option("--expansion-terms", exp_config.expansion_terms,
                           "Expansion terms taken from relevant documents")
        ->check(CLI::NonNegativeNumber);
    experiment->add_option("--image-aggregation", exp_agg,
                           "How sample-image cosines combine: mean or max");
    experiment->add_option("--pair-scope", exp_scope,
                           "Pairs tested per query: relevant-only or all");

    std::vector<double> demo_angles{0.0, std::numbers::pi / 4,
                                    std::numbers::pi / 8,
                                    3 * std::numbers::pi / 8};
    std::string demo_bell = "phi-plus";
    std::vector<double> demo_weights, demo_product;
    double demo_tolerance = qfuse::kDefaultViolationTolerance;
    auto* demo = app.add_subcommand(
        "quantum-demo",
        "Correlation statistic of an entangled or product state under "
        "rotated measurement bases");
    demo->add_option("--angles", demo_angles,
                     "Measurement angles a a' b b' in radians")
        ->expected(4);
    auto* bell_opt = demo->add_option(
        "--bell", demo_bell, "Entangled state shape: phi-plus or psi-plus");
    auto* weights_opt =
        demo->add_option("--weights", demo_weights,
                         "Bell weights w w' (renormalized)")
            ->expected(2);
    demo->add_option("--product", demo_product,
                     "Product state from two relevance probabilities p1 p2")
        ->expected(2)
        ->excludes(bell_opt)
        ->excludes(weights_opt);
    demo->add_option("--tolerance", demo_tolerance,
                     "Slack over the classical bound")
        ->check(CLI::PositiveNumber);

    std::string synth_out;
    qfuse::SyntheticSpec synth_spec;
    auto* synth = app.add_subcommand(
        "synth", "Generate a synthetic corpus, queries, and judgments");
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--queries", synth_spec.n_queries, "Number of queries")
        ->check(CLI::PositiveNumber);
    synth->add_option("--docs", synth_spec.docs_per_query,
                      "Background documents (also per-query pool size)")
        ->check(CLI::PositiveNumber);
    synth->add_option("--relevant-min", synth_spec.relevant_range.first,
                      "Smallest per-query relevant count")
        ->check(CLI::PositiveNumber);
    synth->add_option("--relevant-max", synth_spec.relevant_range.second,
                      "Largest per-query relevant count")
        ->check(CLI::PositiveNumber);
    synth->add_option("--vocab", synth_spec.vocab_size, "Vocabulary size")
        ->check(CLI::PositiveNumber);
    synth->add_option("--dim", synth_spec.feature_dim,
                      "Image feature dimension")
        ->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_spec.seed, "Generation seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (score->parsed()) {
            return run_score(score_paths, score_out, score_expansion,
                             score_agg);
        }
        if (pair->parsed()) {
            return run_pair_chsh(pair_paths, pair_query, pair_doc1, pair_doc2,
                                 pair_tolerance);
        }
        if (experiment->parsed()) {
            exp_config.image_aggregation = parse_aggregation(exp_agg);
            exp_config.pair_scope = parse_pair_scope(exp_scope);
            return run_experiment_cmd(exp_paths, exp_out, exp_csv, exp_config);
        }
        if (demo->parsed()) {
            return run_quantum_demo(demo_angles, demo_bell, demo_weights,
                                    demo_product, demo_tolerance);
        }
        if (synth->parsed()) {
            return run_synth(synth_out, synth_spec);
        }
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const qfuse::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
