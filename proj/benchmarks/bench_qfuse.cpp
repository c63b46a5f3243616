#include <benchmark/benchmark.h>

#include <numbers>
#include <string>
#include <vector>

#include "qfuse/chsh.hpp"
#include "qfuse/composite.hpp"
#include "qfuse/experiment.hpp"
#include "qfuse/retrieval.hpp"

namespace {

using namespace qfuse;

SyntheticDataset small_dataset() {
    SyntheticSpec spec;
    spec.n_queries = 5;
    spec.docs_per_query = 120;
    spec.relevant_range = {8, 20};
    spec.vocab_size = 200;
    spec.feature_dim = 64;
    spec.seed = 42;
    return generate_synthetic_dataset(spec);
}

void BM_ChshFromDocumentPair(benchmark::State& state) {
    const ScoredDocument d1{"a", RelevanceProbability(0.9),
                            RelevanceProbability(0.2)};
    const ScoredDocument d2{"b", RelevanceProbability(0.7),
                            RelevanceProbability(0.6)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(chsh_from_document_pair(d1, d2));
    }
}
BENCHMARK(BM_ChshFromDocumentPair);

void BM_QuantumChsh(benchmark::State& state) {
    const CompositeState phi = bell_state(BellStateKind::PhiPlus);
    const MeasurementSetting a(0.0);
    const MeasurementSetting ap(std::numbers::pi / 4);
    const MeasurementSetting b(std::numbers::pi / 8);
    const MeasurementSetting bp(3 * std::numbers::pi / 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(quantum_chsh(phi, a, ap, b, bp));
    }
}
BENCHMARK(BM_QuantumChsh);

void BM_SchmidtDecompose(benchmark::State& state) {
    const CompositeState c({0.6, 0.1, -0.1, 0.78740078740118},
                           Modality::Text);
    for (auto _ : state) {
        benchmark::DoNotOptimize(schmidt_decompose(c));
    }
}
BENCHMARK(BM_SchmidtDecompose);

void BM_Tokenize(benchmark::State& state) {
    const std::string text =
        "The quick brown fox jumps over the lazy dog while a plane lands "
        "at the airport runway just before a red sunset";
    for (auto _ : state) {
        benchmark::DoNotOptimize(tokenize(text));
    }
}
BENCHMARK(BM_Tokenize);

void BM_BuildTfidfIndex(benchmark::State& state) {
    const SyntheticDataset data = small_dataset();
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_tfidf_index(data.corpus));
    }
}
BENCHMARK(BM_BuildTfidfIndex);

void BM_ScoreCorpus(benchmark::State& state) {
    const SyntheticDataset data = small_dataset();
    const TfidfIndex index = build_tfidf_index(data.corpus);
    for (auto _ : state) {
        benchmark::DoNotOptimize(score_corpus(data.queries.front(),
                                              data.corpus, index, data.qrels,
                                              ScoringOptions{}));
    }
}
BENCHMARK(BM_ScoreCorpus);

void BM_RunExperiment(benchmark::State& state) {
    const SyntheticDataset data = small_dataset();
    ExperimentConfig config;
    config.target_subset_size = 120;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            run_experiment(data.queries, data.corpus, data.qrels, config));
    }
}
BENCHMARK(BM_RunExperiment);

}  // namespace

BENCHMARK_MAIN();
