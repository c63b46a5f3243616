// Acceptance gate: each numbered criterion prints exactly one PASS or FAIL
// line. Exits nonzero if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qfuse/chsh.hpp"
#include "qfuse/composite.hpp"
#include "qfuse/experiment.hpp"
#include "qfuse/formats.hpp"
#include "qfuse/hilbert.hpp"
#include "qfuse/retrieval.hpp"

using namespace qfuse;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const double kRootHalf = std::numbers::sqrt2 / 2.0;

class Workspace {
public:
    Workspace() {
        dir_ = fs::temp_directory_path() /
               ("qfuse_acceptance_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    ~Workspace() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    std::string path(const char* name) const { return (dir_ / name).string(); }

private:
    fs::path dir_;
};

int run_command(const std::string& args) {
    const std::string cmd =
        std::string(QFUSE_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

struct Gate {
    bool all_passed = true;

    void report(int index, bool ok, const std::string& description,
                const std::string& detail) {
        all_passed = all_passed && ok;
        std::cout << "C" << index << (ok ? " PASS: " : " FAIL: ")
                  << description;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n" << std::flush;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// C1: a full run over a generated dataset at the full experiment shape
// (30 queries, 300-document subsets, 11..98 relevant) reports zero
// violating pairs.
void criterion_1(Gate& gate, const Workspace& ws) {
    const std::string dir = ws.path("full_shape");
    const std::string synth_cmd =
        "synth --out " + dir +
        " --queries 30 --docs 300 --relevant-min 11 --relevant-max 98 "
        "--vocab 500 --dim 2048 --seed 42";
    if (run_command(synth_cmd) != 0) {
        gate.report(1, false, "full experiment reports zero violating pairs",
                    "dataset generation failed");
        return;
    }

    const std::string report_path = ws.path("full_shape_report.json");
    const auto start = std::chrono::steady_clock::now();
    const int code = run_command(
        "experiment --corpus " + dir + "/corpus.jsonl --queries " + dir +
        "/queries.jsonl --qrels " + dir + "/qrels.tsv --target-subset-size "
        "300 --seed 42 --out " + report_path);
    const double seconds = elapsed_seconds(start);
    if (code != 0) {
        gate.report(1, false, "full experiment reports zero violating pairs",
                    "experiment command exited with code " +
                        std::to_string(code));
        return;
    }

    const json report = json::parse(read_file(report_path));
    std::int64_t violating = 0;
    std::int64_t pairs = 0;
    bool pair_counts_in_range = true;
    for (const auto& [qid, stats] : report.at("per_query").items()) {
        violating += stats.at("violating_pairs").get<std::int64_t>();
        const auto count = stats.at("pair_count").get<std::int64_t>();
        pairs += count;
        if (count < 55 || count > 4753) pair_counts_in_range = false;
    }
    const double query_pct =
        report.at("queries_with_violation_pct").get<double>();

    const bool ok = report.at("per_query").size() == 30 && violating == 0 &&
                    query_pct == 0.0 && pair_counts_in_range &&
                    seconds < 120.0;
    gate.report(1, ok,
                "full experiment over 30 queries reports zero violating pairs",
                std::to_string(violating) + " violations in " +
                    std::to_string(pairs) + " pairs, " + fmt(seconds) + " s");
}

// C2: no probability quadruple pushes the statistic past the classical
// bound, over random sampling plus a full coarse grid.
void criterion_2(Gate& gate) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240817);
    double max_s = 0.0;

    const auto pair_s = [](double t1, double i1, double t2, double i2) {
        const ScoredDocument d1{"a", RelevanceProbability(t1),
                                RelevanceProbability(i1)};
        const ScoredDocument d2{"b", RelevanceProbability(t2),
                                RelevanceProbability(i2)};
        return chsh_from_document_pair(d1, d2).s_value;
    };

    for (int i = 0; i < 100000; ++i) {
        max_s = std::max(max_s, pair_s(uniform_unit(rng), uniform_unit(rng),
                                       uniform_unit(rng), uniform_unit(rng)));
    }
    for (int a = 0; a <= 20; ++a)
        for (int b = 0; b <= 20; ++b)
            for (int c = 0; c <= 20; ++c)
                for (int d = 0; d <= 20; ++d) {
                    max_s = std::max(max_s, pair_s(a / 20.0, b / 20.0,
                                                   c / 20.0, d / 20.0));
                }

    const double seconds = elapsed_seconds(start);
    const bool ok = max_s <= 2.0 + 1e-12 && seconds < 10.0;
    gate.report(2, ok,
                "document-pair statistic stays within the classical bound",
                "max s " + fmt(max_s) + " over 100000 random + 194481 grid "
                "quadruples, " + fmt(seconds) + " s");
}

// C3: the entangled state hits 2*sqrt(2) at the canonical angles, and a
// grid search over measurement angles gets within 1e-3 of that value
// without ever exceeding it.
//
// The grid has step pi/720 in each of the four angles. For this state the
// four correlations depend only on angle differences, and the grid is
// uniform modulo pi, so shifting all four angles by the first one maps
// grid tuples to grid tuples and the first angle can be pinned to zero.
void criterion_3(Gate& gate) {
    const CompositeState phi = bell_state(BellStateKind::PhiPlus);

    const ChshResult canonical = quantum_chsh(
        phi, MeasurementSetting(0.0), MeasurementSetting(kPi / 4),
        MeasurementSetting(kPi / 8), MeasurementSetting(3 * kPi / 8));
    const bool canonical_ok =
        std::abs(canonical.s_value - kTsirelsonBound) <= 1e-9;

    constexpr int kSteps = 720;
    std::vector<MeasurementSetting> settings;
    settings.reserve(kSteps);
    for (int k = 0; k < kSteps; ++k) {
        settings.emplace_back(kPi * k / kSteps);
    }
    std::vector<double> table(kSteps * kSteps);
    for (int i = 0; i < kSteps; ++i) {
        for (int j = 0; j < kSteps; ++j) {
            table[i * kSteps + j] =
                quantum_expectation(phi, settings[i], settings[j]);
        }
    }

    double best = -1.0;
    int best_ap = 0, best_b = 0, best_bp = 0;
    std::vector<double> plus(kSteps), minus(kSteps);
    for (int ap = 0; ap < kSteps; ++ap) {
        for (int j = 0; j < kSteps; ++j) {
            plus[j] = table[ap * kSteps + j] + table[j];
            minus[j] = table[ap * kSteps + j] - table[j];
        }
        const auto [pmin, pmax] =
            std::minmax_element(plus.begin(), plus.end());
        const auto [mmin, mmax] =
            std::minmax_element(minus.begin(), minus.end());
        const double high = *pmax + *mmax;
        const double low = -(*pmin + *mmin);
        const double candidate = std::max(high, low);
        if (candidate > best) {
            best = candidate;
            best_ap = ap;
            if (high >= low) {
                best_b = static_cast<int>(pmax - plus.begin());
                best_bp = static_cast<int>(mmax - minus.begin());
            } else {
                best_b = static_cast<int>(pmin - plus.begin());
                best_bp = static_cast<int>(mmin - minus.begin());
            }
        }
    }

    const ChshResult at_best =
        quantum_chsh(phi, settings[0], settings[best_ap], settings[best_b],
                     settings[best_bp]);
    const bool consistent = std::abs(at_best.s_value - best) <= 1e-12;
    const bool ok = canonical_ok && consistent &&
                    best >= kTsirelsonBound - 1e-3 &&
                    best <= kTsirelsonBound + 1e-9;
    gate.report(3, ok,
                "entangled statistic reaches the quantum bound and no "
                "angle grid point exceeds it",
                "canonical s " + fmt(canonical.s_value) + ", grid max " +
                    fmt(best));
}

// C4: product states decompose with one singular value, the two entangled
// reference states with two equal ones.
void criterion_4(Gate& gate) {
    std::mt19937_64 rng(20240818);
    bool products_ok = true;
    for (int i = 0; i < 1000; ++i) {
        const double u = 2 * kPi * uniform_unit(rng);
        const double v = 2 * kPi * uniform_unit(rng);
        const CompositeState product = tensor_product(
            DocumentState(std::cos(u), std::sin(u), Modality::Text),
            DocumentState(std::cos(v), std::sin(v), Modality::Text));
        if (schmidt_decompose(product, 1e-9).schmidt_number != 1) {
            products_ok = false;
        }
    }

    bool bells_ok = true;
    for (const BellStateKind kind :
         {BellStateKind::PhiPlus, BellStateKind::PsiPlus}) {
        const SchmidtDecomposition d = schmidt_decompose(bell_state(kind));
        if (d.schmidt_number != 2 ||
            std::abs(d.singular_values[0] - kRootHalf) > 1e-12 ||
            std::abs(d.singular_values[1] - kRootHalf) > 1e-12) {
            bells_ok = false;
        }
    }

    gate.report(4, products_ok && bells_ok,
                "decomposition separates products from entangled states",
                "1000 products rank 1, both reference states rank 2 with "
                "equal weights");
}

// C5: measuring one side of the default entangled state fully determines
// the other side, and the rotated-basis overlap follows cos^2.
void criterion_5(Gate& gate) {
    const CompositeState phi = bell_state(BellStateKind::PhiPlus);

    const CollapseResult up = measure_collapse(phi, Outcome::Relevant);
    const CollapseResult down = measure_collapse(phi, Outcome::NonRelevant);
    const auto& uc = up.collapsed.coefficients();
    const auto& dc = down.collapsed.coefficients();
    const double partner_up = uc[0] * uc[0] + uc[2] * uc[2];
    const double partner_down = dc[1] * dc[1] + dc[3] * dc[3];

    const double cross = cross_basis_probability(BasisAngle(kPi / 4)).value();

    const bool ok = std::abs(up.probability - 0.5) <= 1e-12 &&
                    std::abs(down.probability - 0.5) <= 1e-12 &&
                    std::abs(partner_up - 1.0) <= 1e-12 &&
                    std::abs(partner_down - 1.0) <= 1e-12 &&
                    std::abs(cross - 0.5) <= 1e-12;
    gate.report(5, ok,
                "one-sided measurement determines the partner document",
                "outcome probability " + fmt(up.probability) +
                    ", partner certainty " + fmt(partner_up) +
                    ", quarter-turn overlap " + fmt(cross));
}

// C6: the default entangled state looks the same in every rotated basis.
void criterion_6(Gate& gate) {
    const CompositeState phi = bell_state(BellStateKind::PhiPlus);
    std::mt19937_64 rng(20240819);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double angle = kPi * uniform_unit(rng);
        worst = std::max(worst,
                         check_rotation_invariance(phi, BasisAngle(angle)));
    }
    gate.report(6, worst <= 1e-12,
                "entangled state is invariant under basis rotation",
                "worst deviation " + fmt(worst) + " over 100 angles");
}

// C7: every state constructor emits unit-norm states.
void criterion_7(Gate& gate) {
    std::mt19937_64 rng(20240820);
    double worst = 0.0;

    for (int i = 0; i < 10000; ++i) {
        const DocumentState s = state_from_probability(
            RelevanceProbability(uniform_unit(rng)), Modality::Text);
        const double norm = s.amp_relevant() * s.amp_relevant() +
                            s.amp_nonrelevant() * s.amp_nonrelevant();
        worst = std::max(worst, std::abs(norm - 1.0));
    }

    for (int i = 0; i < 10000; ++i) {
        const double u = 2 * kPi * uniform_unit(rng);
        const double v = 2 * kPi * uniform_unit(rng);
        const CompositeState c = tensor_product(
            DocumentState(std::cos(u), std::sin(u), Modality::Image),
            DocumentState(std::cos(v), std::sin(v), Modality::Image));
        double norm = 0.0;
        for (double x : c.coefficients()) norm += x * x;
        worst = std::max(worst, std::abs(norm - 1.0));
    }

    for (int i = 0; i < 10000; ++i) {
        double w = 2.0 * uniform_unit(rng) - 1.0;
        double wp = 2.0 * uniform_unit(rng) - 1.0;
        if (std::abs(w) + std::abs(wp) < 1e-6) w = 1.0;
        const CompositeState c = bell_state(
            i % 2 == 0 ? BellStateKind::PhiPlus : BellStateKind::PsiPlus,
            BellWeights{w, wp});
        double norm = 0.0;
        for (double x : c.coefficients()) norm += x * x;
        worst = std::max(worst, std::abs(norm - 1.0));
    }

    gate.report(7, worst <= 1e-12, "state constructors emit unit norms",
                "worst norm deviation " + fmt(worst) +
                    " over 10000 inputs per constructor");
}

// C8: identical seed and configuration give byte-identical report files.
void criterion_8(Gate& gate, const Workspace& ws) {
    const std::string dir = ws.path("repeat");
    if (run_command("synth --out " + dir +
                    " --queries 5 --docs 60 --relevant-min 5 --relevant-max "
                    "15 --vocab 120 --dim 8 --seed 7") != 0) {
        gate.report(8, false, "equal seeds give byte-identical reports",
                    "dataset generation failed");
        return;
    }
    const std::string io = "--corpus " + dir + "/corpus.jsonl --queries " +
                           dir + "/queries.jsonl --qrels " + dir +
                           "/qrels.tsv --seed 123 --target-subset-size 60";
    const std::string r1 = ws.path("repeat_1.json");
    const std::string r2 = ws.path("repeat_2.json");
    const std::string c1 = ws.path("repeat_1.csv");
    const std::string c2 = ws.path("repeat_2.csv");
    const bool ran =
        run_command("experiment " + io + " --out " + r1 + " --csv " + c1) ==
            0 &&
        run_command("experiment " + io + " --out " + r2 + " --csv " + c2) ==
            0;
    const std::string json1 = read_file(r1);
    const bool ok = ran && !json1.empty() && json1 == read_file(r2) &&
                    read_file(c1) == read_file(c2);
    gate.report(8, ok, "equal seeds give byte-identical reports",
                std::to_string(json1.size()) + " byte reports compared");
}

// C9: reported pair counts follow r(r-1)/2 at the small and large ends of
// the per-query relevant-count range.
void criterion_9(Gate& gate) {
    Corpus corpus;
    Qrels qrels;
    std::vector<MultimodalQuery> queries;
    const auto add_query = [&](const std::string& qid, const char* topic,
                               int relevant) {
        MultimodalQuery q;
        q.query_id = qid;
        q.text = topic;
        q.sample_image_features = {FeatureVector{{1.0, 0.5}}};
        queries.push_back(q);
        for (int i = 0; i < relevant; ++i) {
            const std::string id = qid + "-doc" + (i < 10 ? "00" : "0") +
                                   std::to_string(i);
            corpus.push_back({id,
                              std::string(topic) + " item" +
                                  std::to_string(i),
                              FeatureVector{{1.0, 0.01 * i}}});
            qrels.add(qid, id);
        }
    };
    add_query("q11", "alpha", 11);
    add_query("q98", "gamma", 98);

    const ExperimentReport report =
        run_experiment(queries, corpus, qrels, ExperimentConfig{});
    const std::int64_t small = report.per_query.at("q11").pair_count;
    const std::int64_t large = report.per_query.at("q98").pair_count;

    QuerySubset probe;
    probe.query_id = "probe";
    for (int i = 0; i < 98; ++i) {
        probe.relevant_ids.push_back("p" + std::to_string(100 + i));
    }
    const std::size_t enumerated = enumerate_relevant_pairs(probe).size();

    const bool ok = small == 55 && large == 4753 && enumerated == 4753;
    gate.report(9, ok, "pair counts follow r(r-1)/2 at both extremes",
                "r=11 gives " + std::to_string(small) + ", r=98 gives " +
                    std::to_string(large));
}

}  // namespace

int main() {
    Workspace ws;
    Gate gate;
    try {
        criterion_1(gate, ws);
        criterion_2(gate);
        criterion_3(gate);
        criterion_4(gate);
        criterion_5(gate);
        criterion_6(gate);
        criterion_7(gate);
        criterion_8(gate, ws);
        criterion_9(gate);
    } catch (const std::exception& e) {
        std::cout << "ABORT: unexpected exception: " << e.what() << "\n";
        return 1;
    }
    return gate.all_passed ? 0 : 1;
}
