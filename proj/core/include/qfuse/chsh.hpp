#pragma once

#include <numbers>

#include "qfuse/composite.hpp"
#include "qfuse/hilbert.hpp"

namespace qfuse {

struct ScoredDocument;

/// Largest correlation magnitude any local hidden-variable model reaches.
inline constexpr double kClassicalBound = 2.0;

/// Largest correlation magnitude quantum mechanics reaches: 2*sqrt(2).
inline constexpr double kTsirelsonBound = 2.0 * std::numbers::sqrt2;

/// Slack added to the classical bound before declaring a violation, so that
/// rounding noise on an exactly-2 statistic is not reported as one.
inline constexpr double kDefaultViolationTolerance = 1e-9;

/// Which per-modality relevance score backs an observable.
enum class ObservableKind { TextRelevance, ImageRelevance };

/// A +/-1-valued relevance observable for one document in a pair.
struct BinaryObservable {
    /// Probability of the +1 (relevant) outcome.
    RelevanceProbability p_plus;
    ObservableKind kind;
    /// 1 or 2: which document of the pair this observable measures.
    int document_slot;

    /// Expected value 2*p - 1, in [-1, 1].
    double expectation() const noexcept { return 2.0 * p_plus.value() - 1.0; }
};

/// The four pairwise correlations and the combined statistic.
struct ChshResult {
    /// Correlations by modality pair: text-text, text(1)-image(2)... each
    /// subscript names the modality measured on document 1 and document 2.
    double e_tt;
    double e_ti;
    double e_it;
    double e_ii;
    /// |e_tt + e_ti + e_it - e_ii|.
    double s_value;
    /// s_value > 2 beyond tolerance.
    bool violates_classical;
    /// s_value > 2*sqrt(2) beyond tolerance. Flags a computation bug: no
    /// correlation set, classical or quantum, can reach past this bound.
    bool exceeds_tsirelson;
};

/// Correlation of two independent +/-1 observables with success
/// probabilities p_a and p_b: (2*p_a - 1) * (2*p_b - 1).
double expectation_independent(RelevanceProbability p_a,
                               RelevanceProbability p_b);

/// Combines four correlations into the statistic s = |e_tt + e_ti + e_it -
/// e_ii| and classifies it against both bounds. Throws std::domain_error if
/// any input lies outside [-1, 1] by more than 1e-9; inputs within that
/// slack are clamped.
ChshResult chsh_statistic(double e_tt, double e_ti, double e_it, double e_ii,
                          double tolerance = kDefaultViolationTolerance);

/// Evaluates the statistic for a scored document pair, treating the four
/// per-modality relevance probabilities as independent observables.
ChshResult chsh_from_document_pair(const ScoredDocument& d1,
                                   const ScoredDocument& d2,
                                   double tolerance = kDefaultViolationTolerance);

/// One measurement direction: a basis angle with its doubled-angle sine and
/// cosine precomputed, since every correlation evaluation needs exactly
/// those two numbers.
class MeasurementSetting {
public:
    explicit MeasurementSetting(BasisAngle angle);
    explicit MeasurementSetting(double radians);

    BasisAngle angle() const noexcept { return angle_; }
    double cos_2theta() const noexcept { return cos_2theta_; }
    double sin_2theta() const noexcept { return sin_2theta_; }

private:
    BasisAngle angle_;
    double cos_2theta_;
    double sin_2theta_;
};

/// Correlation of the two +/-1 spin observables along directions a (on
/// document 1) and b (on document 2) in the given composite state.
double quantum_expectation(const CompositeState& c, const MeasurementSetting& a,
                           const MeasurementSetting& b);

/// Evaluates the statistic for a composite state with document 1 measured
/// along a or a_prime and document 2 along b or b_prime. The four slots are
/// filled as e_tt = E(a', b), e_ti = E(a, b), e_it = E(a', b'),
/// e_ii = E(a, b'), so the minus sign lands on the (a, b') correlation.
ChshResult quantum_chsh(const CompositeState& c, const MeasurementSetting& a,
                        const MeasurementSetting& a_prime,
                        const MeasurementSetting& b,
                        const MeasurementSetting& b_prime,
                        double tolerance = kDefaultViolationTolerance);

}  // namespace qfuse
