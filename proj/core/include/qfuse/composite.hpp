#pragma once

#include <array>
#include <optional>

#include "qfuse/hilbert.hpp"

namespace qfuse {

/// Singular values at or below this threshold are treated as zero when
/// counting Schmidt terms.
inline constexpr double kSchmidtTolerance = 1e-9;

/// Joint state of a document pair under one modality: a unit vector in the
/// four-dimensional tensor-product space. Coefficients are ordered over the
/// product basis (RR, RN, NR, NN) where R = relevant, N = non-relevant and
/// the first letter refers to document 1.
class CompositeState {
public:
    /// Throws std::domain_error if the squared norm deviates from 1 by more
    /// than kUnitNormTolerance; otherwise rescales to an exact unit vector.
    CompositeState(std::array<double, 4> coefficients, Modality m);

    const std::array<double, 4>& coefficients() const noexcept {
        return coefficients_;
    }
    double coefficient(int i) const { return coefficients_.at(i); }
    Modality modality() const noexcept { return modality_; }

private:
    std::array<double, 4> coefficients_;
    Modality modality_;
};

/// The two maximally entangled shapes used as references: PhiPlus correlates
/// equal outcomes (w, 0, 0, w'), PsiPlus correlates opposite outcomes
/// (0, w, w', 0).
enum class BellStateKind { PhiPlus, PsiPlus };

std::string_view to_string(BellStateKind k);

/// Weights for the two nonzero coefficients of a Bell-shaped state. They are
/// renormalized, so only their ratio matters.
struct BellWeights {
    double w;
    double w_prime;
};

/// Result of factoring a composite state across the two documents.
struct SchmidtDecomposition {
    /// Non-negative, sorted descending, squares sum to 1.
    std::array<double, 2> singular_values;
    /// Count of singular values strictly above the tolerance: 1 means the
    /// state is a product state, 2 means it is entangled.
    int schmidt_number;
    double tolerance_used;
};

/// Outcome of measuring document 1 and keeping the conditional state of
/// document 2.
struct CollapseResult {
    /// Probability of the measured outcome for document 1.
    double probability;
    /// Post-measurement composite state: document 2's conditional state
    /// embedded with document 1 frozen at the measured outcome.
    CompositeState collapsed;
};

/// Joint state of two independent documents. Throws std::domain_error if the
/// modalities differ.
CompositeState tensor_product(const DocumentState& d1, const DocumentState& d2);

/// Builds a Bell-shaped state of the given kind. Default weights are
/// 1/sqrt(2) each; explicit weights are renormalized. Throws
/// std::domain_error if both weights are zero.
CompositeState bell_state(BellStateKind kind,
                          std::optional<BellWeights> weights = std::nullopt,
                          Modality m = Modality::Text);

/// Projects document 1 onto the given outcome. Throws std::domain_error if
/// that outcome has probability zero.
CollapseResult measure_collapse(const CompositeState& c, Outcome first_outcome);

/// Factors the state across the two documents via the singular values of its
/// 2x2 coefficient matrix.
SchmidtDecomposition schmidt_decompose(const CompositeState& c,
                                       double tolerance = kSchmidtTolerance);

/// True when the Schmidt number is 2, i.e. the state does not factor into a
/// product of single-document states.
bool is_entangled(const CompositeState& c, double tolerance = kSchmidtTolerance);

/// Largest componentwise change of the coefficient vector when both local
/// bases are rotated by the same angle. Zero (up to rounding) for states
/// whose correlations look identical in every rotated basis.
double check_rotation_invariance(const CompositeState& c, BasisAngle angle);

}  // namespace qfuse
