#pragma once

#include <string_view>

namespace qfuse {

/// Channel through which a document's relevance is judged.
enum class Modality { Text, Image };

/// Outcome of a binary relevance measurement.
enum class Outcome { Relevant, NonRelevant };

std::string_view to_string(Modality m);
std::string_view to_string(Outcome o);

/// Largest tolerated deviation from unit norm before a state vector is
/// rejected instead of silently rescaled.
inline constexpr double kUnitNormTolerance = 1e-9;

/// A probability of relevance, guaranteed to lie in [0, 1].
class RelevanceProbability {
public:
    /// Throws std::domain_error if v is outside [0, 1] or not finite.
    explicit RelevanceProbability(double v);

    /// Clamps v into [0, 1] instead of throwing. Non-finite v still throws.
    static RelevanceProbability clamped(double v);

    double value() const noexcept { return value_; }

    /// Probability of the complementary outcome, 1 - value().
    RelevanceProbability complement() const noexcept;

    friend bool operator==(const RelevanceProbability&,
                           const RelevanceProbability&) = default;

private:
    double value_;
};

/// Measurement-basis rotation angle, normalized into [0, pi).
///
/// A half turn flips the sign of both basis vectors, which no relevance
/// probability can detect, so angles are identified modulo pi.
class BasisAngle {
public:
    explicit BasisAngle(double radians);

    double radians() const noexcept { return radians_; }

    friend bool operator==(const BasisAngle&, const BasisAngle&) = default;

private:
    double radians_;
};

/// Unit vector in the two-dimensional relevance space of one document under
/// one modality. Coordinates are real amplitudes over the (relevant,
/// non-relevant) basis.
class DocumentState {
public:
    /// Throws std::domain_error if the squared norm deviates from 1 by more
    /// than kUnitNormTolerance; otherwise rescales to an exact unit vector.
    DocumentState(double amp_relevant, double amp_nonrelevant, Modality m);

    double amp_relevant() const noexcept { return amp_relevant_; }
    double amp_nonrelevant() const noexcept { return amp_nonrelevant_; }
    Modality modality() const noexcept { return modality_; }

private:
    double amp_relevant_;
    double amp_nonrelevant_;
    Modality modality_;
};

/// Builds the state (sqrt(p), sqrt(1-p)) whose relevant-outcome probability
/// is exactly p.
DocumentState state_from_probability(RelevanceProbability p, Modality m);

/// Probability of observing the given outcome, i.e. the squared amplitude.
RelevanceProbability born_probability(const DocumentState& s, Outcome o);

/// Re-expresses the state in a basis rotated counter-clockwise by the given
/// angle. The new coordinates are (c*a + s*b, -s*a + c*b) with c = cos,
/// s = sin of the angle.
DocumentState rotate_basis(const DocumentState& s, BasisAngle angle);

/// Probability that a state prepared as definitely relevant in one basis is
/// measured relevant in a basis rotated by the given angle: cos^2(angle).
RelevanceProbability cross_basis_probability(BasisAngle angle);

}  // namespace qfuse
