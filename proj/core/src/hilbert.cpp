#include "qfuse/hilbert.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "numfmt.hpp"

namespace qfuse {

std::string_view to_string(Modality m) {
    switch (m) {
        case Modality::Text: return "text";
        case Modality::Image: return "image";
    }
    return "?";
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Relevant: return "relevant";
        case Outcome::NonRelevant: return "non-relevant";
    }
    return "?";
}

RelevanceProbability::RelevanceProbability(double v) : value_(v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::domain_error("relevance probability " +
                                detail::fmt_double(v) +
                                " is outside [0, 1]");
    }
}

RelevanceProbability RelevanceProbability::clamped(double v) {
    if (std::isnan(v)) {
        throw std::domain_error("relevance probability is NaN");
    }
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return RelevanceProbability(v);
}

RelevanceProbability RelevanceProbability::complement() const noexcept {
    return RelevanceProbability(1.0 - value_);
}

BasisAngle::BasisAngle(double radians) {
    if (!std::isfinite(radians)) {
        throw std::domain_error("basis angle must be finite");
    }
    double r = std::fmod(radians, std::numbers::pi);
    if (r < 0.0) r += std::numbers::pi;
    if (r >= std::numbers::pi) r = 0.0;
    radians_ = r;
}

DocumentState::DocumentState(double amp_relevant, double amp_nonrelevant,
                             Modality m)
    : amp_relevant_(amp_relevant),
      amp_nonrelevant_(amp_nonrelevant),
      modality_(m) {
    const double norm_sq =
        amp_relevant * amp_relevant + amp_nonrelevant * amp_nonrelevant;
    if (!std::isfinite(norm_sq) ||
        std::abs(norm_sq - 1.0) > kUnitNormTolerance) {
        throw std::domain_error(
            "document state (" + detail::fmt_double(amp_relevant) + ", " +
            detail::fmt_double(amp_nonrelevant) +
            ") is not a unit vector: squared norm " +
            detail::fmt_double(norm_sq));
    }
    const double norm = std::sqrt(norm_sq);
    amp_relevant_ /= norm;
    amp_nonrelevant_ /= norm;
}

DocumentState state_from_probability(RelevanceProbability p, Modality m) {
    return DocumentState(std::sqrt(p.value()), std::sqrt(1.0 - p.value()), m);
}

RelevanceProbability born_probability(const DocumentState& s, Outcome o) {
    const double amp =
        o == Outcome::Relevant ? s.amp_relevant() : s.amp_nonrelevant();
    return RelevanceProbability::clamped(amp * amp);
}

DocumentState rotate_basis(const DocumentState& s, BasisAngle angle) {
    const double c = std::cos(angle.radians());
    const double sn = std::sin(angle.radians());
    return DocumentState(c * s.amp_relevant() + sn * s.amp_nonrelevant(),
                         -sn * s.amp_relevant() + c * s.amp_nonrelevant(),
                         s.modality());
}

RelevanceProbability cross_basis_probability(BasisAngle angle) {
    const double c = std::cos(angle.radians());
    return RelevanceProbability::clamped(c * c);
}

}  // namespace qfuse
