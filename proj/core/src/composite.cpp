#include "qfuse/composite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "numfmt.hpp"

namespace qfuse {

std::string_view to_string(BellStateKind k) {
    switch (k) {
        case BellStateKind::PhiPlus: return "phi-plus";
        case BellStateKind::PsiPlus: return "psi-plus";
    }
    return "?";
}

CompositeState::CompositeState(std::array<double, 4> coefficients, Modality m)
    : coefficients_(coefficients), modality_(m) {
    double norm_sq = 0.0;
    for (double c : coefficients) norm_sq += c * c;
    if (!std::isfinite(norm_sq) ||
        std::abs(norm_sq - 1.0) > kUnitNormTolerance) {
        throw std::domain_error(
            "composite state is not a unit vector: squared norm " +
            detail::fmt_double(norm_sq));
    }
    const double norm = std::sqrt(norm_sq);
    for (double& c : coefficients_) c /= norm;
}

CompositeState tensor_product(const DocumentState& d1,
                              const DocumentState& d2) {
    if (d1.modality() != d2.modality()) {
        throw std::domain_error(
            "cannot compose states of different modalities: " +
            std::string(to_string(d1.modality())) + " with " +
            std::string(to_string(d2.modality())));
    }
    return CompositeState(
        {d1.amp_relevant() * d2.amp_relevant(),
         d1.amp_relevant() * d2.amp_nonrelevant(),
         d1.amp_nonrelevant() * d2.amp_relevant(),
         d1.amp_nonrelevant() * d2.amp_nonrelevant()},
        d1.modality());
}

CompositeState bell_state(BellStateKind kind,
                          std::optional<BellWeights> weights, Modality m) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    double w = inv_sqrt2;
    double w_prime = inv_sqrt2;
    if (weights) {
        const double norm = std::hypot(weights->w, weights->w_prime);
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw std::domain_error("bell state weights must not both be zero");
        }
        w = weights->w / norm;
        w_prime = weights->w_prime / norm;
    }
    switch (kind) {
        case BellStateKind::PhiPlus:
            return CompositeState({w, 0.0, 0.0, w_prime}, m);
        case BellStateKind::PsiPlus:
            return CompositeState({0.0, w, w_prime, 0.0}, m);
    }
    throw std::domain_error("unknown bell state kind");
}

CollapseResult measure_collapse(const CompositeState& c,
                                Outcome first_outcome) {
    const auto& v = c.coefficients();
    const bool relevant = first_outcome == Outcome::Relevant;
    const double a = relevant ? v[0] : v[2];
    const double b = relevant ? v[1] : v[3];
    const double p = a * a + b * b;
    if (p <= 0.0) {
        throw std::domain_error(
            "cannot collapse onto an outcome of probability zero (" +
            std::string(to_string(first_outcome)) + " for document 1)");
    }
    const double norm = std::sqrt(p);
    std::array<double, 4> collapsed{0.0, 0.0, 0.0, 0.0};
    collapsed[relevant ? 0 : 2] = a / norm;
    collapsed[relevant ? 1 : 3] = b / norm;
    return CollapseResult{p, CompositeState(collapsed, c.modality())};
}

SchmidtDecomposition schmidt_decompose(const CompositeState& c,
                                       double tolerance) {
    const auto& v = c.coefficients();
    // Singular values of the 2x2 matrix [[v0, v1], [v2, v3]], closed form.
    // The small one comes from |det| / sigma_1 to dodge cancellation.
    const double trace_gram = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
    const double det = v[0] * v[3] - v[1] * v[2];
    const double disc =
        std::sqrt(std::max(0.0, trace_gram * trace_gram - 4.0 * det * det));
    const double sigma1 = std::sqrt((trace_gram + disc) / 2.0);
    const double sigma2 = sigma1 > 0.0 ? std::abs(det) / sigma1 : 0.0;
    int schmidt_number = 0;
    if (sigma1 > tolerance) ++schmidt_number;
    if (sigma2 > tolerance) ++schmidt_number;
    return SchmidtDecomposition{{sigma1, sigma2}, schmidt_number, tolerance};
}

bool is_entangled(const CompositeState& c, double tolerance) {
    return schmidt_decompose(c, tolerance).schmidt_number == 2;
}

double check_rotation_invariance(const CompositeState& c, BasisAngle angle) {
    const auto& v = c.coefficients();
    const double co = std::cos(angle.radians());
    const double sn = std::sin(angle.radians());
    // Rotating both locals by R maps the coefficient matrix M to R M R^T.
    const double m00 = v[0], m01 = v[1], m10 = v[2], m11 = v[3];
    const double r00 = co * m00 + sn * m10;
    const double r01 = co * m01 + sn * m11;
    const double r10 = -sn * m00 + co * m10;
    const double r11 = -sn * m01 + co * m11;
    const std::array<double, 4> rotated{
        co * r00 + sn * r01, -sn * r00 + co * r01,
        co * r10 + sn * r11, -sn * r10 + co * r11};
    double max_dev = 0.0;
    for (int i = 0; i < 4; ++i) {
        max_dev = std::max(max_dev, std::abs(rotated[i] - v[i]));
    }
    return max_dev;
}

}  // namespace qfuse
