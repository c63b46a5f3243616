#include "qfuse/chsh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "numfmt.hpp"
#include "qfuse/retrieval.hpp"

namespace qfuse {

double expectation_independent(RelevanceProbability p_a,
                               RelevanceProbability p_b) {
    return (2.0 * p_a.value() - 1.0) * (2.0 * p_b.value() - 1.0);
}

namespace {

double checked_correlation(double e, const char* name) {
    constexpr double slack = 1e-9;
    if (!std::isfinite(e) || std::abs(e) > 1.0 + slack) {
        throw std::domain_error(std::string("correlation ") + name + " = " +
                                detail::fmt_double(e) +
                                " is outside [-1, 1]");
    }
    return std::clamp(e, -1.0, 1.0);
}

}  // namespace

ChshResult chsh_statistic(double e_tt, double e_ti, double e_it, double e_ii,
                          double tolerance) {
    ChshResult r;
    r.e_tt = checked_correlation(e_tt, "e_tt");
    r.e_ti = checked_correlation(e_ti, "e_ti");
    r.e_it = checked_correlation(e_it, "e_it");
    r.e_ii = checked_correlation(e_ii, "e_ii");
    r.s_value = std::abs(r.e_tt + r.e_ti + r.e_it - r.e_ii);
    r.violates_classical = r.s_value > kClassicalBound + tolerance;
    r.exceeds_tsirelson = r.s_value > kTsirelsonBound + tolerance;
    return r;
}

ChshResult chsh_from_document_pair(const ScoredDocument& d1,
                                   const ScoredDocument& d2,
                                   double tolerance) {
    const BinaryObservable t1{d1.p_text, ObservableKind::TextRelevance, 1};
    const BinaryObservable i1{d1.p_image, ObservableKind::ImageRelevance, 1};
    const BinaryObservable t2{d2.p_text, ObservableKind::TextRelevance, 2};
    const BinaryObservable i2{d2.p_image, ObservableKind::ImageRelevance, 2};
    return chsh_statistic(t1.expectation() * t2.expectation(),
                          t2.expectation() * i1.expectation(),
                          t1.expectation() * i2.expectation(),
                          i1.expectation() * i2.expectation(), tolerance);
}

MeasurementSetting::MeasurementSetting(BasisAngle angle)
    : angle_(angle),
      cos_2theta_(std::cos(2.0 * angle.radians())),
      sin_2theta_(std::sin(2.0 * angle.radians())) {}

MeasurementSetting::MeasurementSetting(double radians)
    : MeasurementSetting(BasisAngle(radians)) {}

double quantum_expectation(const CompositeState& c,
                           const MeasurementSetting& a,
                           const MeasurementSetting& b) {
    // Observable along angle t is [[cos 2t, sin 2t], [sin 2t, -cos 2t]];
    // the correlation is <C, A C B> over the coefficient matrix C (B is
    // symmetric, so transposition drops out).
    const auto& v = c.coefficients();
    const double ca = a.cos_2theta(), sa = a.sin_2theta();
    const double cb = b.cos_2theta(), sb = b.sin_2theta();
    const double m00 = v[0], m01 = v[1], m10 = v[2], m11 = v[3];
    const double a00 = ca * m00 + sa * m10;
    const double a01 = ca * m01 + sa * m11;
    const double a10 = sa * m00 - ca * m10;
    const double a11 = sa * m01 - ca * m11;
    const double q00 = a00 * cb + a01 * sb;
    const double q01 = a00 * sb - a01 * cb;
    const double q10 = a10 * cb + a11 * sb;
    const double q11 = a10 * sb - a11 * cb;
    return m00 * q00 + m01 * q01 + m10 * q10 + m11 * q11;
}

ChshResult quantum_chsh(const CompositeState& c, const MeasurementSetting& a,
                        const MeasurementSetting& a_prime,
                        const MeasurementSetting& b,
                        const MeasurementSetting& b_prime, double tolerance) {
    return chsh_statistic(quantum_expectation(c, a_prime, b),
                          quantum_expectation(c, a, b),
                          quantum_expectation(c, a_prime, b_prime),
                          quantum_expectation(c, a, b_prime), tolerance);
}

}  // namespace qfuse
