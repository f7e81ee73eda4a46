#pragma once

#include <array>
#include <cmath>

namespace acsidm {

/// Unknown parameter of the incidence/mortality family.
///
/// `onset_age` is the age (years) where incidence starts, `incidence_slope`
/// is the linear slope of the incidence rate (per year squared, natural
/// units) and `mortality_ratio` is the mortality rate ratio c23/c13.
struct ThetaParams {
    double onset_age = 0.0;
    double incidence_slope = 0.0;
    double mortality_ratio = 1.0;

    bool operator==(const ThetaParams&) const = default;
};

/// The generator used for the diabetes test scenario: (30, 1/2000, e^0.7).
inline ThetaParams theta_true() { return {30.0, 1.0 / 2000.0, std::exp(0.7)}; }

/// True when slope >= 0 and ratio > 0 (both finite).
bool is_valid(const ThetaParams& theta);

/// Transition rates at one instant, per year.
struct Rates {
    double c12 = 0.0;  // Non-diseased -> Diseased
    double c13 = 0.0;  // Non-diseased -> Dead
    double c23 = 0.0;  // Diseased -> Dead
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

// Gompertz background mortality exp(a + b t); known, never fitted.
inline constexpr double kBackgroundIntercept = -10.7;
inline constexpr double kBackgroundSlope = 0.1;

double incidence_rate(const ThetaParams& theta, double t);
double background_mortality(double t);
double diseased_mortality(const ThetaParams& theta, double t);

/// A(t) with rows (-c12-c13, 0, 0), (c12, -c23, 0), (c13, c23, 0).
Matrix3 system_matrix(const Rates& r);
Matrix3 system_matrix(const ThetaParams& theta, double t);

/// Evaluator of the three transition rates and their integrals.
///
/// The integrals are what the microsimulation inverts; implementations must
/// return the exact integral of `rates(s)` over [a, b] for a <= b.
class RateModel {
public:
    virtual ~RateModel() = default;

    virtual Rates rates(double t) const = 0;
    /// Integral of c12 + c13 over [a, b].
    virtual double cumulative_exit_hazard(double a, double b) const = 0;
    /// Integral of c23 over [a, b].
    virtual double cumulative_diseased_mortality(double a, double b) const = 0;
};

/// c12 = theta2 max(0, t - theta1), c13 Gompertz, c23 = theta3 c13.
class ParametricRateModel final : public RateModel {
public:
    explicit ParametricRateModel(const ThetaParams& theta);

    const ThetaParams& theta() const { return theta_; }

    Rates rates(double t) const override;
    double cumulative_exit_hazard(double a, double b) const override;
    double cumulative_diseased_mortality(double a, double b) const override;

    double cumulative_incidence(double a, double b) const;
    static double cumulative_background_mortality(double a, double b);

private:
    ThetaParams theta_;
};

/// Time-constant rates; the case with a closed-form matrix exponential.
class ConstantRateModel final : public RateModel {
public:
    ConstantRateModel(double c12, double c13, double c23);

    Rates rates(double) const override { return rates_; }
    double cumulative_exit_hazard(double a, double b) const override;
    double cumulative_diseased_mortality(double a, double b) const override;

private:
    Rates rates_;
};

}  // namespace acsidm
