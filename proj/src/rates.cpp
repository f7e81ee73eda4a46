#include "acsidm/rates.hpp"

#include <algorithm>
#include <stdexcept>

namespace acsidm {

bool is_valid(const ThetaParams& theta)
{
    return std::isfinite(theta.onset_age) && std::isfinite(theta.incidence_slope) &&
           std::isfinite(theta.mortality_ratio) && theta.incidence_slope >= 0.0 &&
           theta.mortality_ratio > 0.0;
}

double incidence_rate(const ThetaParams& theta, double t)
{
    return theta.incidence_slope * std::max(0.0, t - theta.onset_age);
}

double background_mortality(double t)
{
    return std::exp(kBackgroundIntercept + kBackgroundSlope * t);
}

double diseased_mortality(const ThetaParams& theta, double t)
{
    return theta.mortality_ratio * background_mortality(t);
}

Matrix3 system_matrix(const Rates& r)
{
    return Matrix3{{{-r.c12 - r.c13, 0.0, 0.0}, {r.c12, -r.c23, 0.0}, {r.c13, r.c23, 0.0}}};
}

Matrix3 system_matrix(const ThetaParams& theta, double t)
{
    return system_matrix(ParametricRateModel(theta).rates(t));
}

ParametricRateModel::ParametricRateModel(const ThetaParams& theta) : theta_(theta)
{
    if (!is_valid(theta))
        throw std::invalid_argument("ParametricRateModel: theta2 must be >= 0 and theta3 > 0");
}

Rates ParametricRateModel::rates(double t) const
{
    const double c13 = background_mortality(t);
    return {incidence_rate(theta_, t), c13, theta_.mortality_ratio * c13};
}

double ParametricRateModel::cumulative_incidence(double a, double b) const
{
    // antiderivative of theta2 max(0, s - theta1) is theta2 max(0, s - theta1)^2 / 2
    const double ra = std::max(0.0, a - theta_.onset_age);
    const double rb = std::max(0.0, b - theta_.onset_age);
    return 0.5 * theta_.incidence_slope * (rb - ra) * (rb + ra);
}

double ParametricRateModel::cumulative_background_mortality(double a, double b)
{
    return std::exp(kBackgroundIntercept) *
           (std::exp(kBackgroundSlope * b) - std::exp(kBackgroundSlope * a)) / kBackgroundSlope;
}

double ParametricRateModel::cumulative_exit_hazard(double a, double b) const
{
    return cumulative_incidence(a, b) + cumulative_background_mortality(a, b);
}

double ParametricRateModel::cumulative_diseased_mortality(double a, double b) const
{
    return theta_.mortality_ratio * cumulative_background_mortality(a, b);
}

ConstantRateModel::ConstantRateModel(double c12, double c13, double c23) : rates_{c12, c13, c23}
{
    if (!(c12 >= 0.0 && c13 >= 0.0 && c23 >= 0.0))
        throw std::invalid_argument("ConstantRateModel: rates must be nonnegative");
}

double ConstantRateModel::cumulative_exit_hazard(double a, double b) const
{
    return (rates_.c12 + rates_.c13) * (b - a);
}

double ConstantRateModel::cumulative_diseased_mortality(double a, double b) const
{
    return rates_.c23 * (b - a);
}

}  // namespace acsidm
