#include "sobolab/trace.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace sobolab::halfspace {

TraceConstant trace_constant(double s) {
    if (!std::isfinite(s) || s <= 0.5)
        throw DomainError("trace constant: the defining integral diverges for s <= 1/2");
    return {s, boost::math::beta(0.5, s - 0.5)};
}

double trace_constant_quadrature(double s) {
    if (!std::isfinite(s) || s <= 0.5)
        throw DomainError("trace constant: the defining integral diverges for s <= 1/2");
    // eta = tan(theta): 2 \int_0^{pi/2} cos(theta)^{2s-2} d theta. For s < 1 the
    // integrand is singular at pi/2, where cos is evaluated from the complement.
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double half_pi = boost::math::constants::half_pi<double>();
    auto integrand = [s](double theta, double complement) {
        const double c = theta > 0.25 * boost::math::constants::pi<double>()
                             ? std::sin(std::abs(complement))
                             : std::cos(theta);
        return std::pow(c, 2.0 * s - 2.0);
    };
    return 2.0 * integrator.integrate(integrand, 0.0, half_pi, 1e-14);
}

}  // namespace sobolab::halfspace
