#pragma once

#include <string>

#include "nlsg/core.hpp"

namespace nlsg {

// alpha2 = a2 + i b2 with
//   a2 = A1 ln t/t + A2/t + A3 ln t/t^2,
//   b2 = B1/sqrt(t) + B2 ln t/t^{3/2} + B3/t^{3/2}.
struct Alpha2Coefficients {
    double A1, A2, A3;
    double B1, B2, B3;
};
Alpha2Coefficients alpha2_coefficients(double x, double mu);

// x(t) = ln 2 + c2 ln t/t + c3/t
struct ObstructionCoefficients {
    double c2, c3;
    double C3_obstruction;  // (1 - 2 ln|T|)/(4|T|^2), not the Taylor constant 2/mu
};
ObstructionCoefficients obstruction_coefficients(double mu);

// Same constants assembled from the alpha2 coefficients
// (c2 = -(8A1 - 1/2) B1^2/(2|T|^2), c3 = (-(8A2 - ln B1)/(2|T|^2) - C3) B1^2);
// A2 is evaluated at x = ln 2.
ObstructionCoefficients obstruction_coefficients_from_alpha2(double mu);

cplx alpha2_asymptotic(double x, double t, double mu);
double obstruction_asymptote(double t, double mu);
double im_h_at_T_asymptotic(double x, double t, double mu);

// Small-x law of the first breaking time
double first_break_small_x(double x, double mu);
// Large-x law with T replaced by 0. Conjectural for 0 < mu < 2; throws unless
// `conjectural` is set.
double first_break_large_x(double x, double mu, bool conjectural = false);

// Two-term expansion of the integral of f(s) (sqrt(s^2 + b^2) - s) over [0, p]
// as b -> 0; corr_integral is the integral of f'(s) ln s over [0, p].
double root_gap_integral_asymptotic(double f0, double fp, double p, double corr_integral, double b);

enum class IntegralTag { I1, I2, I3, I4, I5, I6, H2, Hk };
IntegralTag parse_integral_tag(const std::string& s);
std::string to_string(IntegralTag tag);

struct IntegralCheck {
    cplx asymptotic;
    cplx numeric;
    double gap;
};

// Closed-form long-time estimate of one term of the split g' against its direct
// quadrature. For Hk, k selects the power; the estimate is 0 (only an order
// O(t b^{k+2}) is known) for k > 2. Throws DomainError when z is too close to
// [a2, -mu/2] or |z| <= |alpha2|.
IntegralCheck verify_integral_table(IntegralTag which, cplx z, const Params& p, cplx alpha2, int k = 2,
                                    double quad_tol = 1e-13);

}  // namespace nlsg
