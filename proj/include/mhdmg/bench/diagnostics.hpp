#pragma once

#include "mhdmg/fem/analytic.hpp"
#include "mhdmg/fem/layout.hpp"
#include "mhdmg/mesh.hpp"

namespace mhdmg::bench {

struct FieldErrors {
  double u_l2 = 0.0;
  double p_l2 = 0.0;  // after removing the mean difference
  double B_l2 = 0.0;
  double curl_B_l2 = 0.0;
  double B_hcurl = 0.0;
  double r_l2 = 0.0;  // of r_h - r
};

/// L2 and H(curl) errors of a discrete state against closed-form fields.
FieldErrors field_errors(const fem::StateVector& x, const fem::AnalyticState& exact,
                         const fem::ScalarFunction& exact_curl_B, int degree = 8);

/// Curl of B projected onto continuous P1, evaluated at mesh vertex `at`.
/// Throws InvalidArgument when `at` is not a vertex.
double projected_curl_at(const fem::StateVector& x, const mesh::Point& at);

/// (curl - baseline) / sqrt(Re_m).
double reconnection_rate(double curl, double baseline, double Re_m);

struct CflNumbers {
  double u_max = 0.0;
  double B_max = 0.0;
  double fluid = 0.0;
  double alfven = 0.0;
};

/// Maxima from the piecewise-constant projections of u.u and B.B; h is the
/// shortest edge length.
CflNumbers cfl_numbers(const fem::StateVector& x, double dt);

}  // namespace mhdmg::bench
