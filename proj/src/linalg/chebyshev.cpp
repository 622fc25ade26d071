#include "mhdmg/linalg/chebyshev.hpp"

#include <cmath>

#include "mhdmg/error.hpp"
#include "mhdmg/linalg/csr.hpp"

namespace mhdmg::linalg {

void validate(const ChebyshevParams& p) {
  if (!(p.a > 0.0) || !(p.b >= p.a) || !std::isfinite(p.b)) {
    throw InvalidArgument("Chebyshev interval must satisfy 0 < a <= b");
  }
  if (p.steps < 1) throw InvalidArgument("Chebyshev step count must be >= 1");
}

void chebyshev_apply(const Apply& op, const Apply& precond, const ChebyshevParams& params,
                     std::span<const double> b, std::span<double> x) {
  validate(params);
  const std::size_t n = b.size();
  if (x.size() != n) throw InvalidArgument("chebyshev_apply: size mismatch");
  Vector r(n), z(n), d(n), ad(n);
  op(x, ad);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ad[i];

  if (params.a == params.b) {
    const double omega = 1.0 / params.a;
    for (int k = 0; k < params.steps; ++k) {
      precond(r, z);
      axpy(omega, z, x);
      if (k + 1 == params.steps) break;
      op(z, ad);
      axpy(-omega, ad, r);
    }
    return;
  }

  const double theta = 0.5 * (params.a + params.b);
  const double delta = 0.5 * (params.b - params.a);
  const double sigma = theta / delta;
  double rho = 1.0 / sigma;
  precond(r, z);
  for (std::size_t i = 0; i < n; ++i) d[i] = z[i] / theta;
  for (int k = 0; k < params.steps; ++k) {
    axpy(1.0, d, x);
    if (k + 1 == params.steps) break;
    op(d, ad);
    axpy(-1.0, ad, r);
    precond(r, z);
    const double rho_next = 1.0 / (2.0 * sigma - rho);
    const double c1 = rho_next * rho, c2 = 2.0 * rho_next / delta;
    for (std::size_t i = 0; i < n; ++i) d[i] = c1 * d[i] + c2 * z[i];
    rho = rho_next;
  }
}

}  // namespace mhdmg::linalg
