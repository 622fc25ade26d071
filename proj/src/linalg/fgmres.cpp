#include "mhdmg/linalg/fgmres.hpp"

#include <algorithm>
#include <cmath>

#include "mhdmg/error.hpp"
#include "mhdmg/linalg/csr.hpp"

namespace mhdmg::linalg {

KrylovResult fgmres(const Apply& op, const Apply& precond, std::span<const double> b, std::span<double> x,
                    const KrylovOptions& opts) {
  if (b.size() != x.size()) throw InvalidArgument("fgmres: size mismatch");
  if (opts.max_iterations < 1 || opts.rtol < 0.0 || opts.atol < 0.0 || opts.restart < 0) {
    throw InvalidArgument("fgmres: invalid options");
  }
  const std::size_t n = b.size();
  KrylovResult res;
  Vector r(n), w(n);
  op(x, w);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
  double beta = norm2(r);
  res.initial_residual = beta;
  res.final_residual = beta;
  res.residual_history.push_back(beta);
  const double target = std::max(opts.rtol * beta, opts.atol);
  if (beta <= target) {
    res.status = KrylovStatus::converged;
    return res;
  }
  const int m = opts.restart > 0 ? opts.restart : opts.max_iterations;

  while (res.iterations < opts.max_iterations) {
    std::vector<Vector> V, Z;
    std::vector<std::vector<double>> H;  // H[j] = column j, length j + 2
    std::vector<double> cs, sn, g{beta};
    V.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / beta;
    int k = 0;
    bool converged = false, broke = false;
    for (; k < m && res.iterations < opts.max_iterations; ++k) {
      Z.emplace_back(n);
      if (precond) {
        precond(V[k], Z[k]);
      } else {
        Z[k] = V[k];
      }
      op(Z[k], w);
      const double wnorm = norm2(w);
      std::vector<double> h(k + 2, 0.0);
      for (int i = 0; i <= k; ++i) {
        h[i] = dot(w, V[i]);
        axpy(-h[i], V[i], w);
      }
      h[k + 1] = norm2(w);
      const double hnext = h[k + 1];
      const bool happy = !(h[k + 1] > 1e-14 * wnorm);
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * h[i] + sn[i] * h[i + 1];
        h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
        h[i] = t;
      }
      const double denom = std::hypot(h[k], h[k + 1]);
      // a zero column leaves the residual unchanged (c = 0, s = 1)
      double c = 0.0, s = 1.0;
      if (denom > 0.0) {
        c = h[k] / denom;
        s = h[k + 1] / denom;
      }
      cs.push_back(c);
      sn.push_back(s);
      h[k] = denom;
      h[k + 1] = 0.0;
      g.push_back(-s * g[k]);
      g[k] *= c;
      H.push_back(std::move(h));
      ++res.iterations;
      const double est = std::abs(g[k + 1]);
      res.residual_history.push_back(est);
      res.final_residual = est;
      if (est <= target) {
        converged = true;
        ++k;
        break;
      }
      if (happy || denom == 0.0) {
        broke = true;
        ++k;
        break;
      }
      V.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i) V[k + 1][i] = w[i] / hnext;
    }
    // back substitution for the k-dimensional least-squares solution
    std::vector<double> y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int jj = i + 1; jj < k; ++jj) s -= H[jj][i] * y[jj];
      y[i] = H[i][i] != 0.0 ? s / H[i][i] : 0.0;
    }
    for (int i = 0; i < k; ++i) axpy(y[i], Z[i], x);
    if (converged) {
      res.status = KrylovStatus::converged;
      return res;
    }
    if (broke) {
      op(x, w);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
      res.final_residual = norm2(r);
      res.status = res.final_residual <= target ? KrylovStatus::converged : KrylovStatus::breakdown;
      return res;
    }
    op(x, w);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
    beta = norm2(r);
    res.final_residual = beta;
    if (beta <= target) {
      res.status = KrylovStatus::converged;
      return res;
    }
  }
  res.status = KrylovStatus::max_iterations;
  return res;
}

}  // namespace mhdmg::linalg
