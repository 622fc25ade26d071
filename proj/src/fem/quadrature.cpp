#include "mhdmg/fem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "mhdmg/error.hpp"

namespace mhdmg::fem {

namespace {

void add_centroid(TriangleRule& r, double w) {
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(w);
}

void add_orbit3(TriangleRule& r, double w, double a) {
  const double b = 0.5 * (1.0 - a);
  r.points.push_back({a, b, b});
  r.points.push_back({b, a, b});
  r.points.push_back({b, b, a});
  for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

void add_orbit6(TriangleRule& r, double w, double a, double b) {
  const double c = 1.0 - a - b;
  r.points.push_back({a, b, c});
  r.points.push_back({a, c, b});
  r.points.push_back({b, a, c});
  r.points.push_back({b, c, a});
  r.points.push_back({c, a, b});
  r.points.push_back({c, b, a});
  for (int i = 0; i < 6; ++i) r.weights.push_back(w);
}

// Dunavant rules, abscissae and weights re-solved from the moment equations
// in extended precision.
TriangleRule make_degree2() {
  TriangleRule r;
  r.degree = 2;
  add_orbit3(r, 1.0 / 3.0, 2.0 / 3.0);
  return r;
}

TriangleRule make_degree6() {
  TriangleRule r;
  r.degree = 6;
  add_orbit3(r, 0.11678627572637936603, 0.50142650965817915742);
  add_orbit3(r, 0.050844906370206816921, 0.87382197101699554332);
  add_orbit6(r, 0.082851075618373575194, 0.053145049844816947353, 0.31035245103378440542);
  return r;
}

TriangleRule make_degree8() {
  TriangleRule r;
  r.degree = 8;
  add_centroid(r, 0.14431560767778716825);
  add_orbit3(r, 0.095091634267284624794, 0.081414823414553687942);
  add_orbit3(r, 0.10321737053471825028, 0.65886138449647958676);
  add_orbit3(r, 0.032458497623198080311, 0.89890554336593804908);
  add_orbit6(r, 0.027230314174434994265, 0.0083947774099576053372, 0.26311282963463811342);
  return r;
}

double legendre_and_derivative(int n, double x, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  if (n == 0) p1 = 1.0;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
  return p1;
}

LineRule make_gauss(int n) {
  LineRule r;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = legendre_and_derivative(n, x, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_and_derivative(n, x, dp);
    r.points.push_back(0.5 * (1.0 - x));
    r.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
  return r;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static const TriangleRule d2 = make_degree2();
  static const TriangleRule d6 = make_degree6();
  static const TriangleRule d8 = make_degree8();
  if (degree <= 2) return d2;
  if (degree <= 6) return d6;
  if (degree <= 8) return d8;
  throw InvalidArgument("triangle_rule: degree > 8 not available");
}

const LineRule& gauss_legendre_unit(int n_points) {
  static std::mutex mutex;
  static std::map<int, LineRule> cache;
  if (n_points < 1) throw InvalidArgument("gauss_legendre_unit: need at least one point");
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n_points);
  if (it == cache.end()) it = cache.emplace(n_points, make_gauss(n_points)).first;
  return it->second;
}

}  // namespace mhdmg::fem
