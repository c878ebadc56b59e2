#include "r13fem/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "r13fem/error.hpp"

namespace r13 {

namespace {

// Orbit helpers for symmetric rules; weights given for a unit-area reference and
// halved at the end.
void add_centroid(QuadratureRule& q, double w) {
  q.points.push_back({1.0 / 3.0, 1.0 / 3.0});
  q.weights.push_back(w);
}

void add_orbit3(QuadratureRule& q, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  q.points.push_back({a, a});
  q.points.push_back({b, a});
  q.points.push_back({a, b});
  for (int i = 0; i < 3; ++i) q.weights.push_back(w);
}

void add_orbit6(QuadratureRule& q, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const double l[6][2] = {{a, b}, {b, a}, {a, c}, {c, a}, {b, c}, {c, b}};
  for (const auto& p : l) {
    q.points.push_back({p[0], p[1]});
    q.weights.push_back(w);
  }
}

}  // namespace

QuadratureRule triangle_quadrature(int exactness_degree) {
  QuadratureRule q;
  switch (exactness_degree) {
    case 0:
    case 1:
      add_centroid(q, 1.0);
      q.degree = 1;
      break;
    case 2:
      add_orbit3(q, 1.0 / 6.0, 1.0 / 3.0);
      q.degree = 2;
      break;
    case 3:
    case 4:
      add_orbit3(q, 0.445948490915965, 0.223381589678011);
      add_orbit3(q, 0.091576213509771, 0.109951743655322);
      q.degree = 4;
      break;
    case 5:
      add_centroid(q, 0.225);
      add_orbit3(q, 0.470142064105115, 0.132394152788506);
      add_orbit3(q, 0.101286507323456, 0.125939180544827);
      q.degree = 5;
      break;
    case 6:
      add_orbit3(q, 0.249286745170910, 0.116786275726379);
      add_orbit3(q, 0.063089014491502, 0.050844906370207);
      add_orbit6(q, 0.053145049844817, 0.310352451033784, 0.082851075618374);
      q.degree = 6;
      break;
    default:
      throw Error("triangle quadrature supports exactness degrees 0..6, got " + std::to_string(exactness_degree));
  }
  for (double& w : q.weights) w *= 0.5;
  return q;
}

QuadratureRule edge_quadrature(int exactness_degree) {
  if (exactness_degree < 0 || exactness_degree > 63) {
    throw Error("edge quadrature supports exactness degrees 0..63, got " + std::to_string(exactness_degree));
  }
  const int n = exactness_degree / 2 + 1;
  QuadratureRule q;
  q.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    // Newton iteration on the Legendre polynomial from the Chebyshev guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pm = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.points.push_back({0.5 * (1.0 - x), 0.0});
    q.weights.push_back(0.5 * w);
  }
  return q;
}

}  // namespace r13
