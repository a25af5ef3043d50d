#pragma once

#include <random>

#include "tbgeo/bundle.hpp"

namespace tbgeo {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::VectorXd random_vector(Rng& rng, int n, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(rng, -scale, scale);
  return v;
}

inline Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols, double scale = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = uniform(rng, -scale, scale);
  return m;
}

/// Point well inside the box: a fraction of the half-width around the center.
inline Eigen::VectorXd random_point_in(Rng& rng, const Box& box, double interior_fraction = 0.6) {
  Eigen::VectorXd p(box.lo.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double c = 0.5 * (box.lo[i] + box.hi[i]);
    const double half = 0.5 * (box.hi[i] - box.lo[i]) * interior_fraction;
    p[i] = c + uniform(rng, -half, half);
  }
  return p;
}

/// Admissible weights with a bounded correlation ratio, so 1/(m1 m3 - m2^2)
/// stays well conditioned.
inline MetricWeights random_admissible_weights(Rng& rng, double rho_max = 0.9) {
  const double m1 = uniform(rng, 0.3, 3.0);
  const double m3 = uniform(rng, 0.3, 3.0);
  const double m2 = uniform(rng, -rho_max, rho_max) * std::sqrt(m1 * m3);
  return validate_weights(m1, m2, m3);
}

/// Weights violating the determinant condition by a definite margin.
inline MetricWeights random_inadmissible_weights(Rng& rng) {
  const double m1 = uniform(rng, 0.3, 3.0);
  const double m3 = uniform(rng, 0.3, 3.0);
  const double sign = uniform(rng, -1.0, 1.0) < 0.0 ? -1.0 : 1.0;
  const double m2 = sign * std::sqrt(m1 * m3) * uniform(rng, 1.05, 2.0);
  return MetricWeights{m1, m2, m3};
}

/// Quadratic field with exact Jacobian: Y_k(x) = c_k + L_k·x + x'Q_k x.
inline VectorField random_quadratic_field(Rng& rng, int n, double scale = 0.6) {
  const Eigen::VectorXd c = random_vector(rng, n, scale);
  const Eigen::MatrixXd l = random_matrix(rng, n, n, scale);
  std::vector<Eigen::MatrixXd> q(n);
  for (int k = 0; k < n; ++k) {
    const Eigen::MatrixXd a = random_matrix(rng, n, n, 0.5 * scale);
    q[k] = 0.5 * (a + a.transpose());
  }
  auto eval = [c, l, q, n](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = c + l * x;
    for (int k = 0; k < n; ++k) y[k] += x.dot(q[k] * x);
    return y;
  };
  auto jac = [l, q, n](const Eigen::VectorXd& x) {
    Eigen::MatrixXd j = l;
    for (int k = 0; k < n; ++k) j.row(k) += (2.0 * q[k] * x).transpose();
    return j;
  };
  return VectorField{eval, jac};
}

inline VectorField random_affine_field(Rng& rng, int n, double scale = 0.8) {
  const Eigen::VectorXd c = random_vector(rng, n, scale);
  const Eigen::MatrixXd l = random_matrix(rng, n, n, scale);
  return VectorField{[c, l](const Eigen::VectorXd& x) { return (c + l * x).eval(); },
                     [l](const Eigen::VectorXd&) { return l; }};
}

} // namespace tbgeo
