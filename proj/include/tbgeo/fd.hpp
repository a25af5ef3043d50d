#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "tbgeo/errors.hpp"

namespace tbgeo {

/// Central-difference configuration. `step` drives first derivatives of
/// analytic quantities; `nested_step` drives derivatives of quantities that
/// are themselves finite-difference estimates (larger step, since the input
/// carries roundoff noise of order eps/step).
struct FdConfig {
  double step = 1e-5;
  double nested_step = 2e-4;
};

inline double scaled_step(double h, double coord) {
  return h * std::max(1.0, std::abs(coord));
}

/// Gradient of a scalar function by central differences, per-coordinate
/// step h*max(1,|x_i|).
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& p, double h) {
  Eigen::VectorXd grad(p.size());
  Eigen::VectorXd q = p;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double hi = scaled_step(h, p[i]);
    q[i] = p[i] + hi;
    const double fp = f(q);
    q[i] = p[i] - hi;
    const double fm = f(q);
    q[i] = p[i];
    grad[i] = (fp - fm) / (2.0 * hi);
  }
  if (!grad.allFinite()) throw NumericalError("fd_gradient: non-finite derivative estimate");
  return grad;
}

/// Jacobian of a vector-valued function by central differences; column j is
/// the derivative along coordinate j.
inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& p, double h) {
  Eigen::VectorXd q = p;
  Eigen::MatrixXd jac;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    const double hj = scaled_step(h, p[j]);
    q[j] = p[j] + hj;
    const Eigen::VectorXd fp = f(q);
    q[j] = p[j] - hj;
    const Eigen::VectorXd fm = f(q);
    q[j] = p[j];
    if (jac.size() == 0) jac.resize(fp.size(), p.size());
    jac.col(j) = (fp - fm) / (2.0 * hj);
  }
  if (!jac.allFinite()) throw NumericalError("fd_jacobian: non-finite derivative estimate");
  return jac;
}

} // namespace tbgeo
