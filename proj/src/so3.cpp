#include "tbgeo/so3.hpp"

#include <cmath>

namespace tbgeo::so3 {

namespace {
Eigen::Matrix3d lb(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) { return a * b - b * a; }
} // namespace

Eigen::Matrix3d hat(const BodyVector& v) {
  Eigen::Matrix3d m;
  m << 0, -v[2], v[1], v[2], 0, -v[0], -v[1], v[0], 0;
  return m;
}

BodyVector vee(const Eigen::Matrix3d& m) {
  if ((m + m.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("vee: input is not skew-symmetric");
  return BodyVector(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
                    0.5 * (m(1, 0) - m(0, 1)));
}

Rotation::Rotation(const Eigen::Matrix3d& m) : m_(m) {
  if ((m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("Rotation: matrix is not orthonormal");
  if (std::abs(m.determinant() - 1.0) > 1e-10)
    throw std::invalid_argument("Rotation: determinant is not +1");
}

Rotation Rotation::project(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return Rotation(u * v.transpose());
}

Rotation exp_map(const BodyVector& v) {
  const double theta = v.norm();
  const Eigen::Matrix3d vh = hat(v);
  double a, b; // sinθ/θ, (1−cosθ)/θ²
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Rotation(Eigen::Matrix3d::Identity() + a * vh + b * vh * vh);
}

BodyVector log_map(const Rotation& r) {
  const Eigen::Matrix3d& m = r.matrix();
  const double tr = m.trace();
  if (tr <= -1.0 + 1e-9)
    throw DomainError("log_map: rotation is on or too close to the cut locus (angle pi)");
  const double c = std::clamp(0.5 * (tr - 1.0), -1.0, 1.0);
  const double theta = std::acos(c);
  double factor; // θ / (2 sinθ)
  if (theta < 1e-6) {
    factor = 0.5 + theta * theta / 12.0;
  } else {
    factor = 0.5 * theta / std::sin(theta);
  }
  const Eigen::Matrix3d skew = factor * (m - m.transpose());
  return BodyVector(skew(2, 1), skew(0, 2), skew(1, 0));
}

Eigen::Matrix3d edelman_connection(const Rotation& r, const BodyVector& zeta,
                                   const BodyVector& alpha, const Eigen::Matrix3d& ydot) {
  const Eigen::Matrix3d& rm = r.matrix();
  const Eigen::Matrix3d x = rm * hat(zeta);
  const Eigen::Matrix3d y = rm * hat(alpha);
  return ydot + 0.5 * rm * (x.transpose() * y + y.transpose() * x);
}

BodyVector curvature(const BodyVector& x, const BodyVector& y, const BodyVector& z) {
  return -0.25 * (x.cross(y)).cross(z);
}

BodyVector curvature_signed(const BodyVector& x, const BodyVector& y, const BodyVector& z,
                            CurvatureSign sign) {
  const BodyVector r = curvature(x, y, z);
  return sign == CurvatureSign::Pinned ? r : BodyVector(-r);
}

std::pair<Eigen::Matrix3d, Eigen::Matrix3d> tso3_connection_left_invariant(
    const MetricWeights& w, const Rotation& r, const BodyVector& omega, const BodyVector& zeta,
    const BodyVector& eta, const BodyVector& alpha, const BodyVector& beta) {
  require_admissible(w);
  const double d = w.det();
  const Eigen::Matrix3d& rm = r.matrix();
  const Eigen::Matrix3d oh = hat(omega), zh = hat(zeta), eh = hat(eta), ah = hat(alpha),
                        bh = hat(beta);

  const Eigen::Matrix3d horiz =
      rm * (zh * ah + 0.5 * (zh.transpose() * ah + ah.transpose() * zh)) -
      rm * (w.m2 * w.m3 / (8.0 * d)) * (2.0 * lb(lb(oh, zh), ah) + lb(lb(zh, ah), oh)) -
      rm * (w.m3 * w.m3 / (8.0 * d)) * lb(lb(oh, bh), zh) -
      rm * (w.m3 * w.m3 / (8.0 * d)) * lb(lb(oh, eh), ah);

  const Eigen::Matrix3d vert =
      rm * (zh * bh + 0.5 * (zh.transpose() * bh + bh.transpose() * zh)) +
      rm * (w.m2 * w.m3 / (8.0 * d)) * lb(lb(oh, bh), zh) +
      rm * (1.0 / (8.0 * d)) *
          (2.0 * w.m2 * w.m2 * lb(lb(oh, zh), ah) + w.m1 * w.m3 * lb(lb(zh, ah), oh)) +
      rm * (w.m2 * w.m3 / (8.0 * d)) * lb(lb(oh, eh), ah);

  return {horiz, vert};
}

BodyVector fiber_coordinate_velocity(const BodyVector& omega, const BodyVector& zeta,
                                     const BodyVector& eta) {
  return eta - 0.5 * zeta.cross(omega);
}

std::pair<Eigen::Matrix3d, Eigen::Matrix3d> tso3_connection_general(
    const MetricWeights& w, const Rotation& r, const BodyVector& omega,
    const BodyVector& omegadot, const BodyVector& zeta, const BodyVector& eta,
    const LeftInvariantBundleField& field) {
  auto [horiz, vert] =
      tso3_connection_left_invariant(w, r, omega, zeta, eta, field.alpha, field.beta);
  // The frozen-coefficient terms above miss how the coefficients ride along
  // the fiber; the fiber-coordinate velocity of the direction restores it.
  horiz += r.matrix() * hat(field.dalpha_domega * omegadot);
  vert += r.matrix() * hat(field.dbeta_domega * omegadot);
  return {horiz, vert};
}

} // namespace tbgeo::so3
