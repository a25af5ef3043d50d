#include "tbgeo/charts.hpp"

#include <cmath>

namespace tbgeo {

ChartManifold make_euclidean(int n, double half_width) {
  auto gram = [n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(n, n).eval(); };
  ChartManifold m(n, Box::cube(n, half_width), gram);
  m.with_christoffel([n](const Eigen::VectorXd&) {
    return ChristoffelSymbols(n, Eigen::MatrixXd::Zero(n, n));
  });
  m.with_curvature([n](const Eigen::VectorXd&, const Eigen::VectorXd&, const Eigen::VectorXd&,
                       const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(n).eval(); });
  return m;
}

ChartManifold make_sphere2_stereographic(bool analytic, double half_width) {
  auto conformal = [](const Eigen::VectorXd& x) {
    const double s = 1.0 + x.squaredNorm();
    return 4.0 / (s * s);
  };
  auto gram = [conformal](const Eigen::VectorXd& x) {
    return (conformal(x) * Eigen::MatrixXd::Identity(2, 2)).eval();
  };
  ChartManifold m(2, Box::cube(2, half_width), gram);
  if (!analytic) return m;

  // Conformal metric e^{2phi} I with phi = log 2 - log(1+|x|^2):
  // Γ^k_{ij} = δ_{ik} ∂_j phi + δ_{jk} ∂_i phi − δ_{ij} ∂_k phi.
  m.with_christoffel([](const Eigen::VectorXd& x) {
    const Eigen::Vector2d dphi = -2.0 * x / (1.0 + x.squaredNorm());
    ChristoffelSymbols gamma(2, Eigen::MatrixXd::Zero(2, 2));
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          gamma[k](i, j) = (i == k ? dphi[j] : 0.0) + (j == k ? dphi[i] : 0.0) -
                           (i == j ? dphi[k] : 0.0);
    return gamma;
  });
  // Constant curvature 1: 𝔯(x,y)z = g(y,z) x − g(x,z) y.
  m.with_curvature([conformal](const Eigen::VectorXd& p, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
    const double lam = conformal(p);
    return (lam * (y.dot(z) * x - x.dot(z) * y)).eval();
  });
  return m;
}

Eigen::Matrix3d so3_right_jacobian(const Eigen::Vector3d& x) {
  const double theta = x.norm();
  Eigen::Matrix3d xhat;
  xhat << 0, -x[2], x[1], x[2], 0, -x[0], -x[1], x[0], 0;
  double c1, c2; // (1-cos)/θ², (θ-sin)/θ³
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    c1 = 0.5 - t2 / 24.0;
    c2 = 1.0 / 6.0 - t2 / 120.0;
  } else {
    c1 = (1.0 - std::cos(theta)) / (theta * theta);
    c2 = (theta - std::sin(theta)) / (theta * theta * theta);
  }
  return Eigen::Matrix3d::Identity() - c1 * xhat + c2 * xhat * xhat;
}

ChartManifold make_so3_exp_chart(double half_width) {
  auto gram = [](const Eigen::VectorXd& x) {
    const Eigen::Matrix3d jr = so3_right_jacobian(Eigen::Vector3d(x));
    return Eigen::MatrixXd(jr.transpose() * jr);
  };
  return ChartManifold(3, Box::cube(3, half_width), gram);
}

} // namespace tbgeo
