#pragma once

#include "tbgeo/manifold.hpp"

namespace tbgeo {

/// Flat R^n with the identity Gram matrix.
ChartManifold make_euclidean(int n, double half_width = 10.0);

/// Unit round 2-sphere in the stereographic chart, Gram matrix
/// 4/(1+|x|^2)^2 I. With `analytic` set, conformal-metric Christoffels and
/// the constant-curvature tensor are installed as overrides.
ChartManifold make_sphere2_stereographic(bool analytic = true, double half_width = 2.0);

/// SO(3) with the bi-invariant metric g(R a^, R b^) = a.b, in the exponential
/// chart x -> R0 exp(x^). Gram matrix Jr(x)^T Jr(x) with Jr the right
/// Jacobian; the anchor R0 drops out of every chart quantity.
ChartManifold make_so3_exp_chart(double half_width = 1.0);

/// Right Jacobian of SO(3): d/dt exp((x + t v)^) = exp(x^) (Jr(x) v)^.
Eigen::Matrix3d so3_right_jacobian(const Eigen::Vector3d& x);

} // namespace tbgeo
