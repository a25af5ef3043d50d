#include "tbgeo/bundle.hpp"

#include <sstream>

namespace tbgeo {

MetricWeights validate_weights(double m1, double m2, double m3) {
  if (!std::isfinite(m1) || !std::isfinite(m2) || !std::isfinite(m3))
    throw AdmissibilityError("metric weights must be finite", "finite(m1, m2, m3)");
  if (!(m1 > 0.0)) {
    std::ostringstream os;
    os << "inadmissible metric weights: m1 = " << m1 << " violates m1 > 0";
    throw AdmissibilityError(os.str(), "m1 > 0");
  }
  if (!(m3 > 0.0)) {
    std::ostringstream os;
    os << "inadmissible metric weights: m3 = " << m3 << " violates m3 > 0";
    throw AdmissibilityError(os.str(), "m3 > 0");
  }
  if (!(m1 * m3 - m2 * m2 > 0.0)) {
    std::ostringstream os;
    os << "inadmissible metric weights: (" << m1 << ", " << m2 << ", " << m3
       << ") violates m1*m3 - m2^2 > 0";
    throw AdmissibilityError(os.str(), "m1*m3 - m2^2 > 0");
  }
  return MetricWeights{m1, m2, m3};
}

void require_admissible(const MetricWeights& w) { validate_weights(w.m1, w.m2, w.m3); }

BundleTangent horizontal_lift(const TangentVector& x) {
  return {x, Eigen::VectorXd::Zero(x.size())};
}

BundleTangent vertical_lift(const TangentVector& x) {
  return {Eigen::VectorXd::Zero(x.size()), x};
}

double bundle_metric(const MetricWeights& w, const ChartManifold& M, const BundlePoint& P,
                     const BundleTangent& X, const BundleTangent& Y) {
  M.require_dim(X.horizontal, "first bundle tangent (horizontal)");
  M.require_dim(X.vertical, "first bundle tangent (vertical)");
  M.require_dim(Y.horizontal, "second bundle tangent (horizontal)");
  M.require_dim(Y.vertical, "second bundle tangent (vertical)");
  const Eigen::MatrixXd g = M.metric(P.base);
  return w.m1 * X.horizontal.dot(g * Y.horizontal) + w.m2 * X.horizontal.dot(g * Y.vertical) +
         w.m2 * X.vertical.dot(g * Y.horizontal) + w.m3 * X.vertical.dot(g * Y.vertical);
}

Eigen::MatrixXd weight_matrix_raw(double m1, double m2, double m3, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  m.topLeftCorner(n, n) = m1 * id;
  m.topRightCorner(n, n) = m2 * id;
  m.bottomLeftCorner(n, n) = m2 * id;
  m.bottomRightCorner(n, n) = m3 * id;
  return m;
}

Eigen::MatrixXd weight_matrix(const MetricWeights& w, int n) {
  require_admissible(w);
  return weight_matrix_raw(w.m1, w.m2, w.m3, n);
}

Eigen::MatrixXd weight_matrix_inverse(const MetricWeights& w, int n) {
  require_admissible(w);
  const double d = w.det();
  return weight_matrix_raw(w.m3 / d, -w.m2 / d, w.m1 / d, n);
}

BundleTangent chart_to_bundle_tangent(const ChartManifold& M, const BundlePoint& P,
                                      const TangentVector& xdot, const TangentVector& udot) {
  M.require_dim(xdot, "xdot");
  M.require_dim(udot, "udot");
  const ChristoffelSymbols gamma = M.christoffel(P.base);
  return {xdot, udot + christoffel_contract(gamma, xdot, P.fiber)};
}

std::pair<TangentVector, TangentVector> bundle_tangent_to_chart(const ChartManifold& M,
                                                                const BundlePoint& P,
                                                                const BundleTangent& X) {
  const ChristoffelSymbols gamma = M.christoffel(P.base);
  return {X.horizontal, X.vertical - christoffel_contract(gamma, X.horizontal, P.fiber)};
}

BundleTangent f_map(const MetricWeights& w, const BundleTangent& X) {
  require_admissible(w);
  const double d = w.det();
  return {(w.m3 * X.horizontal - w.m2 * X.vertical) / d,
          (-w.m2 * X.horizontal + w.m1 * X.vertical) / d};
}

BundleTangent lift_bracket_oracle(const ChartManifold& M, const VectorField& X,
                                  const VectorField& Y, const BundlePoint& P,
                                  LiftKind kind_x, LiftKind kind_y) {
  const int n = M.dim();
  if (kind_x == LiftKind::Vertical && kind_y == LiftKind::Vertical)
    return BundleTangent::zero(n);
  if (kind_x == LiftKind::Horizontal && kind_y == LiftKind::Vertical)
    return vertical_lift(M.covariant_derivative(X, Y, P.base));
  if (kind_x == LiftKind::Vertical && kind_y == LiftKind::Horizontal)
    return vertical_lift((-M.covariant_derivative(Y, X, P.base)).eval());
  BundleTangent out = horizontal_lift(lie_bracket(X, Y, P.base, M.fd()));
  out.vertical = -M.curvature(X(P.base), Y(P.base), P.fiber, P.base);
  return out;
}

BundleTangent lc_block_hh(const MetricWeights& w, const TangentVector& nabla_xy,
                          const TangentVector& r_ux_y, const TangentVector& r_xy_u) {
  require_admissible(w);
  const double d = w.det();
  return {nabla_xy + (w.m2 * w.m3 * r_ux_y + 0.5 * w.m2 * w.m3 * r_xy_u) / d,
          (-w.m2 * w.m2 * r_ux_y - 0.5 * w.m1 * w.m3 * r_xy_u) / d};
}

BundleTangent lc_block_hv(const MetricWeights& w, const TangentVector& nabla_xy,
                          const TangentVector& r_uy_x) {
  require_admissible(w);
  const double d = w.det();
  return {(0.5 * w.m3 * w.m3 * r_uy_x) / d, nabla_xy - (0.5 * w.m2 * w.m3 * r_uy_x) / d};
}

BundleTangent lc_block_vh(const MetricWeights& w, const TangentVector& r_ux_y) {
  require_admissible(w);
  const double d = w.det();
  return {(0.5 * w.m3 * w.m3 * r_ux_y) / d, (-0.5 * w.m2 * w.m3 * r_ux_y) / d};
}

BundleTangent lc_block_vv(const MetricWeights& w, int n) {
  require_admissible(w);
  return BundleTangent::zero(n);
}

BundleTangent lc_connection_lifts(const MetricWeights& w, const ChartManifold& M,
                                  const BundlePoint& P, const VectorField& X,
                                  const VectorField& Y, LiftKind kind_direction,
                                  LiftKind kind_field) {
  const ChartPoint& p = P.base;
  const TangentVector& u = P.fiber;
  const Eigen::VectorXd xv = X(p);
  const Eigen::VectorXd yv = Y(p);

  if (kind_direction == LiftKind::Horizontal && kind_field == LiftKind::Horizontal)
    return lc_block_hh(w, M.covariant_derivative(X, Y, p), M.curvature(u, xv, yv, p),
                       M.curvature(xv, yv, u, p));
  if (kind_direction == LiftKind::Horizontal && kind_field == LiftKind::Vertical)
    return lc_block_hv(w, M.covariant_derivative(X, Y, p), M.curvature(u, yv, xv, p));
  if (kind_direction == LiftKind::Vertical && kind_field == LiftKind::Horizontal)
    return lc_block_vh(w, M.curvature(u, xv, yv, p));
  return lc_block_vv(w, M.dim());
}

BundleTangent lc_connection_bundle(const MetricWeights& w, const ChartManifold& M,
                                   const BundlePoint& P, const TangentVector& F,
                                   const TangentVector& G, const VectorField& A,
                                   const VectorField& B) {
  const ChartPoint& p = P.base;
  const TangentVector& u = P.fiber;
  const Eigen::VectorXd av = A(p);
  const Eigen::VectorXd bv = B(p);
  const VectorField dirF = constant_field(F);

  BundleTangent out = lc_block_hh(w, M.covariant_derivative(dirF, A, p),
                                  M.curvature(u, F, av, p), M.curvature(F, av, u, p));
  out = out + lc_block_hv(w, M.covariant_derivative(dirF, B, p), M.curvature(u, bv, F, p));
  out = out + lc_block_vh(w, M.curvature(u, G, av, p));
  return out;
}

GeneralFieldDecomposition decompose_bundle_field(const ChartManifold& M,
                                                 const BundleChartField& field,
                                                 const BundlePoint& P) {
  const int n = M.dim();
  const ChartPoint p = P.base;
  const TangentVector u = P.fiber;
  const ChristoffelSymbols gamma_p = M.christoffel(p);

  // Lift components of the field along the fiber at the anchor base point.
  auto lift_components = [&field, &p, &gamma_p](const Eigen::VectorXd& uq) {
    auto [a, b] = field(p, uq);
    Eigen::VectorXd out(2 * a.size());
    out.head(a.size()) = a;
    out.tail(a.size()) = b + christoffel_contract(gamma_p, a, uq);
    return out;
  };
  const Eigen::MatrixXd jac = fd_jacobian(lift_components, u, M.fd().step);

  // First-order parallel transport of the fiber pins the horizontal
  // derivatives of the anchored base fields.
  auto transported_fiber = [gamma_p, p, u](const Eigen::VectorXd& q) {
    return (u - christoffel_contract(gamma_p, q - p, u)).eval();
  };
  VectorField a_field{[field, transported_fiber](const Eigen::VectorXd& q) {
                        return field(q, transported_fiber(q)).first;
                      },
                      nullptr};
  VectorField b_field{[M, field, transported_fiber](const Eigen::VectorXd& q) {
                        const Eigen::VectorXd uq = transported_fiber(q);
                        auto [a, b] = field(q, uq);
                        return (b + christoffel_contract(M.christoffel(q), a, uq)).eval();
                      },
                      nullptr};

  return {std::move(a_field), std::move(b_field), jac.topRows(n), jac.bottomRows(n)};
}

BundleTangent lc_connection_general(const MetricWeights& w, const ChartManifold& M,
                                    const BundlePoint& P, const BundleTangent& direction,
                                    const GeneralFieldDecomposition& field) {
  if (field.dC_du.rows() != M.dim() || field.dD_du.rows() != M.dim())
    throw DimensionError("lc_connection_general: fiber Jacobian dimension mismatch");
  BundleTangent out = lc_connection_bundle(w, M, P, direction.horizontal, direction.vertical,
                                           field.A, field.B);
  out.horizontal += field.dC_du * direction.vertical;
  out.vertical += field.dD_du * direction.vertical;
  return out;
}

std::array<double, 8> koszul_pairings_oracle(const MetricWeights& w, const ChartManifold& M,
                                             const BundlePoint& P, const VectorField& X,
                                             const VectorField& Y, const VectorField& Z) {
  require_admissible(w);
  const ChartPoint& p = P.base;
  const TangentVector& u = P.fiber;
  const Eigen::VectorXd xv = X(p), yv = Y(p), zv = Z(p);

  const Eigen::VectorXd nabla_xy = M.covariant_derivative(X, Y, p);
  const Eigen::VectorXd r_ux_y = M.curvature(u, xv, yv, p);
  const Eigen::VectorXd r_xy_u = M.curvature(xv, yv, u, p);
  const Eigen::VectorXd r_uy_x = M.curvature(u, yv, xv, p);

  auto g = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return M.metric_eval(p, a, b);
  };

  return {2.0 * w.m1 * g(nabla_xy, zv) + 2.0 * w.m2 * g(r_ux_y, zv),
          2.0 * w.m2 * g(nabla_xy, zv) - w.m3 * g(r_xy_u, zv),
          2.0 * w.m2 * g(nabla_xy, zv) + w.m3 * g(r_uy_x, zv),
          2.0 * w.m3 * g(nabla_xy, zv),
          w.m3 * g(r_ux_y, zv),
          0.0,
          0.0,
          0.0};
}

Eigen::MatrixXd induced_bundle_gram(const MetricWeights& w, const ChartManifold& M,
                                    const ChartPoint& x, const TangentVector& u) {
  require_admissible(w);
  const int n = M.dim();
  const Eigen::MatrixXd g = M.metric(x);
  Eigen::MatrixXd wg(2 * n, 2 * n);
  wg.topLeftCorner(n, n) = w.m1 * g;
  wg.topRightCorner(n, n) = w.m2 * g;
  wg.bottomLeftCorner(n, n) = w.m2 * g;
  wg.bottomRightCorner(n, n) = w.m3 * g;

  const Eigen::MatrixXd c = christoffel_fiber_matrix(M.christoffel(x), u);
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  t.bottomLeftCorner(n, n) = c;
  return t.transpose() * wg * t;
}

ChartManifold make_bundle_chart(const MetricWeights& w, const ChartManifold& M,
                                double fiber_half_width) {
  require_admissible(w);
  const int n = M.dim();
  Box domain;
  domain.lo.resize(2 * n);
  domain.hi.resize(2 * n);
  domain.lo.head(n) = M.domain().lo;
  domain.hi.head(n) = M.domain().hi;
  domain.lo.tail(n) = Eigen::VectorXd::Constant(n, -fiber_half_width);
  domain.hi.tail(n) = Eigen::VectorXd::Constant(n, fiber_half_width);

  auto gram = [w, M, n](const Eigen::VectorXd& xu) {
    return induced_bundle_gram(w, M, xu.head(n), xu.tail(n));
  };
  return ChartManifold(2 * n, domain, gram, M.fd());
}

} // namespace tbgeo
