#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "tbgeo/errors.hpp"
#include "tbgeo/fd.hpp"

namespace tbgeo {

/// Chart coordinates of a base-manifold point.
using ChartPoint = Eigen::VectorXd;
/// Chart components of a tangent vector at some base point.
using TangentVector = Eigen::VectorXd;

/// Christoffel symbols in a chart: gamma[k](i,j) = Γ^k_{ij}, symmetric in (i,j).
using ChristoffelSymbols = std::vector<Eigen::MatrixXd>;

/// Γ(a,b)^k = Γ^k_{ij} a^i b^j.
Eigen::VectorXd christoffel_contract(const ChristoffelSymbols& gamma,
                                     const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Matrix C with C(k,i) = Γ^k_{ij} u^j, so that Γ(a,u) = C a.
Eigen::MatrixXd christoffel_fiber_matrix(const ChristoffelSymbols& gamma,
                                         const Eigen::VectorXd& u);

/// A smooth vector field given by its chart components. The Jacobian is
/// optional; when absent it is estimated by central differences.
struct VectorField {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian; // may be null

  Eigen::VectorXd operator()(const Eigen::VectorXd& p) const { return eval(p); }
};

/// Constant vector field (zero Jacobian).
VectorField constant_field(const Eigen::VectorXd& value);

/// Open axis-aligned box used as the chart domain.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  bool contains(const Eigen::VectorXd& p) const {
    return (p.array() > lo.array()).all() && (p.array() < hi.array()).all();
  }
  static Box cube(int n, double half_width) {
    Box b;
    b.lo = Eigen::VectorXd::Constant(n, -half_width);
    b.hi = Eigen::VectorXd::Constant(n, half_width);
    return b;
  }
};

/// A Riemannian manifold described in a single chart by the Gram matrix of
/// its metric. Christoffel symbols, covariant derivatives and the curvature
/// tensor are derived by central differences unless analytic overrides are
/// supplied. All operations are pure; instances are immutable values.
class ChartManifold {
public:
  using MetricFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
  using ChristoffelFn = std::function<ChristoffelSymbols(const Eigen::VectorXd&)>;
  using CurvatureFn = std::function<Eigen::VectorXd(
      const Eigen::VectorXd& p, const Eigen::VectorXd& x,
      const Eigen::VectorXd& y, const Eigen::VectorXd& z)>;

  ChartManifold(int dim, Box domain, MetricFn metric, FdConfig fd = {});

  ChartManifold& with_christoffel(ChristoffelFn fn);
  ChartManifold& with_curvature(CurvatureFn fn);

  int dim() const { return dim_; }
  const Box& domain() const { return domain_; }
  const FdConfig& fd() const { return fd_; }
  bool has_analytic_christoffel() const { return static_cast<bool>(christoffel_fn_); }
  bool has_analytic_curvature() const { return static_cast<bool>(curvature_fn_); }

  /// Gram matrix at p. Checks domain membership and symmetry, returns the
  /// symmetrized matrix.
  Eigen::MatrixXd metric(const ChartPoint& p) const;

  /// g_p(v, w) = v^T G(p) w.
  double metric_eval(const ChartPoint& p, const TangentVector& v, const TangentVector& w) const;

  /// Γ^k_{ij} at p; analytic override when present, central differences of
  /// the metric otherwise.
  ChristoffelSymbols christoffel(const ChartPoint& p) const;

  /// Finite-difference Christoffels, bypassing any analytic override.
  ChristoffelSymbols christoffel_fd(const ChartPoint& p) const;

  /// (∇_X Y)^k = X^i ∂_i Y^k + Γ^k_{ij} X^i Y^j. Tensorial in X.
  TangentVector covariant_derivative(const VectorField& X, const VectorField& Y,
                                     const ChartPoint& p) const;

  /// 𝔯(x, y)z with the convention 𝔯(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z,
  /// assembled from the coordinate tensor R^k_{lij}.
  TangentVector curvature(const TangentVector& x, const TangentVector& y,
                          const TangentVector& z, const ChartPoint& p) const;

  /// Curvature from Christoffel differences, bypassing any analytic override.
  TangentVector curvature_fd(const TangentVector& x, const TangentVector& y,
                             const TangentVector& z, const ChartPoint& p) const;

  /// Six-term Koszul right-hand side; equals 2 g(∇_X Y, Z) at p.
  double koszul_rhs(const VectorField& X, const VectorField& Y, const VectorField& Z,
                    const ChartPoint& p) const;

  void require_in_domain(const ChartPoint& p) const;
  void require_dim(const Eigen::VectorXd& v, const char* what) const;

private:
  ChristoffelSymbols christoffel_from_metric(const ChartPoint& p) const;
  Eigen::MatrixXd field_jacobian(const VectorField& f, const ChartPoint& p) const;

  int dim_;
  Box domain_;
  MetricFn metric_fn_;
  ChristoffelFn christoffel_fn_;
  CurvatureFn curvature_fn_;
  FdConfig fd_;
};

/// [X, Y]^k = X^i ∂_i Y^k − Y^i ∂_i X^k. Uses analytic Jacobians when the
/// fields carry them, central differences otherwise.
Eigen::VectorXd lie_bracket(const VectorField& X, const VectorField& Y,
                            const ChartPoint& p, const FdConfig& fd = {});

} // namespace tbgeo
