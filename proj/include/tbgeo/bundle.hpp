#pragma once

#include <array>
#include <utility>

#include "tbgeo/manifold.hpp"

namespace tbgeo {

/// Weights (m1, m2, m3) of the generalized bundle metric. Admissible iff
/// m1 > 0, m3 > 0 and m1*m3 - m2^2 > 0; construct through validate_weights
/// to enforce that.
struct MetricWeights {
  double m1 = 1.0;
  double m2 = 0.0;
  double m3 = 1.0;

  double det() const { return m1 * m3 - m2 * m2; }
};

/// Validates the admissibility inequalities; throws AdmissibilityError naming
/// the one that failed.
MetricWeights validate_weights(double m1, double m2, double m3);
void require_admissible(const MetricWeights& w);

/// A point of the tangent bundle: base chart point plus fiber vector.
struct BundlePoint {
  ChartPoint base;
  TangentVector fiber;
};

/// An element of the bundle tangent space in its canonical decomposition:
/// `horizontal` is the projection image, `vertical` the connection-map image.
struct BundleTangent {
  TangentVector horizontal;
  TangentVector vertical;

  static BundleTangent zero(int n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  }
  BundleTangent operator+(const BundleTangent& o) const {
    return {horizontal + o.horizontal, vertical + o.vertical};
  }
  BundleTangent operator-(const BundleTangent& o) const {
    return {horizontal - o.horizontal, vertical - o.vertical};
  }
  double max_abs() const {
    return std::max(horizontal.cwiseAbs().maxCoeff(), vertical.cwiseAbs().maxCoeff());
  }
};

enum class LiftKind { Horizontal, Vertical };

BundleTangent horizontal_lift(const TangentVector& x);
BundleTangent vertical_lift(const TangentVector& x);

/// ḡ(X, Y) = m1 g(Xh,Yh) + m2 g(Xh,Yv) + m2 g(Xv,Yh) + m3 g(Xv,Yv), with all
/// base-metric pairings taken at P.base.
double bundle_metric(const MetricWeights& w, const ChartManifold& M, const BundlePoint& P,
                     const BundleTangent& X, const BundleTangent& Y);

/// Block matrix [[m1 I, m2 I],[m2 I, m3 I]] (no admissibility requirement so
/// the degenerate side of the spectrum can be examined).
Eigen::MatrixXd weight_matrix_raw(double m1, double m2, double m3, int n);
Eigen::MatrixXd weight_matrix(const MetricWeights& w, int n);
Eigen::MatrixXd weight_matrix_inverse(const MetricWeights& w, int n);

/// Chart tangent (xdot, udot) at P to its (projection, connection-map)
/// components: horizontal = xdot, vertical = udot + Γ(xdot, u).
BundleTangent chart_to_bundle_tangent(const ChartManifold& M, const BundlePoint& P,
                                      const TangentVector& xdot, const TangentVector& udot);

/// Inverse of chart_to_bundle_tangent: returns (xdot, udot).
std::pair<TangentVector, TangentVector> bundle_tangent_to_chart(const ChartManifold& M,
                                                                const BundlePoint& P,
                                                                const BundleTangent& X);

/// Inverse-weight operator: pairing f∘X with Y under ḡ gives the plain
/// component pairing g(Xh,Yh) + g(Xv,Yv).
BundleTangent f_map(const MetricWeights& w, const BundleTangent& X);

/// Lie brackets of lifted fields: [Xv,Yv] = 0, [Xh,Yv] = (∇_X Y)^v,
/// [Xh,Yh] = [X,Y]^h − (𝔯(X,Y)u)^v.
BundleTangent lift_bracket_oracle(const ChartManifold& M, const VectorField& X,
                                  const VectorField& Y, const BundlePoint& P,
                                  LiftKind kind_x, LiftKind kind_y);

// Connection components for lifted directions/fields, as pure algebra over
// precomputed geometric ingredients. Δ = m1*m3 - m2^2 throughout.
BundleTangent lc_block_hh(const MetricWeights& w, const TangentVector& nabla_xy,
                          const TangentVector& r_ux_y, const TangentVector& r_xy_u);
BundleTangent lc_block_hv(const MetricWeights& w, const TangentVector& nabla_xy,
                          const TangentVector& r_uy_x);
BundleTangent lc_block_vh(const MetricWeights& w, const TangentVector& r_ux_y);
BundleTangent lc_block_vv(const MetricWeights& w, int n);

/// One connection component for a lifted direction and a lifted field,
/// with the ingredients evaluated on the chart manifold.
BundleTangent lc_connection_lifts(const MetricWeights& w, const ChartManifold& M,
                                  const BundlePoint& P, const VectorField& X,
                                  const VectorField& Y, LiftKind kind_direction,
                                  LiftKind kind_field);

/// Bilinear extension: direction F^h + G^v (values), field A^h + B^v (base
/// fields); sums the four lift blocks.
BundleTangent lc_connection_bundle(const MetricWeights& w, const ChartManifold& M,
                                   const BundlePoint& P, const TangentVector& F,
                                   const TangentVector& G, const VectorField& A,
                                   const VectorField& B);

/// A general bundle field near an anchor point, split into its anchored
/// lift-decomposable part and the fiber Jacobians of the residual. The base
/// fields carry the horizontal variation (their values at the anchor are the
/// anchored components); the Jacobians are taken along the fiber at the
/// anchor, where the residual itself vanishes.
struct GeneralFieldDecomposition {
  VectorField A; // horizontal part over the base
  VectorField B; // vertical part over the base
  Eigen::MatrixXd dC_du;
  Eigen::MatrixXd dD_du;

  static GeneralFieldDecomposition lift_decomposable(VectorField A, VectorField B, int n) {
    return {std::move(A), std::move(B), Eigen::MatrixXd::Zero(n, n),
            Eigen::MatrixXd::Zero(n, n)};
  }
  /// Anchored values with constant base extensions.
  static GeneralFieldDecomposition from_values(const TangentVector& A, const TangentVector& B,
                                               Eigen::MatrixXd dC_du, Eigen::MatrixXd dD_du) {
    return {constant_field(A), constant_field(B), std::move(dC_du), std::move(dD_du)};
  }
};

/// A bundle vector field in induced chart coordinates:
/// (x, u) -> (xdot-component, udot-component).
using BundleChartField =
    std::function<std::pair<Eigen::VectorXd, Eigen::VectorXd>(const Eigen::VectorXd& x,
                                                              const Eigen::VectorXd& u)>;

/// Splits a chart-coordinate bundle field at P into the anchored
/// lift-decomposable part (base extensions follow first-order parallel
/// transport of the fiber, which pins the horizontal derivatives) and the
/// fiber Jacobians of its lift components.
GeneralFieldDecomposition decompose_bundle_field(const ChartManifold& M,
                                                 const BundleChartField& field,
                                                 const BundlePoint& P);

/// Connection for a general (non-lift-decomposable) field: the
/// lift-decomposable part through the four blocks, plus the flat fiber
/// directional derivative of the residual along the vertical direction.
BundleTangent lc_connection_general(const MetricWeights& w, const ChartManifold& M,
                                    const BundlePoint& P, const BundleTangent& direction,
                                    const GeneralFieldDecomposition& field);

/// Right-hand sides of the eight Koszul pairings
/// 2 ḡ(∇̄_{X^a} Y^b, Z^c), ordered (hhh, hhv, hvh, hvv, vhh, vhv, vvh, vvv).
std::array<double, 8> koszul_pairings_oracle(const MetricWeights& w, const ChartManifold& M,
                                             const BundlePoint& P, const VectorField& X,
                                             const VectorField& Y, const VectorField& Z);

/// Gram matrix of ḡ on induced chart tangents (xdot, udot): conjugation of
/// the block weight form by (xdot, udot) -> (xdot, udot + Γ(xdot, u)).
Eigen::MatrixXd induced_bundle_gram(const MetricWeights& w, const ChartManifold& M,
                                    const ChartPoint& x, const TangentVector& u);

/// The tangent bundle of M as a 2n-dimensional chart manifold with the
/// induced Gram matrix. No analytic overrides: everything downstream is
/// finite differences, which is what makes it a brute-force oracle surface.
ChartManifold make_bundle_chart(const MetricWeights& w, const ChartManifold& M,
                                double fiber_half_width);

} // namespace tbgeo
