#pragma once

#include <Eigen/Dense>
#include <utility>

#include "tbgeo/bundle.hpp"
#include "tbgeo/errors.hpp"

namespace tbgeo::so3 {

/// Body-frame coordinates of a tangent vector R a^ at R.
using BodyVector = Eigen::Vector3d;

/// hat(v) w = v × w.
Eigen::Matrix3d hat(const BodyVector& v);

/// Inverse of hat; rejects inputs that are not skew-symmetric to 1e-10.
BodyVector vee(const Eigen::Matrix3d& m);

/// A rotation matrix, validated to orthonormality and unit determinant.
class Rotation {
public:
  explicit Rotation(const Eigen::Matrix3d& m);

  static Rotation identity() { return Rotation(Eigen::Matrix3d::Identity()); }
  /// Nearest rotation by polar projection (SVD).
  static Rotation project(const Eigen::Matrix3d& m);

  const Eigen::Matrix3d& matrix() const { return m_; }

private:
  Eigen::Matrix3d m_;
};

/// Rodrigues formula, series fallback below |v| = 1e-4.
Rotation exp_map(const BodyVector& v);

/// Principal logarithm; throws DomainError on the cut locus
/// (trace(R) <= -1 + eps).
BodyVector log_map(const Rotation& r);

/// Levi-Civita connection on SO(3) in matrix form:
/// Ydot + R (X^T Y + Y^T X)/2 with X = R zeta^, Y = R alpha^.
Eigen::Matrix3d edelman_connection(const Rotation& r, const BodyVector& zeta,
                                   const BodyVector& alpha, const Eigen::Matrix3d& ydot);

/// Bi-invariant curvature in body coordinates: vee(-[[x^, y^], z^]/4).
/// The sign matches the chart convention 𝔯(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z.
BodyVector curvature(const BodyVector& x, const BodyVector& y, const BodyVector& z);

/// Diagnostic variant with the opposite sign; exists so a convention
/// mismatch shows up as one failing agreement test rather than a hunt.
enum class CurvatureSign { Pinned, Flipped };
BodyVector curvature_signed(const BodyVector& x, const BodyVector& y, const BodyVector& z,
                            CurvatureSign sign);

/// A bundle field over TSO(3) in body coordinates alpha(omega), beta(omega),
/// with fiber Jacobians taken at the evaluation point. Zero Jacobians mean
/// the field is left-invariant with constant body coordinates.
struct LeftInvariantBundleField {
  BodyVector alpha;
  BodyVector beta;
  Eigen::Matrix3d dalpha_domega = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d dbeta_domega = Eigen::Matrix3d::Zero();
};

/// Closed-form connection on TSO(3) for left-invariant direction
/// X = (R zeta^, R eta^) and field Y = (R alpha^, R beta^) at the bundle
/// point (R, R omega^). Returns (horizontal, vertical) matrix components.
std::pair<Eigen::Matrix3d, Eigen::Matrix3d> tso3_connection_left_invariant(
    const MetricWeights& w, const Rotation& r, const BodyVector& omega, const BodyVector& zeta,
    const BodyVector& eta, const BodyVector& alpha, const BodyVector& beta);

/// Connection for fields whose body coordinates vary along the fiber.
/// `omegadot` is the fiber-coordinate velocity of the direction; for a
/// direction with connection-map component eta it equals eta - zeta×omega/2,
/// which fiber_coordinate_velocity computes.
std::pair<Eigen::Matrix3d, Eigen::Matrix3d> tso3_connection_general(
    const MetricWeights& w, const Rotation& r, const BodyVector& omega,
    const BodyVector& omegadot, const BodyVector& zeta, const BodyVector& eta,
    const LeftInvariantBundleField& field);

/// Chart velocity of the fiber coordinate induced by a bundle direction
/// (zeta, eta) at fiber point omega.
BodyVector fiber_coordinate_velocity(const BodyVector& omega, const BodyVector& zeta,
                                     const BodyVector& eta);

} // namespace tbgeo::so3
