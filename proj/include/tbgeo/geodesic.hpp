#pragma once

#include <vector>

#include "tbgeo/so3.hpp"

namespace tbgeo::so3 {

struct GeodesicConfig {
  MetricWeights weights;
  Eigen::Matrix3d r0 = Eigen::Matrix3d::Identity();
  BodyVector omega0 = BodyVector::Zero(); // fiber coordinate
  BodyVector zeta0 = BodyVector::Zero();  // horizontal velocity, body frame
  BodyVector eta0 = BodyVector::Zero();   // vertical velocity, body frame
  double duration = 10.0;
  double step = 1e-3;
};

struct GeodesicSample {
  double t;
  Eigen::Matrix3d r;
  BodyVector omega;
  BodyVector zeta;
  BodyVector eta;
  double energy; // ḡ(γ', γ'), constant along exact geodesics
};

/// Fixed-step RK4 for the geodesic equation of the bundle metric on TSO(3),
/// integrating (R, omega, zeta, eta) with R re-orthonormalized each step.
/// Samples include the initial state and every accepted step.
std::vector<GeodesicSample> integrate_geodesic(const GeodesicConfig& cfg);

/// ḡ(γ', γ') for velocity body components (zeta, eta).
double geodesic_energy(const MetricWeights& w, const BodyVector& zeta, const BodyVector& eta);

} // namespace tbgeo::so3
