#include "tbgeo/geodesic.hpp"

#include <cmath>

namespace tbgeo::so3 {

double geodesic_energy(const MetricWeights& w, const BodyVector& zeta, const BodyVector& eta) {
  return w.m1 * zeta.squaredNorm() + 2.0 * w.m2 * zeta.dot(eta) + w.m3 * eta.squaredNorm();
}

namespace {

struct State {
  Eigen::Matrix3d r;
  BodyVector omega, zeta, eta;

  State operator+(const State& o) const { return {r + o.r, omega + o.omega, zeta + o.zeta, eta + o.eta}; }
  State operator*(double s) const { return {s * r, s * omega, s * zeta, s * eta}; }
};

State derivative(const MetricWeights& w, const State& s) {
  const BodyVector omegadot = fiber_coordinate_velocity(s.omega, s.zeta, s.eta);
  // Velocity extended as the frozen left-invariant field; body components of
  // the connection are R-independent, so evaluate at the identity.
  const LeftInvariantBundleField frozen{s.zeta, s.eta, Eigen::Matrix3d::Zero(),
                                        Eigen::Matrix3d::Zero()};
  auto [h, v] = tso3_connection_general(w, Rotation::identity(), s.omega, omegadot, s.zeta,
                                        s.eta, frozen);
  return {s.r * hat(s.zeta), omegadot, -vee(h), -vee(v)};
}

} // namespace

std::vector<GeodesicSample> integrate_geodesic(const GeodesicConfig& cfg) {
  require_admissible(cfg.weights);
  if (!(cfg.step > 0.0)) throw std::invalid_argument("geodesic: step size must be positive");
  if (!(cfg.duration >= 0.0)) throw std::invalid_argument("geodesic: duration must be non-negative");

  State s{Rotation::project(cfg.r0).matrix(), cfg.omega0, cfg.zeta0, cfg.eta0};
  const auto steps = static_cast<long>(std::llround(cfg.duration / cfg.step));

  std::vector<GeodesicSample> out;
  out.reserve(static_cast<size_t>(steps) + 1);
  auto record = [&](double t) {
    out.push_back({t, s.r, s.omega, s.zeta, s.eta,
                   geodesic_energy(cfg.weights, s.zeta, s.eta)});
  };
  record(0.0);

  const double h = cfg.step;
  for (long i = 0; i < steps; ++i) {
    const State k1 = derivative(cfg.weights, s);
    const State k2 = derivative(cfg.weights, s + k1 * (0.5 * h));
    const State k3 = derivative(cfg.weights, s + k2 * (0.5 * h));
    const State k4 = derivative(cfg.weights, s + k3 * h);
    s = s + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
    s.r = Rotation::project(s.r).matrix();
    record(h * static_cast<double>(i + 1));
  }
  return out;
}

} // namespace tbgeo::so3
