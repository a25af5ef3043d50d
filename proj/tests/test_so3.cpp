#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tbgeo/charts.hpp"
#include "tbgeo/sampling.hpp"
#include "tbgeo/so3.hpp"

using namespace tbgeo;
namespace s3 = tbgeo::so3;

namespace {

Eigen::Vector3d rand3(Rng& rng, double scale = 1.0) {
  return Eigen::Vector3d(uniform(rng, -scale, scale), uniform(rng, -scale, scale),
                         uniform(rng, -scale, scale));
}

// Body components of the closed-form bundle connection.
std::pair<Eigen::Vector3d, Eigen::Vector3d> tso3_body(
    const MetricWeights& w, const s3::Rotation& r, const Eigen::Vector3d& omega,
    const Eigen::Vector3d& zeta, const Eigen::Vector3d& eta, const Eigen::Vector3d& alpha,
    const Eigen::Vector3d& beta) {
  auto [h, v] = s3::tso3_connection_left_invariant(w, r, omega, zeta, eta, alpha, beta);
  return {s3::vee(r.matrix().transpose() * h), s3::vee(r.matrix().transpose() * v)};
}

// Generic connection components assembled from the bi-invariant ingredients,
// optionally with the flipped curvature sign for diagnostics.
BundleTangent generic_blocks(const MetricWeights& w, const Eigen::Vector3d& omega,
                             const Eigen::Vector3d& zeta, const Eigen::Vector3d& eta,
                             const Eigen::Vector3d& alpha, const Eigen::Vector3d& beta,
                             s3::CurvatureSign sign = s3::CurvatureSign::Pinned) {
  auto curv = [sign](const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                     const Eigen::Vector3d& c) {
    return Eigen::VectorXd(s3::curvature_signed(a, b, c, sign));
  };
  const Eigen::VectorXd nabla_za = 0.5 * zeta.cross(alpha);
  const Eigen::VectorXd nabla_zb = 0.5 * zeta.cross(beta);
  BundleTangent out = lc_block_hh(w, nabla_za, curv(omega, zeta, alpha), curv(zeta, alpha, omega));
  out = out + lc_block_hv(w, nabla_zb, curv(omega, beta, zeta));
  out = out + lc_block_vh(w, curv(omega, eta, alpha));
  return out;
}

} // namespace

TEST_CASE("hat and vee") {
  const Eigen::Vector3d e1(1.0, 0.0, 0.0);
  Eigen::Matrix3d expected;
  expected << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  CHECK((s3::hat(e1) - expected).cwiseAbs().maxCoeff() == 0.0);

  Rng rng(9001);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector3d v = rand3(rng), w = rand3(rng);
    CHECK((s3::hat(v) * w - v.cross(w)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((s3::vee(s3::hat(v)) - v).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s3::hat(v) + s3::hat(v).transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s3::hat(v) * v).cwiseAbs().maxCoeff() < 1e-15);
  }

  Eigen::Matrix3d not_skew = Eigen::Matrix3d::Identity();
  CHECK_THROWS_AS(s3::vee(not_skew), std::invalid_argument);
}

TEST_CASE("exponential and logarithm") {
  CHECK((s3::exp_map(Eigen::Vector3d::Zero()).matrix() - Eigen::Matrix3d::Identity())
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // quarter turn about z
  const Eigen::Vector3d v(0.0, 0.0, M_PI / 2.0);
  Eigen::Matrix3d expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((s3::exp_map(v).matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);

  Rng rng(9002);
  for (int i = 0; i < 50; ++i) {
    Eigen::Vector3d x = rand3(rng, 2.0);
    if (x.norm() > 3.0) x *= 3.0 / x.norm();
    CHECK((s3::log_map(s3::exp_map(x)) - x).cwiseAbs().maxCoeff() < 1e-10);
  }

  // tiny angles go through the series branch
  const Eigen::Vector3d tiny(1e-6, -2e-6, 3e-7);
  CHECK((s3::log_map(s3::exp_map(tiny)) - tiny).cwiseAbs().maxCoeff() < 1e-16);

  // the cut locus is rejected
  const s3::Rotation pi_rot = s3::exp_map(Eigen::Vector3d(M_PI, 0.0, 0.0));
  CHECK_THROWS_AS(s3::log_map(pi_rot), DomainError);
}

TEST_CASE("rotation validation and projection") {
  Eigen::Matrix3d skewed = s3::exp_map(Eigen::Vector3d(0.3, 0.2, -0.4)).matrix();
  skewed(0, 1) += 1e-4;
  CHECK_THROWS_AS(s3::Rotation{skewed}, std::invalid_argument);
  const s3::Rotation fixed = s3::Rotation::project(skewed);
  CHECK((fixed.matrix().transpose() * fixed.matrix() - Eigen::Matrix3d::Identity())
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  Eigen::Matrix3d reflection = Eigen::Matrix3d::Identity();
  reflection(2, 2) = -1.0;
  CHECK_THROWS_AS(s3::Rotation{reflection}, std::invalid_argument);
}

TEST_CASE("edelman connection vanishes along one-parameter subgroups") {
  Rng rng(9003);
  const s3::Rotation r0 = s3::exp_map(rand3(rng));
  const Eigen::Vector3d zeta = rand3(rng);

  // Y(t) = d/dt R(t) along R(t) = R0 exp(t zeta^); Ydot from finite differences.
  auto velocity = [&](double t) {
    return (r0.matrix() * s3::exp_map((t * zeta).eval()).matrix() * s3::hat(zeta)).eval();
  };
  const double h = 1e-6;
  const Eigen::Matrix3d ydot = (velocity(h) - velocity(-h)) / (2.0 * h);
  const Eigen::Matrix3d acc = s3::edelman_connection(r0, zeta, zeta, ydot);
  CHECK(acc.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("edelman connection is bilinear in the body vectors") {
  Rng rng(9004);
  const s3::Rotation r = s3::exp_map(rand3(rng));
  const Eigen::Matrix3d zero = Eigen::Matrix3d::Zero();
  CHECK(s3::edelman_connection(r, Eigen::Vector3d::Zero(), rand3(rng), zero)
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK(s3::edelman_connection(r, rand3(rng), Eigen::Vector3d::Zero(), zero)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("edelman connection agrees with the exponential-chart covariant derivative") {
  const ChartManifold chart = make_so3_exp_chart();
  Rng rng(9005);
  for (int i = 0; i < 5; ++i) {
    const Eigen::VectorXd x = random_point_in(rng, chart.domain(), 0.5);
    const Eigen::Vector3d zeta = rand3(rng), alpha = rand3(rng);

    // left-invariant fields have chart components Jr(x)^-1 * body
    auto invariant_field = [](const Eigen::Vector3d& body) {
      return VectorField{[body](const Eigen::VectorXd& q) {
                           return Eigen::VectorXd(
                               so3_right_jacobian(Eigen::Vector3d(q)).inverse() * body);
                         },
                         nullptr};
    };
    const Eigen::VectorXd chart_result =
        chart.covariant_derivative(invariant_field(zeta), invariant_field(alpha), x);
    const Eigen::Vector3d body_result =
        so3_right_jacobian(Eigen::Vector3d(x)) * Eigen::Vector3d(chart_result);

    // body value of the connection for left-invariant fields
    const s3::Rotation r = s3::exp_map(Eigen::Vector3d(x));
    const Eigen::Matrix3d ydot = r.matrix() * s3::hat(zeta) * s3::hat(alpha);
    const Eigen::Vector3d edelman =
        s3::vee(r.matrix().transpose() * s3::edelman_connection(r, zeta, alpha, ydot));
    CHECK((body_result - edelman).cwiseAbs().maxCoeff() < 1e-5);
    CHECK((edelman - 0.5 * zeta.cross(alpha)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("bi-invariant curvature basics") {
  Rng rng(9006);
  const Eigen::Vector3d e1(1, 0, 0), e2(0, 1, 0);
  CHECK((s3::curvature(e1, e2, e2) - 0.25 * e1).cwiseAbs().maxCoeff() < 1e-15);

  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector3d x = rand3(rng), z = rand3(rng);
    CHECK(s3::curvature(x, x, z).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::Vector3d y = rand3(rng);
    const Eigen::Vector3d cyc =
        s3::curvature(x, y, z) + s3::curvature(y, z, x) + s3::curvature(z, x, y);
    CHECK(cyc.cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("bi-invariant curvature matches the chart curvature, pinning the sign") {
  const ChartManifold chart = make_so3_exp_chart();
  Rng rng(9007);
  for (int i = 0; i < 3; ++i) {
    const Eigen::VectorXd x = random_point_in(rng, chart.domain(), 0.4);
    const Eigen::Matrix3d jr = so3_right_jacobian(Eigen::Vector3d(x));
    const Eigen::Matrix3d jr_inv = jr.inverse();
    const Eigen::Vector3d a = rand3(rng), b = rand3(rng), c = rand3(rng);

    const Eigen::Vector3d via_chart =
        jr * Eigen::Vector3d(chart.curvature_fd(jr_inv * a, jr_inv * b, jr_inv * c, x));
    const Eigen::Vector3d pinned = s3::curvature(a, b, c);
    const Eigen::Vector3d flipped =
        s3::curvature_signed(a, b, c, s3::CurvatureSign::Flipped);
    CHECK((via_chart - pinned).cwiseAbs().maxCoeff() < 1e-4);
    CHECK((via_chart - flipped).cwiseAbs().maxCoeff() > 1e-2);
  }
}

TEST_CASE("closed-form bundle connection with zero fiber reduces to edelman terms") {
  Rng rng(9008);
  const s3::Rotation r = s3::exp_map(rand3(rng));
  const Eigen::Vector3d zeta = rand3(rng), eta = rand3(rng), alpha = rand3(rng),
                        beta = rand3(rng);
  const MetricWeights w = random_admissible_weights(rng);

  auto [h, v] = tso3_body(w, r, Eigen::Vector3d::Zero(), zeta, eta, alpha, beta);
  CHECK((h - 0.5 * zeta.cross(alpha)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((v - 0.5 * zeta.cross(beta)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("closed-form bundle connection matches the generic components") {
  Rng rng(9009);
  for (int i = 0; i < 100; ++i) {
    const MetricWeights w = random_admissible_weights(rng);
    const s3::Rotation r = s3::exp_map(rand3(rng));
    const Eigen::Vector3d omega = rand3(rng), zeta = rand3(rng), eta = rand3(rng),
                          alpha = rand3(rng), beta = rand3(rng);

    const auto [h, v] = tso3_body(w, r, omega, zeta, eta, alpha, beta);
    const BundleTangent generic = generic_blocks(w, omega, zeta, eta, alpha, beta);
    CHECK((h - generic.horizontal).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((v - generic.vertical).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("flipped curvature sign breaks the closed-form agreement") {
  Rng rng(9010);
  const MetricWeights w{2.0, 1.0, 3.0};
  const s3::Rotation r = s3::Rotation::identity();
  const Eigen::Vector3d omega(0.7, -0.4, 0.9), zeta(1.0, 0.2, -0.5), eta(0.3, 0.8, 0.1),
      alpha(-0.6, 0.5, 0.4), beta(0.2, -0.9, 0.6);
  const auto [h, v] = tso3_body(w, r, omega, zeta, eta, alpha, beta);
  const BundleTangent wrong =
      generic_blocks(w, omega, zeta, eta, alpha, beta, s3::CurvatureSign::Flipped);
  CHECK((h - wrong.horizontal).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("body components of the bundle connection are left-invariant") {
  Rng rng(9011);
  const MetricWeights w = random_admissible_weights(rng);
  const Eigen::Vector3d omega = rand3(rng), zeta = rand3(rng), eta = rand3(rng),
                        alpha = rand3(rng), beta = rand3(rng);
  const auto [h0, v0] = tso3_body(w, s3::Rotation::identity(), omega, zeta, eta, alpha, beta);
  for (int i = 0; i < 5; ++i) {
    const auto [h, v] = tso3_body(w, s3::exp_map(rand3(rng)), omega, zeta, eta, alpha, beta);
    CHECK((h - h0).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((v - v0).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("sasaki weights reduce the closed form to the kowalski table") {
  Rng rng(9012);
  const MetricWeights sasaki{1.0, 0.0, 1.0};
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector3d omega = rand3(rng), zeta = rand3(rng), eta = rand3(rng),
                          alpha = rand3(rng), beta = rand3(rng);
    const auto [h, v] =
        tso3_body(sasaki, s3::Rotation::identity(), omega, zeta, eta, alpha, beta);
    const Eigen::Vector3d expected_h = 0.5 * zeta.cross(alpha) +
                                       0.5 * s3::curvature(omega, beta, zeta) +
                                       0.5 * s3::curvature(omega, eta, alpha);
    const Eigen::Vector3d expected_v =
        0.5 * zeta.cross(beta) - 0.5 * s3::curvature(zeta, alpha, omega);
    CHECK((h - expected_h).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((v - expected_v).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("general-field connection reduces and applies the fiber correction") {
  Rng rng(9013);
  const MetricWeights w = random_admissible_weights(rng);
  const s3::Rotation r = s3::exp_map(rand3(rng));
  const Eigen::Vector3d omega = rand3(rng), zeta = rand3(rng), eta = rand3(rng);
  const s3::LeftInvariantBundleField frozen{rand3(rng), rand3(rng), Eigen::Matrix3d::Zero(),
                                            Eigen::Matrix3d::Zero()};
  const Eigen::Vector3d omegadot = s3::fiber_coordinate_velocity(omega, zeta, eta);

  auto [gh, gv] = s3::tso3_connection_general(w, r, omega, omegadot, zeta, eta, frozen);
  auto [lh, lv] =
      s3::tso3_connection_left_invariant(w, r, omega, zeta, eta, frozen.alpha, frozen.beta);
  CHECK((gh - lh).cwiseAbs().maxCoeff() == 0.0);
  CHECK((gv - lv).cwiseAbs().maxCoeff() == 0.0);

  // identity Jacobian along a purely vertical direction: correction R hat(eta)
  s3::LeftInvariantBundleField varying = frozen;
  varying.dalpha_domega = Eigen::Matrix3d::Identity();
  const Eigen::Vector3d vert_eta = rand3(rng);
  const Eigen::Vector3d vert_omegadot =
      s3::fiber_coordinate_velocity(omega, Eigen::Vector3d::Zero(), vert_eta);
  CHECK((vert_omegadot - vert_eta).cwiseAbs().maxCoeff() == 0.0);
  auto [ch, cv] = s3::tso3_connection_general(w, r, omega, vert_omegadot,
                                              Eigen::Vector3d::Zero(), vert_eta, varying);
  auto [bh, bv] = s3::tso3_connection_left_invariant(w, r, omega, Eigen::Vector3d::Zero(),
                                                     vert_eta, varying.alpha, varying.beta);
  CHECK((ch - bh - r.matrix() * s3::hat(vert_eta)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((cv - bv).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("metric compatibility along curves for left-invariant fields") {
  // Constant body coordinates: the pairing is constant in t, and the
  // connection-side terms must cancel exactly.
  Rng rng(9015);
  for (int i = 0; i < 10; ++i) {
    const MetricWeights w = random_admissible_weights(rng);
    const Eigen::Vector3d omega = rand3(rng), omegadot = rand3(rng), zeta = rand3(rng);
    const Eigen::Vector3d eta = omegadot + 0.5 * zeta.cross(omega);
    const Eigen::Vector3d ay = rand3(rng), by = rand3(rng), az = rand3(rng), bz = rand3(rng);
    const s3::Rotation id = s3::Rotation::identity();

    auto body_pair = [&](const std::pair<Eigen::Matrix3d, Eigen::Matrix3d>& hv,
                         const Eigen::Vector3d& alpha, const Eigen::Vector3d& beta) {
      const Eigen::Vector3d dh = s3::vee(hv.first), dv = s3::vee(hv.second);
      return w.m1 * dh.dot(alpha) + w.m2 * (dh.dot(beta) + dv.dot(alpha)) +
             w.m3 * dv.dot(beta);
    };
    const double rhs =
        body_pair(s3::tso3_connection_left_invariant(w, id, omega, zeta, eta, ay, by), az,
                  bz) +
        body_pair(s3::tso3_connection_left_invariant(w, id, omega, zeta, eta, az, bz), ay,
                  by);
    CHECK(std::abs(rhs) < 1e-12); // d/dt of a constant pairing
  }
}

TEST_CASE("metric compatibility along fiber-varying curves, with negative control") {
  Rng rng(9014);
  int control_hits = 0;
  for (int i = 0; i < 20; ++i) {
    const MetricWeights w = random_admissible_weights(rng);

    // curve data: omega(t) quadratic, zeta(t) linear; eta from the kinematics
    const Eigen::Vector3d w0 = rand3(rng), w1 = rand3(rng), w2 = rand3(rng);
    const Eigen::Vector3d z0 = rand3(rng), z1 = rand3(rng);
    auto omega_t = [&](double t) { return (w0 + t * w1 + 0.5 * t * t * w2).eval(); };
    auto omegadot_t = [&](double t) { return (w1 + t * w2).eval(); };
    auto zeta_t = [&](double t) { return (z0 + t * z1).eval(); };
    auto eta_t = [&](double t) {
      return (omegadot_t(t) + 0.5 * zeta_t(t).cross(omega_t(t))).eval();
    };

    // linear bundle fields alpha(omega), beta(omega) with exact Jacobians
    const Eigen::Matrix3d ay = random_matrix(rng, 3, 3), by = random_matrix(rng, 3, 3);
    const Eigen::Matrix3d az = random_matrix(rng, 3, 3), bz = random_matrix(rng, 3, 3);
    const Eigen::Vector3d ay0 = rand3(rng), by0 = rand3(rng), az0 = rand3(rng),
                          bz0 = rand3(rng);
    auto field_y = [&](const Eigen::Vector3d& om) {
      return s3::LeftInvariantBundleField{ay0 + ay * om, by0 + by * om, ay, by};
    };
    auto field_z = [&](const Eigen::Vector3d& om) {
      return s3::LeftInvariantBundleField{az0 + az * om, bz0 + bz * om, az, bz};
    };

    auto pairing = [&](double t) {
      const auto fy = field_y(omega_t(t));
      const auto fz = field_z(omega_t(t));
      return w.m1 * fy.alpha.dot(fz.alpha) + w.m2 * (fy.alpha.dot(fz.beta) + fy.beta.dot(fz.alpha)) +
             w.m3 * fy.beta.dot(fz.beta);
    };
    const double dt = 1e-6;
    const double lhs = (pairing(dt) - pairing(-dt)) / (2.0 * dt);

    const Eigen::Vector3d omega = omega_t(0.0), omegadot = omegadot_t(0.0),
                          zeta = zeta_t(0.0), eta = eta_t(0.0);
    const s3::Rotation r = s3::Rotation::identity();
    auto body = [&](const std::pair<Eigen::Matrix3d, Eigen::Matrix3d>& hv) {
      return std::make_pair(s3::vee(hv.first), s3::vee(hv.second));
    };
    auto pair_with = [&](const std::pair<Eigen::Vector3d, Eigen::Vector3d>& d,
                         const s3::LeftInvariantBundleField& f) {
      return w.m1 * d.first.dot(f.alpha) + w.m2 * (d.first.dot(f.beta) + d.second.dot(f.alpha)) +
             w.m3 * d.second.dot(f.beta);
    };

    const auto dy = body(
        s3::tso3_connection_general(w, r, omega, omegadot, zeta, eta, field_y(omega)));
    const auto dz = body(
        s3::tso3_connection_general(w, r, omega, omegadot, zeta, eta, field_z(omega)));
    const double rhs = pair_with(dy, field_z(omega)) + pair_with(dz, field_y(omega));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6).scale(1.0));

    // negative control: dropping the fiber correction must break compatibility
    const auto fy = field_y(omega);
    const auto fz = field_z(omega);
    const auto dy_frozen =
        body(s3::tso3_connection_left_invariant(w, r, omega, zeta, eta, fy.alpha, fy.beta));
    const auto dz_frozen =
        body(s3::tso3_connection_left_invariant(w, r, omega, zeta, eta, fz.alpha, fz.beta));
    const double rhs_frozen = pair_with(dy_frozen, fz) + pair_with(dz_frozen, fy);
    if (std::abs(lhs - rhs_frozen) > 1e-3) ++control_hits;
  }
  CHECK(control_hits == 20);
}
