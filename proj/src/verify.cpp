#include "tbgeo/verify.hpp"

#include <stdexcept>

#include "tbgeo/charts.hpp"
#include "tbgeo/sampling.hpp"
#include "tbgeo/so3.hpp"

namespace tbgeo::verify {

namespace {

nlohmann::json vec_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

nlohmann::json weights_json(const MetricWeights& w) {
  return {{"m1", w.m1}, {"m2", w.m2}, {"m3", w.m3}};
}

struct ResidualTracker {
  double max_residual = 0.0;
  nlohmann::json worst;

  void update(double residual, const nlohmann::json& inputs) {
    if (residual > max_residual || worst.is_null()) {
      max_residual = std::max(residual, max_residual);
      worst = inputs;
    }
  }
};

void require_valid(const CheckSpec& spec) {
  if (!(spec.tolerance > 0.0) || spec.sample_count < 1 || spec.inner_count < 1)
    throw std::invalid_argument("invalid check spec for " + spec.check_id +
                                ": tolerance must be positive and counts at least 1");
}

CheckReport finish(const CheckSpec& spec, const ResidualTracker& tracker, int samples) {
  CheckReport report;
  report.check_id = spec.check_id;
  report.max_residual = tracker.max_residual;
  report.pass = tracker.max_residual < spec.tolerance;
  report.samples_run = samples;
  report.worst_case_inputs = tracker.worst;
  report.seed = spec.seed;
  return report;
}

// Chart components of lifted base fields on the induced 2n-dim chart.
VectorField lifted_field_chart(const ChartManifold& base, const VectorField& f, LiftKind kind) {
  const int n = base.dim();
  if (kind == LiftKind::Vertical) {
    return VectorField{[f, n](const Eigen::VectorXd& xu) {
                         Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * n);
                         out.tail(n) = f(xu.head(n));
                         return out;
                       },
                       nullptr};
  }
  return VectorField{[base, f, n](const Eigen::VectorXd& xu) {
                       const Eigen::VectorXd x = xu.head(n);
                       const Eigen::VectorXd u = xu.tail(n);
                       const Eigen::VectorXd fx = f(x);
                       Eigen::VectorXd out(2 * n);
                       out.head(n) = fx;
                       out.tail(n) = -christoffel_contract(base.christoffel(x), fx, u);
                       return out;
                     },
                     nullptr};
}

struct SasakiIngredients {
  Eigen::VectorXd nabla_xy, r_ux_y, r_xy_u, r_uy_x;
};

// Kowalski's connection table for the Sasaki metric, written out on its own
// so the reduction test has an independent target.
BundleTangent kowalski_table(const SasakiIngredients& in, LiftKind kd, LiftKind kf, int n) {
  if (kd == LiftKind::Horizontal && kf == LiftKind::Horizontal)
    return {in.nabla_xy, -0.5 * in.r_xy_u};
  if (kd == LiftKind::Horizontal && kf == LiftKind::Vertical)
    return {0.5 * in.r_uy_x, in.nabla_xy};
  if (kd == LiftKind::Vertical && kf == LiftKind::Horizontal)
    return {0.5 * in.r_ux_y, Eigen::VectorXd::Zero(n)};
  return BundleTangent::zero(n);
}

constexpr LiftKind kKinds[2] = {LiftKind::Horizontal, LiftKind::Vertical};

} // namespace

std::string manifold_name(ManifoldId id) {
  switch (id) {
    case ManifoldId::EuclideanN: return "euclidean_n";
    case ManifoldId::Sphere2Stereographic: return "sphere2_stereographic";
    case ManifoldId::So3: return "so3";
  }
  return "unknown";
}

ManifoldId parse_manifold(const std::string& name) {
  if (name == "euclidean_n" || name == "euclidean" || name == "euclidean2")
    return ManifoldId::EuclideanN;
  if (name == "sphere2_stereographic" || name == "sphere2")
    return ManifoldId::Sphere2Stereographic;
  if (name == "so3") return ManifoldId::So3;
  throw std::invalid_argument("unknown manifold: " + name);
}

ChartManifold make_manifold(ManifoldId id, int dim) {
  switch (id) {
    case ManifoldId::EuclideanN: return make_euclidean(dim);
    case ManifoldId::Sphere2Stereographic: return make_sphere2_stereographic();
    case ManifoldId::So3: return make_so3_exp_chart();
  }
  throw std::invalid_argument("unknown manifold id");
}

nlohmann::json check_report_to_json(const CheckReport& report) {
  return {{"check_id", report.check_id},
          {"pass", report.pass},
          {"max_residual", report.max_residual},
          {"samples_run", report.samples_run},
          {"worst_case_inputs", report.worst_case_inputs},
          {"seed", report.seed}};
}

CheckReport check_positive_definite(const CheckSpec& spec) {
  require_valid(spec);
  const ChartManifold m = make_manifold(spec.manifold, spec.dim);
  const int n = m.dim();
  Rng rng(spec.seed);
  ResidualTracker tracker;

  // Inadmissible configured weights are a recorded failure, not a crash.
  try {
    require_admissible(spec.weights);
  } catch (const AdmissibilityError& err) {
    CheckReport report;
    report.check_id = spec.check_id;
    report.pass = false;
    report.max_residual = std::numeric_limits<double>::max();
    report.samples_run = 0;
    report.worst_case_inputs = {{"admissibility_error", err.what()},
                                {"failed_condition", err.failed_condition}};
    report.seed = spec.seed;
    return report;
  }

  for (int s = 0; s < spec.sample_count; ++s) {
    const MetricWeights w = s == 0 ? spec.weights : random_admissible_weights(rng, 0.97);
    const Eigen::VectorXd p = random_point_in(rng, m.domain());
    const BundlePoint pt{p, random_vector(rng, n)};

    double min_value = std::numeric_limits<double>::max();
    Eigen::VectorXd worst_h, worst_v;
    for (int i = 0; i < spec.inner_count; ++i) {
      BundleTangent z{random_vector(rng, n), random_vector(rng, n)};
      if (z.max_abs() < 1e-6) z.horizontal[0] += 1.0;
      const double value = bundle_metric(w, m, pt, z, z);
      if (value < min_value) {
        min_value = value;
        worst_h = z.horizontal;
        worst_v = z.vertical;
      }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(weight_matrix(w, n));
    const double lambda_min = eig.eigenvalues().minCoeff();

    const MetricWeights bad = random_inadmissible_weights(rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_bad(
        weight_matrix_raw(bad.m1, bad.m2, bad.m3, n));
    const double lambda_min_bad = eig_bad.eigenvalues().minCoeff();

    const double residual =
        std::max({0.0, -min_value, -lambda_min, lambda_min_bad});
    tracker.update(residual, {{"sample", s},
                              {"weights", weights_json(w)},
                              {"inadmissible_weights", weights_json(bad)},
                              {"point", vec_json(p)},
                              {"min_metric_value", min_value},
                              {"lambda_min", lambda_min},
                              {"lambda_min_inadmissible", lambda_min_bad},
                              {"worst_horizontal", vec_json(worst_h)},
                              {"worst_vertical", vec_json(worst_v)}});
  }
  return finish(spec, tracker, spec.sample_count);
}

CheckReport check_koszul_items(const CheckSpec& spec) {
  require_valid(spec);
  const ChartManifold m = make_manifold(spec.manifold, spec.dim);
  const int n = m.dim();
  Rng rng(spec.seed);
  ResidualTracker tracker;

  for (int s = 0; s < spec.sample_count; ++s) {
    const MetricWeights w = s == 0 ? spec.weights : random_admissible_weights(rng);
    const BundlePoint pt{random_point_in(rng, m.domain()), random_vector(rng, n)};
    const VectorField x = random_quadratic_field(rng, n);
    const VectorField y = random_quadratic_field(rng, n);
    const VectorField z = random_quadratic_field(rng, n);

    const std::array<double, 8> rhs = koszul_pairings_oracle(w, m, pt, x, y, z);
    const Eigen::VectorXd zv = z(pt.base);

    double residual = 0.0;
    int worst_item = 0;
    int item = 0;
    for (LiftKind kd : kKinds)
      for (LiftKind kf : kKinds) {
        const BundleTangent conn = lc_connection_lifts(w, m, pt, x, y, kd, kf);
        for (LiftKind kz : kKinds) {
          const BundleTangent zl =
              kz == LiftKind::Horizontal ? horizontal_lift(zv) : vertical_lift(zv);
          const double lhs = 2.0 * bundle_metric(w, m, pt, conn, zl);
          const double r = std::abs(lhs - rhs[static_cast<size_t>(item)]);
          if (r > residual) {
            residual = r;
            worst_item = item;
          }
          ++item;
        }
      }
    tracker.update(residual, {{"sample", s},
                              {"weights", weights_json(w)},
                              {"point", vec_json(pt.base)},
                              {"fiber", vec_json(pt.fiber)},
                              {"worst_item", worst_item + 1}});
  }
  return finish(spec, tracker, spec.sample_count);
}

CheckReport check_torsion_and_compatibility(const CheckSpec& spec) {
  require_valid(spec);
  const ChartManifold m = make_manifold(spec.manifold, spec.dim);
  const int n = m.dim();
  Rng rng(spec.seed);
  ResidualTracker tracker;

  for (int s = 0; s < spec.sample_count; ++s) {
    const MetricWeights w = s == 0 ? spec.weights : random_admissible_weights(rng);
    const BundlePoint pt{random_point_in(rng, m.domain()), random_vector(rng, n)};

    // Torsion: ∇̄_X̄ Ȳ − ∇̄_Ȳ X̄ = [X̄, Ȳ] for lift-decomposable fields.
    const VectorField a1 = random_quadratic_field(rng, n), b1 = random_quadratic_field(rng, n);
    const VectorField a2 = random_quadratic_field(rng, n), b2 = random_quadratic_field(rng, n);
    const BundleTangent forward =
        lc_connection_bundle(w, m, pt, a1(pt.base), b1(pt.base), a2, b2);
    const BundleTangent backward =
        lc_connection_bundle(w, m, pt, a2(pt.base), b2(pt.base), a1, b1);
    const BundleTangent bracket =
        lift_bracket_oracle(m, a1, a2, pt, LiftKind::Horizontal, LiftKind::Horizontal) +
        lift_bracket_oracle(m, a1, b2, pt, LiftKind::Horizontal, LiftKind::Vertical) +
        lift_bracket_oracle(m, b1, a2, pt, LiftKind::Vertical, LiftKind::Horizontal);
    const double torsion_residual = (forward - backward - bracket).max_abs();

    // Compatibility along a bundle curve with fiber-varying fields:
    // d/dt ḡ(Ȳ, Z̄) = ḡ(∇̄Ȳ, Z̄) + ḡ(Ȳ, ∇̄Z̄).
    const Eigen::VectorXd xv = random_vector(rng, n, 0.5), xa = random_vector(rng, n, 0.5);
    const Eigen::VectorXd uv = random_vector(rng, n, 0.5), ua = random_vector(rng, n, 0.5);
    auto curve = [&](double t) {
      return BundlePoint{pt.base + t * xv + 0.5 * t * t * xa,
                         pt.fiber + t * uv + 0.5 * t * t * ua};
    };

    const VectorField yraw = random_quadratic_field(rng, 2 * n);
    const VectorField zraw = random_quadratic_field(rng, 2 * n);
    auto as_bundle_field = [n](const VectorField& raw) {
      return BundleChartField([raw, n](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        Eigen::VectorXd xu(2 * n);
        xu << x, u;
        const Eigen::VectorXd v = raw(xu);
        return std::make_pair(v.head(n).eval(), v.tail(n).eval());
      });
    };
    const BundleChartField ybar = as_bundle_field(yraw);
    const BundleChartField zbar = as_bundle_field(zraw);

    auto field_at = [&](const BundleChartField& f, const BundlePoint& q) {
      auto [av, bv] = f(q.base, q.fiber);
      return chart_to_bundle_tangent(m, q, av, bv);
    };
    auto pairing = [&](double t) {
      const BundlePoint q = curve(t);
      return bundle_metric(w, m, q, field_at(ybar, q), field_at(zbar, q));
    };

    const double dt = 1e-5;
    const double lhs = (pairing(dt) - pairing(-dt)) / (2.0 * dt);

    const BundleTangent dir = chart_to_bundle_tangent(m, pt, xv, uv);
    const GeneralFieldDecomposition yd = decompose_bundle_field(m, ybar, pt);
    const GeneralFieldDecomposition zd = decompose_bundle_field(m, zbar, pt);
    const BundleTangent dy = lc_connection_general(w, m, pt, dir, yd);
    const BundleTangent dz = lc_connection_general(w, m, pt, dir, zd);
    const double rhs = bundle_metric(w, m, pt, dy, field_at(zbar, pt)) +
                       bundle_metric(w, m, pt, field_at(ybar, pt), dz);
    const double compat_residual = std::abs(lhs - rhs);

    tracker.update(std::max(torsion_residual, compat_residual),
                   {{"sample", s},
                    {"weights", weights_json(w)},
                    {"point", vec_json(pt.base)},
                    {"fiber", vec_json(pt.fiber)},
                    {"torsion_residual", torsion_residual},
                    {"compatibility_residual", compat_residual}});
  }
  return finish(spec, tracker, spec.sample_count);
}

CheckReport check_christoffel_oracle(const CheckSpec& spec) {
  require_valid(spec);
  const ChartManifold m = make_manifold(spec.manifold, spec.dim);
  const int n = m.dim();
  const double fiber_half_width = 1.5;
  Rng rng(spec.seed);
  ResidualTracker tracker;

  for (int s = 0; s < spec.sample_count; ++s) {
    const MetricWeights w = s == 0 ? spec.weights : random_admissible_weights(rng);
    const ChartManifold bundle = make_bundle_chart(w, m, fiber_half_width);

    const Eigen::VectorXd p = random_point_in(rng, m.domain());
    const Eigen::VectorXd u = random_vector(rng, n, 0.8 * fiber_half_width);
    const BundlePoint pt{p, u};
    Eigen::VectorXd xu(2 * n);
    xu << p, u;

    const VectorField xf = random_affine_field(rng, n);
    const VectorField yf = random_affine_field(rng, n);

    double residual = 0.0;
    std::string worst_combo;
    for (LiftKind kd : kKinds)
      for (LiftKind kf : kKinds) {
        const VectorField dir_chart = lifted_field_chart(m, xf, kd);
        const VectorField field_chart = lifted_field_chart(m, yf, kf);
        const Eigen::VectorXd chart_result =
            bundle.covariant_derivative(dir_chart, field_chart, xu);
        const BundleTangent oracle =
            chart_to_bundle_tangent(m, pt, chart_result.head(n), chart_result.tail(n));
        const BundleTangent closed = lc_connection_lifts(w, m, pt, xf, yf, kd, kf);
        const double r = (oracle - closed).max_abs();
        if (r > residual) {
          residual = r;
          worst_combo = std::string(kd == LiftKind::Horizontal ? "h" : "v") +
                        (kf == LiftKind::Horizontal ? "h" : "v");
        }
      }
    tracker.update(residual, {{"sample", s},
                              {"weights", weights_json(w)},
                              {"point", vec_json(p)},
                              {"fiber", vec_json(u)},
                              {"worst_combo", worst_combo}});
  }
  return finish(spec, tracker, spec.sample_count);
}

CheckReport check_sasaki_reduction(const CheckSpec& spec) {
  require_valid(spec);
  const MetricWeights sasaki{1.0, 0.0, 1.0};
  Rng rng(spec.seed);
  ResidualTracker tracker;

  const bool body_coordinates = spec.manifold == ManifoldId::So3;
  const ChartManifold m = make_manifold(spec.manifold, spec.dim);
  const int n = body_coordinates ? 3 : m.dim();

  for (int s = 0; s < spec.sample_count; ++s) {
    SasakiIngredients in;
    nlohmann::json inputs;
    BundleTangent components[2][2];

    if (body_coordinates) {
      // Analytic bi-invariant ingredients: both sides exact.
      const Eigen::Vector3d omega = random_vector(rng, 3), xv = random_vector(rng, 3),
                            yv = random_vector(rng, 3);
      in.nabla_xy = 0.5 * xv.cross(yv);
      in.r_ux_y = so3::curvature(omega, xv, yv);
      in.r_xy_u = so3::curvature(xv, yv, omega);
      in.r_uy_x = so3::curvature(omega, yv, xv);
      components[0][0] = lc_block_hh(sasaki, in.nabla_xy, in.r_ux_y, in.r_xy_u);
      components[0][1] = lc_block_hv(sasaki, in.nabla_xy, in.r_uy_x);
      components[1][0] = lc_block_vh(sasaki, in.r_ux_y);
      components[1][1] = lc_block_vv(sasaki, 3);
      inputs = {{"sample", s}, {"omega", vec_json(omega)}, {"x", vec_json(xv)},
                {"y", vec_json(yv)}};
    } else {
      const BundlePoint pt{random_point_in(rng, m.domain()), random_vector(rng, n)};
      const VectorField x = random_quadratic_field(rng, n);
      const VectorField y = random_quadratic_field(rng, n);
      const Eigen::VectorXd xv = x(pt.base), yv = y(pt.base);
      in.nabla_xy = m.covariant_derivative(x, y, pt.base);
      in.r_ux_y = m.curvature(pt.fiber, xv, yv, pt.base);
      in.r_xy_u = m.curvature(xv, yv, pt.fiber, pt.base);
      in.r_uy_x = m.curvature(pt.fiber, yv, xv, pt.base);
      components[0][0] = lc_connection_lifts(sasaki, m, pt, x, y, LiftKind::Horizontal,
                                             LiftKind::Horizontal);
      components[0][1] = lc_connection_lifts(sasaki, m, pt, x, y, LiftKind::Horizontal,
                                             LiftKind::Vertical);
      components[1][0] = lc_connection_lifts(sasaki, m, pt, x, y, LiftKind::Vertical,
                                             LiftKind::Horizontal);
      components[1][1] = lc_connection_lifts(sasaki, m, pt, x, y, LiftKind::Vertical,
                                             LiftKind::Vertical);
      inputs = {{"sample", s}, {"point", vec_json(pt.base)}, {"fiber", vec_json(pt.fiber)}};
    }

    double residual = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        residual = std::max(
            residual, (components[i][j] - kowalski_table(in, kKinds[i], kKinds[j], n)).max_abs());
    tracker.update(residual, inputs);
  }
  return finish(spec, tracker, spec.sample_count);
}

CheckSpec default_spec(const std::string& check_name, ManifoldId manifold, std::uint64_t seed) {
  CheckSpec spec;
  spec.check_id = check_name + "/" + manifold_name(manifold);
  spec.manifold = manifold;
  spec.seed = seed;
  if (check_name == "positive_definite") {
    spec.tolerance = 1e-12;
    spec.sample_count = 200;
    spec.inner_count = 100;
  } else if (check_name == "koszul_items") {
    spec.tolerance = 1e-8;
    spec.sample_count = 100;
  } else if (check_name == "torsion_and_compatibility") {
    spec.tolerance = 1e-4;
    spec.sample_count = 30;
  } else if (check_name == "christoffel_oracle") {
    spec.tolerance = 1e-4;
    spec.sample_count = 15;
  } else if (check_name == "sasaki_reduction") {
    spec.tolerance = 1e-12;
    spec.sample_count = 100;
  } else {
    throw std::invalid_argument("unknown check: " + check_name);
  }
  return spec;
}

CheckReport run_check(const CheckSpec& spec) {
  const std::string name = spec.check_id.substr(0, spec.check_id.find('/'));
  if (name == "positive_definite") return check_positive_definite(spec);
  if (name == "koszul_items") return check_koszul_items(spec);
  if (name == "torsion_and_compatibility") return check_torsion_and_compatibility(spec);
  if (name == "christoffel_oracle") return check_christoffel_oracle(spec);
  if (name == "sasaki_reduction") return check_sasaki_reduction(spec);
  throw std::invalid_argument("unknown check: " + name);
}

} // namespace tbgeo::verify
