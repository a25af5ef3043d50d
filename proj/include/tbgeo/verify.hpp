#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbgeo/bundle.hpp"

namespace tbgeo::verify {

enum class ManifoldId { EuclideanN, Sphere2Stereographic, So3 };

std::string manifold_name(ManifoldId id);
ManifoldId parse_manifold(const std::string& name);

/// Chart realization of a named test manifold (the SO(3) case is its
/// exponential chart with the bi-invariant metric).
ChartManifold make_manifold(ManifoldId id, int dim = 2);

struct CheckSpec {
  std::string check_id;
  ManifoldId manifold = ManifoldId::Sphere2Stereographic;
  int dim = 2; // used by euclidean_n
  MetricWeights weights{1.0, 0.0, 1.0};
  double tolerance = 1e-8;
  int sample_count = 100;
  int inner_count = 100; // tangents per weight sample where applicable
  std::uint64_t seed = 20270405;
};

struct CheckReport {
  std::string check_id;
  bool pass = false;
  double max_residual = 0.0;
  int samples_run = 0;
  nlohmann::json worst_case_inputs;
  std::uint64_t seed = 0;
};

nlohmann::json check_report_to_json(const CheckReport& report);

/// ḡ(Z,Z) > 0 for random admissible weights and nonzero tangents, the weight
/// matrix spectrum stays positive, and inadmissible weights produce a
/// negative eigenvalue (the built-in negative control).
CheckReport check_positive_definite(const CheckSpec& spec);

/// The eight pairings 2 ḡ(∇̄ lift, lift of Z) against their closed-form
/// right-hand sides.
CheckReport check_koszul_items(const CheckSpec& spec);

/// Torsion-freeness through the lift-bracket relations, and metric
/// compatibility along random bundle curves with fiber-varying fields.
CheckReport check_torsion_and_compatibility(const CheckSpec& spec);

/// Brute force: Christoffel symbols of the induced 2n-chart Gram matrix,
/// applied to lifted fields, against the closed-form connection components.
CheckReport check_christoffel_oracle(const CheckSpec& spec);

/// At weights (1,0,1) the connection components must reproduce the
/// independently hard-coded Sasaki connection table.
CheckReport check_sasaki_reduction(const CheckSpec& spec);

/// All checks by registry name.
inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "positive_definite", "koszul_items", "torsion_and_compatibility",
      "christoffel_oracle", "sasaki_reduction"};
  return names;
}

CheckSpec default_spec(const std::string& check_name, ManifoldId manifold, std::uint64_t seed);
CheckReport run_check(const CheckSpec& spec);

} // namespace tbgeo::verify
