#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tbgeo/verify.hpp"

using namespace tbgeo;
using namespace tbgeo::verify;

TEST_CASE("positive definiteness check passes on every manifold") {
  for (ManifoldId id :
       {ManifoldId::EuclideanN, ManifoldId::Sphere2Stereographic, ManifoldId::So3}) {
    CheckSpec spec = default_spec("positive_definite", id, 101);
    spec.sample_count = 30;
    spec.inner_count = 30;
    const CheckReport report = check_positive_definite(spec);
    CHECK(report.pass);
    CHECK(report.max_residual == 0.0);
    CHECK(report.samples_run == 30);
  }
}

TEST_CASE("positive definiteness near the admissibility boundary") {
  CheckSpec spec = default_spec("positive_definite", ManifoldId::Sphere2Stereographic, 102);
  spec.weights = validate_weights(1.0, 0.999, 1.0); // determinant ~ 2e-3
  spec.sample_count = 5;
  spec.inner_count = 50;
  CHECK(check_positive_definite(spec).pass);
}

TEST_CASE("inadmissible configured weights are recorded, not thrown") {
  CheckSpec spec = default_spec("positive_definite", ManifoldId::Sphere2Stereographic, 102);
  spec.weights = MetricWeights{1.0, 1.5, 1.0}; // determinant < 0
  const CheckReport report = check_positive_definite(spec);
  CHECK_FALSE(report.pass);
  CHECK(report.samples_run == 0);
  CHECK(report.worst_case_inputs["failed_condition"] == "m1*m3 - m2^2 > 0");
}

TEST_CASE("koszul items check") {
  CheckSpec spec = default_spec("koszul_items", ManifoldId::EuclideanN, 103);
  spec.sample_count = 10;
  const CheckReport flat = check_koszul_items(spec);
  CHECK(flat.pass);
  CHECK(flat.max_residual < 1e-10); // machine-precision on the flat base

  spec = default_spec("koszul_items", ManifoldId::Sphere2Stereographic, 104);
  spec.sample_count = 20;
  const CheckReport sphere = check_koszul_items(spec);
  CHECK(sphere.pass);
  CHECK(sphere.max_residual < 1e-8);
}

TEST_CASE("torsion and compatibility check") {
  for (ManifoldId id :
       {ManifoldId::EuclideanN, ManifoldId::Sphere2Stereographic, ManifoldId::So3}) {
    CheckSpec spec = default_spec("torsion_and_compatibility", id, 105);
    spec.sample_count = id == ManifoldId::So3 ? 4 : 8;
    const CheckReport report = check_torsion_and_compatibility(spec);
    CHECK(report.pass);
    if (id == ManifoldId::EuclideanN) CHECK(report.max_residual < 1e-8);
  }
}

TEST_CASE("christoffel brute-force oracle check") {
  CheckSpec spec = default_spec("christoffel_oracle", ManifoldId::EuclideanN, 106);
  spec.sample_count = 3;
  const CheckReport flat = check_christoffel_oracle(spec);
  CHECK(flat.pass);
  CHECK(flat.max_residual < 1e-8); // both sides reduce to the flat derivative

  spec = default_spec("christoffel_oracle", ManifoldId::Sphere2Stereographic, 107);
  spec.sample_count = 5;
  spec.weights = validate_weights(2.0, 1.0, 3.0);
  const CheckReport report = check_christoffel_oracle(spec);
  CHECK(report.pass);
  CHECK(report.max_residual < 1e-4);
}

TEST_CASE("sasaki reduction check") {
  for (ManifoldId id :
       {ManifoldId::EuclideanN, ManifoldId::Sphere2Stereographic, ManifoldId::So3}) {
    CheckSpec spec = default_spec("sasaki_reduction", id, 108);
    spec.sample_count = 30;
    const CheckReport report = check_sasaki_reduction(spec);
    CHECK(report.pass);
    CHECK(report.max_residual < 1e-12);
  }
}

TEST_CASE("reports are reproducible from their seed") {
  CheckSpec spec = default_spec("koszul_items", ManifoldId::Sphere2Stereographic, 42);
  spec.sample_count = 10;
  const CheckReport a = check_koszul_items(spec);
  const CheckReport b = check_koszul_items(spec);
  CHECK(a.max_residual == b.max_residual);
  CHECK(a.worst_case_inputs == b.worst_case_inputs);

  spec.seed = 43;
  const CheckReport c = check_koszul_items(spec);
  CHECK(a.max_residual != c.max_residual);
}

TEST_CASE("pass flag is a pure function of residual and tolerance") {
  CheckSpec spec = default_spec("koszul_items", ManifoldId::Sphere2Stereographic, 44);
  spec.sample_count = 5;
  const CheckReport loose = check_koszul_items(spec);
  CHECK(loose.pass == (loose.max_residual < spec.tolerance));

  spec.tolerance = 1e-300; // necessarily below the achieved residual
  const CheckReport tight = check_koszul_items(spec);
  CHECK_FALSE(tight.pass);
  CHECK(tight.max_residual == loose.max_residual);
}

TEST_CASE("check report serialization carries the schema fields") {
  CheckSpec spec = default_spec("sasaki_reduction", ManifoldId::Sphere2Stereographic, 45);
  spec.sample_count = 3;
  const nlohmann::json j = check_report_to_json(check_sasaki_reduction(spec));
  for (const char* key :
       {"check_id", "pass", "max_residual", "samples_run", "worst_case_inputs", "seed"})
    CHECK(j.contains(key));
  CHECK(j["check_id"] == "sasaki_reduction/sphere2_stereographic");
  CHECK(j["seed"] == 45);
}

TEST_CASE("invalid specs and names are rejected") {
  CheckSpec spec = default_spec("positive_definite", ManifoldId::Sphere2Stereographic, 46);
  spec.tolerance = 0.0;
  CHECK_THROWS_AS(check_positive_definite(spec), std::invalid_argument);

  CheckSpec empty = default_spec("koszul_items", ManifoldId::Sphere2Stereographic, 46);
  empty.sample_count = 0;
  CHECK_THROWS_AS(check_koszul_items(empty), std::invalid_argument);

  CHECK_THROWS_AS(default_spec("no_such_check", ManifoldId::So3, 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_manifold("torus"), std::invalid_argument);
  CHECK(parse_manifold("sphere2") == ManifoldId::Sphere2Stereographic);
}

TEST_CASE("run_check dispatches on the check id prefix") {
  CheckSpec spec = default_spec("sasaki_reduction", ManifoldId::So3, 47);
  spec.sample_count = 5;
  const CheckReport report = run_check(spec);
  CHECK(report.check_id == "sasaki_reduction/so3");
  CHECK(report.pass);
}
