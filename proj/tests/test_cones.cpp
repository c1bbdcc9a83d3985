#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace hessiasol;
using testsupport::lemma61_structure;
using testsupport::random_in_cone;
using testsupport::random_vector;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("contains: worked examples") {
  CHECK(contains(ConeSpec::gamma_m(3, 3), LambdaVector{1.0, 1.0, 1.0}, false));
  CHECK_FALSE(contains(ConeSpec::gamma_m(2, 2), LambdaVector{3.0, -1.0}, false));
  CHECK(contains(ConeSpec::gamma_m(1, 2), LambdaVector{3.0, -1.0}, false));
  CHECK(contains(ConeSpec::phase_cone(0.0, 2), LambdaVector{1.0, -0.5}, false));
  CHECK_FALSE(contains(ConeSpec::phase_cone(0.0, 2), LambdaVector{0.2, -0.5}, false));
  // Closure semantics are exact.
  CHECK(contains(ConeSpec::gamma_m(2, 2), LambdaVector{1.0, 0.0}, true));
  CHECK_FALSE(contains(ConeSpec::gamma_m(2, 2), LambdaVector{1.0, 0.0}, false));
  CHECK_THROWS_AS(contains(ConeSpec::gamma_m(2, 2), LambdaVector{1.0, 2.0, 3.0}, false),
                  std::domain_error);
}

TEST_CASE("ConeSpec validation") {
  CHECK_THROWS_AS(ConeSpec::gamma_m(0, 2), std::domain_error);
  CHECK_THROWS_AS(ConeSpec::gamma_m(3, 2), std::domain_error);
  CHECK_THROWS_AS(ConeSpec::phase_cone(kPi, 2), std::domain_error);
  CHECK(ConeSpec::positive(3).is_positive_orthant());
}

TEST_CASE("distance_to_boundary: worked examples") {
  CHECK(distance_to_boundary(ConeSpec::positive(2), LambdaVector{2.0, 3.0}) ==
        doctest::Approx(2.0).epsilon(1e-8));
  CHECK(distance_to_boundary(ConeSpec::gamma_m(1, 2), LambdaVector{3.0, -1.0}) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(distance_to_boundary(ConeSpec::gamma_m(2, 2), LambdaVector{1.0, 0.0}) ==
        doctest::Approx(0.0).epsilon(1e-8));
  // Outside: reported negative.
  CHECK(distance_to_boundary(ConeSpec::positive(2), LambdaVector{-2.0, 5.0}) ==
        doctest::Approx(-2.0).epsilon(1e-8));
  // Phase cone: lambda = (1,1) sits on the boundary of Gamma^{pi/2}.
  CHECK(distance_to_boundary(ConeSpec::phase_cone(kPi / 2, 2),
                             LambdaVector{1.0, 1.0}) ==
        doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("shift_into: worked examples") {
  const ConeSpec pos = ConeSpec::positive(2);
  const LambdaVector deep{5.0, 6.0};
  CHECK(shift_into(pos, deep, 1.0).entries() == deep.entries());
  const auto shifted = shift_into(pos, LambdaVector{0.0, 0.0}, 1.0);
  CHECK(shifted[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(shifted[1] == doctest::Approx(1.0).epsilon(1e-8));
  const auto g1 = shift_into(ConeSpec::gamma_m(1, 2), LambdaVector{3.0, -3.0}, 0.5);
  CHECK(g1[0] == doctest::Approx(3.5).epsilon(1e-8));
  CHECK(g1[1] == doctest::Approx(-2.5).epsilon(1e-8));
  CHECK_THROWS_AS(shift_into(pos, deep, 0.0), std::domain_error);
}

TEST_CASE("convexity: midpoints of members stay inside") {
  Rng rng(53);
  auto run = [&](const ConeSpec& cone) {
    for (int rep = 0; rep < 1000; ++rep) {
      const LambdaVector a = random_in_cone(cone, rng, 1e-6);
      const LambdaVector b = random_in_cone(cone, rng, 1e-6);
      std::vector<double> mid(static_cast<size_t>(cone.n));
      for (int i = 0; i < cone.n; ++i) mid[static_cast<size_t>(i)] = 0.5 * (a[i] + b[i]);
      CHECK(contains(cone, LambdaVector(mid), true));
    }
  };
  run(ConeSpec::gamma_m(1, 3));
  run(ConeSpec::gamma_m(2, 3));
  run(ConeSpec::positive(3));
  // Phase super-level set (convex but not a cone): rejection-sampled members.
  const ConeSpec phase = ConeSpec::phase_cone(kPi / 4, 2);
  for (int rep = 0; rep < 500; ++rep) {
    const auto a = testsupport::sample_supercritical(2, kPi / 4, rng);
    const auto b = testsupport::sample_supercritical(2, kPi / 4, rng);
    std::vector<double> mid(2);
    for (int i = 0; i < 2; ++i) mid[static_cast<size_t>(i)] = 0.5 * (a[static_cast<size_t>(i)] + b[static_cast<size_t>(i)]);
    CHECK(contains(phase, LambdaVector(mid), true));
  }
}

TEST_CASE("cone scaling and nesting") {
  Rng rng(59);
  for (int rep = 0; rep < 500; ++rep) {
    for (int m = 1; m <= 3; ++m) {
      const ConeSpec cone = ConeSpec::gamma_m(m, 3);
      const LambdaVector lam = random_in_cone(cone, rng, 1e-6);
      const double t = rng.uniform(0.01, 10.0);
      std::vector<double> scaled = lam.entries();
      for (double& v : scaled) v *= t;
      CHECK(contains(cone, LambdaVector(scaled), true));  // cone property
      if (m > 1)  // Gamma_m subset Gamma_{m-1}
        CHECK(contains(ConeSpec::gamma_m(m - 1, 3), lam, true));
      CHECK(sigma(1, lam) > 0.0);  // Gamma subset Gamma_1
    }
    // Positive orthant sits inside every Gamma_m.
    std::vector<double> posv = random_vector(3, rng, 0.01, 3.0);
    for (int m = 1; m <= 3; ++m)
      CHECK(contains(ConeSpec::gamma_m(m, 3), LambdaVector(posv), false));
  }
  // The phase set is preserved under scaling up (t >= 1), not under t < 1.
  const ConeSpec phase = ConeSpec::phase_cone(kPi / 4, 2);
  for (int rep = 0; rep < 200; ++rep) {
    const auto lam = testsupport::sample_supercritical(2, kPi / 4, rng);
    std::vector<double> up = lam;
    const double t = rng.uniform(1.0, 4.0);
    for (double& v : up) v *= t;
    CHECK(contains(phase, LambdaVector(up), true));
  }
}

TEST_CASE("distance bracket failure is reported") {
  // A phase threshold close to n*pi/2 is unreachable within the diagonal
  // bracket |t| <= 10(1+sup|lam|) from the origin.
  const ConeSpec tight = ConeSpec::phase_cone(kPi - 0.01, 2);
  CHECK_THROWS_AS(distance_to_boundary(tight, LambdaVector{0.0, 0.0}),
                  NumericError);
}

TEST_CASE("phase spectral structure (supercritical vectors)") {
  Rng rng(61);
  for (int n : {2, 3, 4}) {
    const auto res = lemma61_structure(n, 2000, 0.3, rng);
    CHECK(res.failures_order == 0);
    CHECK(res.failures_sum == 0);
    CHECK(res.failures_invsum == 0);
    CHECK(res.failures_convex == 0);
  }
}
