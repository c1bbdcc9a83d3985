#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace hessiasol;
using testsupport::random_in_cone;
using testsupport::random_vector;
using testsupport::sigma_naive;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("sigma: worked examples") {
  CHECK(sigma(2, LambdaVector{1.0, 1.0, 1.0}) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(sigma(2, LambdaVector{1.0, 2.0, 3.0}) == doctest::Approx(11.0).epsilon(1e-14));
  CHECK(sigma(1, LambdaVector{0.5, -2.0, 7.25}) ==
        doctest::Approx(5.75).epsilon(1e-14));
  CHECK_THROWS_AS(sigma(4, LambdaVector{1.0, 1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(sigma(0, LambdaVector{1.0}), std::domain_error);
}

TEST_CASE("sigma: recurrence matches naive enumeration up to n = 6") {
  Rng rng(101);
  for (int n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 50; ++rep) {
      const std::vector<double> lam = random_vector(n, rng);
      for (int k = 1; k <= n; ++k) {
        const double expect = sigma_naive(k, lam);
        const double got = sigma(k, LambdaVector(lam));
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("s_norm: normalization") {
  CHECK(s_norm(2, LambdaVector{1.0, 1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(s_norm(1, LambdaVector{2.0, 4.0}) == doctest::Approx(3.0));
  CHECK(s_norm(2, LambdaVector{1.0, 2.0}) == doctest::Approx(2.0));
}

TEST_CASE("quotient_root: examples, homogeneity, boundary") {
  CHECK(quotient_root(2, 1, LambdaVector{1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(quotient_root(2, 1, LambdaVector{3.5, 3.5}) == doctest::Approx(3.5));
  CHECK(quotient_root(2, 1, LambdaVector{1.0, 2.0}) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  // Continuous extension on the cone boundary and at the origin.
  CHECK(quotient_root(2, 1, LambdaVector{1.0, 0.0}) == 0.0);
  CHECK(quotient_root(2, 1, LambdaVector{0.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(quotient_root(2, 1, LambdaVector{-1.0, -1.0}), std::domain_error);
  CHECK_THROWS_AS(quotient_root(1, 1, LambdaVector{1.0, 1.0}), std::domain_error);

  Rng rng(7);
  const ConeSpec g2 = ConeSpec::gamma_m(2, 3);
  for (int rep = 0; rep < 200; ++rep) {
    const LambdaVector lam = random_in_cone(g2, rng);
    const double t = rng.uniform(0.1, 5.0);
    std::vector<double> scaled = lam.entries();
    for (double& v : scaled) v *= t;
    const double lhs = quotient_root(2, 1, LambdaVector(scaled));
    const double rhs = t * quotient_root(2, 1, lam);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("lagrangian_phase: examples and bounds") {
  CHECK(lagrangian_phase(LambdaVector{0.0, 0.0}) == doctest::Approx(0.0));
  CHECK(lagrangian_phase(LambdaVector{1.0, 1.0}) == doctest::Approx(kPi / 2));
  double prev = 0.0;
  for (double t : {1.0, 10.0, 100.0, 1e4}) {
    const double v = lagrangian_phase(LambdaVector{t, t, t});
    CHECK(v > prev);
    CHECK(v < 3 * kPi / 2);
    prev = v;
  }
  // Strictly increasing in each coordinate.
  Rng rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> lam = random_vector(3, rng);
    const double base = lagrangian_phase(LambdaVector(lam));
    CHECK(std::abs(base) < 3 * kPi / 2);
    const int i = static_cast<int>(rng.uniform_int(0, 2));
    lam[static_cast<size_t>(i)] += 0.25;
    CHECK(lagrangian_phase(LambdaVector(lam)) > base);
  }
}

TEST_CASE("grad: closed forms and finite differences") {
  const auto g0 = grad(SymFun::lagrangian_phase(2), LambdaVector{0.0, 0.0});
  CHECK(g0[0] == doctest::Approx(1.0));
  CHECK(g0[1] == doctest::Approx(1.0));

  const auto g1 = grad(SymFun::sigma_k(1, 3), LambdaVector{0.3, -0.2, 5.0});
  for (double v : g1) CHECK(v == doctest::Approx(1.0));

  // Central differences at step 1e-5 against the analytic gradient.
  Rng rng(23);
  auto fd_check = [&](const SymFun& f, const ConeSpec& cone, int points) {
    for (int rep = 0; rep < points; ++rep) {
      const LambdaVector lam = random_in_cone(cone, rng, 0.5);
      const auto an = grad(f, lam);
      for (int i = 0; i < f.n; ++i) {
        std::vector<double> up = lam.entries(), dn = lam.entries();
        const double step = 1e-5;
        up[static_cast<size_t>(i)] += step;
        dn[static_cast<size_t>(i)] -= step;
        const double fd =
            (eval_plain(f, LambdaVector(up)) - eval_plain(f, LambdaVector(dn))) /
            (2 * step);
        CHECK(an[static_cast<size_t>(i)] ==
              doctest::Approx(fd).epsilon(1e-5).scale(std::abs(fd) + 1.0));
      }
    }
  };
  fd_check(SymFun::quotient_root(2, 1, 2), ConeSpec::gamma_m(2, 2), 100);
  fd_check(SymFun::quotient_root(3, 1, 3), ConeSpec::gamma_m(3, 3), 100);
  fd_check(SymFun::s_norm_k(2, 3), ConeSpec::gamma_m(2, 3), 100);
  fd_check(SymFun::sigma_k(2, 4), ConeSpec::gamma_m(2, 4), 100);
  fd_check(SymFun::lagrangian_phase(3), ConeSpec::gamma_m(3, 3), 100);

  const double q = grad(SymFun::quotient_root(2, 1, 2), LambdaVector{1.0, 1.0})[0];
  CHECK(q == doctest::Approx(0.5).epsilon(1e-9));  // symmetric point, degree 1

  CHECK_THROWS_AS(grad(SymFun::quotient_root(2, 1, 2), LambdaVector{1.0, 0.0}),
                  std::domain_error);
}

TEST_CASE("eval_extended: zero outside the cone") {
  const SymFun f = SymFun::quotient_root(2, 1, 2);
  const ConeSpec cone = ConeSpec::gamma_m(2, 2);
  CHECK(eval_extended(f, cone, LambdaVector{-1.0, -1.0}) == 0.0);
  CHECK(eval_extended(f, cone, LambdaVector{1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(eval_extended(f, cone, LambdaVector{1.0, 0.0}) == 0.0);  // boundary
  CHECK_THROWS_AS(
      eval_extended(SymFun::lagrangian_phase(2), cone, LambdaVector{1.0, 1.0}),
      std::domain_error);
}

TEST_CASE("symmetry under permutations") {
  Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> lam = random_vector(5, rng);
    std::vector<double> perm = lam;
    for (int i = 4; i > 0; --i)
      std::swap(perm[static_cast<size_t>(i)],
                perm[static_cast<size_t>(rng.uniform_int(0, i))]);
    for (int k = 1; k <= 5; ++k) {
      const double a = sigma(k, LambdaVector(lam));
      const double b = sigma(k, LambdaVector(perm));
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
    CHECK(lagrangian_phase(LambdaVector(lam)) ==
          doctest::Approx(lagrangian_phase(LambdaVector(perm))).epsilon(1e-12));
  }
}

TEST_CASE("monotonicity along the positive orthant") {
  Rng rng(41);
  auto run = [&](const SymFun& f, const ConeSpec& cone) {
    for (int rep = 0; rep < 1000; ++rep) {
      const LambdaVector lam = random_in_cone(cone, rng, 0.05);
      std::vector<double> up = lam.entries();
      for (double& v : up) v += rng.uniform(0.0, 2.0);
      const double before = eval_extended(f, cone, lam);
      const double after = eval_extended(f, cone, LambdaVector(up));
      CHECK(after >= before - 1e-11 * (1.0 + std::abs(before)));
    }
  };
  run(SymFun::sigma_k(2, 3), ConeSpec::gamma_m(2, 3));
  run(SymFun::s_norm_k(3, 3), ConeSpec::gamma_m(3, 3));
  run(SymFun::quotient_root(2, 1, 3), ConeSpec::gamma_m(2, 3));
  run(SymFun::quotient_root(3, 2, 3), ConeSpec::gamma_m(3, 3));
}

TEST_CASE("concavity (midpoint) of the degree-1 normal forms") {
  Rng rng(43);
  auto midpoint = [&](auto&& value, const ConeSpec& cone) {
    for (int rep = 0; rep < 1000; ++rep) {
      const LambdaVector a = random_in_cone(cone, rng, 0.05);
      const LambdaVector b = random_in_cone(cone, rng, 0.05);
      std::vector<double> mid(static_cast<size_t>(cone.n));
      for (int i = 0; i < cone.n; ++i) mid[static_cast<size_t>(i)] = 0.5 * (a[i] + b[i]);
      const double lhs = value(LambdaVector(mid));
      const double rhs = 0.5 * (value(a) + value(b));
      CHECK(lhs >= rhs - 1e-10 * (1.0 + std::abs(rhs)));
    }
  };
  midpoint([](const LambdaVector& l) { return quotient_root(2, 1, l); },
           ConeSpec::gamma_m(2, 3));
  midpoint([](const LambdaVector& l) { return quotient_root(3, 1, l); },
           ConeSpec::gamma_m(3, 3));
  midpoint([](const LambdaVector& l) { return std::sqrt(s_norm(2, l)); },
           ConeSpec::gamma_m(2, 3));
  midpoint([](const LambdaVector& l) { return std::cbrt(s_norm(3, l)); },
           ConeSpec::gamma_m(3, 3));
}

TEST_CASE("Euler identity for degree-1 forms") {
  Rng rng(47);
  const SymFun f = SymFun::quotient_root(2, 1, 3);
  const ConeSpec cone = ConeSpec::gamma_m(2, 3);
  for (int rep = 0; rep < 200; ++rep) {
    const LambdaVector lam = random_in_cone(cone, rng, 0.2);
    const auto gr = grad(f, lam);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) acc += lam[i] * gr[static_cast<size_t>(i)];
    const double val = quotient_root(2, 1, lam);
    CHECK(acc == doctest::Approx(val).epsilon(1e-8));
  }
  // S_k^{1/k} via the chain rule on the s_norm gradient.
  const SymFun sk = SymFun::s_norm_k(2, 3);
  for (int rep = 0; rep < 200; ++rep) {
    const LambdaVector lam = random_in_cone(ConeSpec::gamma_m(2, 3), rng, 0.2);
    const double v = s_norm(2, lam);
    const auto gr = grad(sk, lam);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
      acc += lam[i] * 0.5 * std::pow(v, -0.5) * gr[static_cast<size_t>(i)];
    CHECK(acc == doctest::Approx(std::sqrt(v)).epsilon(1e-8));
  }
}

TEST_CASE("LambdaVector: sorted view and validation") {
  const LambdaVector lam{1.0, 3.0, 2.0};
  const auto s = lam.sorted();
  CHECK(s == std::vector<double>{3.0, 2.0, 1.0});
  CHECK(lam[0] == 1.0);  // stored order untouched
  CHECK_THROWS_AS(LambdaVector(std::vector<double>{}), std::domain_error);
  CHECK_THROWS_AS(LambdaVector(std::vector<double>{1.0, NAN}), std::domain_error);
}
