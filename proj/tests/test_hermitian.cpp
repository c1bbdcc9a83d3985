#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace hessiasol;
using testsupport::diagonal_mixed_oracle;
using testsupport::random_complex_matrix;
using testsupport::random_hermitian;
using testsupport::random_unitary;
using testsupport::s_k_gram;

TEST_CASE("HermitianMatrix: construction and symmetrization") {
  ComplexMatrix m(2);
  m.at(0, 0) = 1.0;
  m.at(0, 1) = Complex(0.5, 0.25);
  m.at(1, 0) = Complex(0.5, -0.25);
  m.at(1, 1) = 2.0;
  const HermitianMatrix h(m);
  CHECK(h.at(1, 0) == std::conj(h.at(0, 1)));

  m.at(1, 0) = Complex(0.4, -0.25);  // asymmetry beyond 1e-12
  CHECK_THROWS_AS(HermitianMatrix{m}, std::domain_error);
}

TEST_CASE("eigenvalues: worked examples") {
  const HermitianMatrix d = HermitianMatrix::diagonal(std::vector<double>{3.0, 1.0, 2.0});
  const LambdaVector lam = eigenvalues(d);
  CHECK(lam[0] == doctest::Approx(3.0));
  CHECK(lam[1] == doctest::Approx(2.0));
  CHECK(lam[2] == doctest::Approx(1.0));

  HermitianMatrix offdiag(2);
  offdiag.set(0, 1, 1.0);
  const LambdaVector lam2 = eigenvalues(offdiag);
  CHECK(lam2[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(lam2[1] == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("eigenvalues: unitary invariance") {
  Rng rng(71);
  for (int n : {2, 3, 4, 5}) {
    for (int rep = 0; rep < 20; ++rep) {
      const HermitianMatrix a = random_hermitian(n, rng);
      const ComplexMatrix u = random_unitary(n, rng);
      const ComplexMatrix conj = multiply(multiply(u, a.as_matrix()), adjoint(u));
      const LambdaVector la = eigenvalues(a);
      const LambdaVector lb = eigenvalues(HermitianMatrix(conj));
      for (int i = 0; i < n; ++i)
        CHECK(la[i] == doctest::Approx(lb[i]).epsilon(1e-10).scale(1.0 + std::abs(la[i])));
    }
  }
}

TEST_CASE("eigenvalues_small agrees with the Jacobi path") {
  Rng rng(73);
  for (int n : {1, 2, 3}) {
    for (int rep = 0; rep < 50; ++rep) {
      const HermitianMatrix a = random_hermitian(n, rng);
      const LambdaVector ref = eigenvalues(a);
      double lam[3];
      eigenvalues_small(n, a.data().data(), lam);
      for (int i = 0; i < n; ++i)
        CHECK(lam[i] == doctest::Approx(ref[i]).epsilon(1e-12).scale(1.0 + std::abs(ref[i])));
    }
  }
}

TEST_CASE("s_k_matrix: identity, determinant, coefficient oracle") {
  for (int n : {2, 3, 4}) {
    const HermitianMatrix id = HermitianMatrix::identity(n);
    for (int k = 1; k <= n; ++k) CHECK(s_k_matrix(k, id) == doctest::Approx(1.0));
  }
  Rng rng(79);
  for (int n : {2, 3, 4}) {
    for (int rep = 0; rep < 10; ++rep) {
      const HermitianMatrix a = random_hermitian(n, rng);
      // det(A + t Id) sampled at t = 0..n, coefficients via Newton's forward
      // differences on the falling-factorial basis would be overkill: solve
      // the (n+1)x(n+1) Vandermonde directly.
      std::vector<double> rhsv(static_cast<size_t>(n) + 1);
      for (int t = 0; t <= n; ++t) {
        ComplexMatrix shifted = a.as_matrix();
        for (int i = 0; i < n; ++i) shifted.at(i, i) += static_cast<double>(t);
        rhsv[static_cast<size_t>(t)] = determinant(shifted).real();
      }
      // Gaussian elimination on the Vandermonde system sum_j c_j t^j = det.
      const int m = n + 1;
      std::vector<double> vmat(static_cast<size_t>(m) * m);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          vmat[static_cast<size_t>(r * m + c)] = std::pow(static_cast<double>(r), c);
      for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
          if (std::abs(vmat[static_cast<size_t>(r * m + col)]) >
              std::abs(vmat[static_cast<size_t>(piv * m + col)]))
            piv = r;
        for (int c = 0; c < m; ++c)
          std::swap(vmat[static_cast<size_t>(col * m + c)], vmat[static_cast<size_t>(piv * m + c)]);
        std::swap(rhsv[static_cast<size_t>(col)], rhsv[static_cast<size_t>(piv)]);
        for (int r = col + 1; r < m; ++r) {
          const double f = vmat[static_cast<size_t>(r * m + col)] / vmat[static_cast<size_t>(col * m + col)];
          for (int c = col; c < m; ++c)
            vmat[static_cast<size_t>(r * m + c)] -= f * vmat[static_cast<size_t>(col * m + c)];
          rhsv[static_cast<size_t>(r)] -= f * rhsv[static_cast<size_t>(col)];
        }
      }
      std::vector<double> coeff(static_cast<size_t>(m));
      for (int r = m - 1; r >= 0; --r) {
        double acc = rhsv[static_cast<size_t>(r)];
        for (int c = r + 1; c < m; ++c) acc -= vmat[static_cast<size_t>(r * m + c)] * coeff[static_cast<size_t>(c)];
        coeff[static_cast<size_t>(r)] = acc / vmat[static_cast<size_t>(r * m + r)];
      }
      // coeff of t^{n-k} is binom(n,k) S_k.
      for (int k = 1; k <= n; ++k) {
        const double expect = coeff[static_cast<size_t>(n - k)] / binomial(n, k);
        CHECK(s_k_matrix(k, a) ==
              doctest::Approx(expect).epsilon(1e-9).scale(1.0 + std::abs(expect)));
      }
    }
  }
}

TEST_CASE("matrix_lemma_gap: equality cases and fuzz") {
  const ComplexMatrix id = HermitianMatrix::identity(3).as_matrix();
  for (int k = 1; k <= 3; ++k)
    CHECK(matrix_lemma_gap(k, id, id) == doctest::Approx(0.0).epsilon(1e-12));

  Rng rng(83);
  for (int rep = 0; rep < 50; ++rep) {
    const ComplexMatrix a = random_complex_matrix(3, rng);
    for (int k = 1; k <= 3; ++k) {
      const double gap = matrix_lemma_gap(k, a, a);
      const double scale =
          std::abs(s_k_general(k, multiply(a, adjoint(a))).real());
      CHECK(std::abs(gap) <= 1e-10 * (1.0 + scale * scale));
    }
  }
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 200; ++rep) {
      const ComplexMatrix a = random_complex_matrix(n, rng);
      const ComplexMatrix b = random_complex_matrix(n, rng);
      for (int k = 1; k <= n; ++k) {
        const double gap = matrix_lemma_gap(k, a, b);
        const double skAA = s_k_general(k, multiply(a, adjoint(a))).real();
        const double skBB = s_k_general(k, multiply(b, adjoint(b))).real();
        CHECK(gap >= -1e-10 * std::max(1.0, skAA * skBB));
      }
    }
  }
}

TEST_CASE("s_k_general agrees with the Gram-determinant route (n <= 4)") {
  Rng rng(89);
  for (int n : {2, 3, 4}) {
    for (int rep = 0; rep < 50; ++rep) {
      const ComplexMatrix a = random_complex_matrix(n, rng);
      const ComplexMatrix b = random_complex_matrix(n, rng);
      for (int k = 1; k <= n; ++k) {
        const Complex direct = s_k_general(k, multiply(a, adjoint(b)));
        const Complex gram = s_k_gram(k, a, b);
        CHECK(std::abs(direct - gram) <= 1e-9 * (1.0 + std::abs(gram)));
      }
    }
  }
}

TEST_CASE("mixed_discriminant: normalization and special slots") {
  Rng rng(97);
  for (int n : {2, 3, 4}) {
    std::vector<HermitianMatrix> ids(static_cast<size_t>(n), HermitianMatrix::identity(n));
    CHECK(mixed_discriminant(ids) == doctest::Approx(1.0).epsilon(1e-12));

    const HermitianMatrix a = random_hermitian(n, rng);
    std::vector<HermitianMatrix> slots = ids;
    slots[0] = a;
    CHECK(mixed_discriminant(slots) ==
          doctest::Approx(s_k_matrix(1, a)).epsilon(1e-9));

    std::vector<HermitianMatrix> all(static_cast<size_t>(n), a);
    CHECK(mixed_discriminant(all) ==
          doctest::Approx(s_k_matrix(n, a)).epsilon(1e-9).scale(1.0 + std::abs(s_k_matrix(n, a))));
  }
}

TEST_CASE("mixed_discriminant: symmetry and multilinearity") {
  Rng rng(103);
  const int n = 3;
  const HermitianMatrix a = random_hermitian(n, rng);
  const HermitianMatrix b = random_hermitian(n, rng);
  const HermitianMatrix c = random_hermitian(n, rng);
  const double d1 = mixed_discriminant(std::vector<HermitianMatrix>{a, b, c});
  const double d2 = mixed_discriminant(std::vector<HermitianMatrix>{c, a, b});
  const double d3 = mixed_discriminant(std::vector<HermitianMatrix>{b, c, a});
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-10).scale(1.0 + std::abs(d1)));
  CHECK(d1 == doctest::Approx(d3).epsilon(1e-10).scale(1.0 + std::abs(d1)));

  const double left = mixed_discriminant(std::vector<HermitianMatrix>{a.plus(b), b, c});
  const double right = mixed_discriminant(std::vector<HermitianMatrix>{a, b, c}) +
                       mixed_discriminant(std::vector<HermitianMatrix>{b, b, c});
  CHECK(left == doctest::Approx(right).epsilon(1e-9).scale(1.0 + std::abs(right)));
}

TEST_CASE("wedge_ratio: identity splits and the explicit normalized B") {
  for (int n : {2, 3, 4}) {
    const HermitianMatrix id = HermitianMatrix::identity(n);
    for (int p = 0; p <= n; ++p)
      CHECK(wedge_ratio(id, p, id, n - p).value == doctest::Approx(1.0));
    for (int k = 1; k < n; ++k) {
      // B = binom(n,k)^{1/(n-k)} diag(0 x k, 1 x (n-k)) normalizes the wedge
      // ratio against omega^k to exactly 1.
      std::vector<double> diag(static_cast<size_t>(n), 0.0);
      const double scale = std::pow(binomial(n, k), 1.0 / (n - k));
      for (int i = k; i < n; ++i) diag[static_cast<size_t>(i)] = scale;
      const HermitianMatrix b = HermitianMatrix::diagonal(diag);
      CHECK(wedge_ratio(id, k, b, n - k).value == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(in_calB(b, id, n - k, 1e-9));
    }
  }
  CHECK_THROWS_AS(wedge_ratio(HermitianMatrix::identity(2), 1,
                              HermitianMatrix::identity(2), 2),
                  std::domain_error);
}

TEST_CASE("wedge_ratio: diagonal brute-force oracle") {
  Rng rng(107);
  for (int n : {2, 3, 4}) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> da(static_cast<size_t>(n)), db(static_cast<size_t>(n));
      for (double& v : da) v = rng.uniform(-2.0, 2.0);
      for (double& v : db) v = rng.uniform(-2.0, 2.0);
      for (int q = 0; q <= n; ++q) {
        const double expect = diagonal_mixed_oracle(da, db, n - q, q);
        const double got = wedge_ratio(HermitianMatrix::diagonal(da), n - q,
                                       HermitianMatrix::diagonal(db), q)
                               .value;
        CHECK(got == doctest::Approx(expect).epsilon(1e-9).scale(1.0 + std::abs(expect)));
      }
    }
  }
}

TEST_CASE("in_calB: PSD gate and scaling") {
  const HermitianMatrix id2 = HermitianMatrix::identity(2);
  CHECK(in_calB(id2, id2, 2, 1e-9));
  CHECK_FALSE(in_calB(id2.scaled(2.0), id2, 2, 1e-9));  // ratio 2^n
  const HermitianMatrix neg = HermitianMatrix::diagonal(std::vector<double>{1.0, -0.5});
  CHECK_THROWS_AS(in_calB(neg, id2, 1, 1e-9), std::domain_error);
}
