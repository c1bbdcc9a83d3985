#pragma once

// Shared fixtures and independent oracles for the unit and acceptance suites.
// Oracles here are deliberately naive (enumeration, brute force) and stay
// independent of the library implementation paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "hessiasol/barriers.hpp"
#include "hessiasol/common.hpp"
#include "hessiasol/hermitian.hpp"
#include "hessiasol/regularize.hpp"
#include "hessiasol/solver.hpp"

namespace testsupport {

using namespace hessiasol;

// ---------- symmetric function oracles ----------

// sigma_k by subset enumeration (n <= ~12).
inline double sigma_naive(int k, const std::vector<double>& lam) {
  const int n = static_cast<int>(lam.size());
  double total = 0.0;
  std::vector<int> pick(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<size_t>(i)] = i;
  while (true) {
    double prod = 1.0;
    for (int i = 0; i < k; ++i) prod *= lam[static_cast<size_t>(pick[static_cast<size_t>(i)])];
    total += prod;
    int i = k - 1;
    while (i >= 0 && pick[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
  }
  return total;
}

// ---------- random matrices ----------

inline ComplexMatrix random_complex_matrix(int n, Rng& rng) {
  ComplexMatrix m(n);
  for (auto& c : m.a) c = Complex(rng.normal(), rng.normal());
  return m;
}

inline HermitianMatrix random_hermitian(int n, Rng& rng) {
  ComplexMatrix m(n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = rng.normal();
    for (int j = i + 1; j < n; ++j) {
      const Complex v(rng.normal(), rng.normal());
      m.at(i, j) = v;
      m.at(j, i) = std::conj(v);
    }
  }
  return HermitianMatrix(m);
}

// Unitary from Gram-Schmidt on a random complex matrix.
inline ComplexMatrix random_unitary(int n, Rng& rng) {
  ComplexMatrix m = random_complex_matrix(n, rng);
  for (int c = 0; c < n; ++c) {
    for (int p = 0; p < c; ++p) {
      Complex dot = 0.0;
      for (int r = 0; r < n; ++r) dot += std::conj(m.at(r, p)) * m.at(r, c);
      for (int r = 0; r < n; ++r) m.at(r, c) -= dot * m.at(r, p);
    }
    double norm = 0.0;
    for (int r = 0; r < n; ++r) norm += std::norm(m.at(r, c));
    norm = std::sqrt(norm);
    for (int r = 0; r < n; ++r) m.at(r, c) /= norm;
  }
  return m;
}

// Gram-determinant route to S_k(AB*): binom^{-1} sum over row subsets J of
// det(<a_p, b_q>)_{p,q in J}.
inline Complex s_k_gram(int k, const ComplexMatrix& A, const ComplexMatrix& B) {
  const int n = A.n;
  Complex total = 0.0;
  std::vector<int> pick(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<size_t>(i)] = i;
  while (true) {
    ComplexMatrix gram(k);
    for (int p = 0; p < k; ++p)
      for (int q = 0; q < k; ++q) {
        Complex dot = 0.0;
        for (int c = 0; c < n; ++c)
          dot += A.at(pick[static_cast<size_t>(p)], c) * std::conj(B.at(pick[static_cast<size_t>(q)], c));
        gram.at(p, q) = dot;
      }
    total += determinant(gram);
    int i = k - 1;
    while (i >= 0 && pick[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
  }
  return total / binomial(n, k);
}

// Mixed "permanent" of two diagonals: (p! q!/n!) sum over |S|=q of
// prod_{i not in S} a_i prod_{i in S} b_i.
inline double diagonal_mixed_oracle(const std::vector<double>& a,
                                    const std::vector<double>& b, int p, int q) {
  const int n = static_cast<int>(a.size());
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    int card = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) ++card;
    if (card != q) continue;
    double prod = 1.0;
    for (int i = 0; i < n; ++i)
      prod *= (mask & (1u << i)) ? b[static_cast<size_t>(i)] : a[static_cast<size_t>(i)];
    total += prod;
  }
  double pf = 1.0, qf = 1.0, nf = 1.0;
  for (int i = 2; i <= p; ++i) pf *= i;
  for (int i = 2; i <= q; ++i) qf *= i;
  for (int i = 2; i <= n; ++i) nf *= i;
  return total * pf * qf / nf;
}

// ---------- cone / phase sampling ----------

inline std::vector<double> random_vector(int n, Rng& rng, double lo = -3.0,
                                         double hi = 3.0) {
  std::vector<double> v(static_cast<size_t>(n));
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline LambdaVector random_in_cone(const ConeSpec& cone, Rng& rng,
                                   double margin = 0.1) {
  const LambdaVector raw{random_vector(cone.n, rng)};
  return shift_into(cone, raw, margin + rng.uniform(0.0, 1.0));
}

// Rejection sample supercritical phase vectors via lam_i = tan(theta_i).
inline std::vector<double> sample_supercritical(int n, double delta, Rng& rng) {
  const double pi_2 = 1.5707963267948966;
  const double target = (n - 2) * pi_2 + delta;
  while (true) {
    std::vector<double> theta(static_cast<size_t>(n));
    double phase = 0.0;
    for (double& t : theta) {
      t = rng.uniform(-pi_2 * 0.999, pi_2 * 0.999);
      phase += t;
    }
    if (phase < target) continue;
    std::vector<double> lam(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) lam[static_cast<size_t>(i)] = std::tan(theta[static_cast<size_t>(i)]);
    return lam;
  }
}

struct Lemma61Result {
  std::int64_t samples = 0;
  std::int64_t failures_order = 0;     // lambda_{n-1} > 0 and |lambda_n| <= lambda_{n-1}
  std::int64_t failures_sum = 0;       // sum lambda_i >= 0
  std::int64_t failures_invsum = 0;    // sum 1/lambda_i <= -tan(delta) when lambda_n < 0
  std::int64_t failures_convex = 0;    // midpoint stays in the super-level set
  bool all_ok() const {
    return failures_order == 0 && failures_sum == 0 && failures_invsum == 0 &&
           failures_convex == 0;
  }
};

inline Lemma61Result lemma61_structure(int n, std::int64_t samples, double delta,
                                       Rng& rng) {
  const double pi_2 = 1.5707963267948966;
  const double sigma = (n - 2) * pi_2 + delta;
  Lemma61Result res;
  res.samples = samples;
  std::vector<double> prev;
  for (std::int64_t s = 0; s < samples; ++s) {
    std::vector<double> lam = sample_supercritical(n, delta, rng);
    std::vector<double> sorted = lam;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    if (!(sorted[static_cast<size_t>(n - 2)] > 0.0) ||
        !(std::abs(sorted[static_cast<size_t>(n - 1)]) <= sorted[static_cast<size_t>(n - 2)]))
      ++res.failures_order;
    double sum = 0.0;
    for (double v : sorted) sum += v;
    if (!(sum >= 0.0)) ++res.failures_sum;
    if (sorted[static_cast<size_t>(n - 1)] < 0.0) {
      double inv = 0.0;
      for (double v : sorted) inv += 1.0 / v;
      if (!(inv <= -std::tan(delta) + 1e-12)) ++res.failures_invsum;
    }
    if (!prev.empty()) {
      double mid_phase = 0.0;
      for (int i = 0; i < n; ++i)
        mid_phase += std::atan(0.5 * (prev[static_cast<size_t>(i)] + lam[static_cast<size_t>(i)]));
      if (!(mid_phase >= sigma - 1e-12)) ++res.failures_convex;
    }
    prev = lam;
  }
  return res;
}

// ---------- grid fixtures ----------

inline ScalarFn fn_abs2(std::array<double, 6> center = {}) {
  return [center](std::span<const double> z) {
    double s = 0.0;
    for (size_t a = 0; a < z.size(); ++a) {
      const double t = z[a] - center[a];
      s += t * t;
    }
    return s;
  };
}

inline ScalarFn fn_abs4() {
  return [](std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return s * s;
  };
}

inline RhsFn rhs_const(double c) {
  return [c](std::span<const double>, double) { return c; };
}

// Random C^2 test fields: quadratic form plus low-frequency trig mix.
inline ScalarFn random_smooth_field(int d, Rng& rng) {
  std::vector<double> q(static_cast<size_t>(d) * d), lin(static_cast<size_t>(d));
  for (double& v : q) v = rng.uniform(-1.0, 1.0);
  for (double& v : lin) v = rng.uniform(-1.0, 1.0);
  const double amp = rng.uniform(-0.5, 0.5);
  const double freq = rng.uniform(0.5, 2.0);
  return [d, q, lin, amp, freq](std::span<const double> z) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      s += lin[static_cast<size_t>(a)] * z[static_cast<size_t>(a)];
      for (int b = 0; b < d; ++b)
        s += 0.5 * q[static_cast<size_t>(a * d + b)] * z[static_cast<size_t>(a)] * z[static_cast<size_t>(b)];
    }
    double arg = 0.0;
    for (int a = 0; a < d; ++a) arg += z[static_cast<size_t>(a)] * (a + 1);
    return s + amp * std::sin(freq * arg);
  };
}

// Certified (sub, super) pair built from cone shifts of a base field: the
// subsolution gains curvature and drops, the supersolution loses curvature
// and rises. psi must not decrease in s for the drop/raise direction.
struct CertifiedPair {
  GridField sub;
  GridField super;
};

inline CertifiedPair make_certified_pair(const GridField& base, Rng& rng) {
  const Grid& g = *base.grid;
  const double r2max = [&] {
    double m = 0.0;
    double pos[6];
    for (std::int64_t idx = 0; idx < g.size(); ++idx) {
      g.position(idx, pos);
      double s = 0.0;
      for (int a = 0; a < g.dim(); ++a) s += pos[a] * pos[a];
      m = std::max(m, s);
    }
    return m;
  }();
  const double tau_sub = rng.uniform(0.0, 0.5);
  const double tau_super = rng.uniform(0.0, 0.5);
  const double drop = rng.uniform(0.0, 0.3);
  const double raise = rng.uniform(0.0, 0.3);
  CertifiedPair pair;
  pair.sub = base;
  pair.super = base;
  double pos[6];
  for (std::int64_t idx = 0; idx < g.size(); ++idx) {
    g.position(idx, pos);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) r2 += pos[a] * pos[a];
    pair.sub.values[static_cast<size_t>(idx)] += tau_sub * (r2 - r2max) - drop;
    pair.super.values[static_cast<size_t>(idx)] -= tau_super * (r2 - r2max) - raise;
  }
  return pair;
}

inline double sup_error_vs(const GridField& u, const ScalarFn& exact) {
  const Grid& g = *u.grid;
  double err = 0.0;
  double pos[6];
  for (std::int64_t idx : g.interior()) {
    g.position(idx, pos);
    err = std::max(err, std::abs(u[idx] - exact(std::span<const double>(
                                      pos, static_cast<size_t>(g.dim())))));
  }
  return err;
}

}  // namespace testsupport
