#include "hessiasol/cones.hpp"

#include <algorithm>
#include <cmath>

#include "hessiasol/common.hpp"

namespace hessiasol {

namespace {

constexpr int kMaxN = 64;

// Fills e[1..m] with sigma_1..sigma_m of lam.
void elementary_prefix(std::span<const double> lam, int m, double* e) {
  const int n = static_cast<int>(lam.size());
  e[0] = 1.0;
  for (int j = 1; j <= m; ++j) e[j] = 0.0;
  for (int i = 0; i < n; ++i) {
    const int top = std::min(i + 1, m);
    for (int j = top; j >= 1; --j) e[j] += lam[static_cast<size_t>(i)] * e[j - 1];
  }
}

double sup_norm(std::span<const double> lam) {
  double s = 0.0;
  for (double v : lam) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

ConeSpec ConeSpec::gamma_m(int m, int n) {
  if (n < 1 || m < 1 || m > n) throw std::domain_error("ConeSpec: bad Gamma_m");
  return {Kind::GammaM, m, 0.0, n};
}

ConeSpec ConeSpec::positive(int n) { return gamma_m(n, n); }

ConeSpec ConeSpec::phase_cone(double sigma, int n) {
  if (n < 1) throw std::domain_error("ConeSpec: n >= 1 required");
  const double pi_2 = 1.5707963267948966;
  if (!(sigma > (n - 2) * pi_2 && sigma < n * pi_2))
    throw std::domain_error("ConeSpec: phase threshold outside ((n-2)pi/2, n pi/2)");
  return {Kind::PhaseCone, 0, sigma, n};
}

bool contains_span(const ConeSpec& cone, std::span<const double> lam,
                   bool closure) {
  if (static_cast<int>(lam.size()) != cone.n)
    throw std::domain_error("contains: dimension mismatch");
  if (cone.kind == ConeSpec::Kind::PhaseCone) {
    const double phase = lagrangian_phase_span(lam);
    return closure ? phase >= cone.sigma : phase > cone.sigma;
  }
  if (cone.n > kMaxN) throw std::domain_error("contains: n too large");
  double e[kMaxN + 1];
  elementary_prefix(lam, cone.m, e);
  for (int j = 1; j <= cone.m; ++j) {
    if (closure ? e[j] < 0.0 : e[j] <= 0.0) return false;
  }
  return true;
}

bool contains(const ConeSpec& cone, const LambdaVector& lam, bool closure) {
  return contains_span(cone, lam.span(), closure);
}

// Membership along lam - t*1 is monotone: for every admissible cone here,
// being inside at t implies inside at any smaller t. Bisection on the step
// indicator is therefore valid.
double distance_to_boundary_span(const ConeSpec& cone,
                                 std::span<const double> lam) {
  const int n = cone.n;
  std::vector<double> work(lam.begin(), lam.end());
  auto inside_at = [&](double t) {
    for (int i = 0; i < n; ++i) work[static_cast<size_t>(i)] = lam[static_cast<size_t>(i)] - t;
    return contains_span(cone, work, /*closure=*/false);
  };

  const double bracket = 10.0 * (1.0 + sup_norm(lam));
  const bool inside0 = inside_at(0.0);
  double lo, hi;  // inside_at(lo) == true, inside_at(hi) == false
  if (inside0) {
    lo = 0.0;
    hi = bracket;
    if (inside_at(hi))
      throw NumericError("distance_to_boundary: bracket not found");
  } else {
    hi = 0.0;
    lo = -bracket;
    if (!inside_at(lo)) {
      // Entirely outside the reachable diagonal range; boundary crossing at
      // lam + t*1 does not exist within the bracket.
      throw NumericError("distance_to_boundary: bracket not found");
    }
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (inside_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double distance_to_boundary(const ConeSpec& cone, const LambdaVector& lam) {
  return distance_to_boundary_span(cone, lam.span());
}

LambdaVector shift_into(const ConeSpec& cone, const LambdaVector& lam,
                        double margin) {
  if (!(margin > 0.0)) throw std::domain_error("shift_into: margin > 0 required");
  const double d = distance_to_boundary(cone, lam);
  const double t = std::max(0.0, margin - d);
  std::vector<double> out = lam.entries();
  for (double& v : out) v += t;
  return LambdaVector(std::move(out));
}

}  // namespace hessiasol
