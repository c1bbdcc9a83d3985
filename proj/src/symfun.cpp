#include "hessiasol/symfun.hpp"

#include <algorithm>
#include <cmath>

#include "hessiasol/common.hpp"
#include "hessiasol/cones.hpp"

namespace hessiasol {

namespace {

void check_k(int k, int n) {
  if (k < 1 || k > n) throw std::domain_error("symfun: k out of range");
}

constexpr int kMaxN = 64;

}  // namespace

LambdaVector::LambdaVector(std::vector<double> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::domain_error("LambdaVector: n >= 1 required");
  for (double v : entries_)
    if (!std::isfinite(v))
      throw std::domain_error("LambdaVector: entries must be finite");
}

std::vector<double> LambdaVector::sorted() const {
  std::vector<double> s = entries_;
  std::sort(s.begin(), s.end(), std::greater<double>());
  return s;
}

SymFun SymFun::sigma_k(int k, int n) {
  check_k(k, n);
  return {Kind::SigmaK, k, 0, n};
}

SymFun SymFun::s_norm_k(int k, int n) {
  check_k(k, n);
  return {Kind::SNormK, k, 0, n};
}

SymFun SymFun::quotient_root(int k, int l, int n) {
  check_k(k, n);
  if (l < 1 || l >= k) throw std::domain_error("SymFun: need 1 <= l < k");
  return {Kind::QuotientRoot, k, l, n};
}

SymFun SymFun::lagrangian_phase(int n) {
  if (n < 1) throw std::domain_error("SymFun: n >= 1 required");
  return {Kind::LagrangianPhase, 0, 0, n};
}

// Coefficients of prod_i (1 + t*lam_i), updated one factor at a time. This is
// the stable route for all n; the naive subset enumeration survives only as a
// test oracle.
double elementary_symmetric(int k, std::span<const double> lam) {
  const int n = static_cast<int>(lam.size());
  check_k(k, n);
  double e[kMaxN + 1];
  if (n > kMaxN) throw std::domain_error("symfun: n too large");
  e[0] = 1.0;
  for (int j = 1; j <= k; ++j) e[j] = 0.0;
  for (int i = 0; i < n; ++i) {
    const int top = std::min(i + 1, k);
    for (int j = top; j >= 1; --j) e[j] += lam[static_cast<size_t>(i)] * e[j - 1];
  }
  return e[k];
}

double s_norm_span(int k, std::span<const double> lam) {
  const int n = static_cast<int>(lam.size());
  return elementary_symmetric(k, lam) / binomial(n, k);
}

double lagrangian_phase_span(std::span<const double> lam) {
  double s = 0.0;
  for (double v : lam) s += std::atan(v);
  return s;
}

double sigma(int k, const LambdaVector& lam) {
  return elementary_symmetric(k, lam.span());
}

double s_norm(int k, const LambdaVector& lam) {
  return s_norm_span(k, lam.span());
}

double quotient_root_span(int k, int l, std::span<const double> lam) {
  const int n = static_cast<int>(lam.size());
  check_k(k, n);
  if (l < 1 || l >= k) throw std::domain_error("quotient_root: need 1 <= l < k");
  const ConeSpec gk = ConeSpec::gamma_m(k, n);
  if (!contains_span(gk, lam, /*closure=*/true))
    throw std::domain_error("quotient_root: lam outside closure of Gamma_k");
  const double sk = s_norm_span(k, lam);
  if (sk <= 0.0) return 0.0;  // continuous extension on the cone boundary
  const double sl = s_norm_span(l, lam);
  if (sl <= 0.0) return 0.0;  // only at lam == 0
  return std::pow(sk / sl, 1.0 / static_cast<double>(k - l));
}

double quotient_root(int k, int l, const LambdaVector& lam) {
  return quotient_root_span(k, l, lam.span());
}

double lagrangian_phase(const LambdaVector& lam) {
  return lagrangian_phase_span(lam.span());
}

namespace {

// d sigma_k / d lam_i = sigma_{k-1} of lam with entry i removed.
std::vector<double> sigma_grad(int k, std::span<const double> lam) {
  const int n = static_cast<int>(lam.size());
  std::vector<double> g(static_cast<size_t>(n));
  std::vector<double> rest;
  rest.reserve(static_cast<size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    rest.clear();
    for (int j = 0; j < n; ++j)
      if (j != i) rest.push_back(lam[static_cast<size_t>(j)]);
    g[static_cast<size_t>(i)] =
        (k == 1) ? 1.0 : elementary_symmetric(k - 1, rest);
  }
  return g;
}

}  // namespace

std::vector<double> grad(const SymFun& f, const LambdaVector& lam) {
  if (lam.n() != f.n) throw std::domain_error("grad: dimension mismatch");
  const int n = f.n;
  switch (f.kind) {
    case SymFun::Kind::LagrangianPhase: {
      std::vector<double> g(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = 1.0 / (1.0 + lam[i] * lam[i]);
      return g;
    }
    case SymFun::Kind::SigmaK:
    case SymFun::Kind::SNormK: {
      const ConeSpec gk = ConeSpec::gamma_m(f.k, n);
      if (!contains(gk, lam, /*closure=*/false))
        throw std::domain_error("grad: lam not strictly inside Gamma_k");
      std::vector<double> g = sigma_grad(f.k, lam.span());
      if (f.kind == SymFun::Kind::SNormK) {
        const double c = 1.0 / binomial(n, f.k);
        for (double& v : g) v *= c;
      }
      return g;
    }
    case SymFun::Kind::QuotientRoot: {
      const ConeSpec gk = ConeSpec::gamma_m(f.k, n);
      if (!contains(gk, lam, /*closure=*/false))
        throw std::domain_error("grad: lam not strictly inside Gamma_k");
      const double sk = s_norm(f.k, lam);
      const double sl = s_norm(f.l, lam);
      const double val = std::pow(sk / sl, 1.0 / static_cast<double>(f.k - f.l));
      std::vector<double> gk_grad = sigma_grad(f.k, lam.span());
      std::vector<double> gl_grad = sigma_grad(f.l, lam.span());
      const double ck = 1.0 / binomial(n, f.k);
      const double cl = 1.0 / binomial(n, f.l);
      std::vector<double> g(static_cast<size_t>(n));
      const double inv_d = 1.0 / static_cast<double>(f.k - f.l);
      for (int i = 0; i < n; ++i) {
        const double dk = gk_grad[static_cast<size_t>(i)] * ck;
        const double dl = gl_grad[static_cast<size_t>(i)] * cl;
        g[static_cast<size_t>(i)] = val * inv_d * (dk / sk - dl / sl);
      }
      return g;
    }
  }
  throw std::domain_error("grad: unknown kind");
}

double eval_plain(const SymFun& f, const LambdaVector& lam) {
  switch (f.kind) {
    case SymFun::Kind::SigmaK:
      return sigma(f.k, lam);
    case SymFun::Kind::SNormK:
      return s_norm(f.k, lam);
    case SymFun::Kind::QuotientRoot:
      return quotient_root(f.k, f.l, lam);
    case SymFun::Kind::LagrangianPhase:
      return lagrangian_phase(lam);
  }
  throw std::domain_error("eval_plain: unknown kind");
}

double eval_extended_span(const SymFun& f, const ConeSpec& cone,
                          std::span<const double> lam) {
  if (f.kind == SymFun::Kind::LagrangianPhase)
    throw std::domain_error(
        "eval_extended: LagrangianPhase uses phase thresholds, not the "
        "zero-extension");
  if (!contains_span(cone, lam, /*closure=*/true)) return 0.0;
  switch (f.kind) {
    case SymFun::Kind::SigmaK:
      return elementary_symmetric(f.k, lam);
    case SymFun::Kind::SNormK:
      return s_norm_span(f.k, lam);
    case SymFun::Kind::QuotientRoot:
      return quotient_root_span(f.k, f.l, lam);
    default:
      break;
  }
  throw std::domain_error("eval_extended: unknown kind");
}

double eval_extended(const SymFun& f, const ConeSpec& cone,
                     const LambdaVector& lam) {
  return eval_extended_span(f, cone, lam.span());
}

}  // namespace hessiasol
