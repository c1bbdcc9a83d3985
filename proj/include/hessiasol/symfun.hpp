#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace hessiasol {

struct ConeSpec;  // cones.hpp

/// Ordered real vector of Hessian eigenvalues. Stored order is preserved;
/// sorted() returns a non-increasing copy.
class LambdaVector {
 public:
  explicit LambdaVector(std::vector<double> entries);
  LambdaVector(std::initializer_list<double> entries)
      : LambdaVector(std::vector<double>(entries)) {}

  int n() const { return static_cast<int>(entries_.size()); }
  double operator[](int i) const { return entries_[static_cast<size_t>(i)]; }
  const std::vector<double>& entries() const { return entries_; }
  std::span<const double> span() const { return entries_; }
  std::vector<double> sorted() const;  // non-increasing

 private:
  std::vector<double> entries_;
};

/// A symmetric function of the eigenvalues together with its dimension.
struct SymFun {
  enum class Kind { SigmaK, SNormK, QuotientRoot, LagrangianPhase };
  Kind kind;
  int k = 0;  // SigmaK/SNormK/QuotientRoot
  int l = 0;  // QuotientRoot only, 1 <= l < k
  int n = 0;

  static SymFun sigma_k(int k, int n);
  static SymFun s_norm_k(int k, int n);
  static SymFun quotient_root(int k, int l, int n);
  static SymFun lagrangian_phase(int n);
};

// Span kernels shared with the solver hot path (no allocation).
double elementary_symmetric(int k, std::span<const double> lam);
double s_norm_span(int k, std::span<const double> lam);
double lagrangian_phase_span(std::span<const double> lam);

double sigma(int k, const LambdaVector& lam);
double s_norm(int k, const LambdaVector& lam);

/// (S_k/S_l)^{1/(k-l)} on Gamma_k, extended by continuity to 0 on the cone
/// boundary. Throws std::domain_error outside the closed cone.
double quotient_root(int k, int l, const LambdaVector& lam);
double quotient_root_span(int k, int l, std::span<const double> lam);

double lagrangian_phase(const LambdaVector& lam);

/// Analytic gradient of f; requires lam strictly inside the evaluation cone
/// for the sigma-based kinds.
std::vector<double> grad(const SymFun& f, const LambdaVector& lam);

/// f(lam) on the closed cone, 0 outside. Not defined for LagrangianPhase.
double eval_extended(const SymFun& f, const ConeSpec& cone,
                     const LambdaVector& lam);
double eval_extended_span(const SymFun& f, const ConeSpec& cone,
                          std::span<const double> lam);

/// Plain evaluation of f at lam (no cone logic); QuotientRoot requires the
/// closed cone as in quotient_root.
double eval_plain(const SymFun& f, const LambdaVector& lam);

}  // namespace hessiasol
