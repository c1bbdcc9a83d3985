#pragma once

#include "hessiasol/symfun.hpp"

namespace hessiasol {

/// An admissible symmetric cone in R^n: the Gamma_m family (Positive is
/// Gamma_n) or the Lagrangian-phase super-level set Gamma^sigma. The phase
/// sets are convex with smooth boundary but are not scale-invariant; the
/// scale-invariance properties below apply to the Gamma_m kinds only.
struct ConeSpec {
  enum class Kind { GammaM, PhaseCone };
  Kind kind;
  int m = 0;           // GammaM
  double sigma = 0.0;  // PhaseCone threshold, in ((n-2)pi/2, n pi/2)
  int n = 0;

  static ConeSpec gamma_m(int m, int n);
  static ConeSpec positive(int n);  // == gamma_m(n, n)
  static ConeSpec phase_cone(double sigma, int n);

  bool is_positive_orthant() const { return kind == Kind::GammaM && m == n; }
};

/// Membership test. GammaM: sigma_j(lam) > 0 for j = 1..m (closure: >= 0,
/// exact). PhaseCone: sum arctan lam_i > sigma (closure: >=).
bool contains(const ConeSpec& cone, const LambdaVector& lam, bool closure);
bool contains_span(const ConeSpec& cone, std::span<const double> lam,
                   bool closure);

/// Signed distance along the diagonal: the t with lam - t*1 on the cone
/// boundary (positive inside, negative outside), found by bisection to 1e-10.
double distance_to_boundary(const ConeSpec& cone, const LambdaVector& lam);
double distance_to_boundary_span(const ConeSpec& cone,
                                 std::span<const double> lam);

/// lam + t*1 with the smallest t >= 0 reaching diagonal distance >= margin.
LambdaVector shift_into(const ConeSpec& cone, const LambdaVector& lam,
                        double margin);

}  // namespace hessiasol
