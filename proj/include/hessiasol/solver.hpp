#pragma once

#include <string>
#include <utility>

#include "hessiasol/viscosity.hpp"

namespace hessiasol {

struct SolveConfig {
  OperatorSpec op;
  DomainSpec domain;
  ScalarFn phi;
  double h = 0.125;
  double dt = 0.0;  // 0 -> 0.2*h^2*n, clamped to the h^2/2 stability guard
  double residual_tol = 1e-6;
  std::int64_t max_iters = 5000000;

  enum class Init { Subsolution, HarmonicExtension, Custom };
  Init init = Init::HarmonicExtension;
  GridField custom_init;

  std::string residual_trace_path;  // optional per-iteration trace CSV
};

struct SolveReport {
  std::int64_t iterations = 0;
  double final_residual = 0.0;
  double wall_seconds = 0.0;
  double h = 0.0;
  double dt = 0.0;
  /// Degree normalization: the scheme runs on f^{1/deg} against psi^{1/deg}.
  double rhs_root_exponent = 1.0;
  Certificate sub_cert;
  Certificate super_cert;
  GammaCheckReport gamma;
  bool monotone_iterates = true;  // tracked for Init::Subsolution
  double worst_monotonicity = 0.0;
  bool domain_caveat = false;  // Box served by the enclosing ball's rho
  std::string caveat;
};

/// Monotone explicit pseudo-time relaxation for f(lambda(Hu)) = psi(z,u) with
/// u = phi on the boundary band: u <- u + dt (G[u] - psi_hat) at interior
/// nodes, where G is the degree-1 normal form of f (zero-extended outside the
/// cone) and psi_hat the root-normalized right side. Lagrangian phase runs as
/// G = phase - h with zero right side. Stops at residual sup-norm <=
/// residual_tol; the final field is re-certified at 10*residual_tol + 10*h.
std::pair<GridField, SolveReport> solve(const SolveConfig& cfg);

/// Hessian quotient front-end: S_{k,l}(lambda(Hu)) = psi with the 1/(k-l)
/// degree normalization recorded in the report.
std::pair<GridField, SolveReport> solve_quotient(int k, int l, RhsFn psi,
                                                 ScalarFn phi,
                                                 const DomainSpec& domain,
                                                 double h,
                                                 double residual_tol = 1e-6);

/// Penalized approximation of a supersolution u of the inverse-sigma_k
/// problem: solves the quotient (n, n-k) equation with right side
/// e^{j(s - u(z))} g(z), starting from u. Returns v_j.
std::pair<GridField, SolveReport> penalized_supersolution(const GridField& u,
                                                          ScalarFn g, double j,
                                                          int k,
                                                          double residual_tol = 1e-6);

struct HolderBand {
  double dist_lo = 0.0;
  double dist_hi = 0.0;
  double constant = 0.0;
  std::int64_t pairs = 0;
};

struct HolderReport {
  double alpha = 0.0;
  double holder_constant = 0.0;
  std::vector<HolderBand> bands;  // dyadic distance bands, largest first
};

/// Max of |u(z)-u(w)| / |z-w|^alpha over node pairs: all short-range pairs
/// (index offset <= 2 per axis) plus `sample_pairs` seeded random pairs.
HolderReport measure_holder(const GridField& u, double alpha,
                            std::int64_t sample_pairs = 100000,
                            std::uint64_t seed = 7);

struct CrosscheckReport {
  int k = 0;
  double tol = 0.0;
  int b_samples = 0;
  /// Min margins over interior nodes.
  double margin_quotient = 0.0;      // S_n - psi S_{n-k}
  double margin_sigma_form = 0.0;    // S_k - binom^{-1} psi
  double margin_sorted_product = 0.0;  // prod of k smallest eigs - binom^{-1} psi
  double margin_mixed = 0.0;         // D(Hu x k, B^2 x (n-k)) - psi over sampled B
  double margin_converse = 0.0;      // quotient - psi where the sigma-form hypothesis holds
  std::int64_t failures = 0;
  bool all_ok = false;
};

/// Pointwise inequalities linking the quotient equation with the sigma-form
/// and mixed-form bounds, on a certified subsolution of the inverse-sigma_k
/// problem with right side psi.
CrosscheckReport pluripotential_crosscheck(const GridField& u, const RhsFn& psi,
                                           int k, double tol_c = 10.0,
                                           int b_samples = 10,
                                           std::uint64_t seed = 11);

}  // namespace hessiasol
