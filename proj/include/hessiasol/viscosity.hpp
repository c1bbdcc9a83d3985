#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "hessiasol/cones.hpp"
#include "hessiasol/grid.hpp"

namespace hessiasol {

/// The operator triple (f, Gamma, psi). For LagrangianPhase the rhs callable
/// is the phase target h(z) (the s argument is ignored) and phase_delta
/// records the supercritical margin of its range.
struct OperatorSpec {
  SymFun f;
  ConeSpec cone;
  RhsFn rhs;
  bool monotone_in_s = false;
  bool rhs_depends_on_s = false;
  double phase_delta = 0.0;

  bool is_phase() const { return f.kind == SymFun::Kind::LagrangianPhase; }

  static OperatorSpec monge_ampere(int n, RhsFn psi, bool monotone = false,
                                   bool depends_on_s = false);
  static OperatorSpec hessian(int k, int n, RhsFn psi, bool monotone = false,
                              bool depends_on_s = false);
  static OperatorSpec quotient(int k, int l, int n, RhsFn psi,
                               bool monotone = false, bool depends_on_s = false);
  static OperatorSpec lagrangian(int n, ScalarFn h, double delta);
};

/// Samples the OperatorSpec invariants (psi > 0, monotone in s when flagged,
/// phase target in range) on the given grid; throws std::domain_error on
/// violation.
void validate_operator(const OperatorSpec& op, const Grid& grid,
                       double s_lo = -10.0, double s_hi = 10.0);

enum class Verdict { Subsolution, Supersolution, Both, Neither };
enum class SuperDefinition { InfOverN, ConeRestricted };

struct Certificate {
  bool pass = false;
  Verdict verdict = Verdict::Neither;
  double tol = 0.0;
  double worst_margin = 0.0;
  std::int64_t worst_node = -1;
  std::array<double, 6> worst_pos{};
  std::vector<double> worst_lambda;
  std::int64_t kink_nodes = 0;  // excluded from margins, reported
  std::int64_t checked_nodes = 0;
};

struct SupersolutionOptions {
  SuperDefinition definition = SuperDefinition::InfOverN;
  /// PSD-sampling fallback for the inf over augmentations N >= 0 (rank-one
  /// directions, t on a log grid) for operators without the monotone
  /// zero-extended structure.
  bool sampled_inf = false;
  int augmentations = 20;
  std::uint64_t seed = 20240901;
};

/// Discrete jet surrogate of the upper differential test: every interior node
/// must satisfy f_ext(lambda(Hu)) >= psi(z, u) - tol. Kink nodes (pure second
/// differences of opposite sign at scale 1/h) are excluded and counted.
Certificate certify_subsolution(const GridField& u, const OperatorSpec& op,
                                double tol);

Certificate certify_supersolution(const GridField& u, const OperatorSpec& op,
                                  double tol, const SupersolutionOptions& opts = {});

/// Runs both certifications; verdict is Both / Subsolution / Supersolution /
/// Neither.
Verdict certify(const GridField& u, const OperatorSpec& op, double tol,
                Certificate* sub_out = nullptr, Certificate* super_out = nullptr);

struct GammaCheckReport {
  bool ok = false;
  double worst_margin = 0.0;  // min diagonal distance of lambda(Hu) to dGamma
  std::int64_t worst_node = -1;
};

/// lambda(Hu) within diagonal-shift distance tol of the closed cone at every
/// interior node.
GammaCheckReport gamma_subharmonic_check(const GridField& u, const ConeSpec& cone,
                                         double tol);

struct CompareReport {
  double interior_gap = 0.0;
  double boundary_gap = 0.0;
  double tol_grid = 0.0;
  bool principle_ok = false;
  std::int64_t argmax_node = -1;
  bool sub_certified = false;
  bool super_certified = false;
  bool certification_skipped = false;
};

/// Discrete comparison principle: max interior (u-v) <= max(boundary gap, 0)
/// + C*h. Certification of the pair is recorded (callers may skip it).
CompareReport compare(const GridField& u_sub, const GridField& v_super,
                      const OperatorSpec& op, double tol_c = 10.0,
                      bool recertify = true);

}  // namespace hessiasol
