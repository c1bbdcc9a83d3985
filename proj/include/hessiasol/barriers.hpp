#pragma once

#include "hessiasol/viscosity.hpp"

namespace hessiasol {

/// Sub/supersolution pair for the Dirichlet problem: subsolution
/// (A1 rho + h) + A2 rho and supersolution h (harmonic extension of phi).
/// All "large enough" constants are found by doubling with certification as
/// the stopping predicate.
struct BarrierBundle {
  GridField subsolution;
  GridField supersolution;
  double a1 = 0.0;
  double a2 = 0.0;
  Certificate sub_cert;
  Certificate super_cert;
};

BarrierBundle build_bundle(const OperatorSpec& op,
                           std::shared_ptr<const Grid> grid, const ScalarFn& phi,
                           double cert_tol_c = 10.0);

/// Boundary barrier at xi on the sphere: g_xi = C rho - |z-xi|^2 with C from
/// a doubling search keeping lambda(H g_xi) in the closed cone, then
/// h_xi = -C_tilde (-g_xi)^alpha. The stored field is h_xi + phi(xi).
struct HolderBarrier {
  std::array<double, 6> xi{};
  double alpha = 0.0;
  double c = 0.0;        // g_xi coefficient
  double c_tilde = 0.0;  // measured 2*alpha Hoelder constant of the data
  double phi_at_xi = 0.0;
  GridField field;
  double worst_cone_margin = 0.0;  // scaled diagonal distance, >= -tol
};

HolderBarrier holder_barrier(std::span<const double> xi, double alpha,
                             const OperatorSpec& op,
                             std::shared_ptr<const Grid> grid,
                             const ScalarFn& phi_tilde, double tol_c = 10.0);

struct GlobalBarrierResult {
  GridField envelope;
  double a = 0.0;  // envelope scale found by doubling
  double c = 0.0;
  double c_tilde = 0.0;
  std::int64_t net_size = 0;
};

/// Upper envelope sup_xi { a h_xi + phi(xi) } over a boundary net of spacing
/// <= 2h (band nodes projected to the sphere), with a doubled until the
/// envelope certifies as a subsolution at the level A_bound.
GlobalBarrierResult global_barrier(const OperatorSpec& op,
                                   std::shared_ptr<const Grid> grid,
                                   const ScalarFn& phi_tilde, double alpha,
                                   double a_bound, double tol_c = 10.0);

}  // namespace hessiasol
