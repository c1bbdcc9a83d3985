#include "hessiasol/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hessiasol/common.hpp"

namespace hessiasol {

namespace {

constexpr double kDoublingCap = 1152921504606846976.0;  // 2^60

double dist2(std::span<const double> x, std::span<const double> y, int d) {
  double s = 0.0;
  for (int a = 0; a < d; ++a) {
    const double t = x[static_cast<size_t>(a)] - y[static_cast<size_t>(a)];
    s += t * t;
  }
  return s;
}

GridField combine(const GridField& rho, double c_rho, const GridField& h) {
  GridField out = h;
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] += c_rho * rho.values[i];
  return out;
}

}  // namespace

BarrierBundle build_bundle(const OperatorSpec& op,
                           std::shared_ptr<const Grid> grid, const ScalarFn& phi,
                           double cert_tol_c) {
  if (op.is_phase())
    throw std::domain_error("build_bundle: needs a concave homogeneous kind");
  if (grid->domain().shape != DomainSpec::Shape::Ball)
    throw std::domain_error("build_bundle: Ball domains only");
  const Grid& g = *grid;
  const double R = g.domain().radius;
  const double tol = cert_tol_c * g.h();

  const GridField h = harmonic_extend(grid, phi, 1e-9);
  const GridField rho = defining_function(grid);

  // A1: smallest power of two making A1 rho + h cone-admissible everywhere.
  double a1 = 1.0;
  while (true) {
    const GridField cand = combine(rho, a1, h);
    const auto rep = gamma_subharmonic_check(cand, op.cone, 1e-9 * (1.0 + a1 / R));
    if (rep.ok) break;
    if (a1 * 2.0 > kDoublingCap)
      throw NumericError("build_bundle: A1 doubling cap exceeded (worst node " +
                         std::to_string(rep.worst_node) + ")");
    a1 *= 2.0;
  }

  // Target level: max over valid nodes of psi(z, h(z)).
  double m = 0.0;
  {
    double pos[6];
    const auto d = static_cast<size_t>(g.dim());
    auto scan = [&](const std::vector<std::int64_t>& ids) {
      for (std::int64_t idx : ids) {
        g.position(idx, pos);
        m = std::max(m, op.rhs(std::span<const double>(pos, d),
                               h.values[static_cast<size_t>(idx)]));
      }
    };
    scan(g.interior());
    scan(g.band());
  }

  // A2 seed: 0.5 f(2 A2 lambda(H rho)) >= m with lambda(H rho) = (1/R) 1.
  double a2 = 1.0;
  std::vector<double> lam(static_cast<size_t>(op.f.n));
  auto seed_value = [&](double a) {
    for (double& v : lam) v = 2.0 * a / R;
    return 0.5 * eval_plain(op.f, LambdaVector(lam));
  };
  while (seed_value(a2) < m) {
    a2 *= 2.0;
    if (a2 > kDoublingCap)
      throw NumericError("build_bundle: A2 doubling cap exceeded");
  }

  BarrierBundle bundle;
  while (true) {
    bundle.subsolution = combine(rho, a1 + a2, h);
    bundle.sub_cert = certify_subsolution(bundle.subsolution, op, tol);
    if (bundle.sub_cert.pass) break;
    a2 *= 2.0;
    if (a2 > kDoublingCap)
      throw NumericError("build_bundle: subsolution certification failed at cap; worst node " +
                         std::to_string(bundle.sub_cert.worst_node));
  }
  bundle.a1 = a1;
  bundle.a2 = a2;
  bundle.supersolution = h;
  bundle.super_cert = certify_supersolution(bundle.supersolution, op, tol);
  return bundle;
}

HolderBarrier holder_barrier(std::span<const double> xi, double alpha,
                             const OperatorSpec& op,
                             std::shared_ptr<const Grid> grid,
                             const ScalarFn& phi_tilde, double tol_c) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("holder_barrier: alpha in (0,1) required");
  const Grid& g = *grid;
  const DomainSpec& dom = g.domain();
  if (dom.shape != DomainSpec::Shape::Ball)
    throw std::domain_error("holder_barrier: Ball domains only");
  const int d = g.dim();
  const double R = dom.radius;
  {
    const double r = std::sqrt(dist2(xi, std::span<const double>(dom.center.data(), static_cast<size_t>(d)), d));
    if (std::abs(r - R) > 1e-9 * (1.0 + R))
      throw std::domain_error("holder_barrier: xi must lie on the boundary");
  }

  const GridField rho = defining_function(grid);

  // C: doubling from 2 R n; H(g_xi) = (C/R - 1) Id for the ball, exact on the
  // grid, so the first admissible candidate is usually the seed itself.
  double c = 2.0 * R * g.cdim();
  GridField gxi(grid);
  auto build_g = [&](double cc) {
    double pos[6];
    for (std::int64_t idx = 0; idx < g.size(); ++idx) {
      g.position(idx, pos);
      gxi.values[static_cast<size_t>(idx)] =
          cc * rho.values[static_cast<size_t>(idx)] -
          dist2(std::span<const double>(pos, static_cast<size_t>(d)), xi, d);
    }
  };
  while (true) {
    build_g(c);
    if (gamma_subharmonic_check(gxi, op.cone, 1e-9 * (1.0 + c / R)).ok) break;
    c *= 2.0;
    if (c > kDoublingCap)
      throw NumericError("holder_barrier: C doubling cap exceeded");
  }

  const double phi_xi = phi_tilde(xi);

  // Measured 2*alpha Hoelder constant of the data over band-node pairs
  // (including xi itself).
  const auto& band = g.band();
  std::vector<std::array<double, 6>> pts;
  std::vector<double> vals;
  {
    const size_t cap = 1500;
    const size_t stride = std::max<size_t>(1, band.size() / cap);
    for (size_t i = 0; i < band.size(); i += stride) {
      pts.push_back(g.position(band[i]));
      vals.push_back(phi_tilde(std::span<const double>(pts.back().data(), static_cast<size_t>(d))));
    }
    std::array<double, 6> xarr{};
    std::copy(xi.begin(), xi.end(), xarr.begin());
    pts.push_back(xarr);
    vals.push_back(phi_xi);
  }
  double c_tilde = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const double d2 = dist2(std::span<const double>(pts[i].data(), static_cast<size_t>(d)),
                              std::span<const double>(pts[j].data(), static_cast<size_t>(d)), d);
      if (d2 <= 0.0) continue;
      const double q = std::abs(vals[i] - vals[j]) / std::pow(d2, alpha);
      c_tilde = std::max(c_tilde, q);
    }
  if (c_tilde == 0.0) c_tilde = 1e-12;  // constant data

  HolderBarrier hb;
  std::copy(xi.begin(), xi.end(), hb.xi.begin());
  hb.alpha = alpha;
  hb.c = c;
  hb.c_tilde = c_tilde;
  hb.phi_at_xi = phi_xi;
  hb.field = GridField(grid);
  for (std::int64_t idx = 0; idx < g.size(); ++idx) {
    const double w = std::max(0.0, -gxi.values[static_cast<size_t>(idx)]);
    hb.field.values[static_cast<size_t>(idx)] = -c_tilde * std::pow(w, alpha) + phi_xi;
  }

  // Cone admissibility of H(h_xi) at interior nodes, tolerance scaled by the
  // local eigenvalue size (the barrier blows up near xi).
  {
    const double* v = hb.field.values.data();
    double worst = std::numeric_limits<double>::infinity();
    std::int64_t worst_node = -1;
    Complex H[9];
    double lam[3];
    for (std::int64_t idx : g.interior()) {
      complex_hessian_at(g, v, idx, H);
      eigenvalues_small(g.cdim(), H, lam);
      double sup = 0.0;
      for (int i = 0; i < g.cdim(); ++i) sup = std::max(sup, std::abs(lam[i]));
      const double dist = distance_to_boundary_span(
          op.cone, std::span<const double>(lam, static_cast<size_t>(g.cdim())));
      const double scaled = dist / (1.0 + sup);
      if (scaled < worst) {
        worst = scaled;
        worst_node = idx;
      }
    }
    hb.worst_cone_margin = worst;
    if (worst < -tol_c * g.h())
      throw NumericError("holder_barrier: cone admissibility failed at node " +
                         std::to_string(worst_node));
  }

  // h_xi <= phi - phi(xi) on the band, up to the O((C h)^alpha) slack from
  // band nodes sitting slightly outside the sphere.
  {
    const double slack = c_tilde * std::pow(2.0 * c * g.h(), alpha) + 1e-12;
    double pos[6];
    for (std::int64_t idx : band) {
      g.position(idx, pos);
      const double bound = phi_tilde(std::span<const double>(pos, static_cast<size_t>(d)));
      if (hb.field.values[static_cast<size_t>(idx)] > bound + slack)
        throw NumericError("holder_barrier: boundary ordering failed at node " +
                           std::to_string(idx));
    }
  }
  return hb;
}

GlobalBarrierResult global_barrier(const OperatorSpec& op,
                                   std::shared_ptr<const Grid> grid,
                                   const ScalarFn& phi_tilde, double alpha,
                                   double a_bound, double tol_c) {
  if (op.is_phase())
    throw std::domain_error("global_barrier: needs a homogeneous kind");
  const Grid& g = *grid;
  const DomainSpec& dom = g.domain();
  if (dom.shape != DomainSpec::Shape::Ball)
    throw std::domain_error("global_barrier: Ball domains only");
  const int d = g.dim();
  const double R = dom.radius;

  // Boundary net: band nodes projected to the sphere (spacing <= 2h).
  std::vector<std::array<double, 6>> net;
  for (std::int64_t idx : g.band()) {
    std::array<double, 6> p = g.position(idx);
    double r = 0.0;
    for (int a = 0; a < d; ++a) {
      p[static_cast<size_t>(a)] -= dom.center[static_cast<size_t>(a)];
      r += p[static_cast<size_t>(a)] * p[static_cast<size_t>(a)];
    }
    r = std::sqrt(r);
    if (r == 0.0) continue;
    for (int a = 0; a < d; ++a)
      p[static_cast<size_t>(a)] = dom.center[static_cast<size_t>(a)] + p[static_cast<size_t>(a)] * (R / r);
    net.push_back(p);
  }

  // One barrier shape is shared by all xi: h_xi depends on xi only through
  // |z - xi|^2, so build per-xi fields lazily from rho and the distance.
  const GridField rho = defining_function(grid);
  double c;
  {
    // The admissibility doubling for C is shared with holder_barrier; run it
    // once at a probe boundary point.
    std::vector<double> probe(static_cast<size_t>(d), 0.0);
    for (int a = 0; a < d; ++a) probe[static_cast<size_t>(a)] = dom.center[static_cast<size_t>(a)];
    probe[0] += R;
    c = holder_barrier(probe, alpha, op, grid, phi_tilde, tol_c).c;
  }

  // Measured data constant over the net.
  std::vector<double> net_phi(net.size());
  for (size_t i = 0; i < net.size(); ++i)
    net_phi[i] = phi_tilde(std::span<const double>(net[i].data(), static_cast<size_t>(d)));
  double c_tilde = 0.0;
  {
    const size_t stride = std::max<size_t>(1, net.size() / 1200);
    for (size_t i = 0; i < net.size(); i += stride)
      for (size_t j = i + stride; j < net.size(); j += stride) {
        const double d2 = dist2(std::span<const double>(net[i].data(), static_cast<size_t>(d)),
                                std::span<const double>(net[j].data(), static_cast<size_t>(d)), d);
        if (d2 <= 0.0) continue;
        c_tilde = std::max(c_tilde, std::abs(net_phi[i] - net_phi[j]) / std::pow(d2, alpha));
      }
    if (c_tilde == 0.0) c_tilde = 1e-12;
  }

  OperatorSpec level_op = op;
  level_op.rhs = [a_bound](std::span<const double>, double) { return a_bound; };
  level_op.rhs_depends_on_s = false;

  GlobalBarrierResult res;
  res.c = c;
  res.c_tilde = c_tilde;
  res.net_size = static_cast<std::int64_t>(net.size());

  double a = 1.0;
  while (true) {
    GridField env(grid);
    const double* rv = rho.values.data();
    parallel_for(g.size(), [&](std::int64_t b, std::int64_t e) {
      double pos[6];
      for (std::int64_t idx = b; idx < e; ++idx) {
        g.position(idx, pos);
        const std::span<const double> z(pos, static_cast<size_t>(d));
        double best = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < net.size(); ++i) {
          const double w = std::max(
              0.0, dist2(z, std::span<const double>(net[i].data(), static_cast<size_t>(d)), d) -
                       c * rv[idx]);
          const double val = -a * c_tilde * std::pow(w, alpha) + net_phi[i];
          if (val > best) best = val;
        }
        env.values[static_cast<size_t>(idx)] = best;
      }
    });
    const Certificate cert = certify_subsolution(env, level_op, tol_c * g.h());
    if (cert.pass) {
      res.envelope = std::move(env);
      res.a = a;
      return res;
    }
    a *= 2.0;
    if (a > kDoublingCap)
      throw NumericError("global_barrier: envelope doubling cap exceeded");
  }
}

}  // namespace hessiasol
