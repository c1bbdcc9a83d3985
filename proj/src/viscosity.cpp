#include "hessiasol/viscosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hessiasol/common.hpp"

namespace hessiasol {

OperatorSpec OperatorSpec::monge_ampere(int n, RhsFn psi, bool monotone,
                                        bool depends_on_s) {
  return {SymFun::s_norm_k(n, n), ConeSpec::positive(n), std::move(psi),
          monotone, depends_on_s, 0.0};
}

OperatorSpec OperatorSpec::hessian(int k, int n, RhsFn psi, bool monotone,
                                   bool depends_on_s) {
  return {SymFun::s_norm_k(k, n), ConeSpec::gamma_m(k, n), std::move(psi),
          monotone, depends_on_s, 0.0};
}

OperatorSpec OperatorSpec::quotient(int k, int l, int n, RhsFn psi,
                                    bool monotone, bool depends_on_s) {
  return {SymFun::quotient_root(k, l, n), ConeSpec::gamma_m(k, n),
          std::move(psi), monotone, depends_on_s, 0.0};
}

OperatorSpec OperatorSpec::lagrangian(int n, ScalarFn h, double delta) {
  if (!(delta > 0.0))
    throw std::domain_error("OperatorSpec: phase delta > 0 required");
  const double pi_2 = 1.5707963267948966;
  const double sigma = (n - 2) * pi_2 + delta;
  RhsFn rhs = [h](std::span<const double> z, double) { return h(z); };
  return {SymFun::lagrangian_phase(n), ConeSpec::phase_cone(sigma, n),
          std::move(rhs), false, false, delta};
}

void validate_operator(const OperatorSpec& op, const Grid& grid, double s_lo,
                       double s_hi) {
  const double pi_2 = 1.5707963267948966;
  const int n = op.f.n;
  double pos[6];
  const auto d = static_cast<size_t>(grid.dim());
  const auto& interior = grid.interior();
  const std::int64_t step = std::max<std::int64_t>(1, static_cast<std::int64_t>(interior.size()) / 256);
  for (size_t i = 0; i < interior.size(); i += static_cast<size_t>(step)) {
    grid.position(interior[i], pos);
    const std::span<const double> z(pos, d);
    if (op.is_phase()) {
      const double hval = op.rhs(z, 0.0);
      if (!(hval >= (n - 2) * pi_2 + op.phase_delta - 1e-12) || !(hval < n * pi_2))
        throw std::domain_error("validate_operator: phase target outside range");
      continue;
    }
    double prev = -std::numeric_limits<double>::infinity();
    for (double s : {s_lo, 0.5 * (s_lo + s_hi), s_hi}) {
      const double v = op.rhs(z, s);
      if (!(v > 0.0))
        throw std::domain_error("validate_operator: psi must be positive");
      if (op.monotone_in_s && v < prev - 1e-12 * (1.0 + std::abs(prev)))
        throw std::domain_error("validate_operator: psi not increasing in s");
      prev = v;
    }
  }
}

namespace {

// Lexicographic (margin, node) minimum; order-independent reduction.
struct Worst {
  double margin = std::numeric_limits<double>::infinity();
  std::int64_t node = -1;
  void add(double m, std::int64_t nd) {
    if (m < margin || (m == margin && (node < 0 || nd < node))) {
      margin = m;
      node = nd;
    }
  }
  void merge(const Worst& o) {
    if (o.node >= 0) add(o.margin, o.node);
  }
};

bool is_kink_node(const Grid& g, const double* v, std::int64_t idx) {
  const double h = g.h();
  const double scale = 1.0 / h;
  double mx = -std::numeric_limits<double>::infinity();
  double mn = std::numeric_limits<double>::infinity();
  for (int a = 0; a < g.dim(); ++a) {
    const std::int64_t s = g.stride(a);
    const double dd = (v[idx + s] - 2.0 * v[idx] + v[idx - s]) / (h * h);
    mx = std::max(mx, dd);
    mn = std::min(mn, dd);
  }
  return mx >= scale && mn <= -scale;
}

// Margin of one node for the subsolution test; +inf marks skipped (kink).
template <typename MarginFn>
Certificate run_certify(const GridField& u, double tol,
                        const MarginFn& margin_at, Verdict pass_verdict) {
  const Grid& g = *u.grid;
  const auto& interior = g.interior();
  const double* v = u.values.data();
  const std::int64_t count = static_cast<std::int64_t>(interior.size());

  const int nchunks = std::max(1, std::min<int>(max_threads() * 4, 256));
  const std::int64_t chunk = (count + nchunks - 1) / nchunks;
  std::vector<Worst> worst(static_cast<size_t>(nchunks));
  std::vector<std::int64_t> kinks(static_cast<size_t>(nchunks), 0);

  parallel_for(nchunks, [&](std::int64_t cb, std::int64_t ce) {
    for (std::int64_t c = cb; c < ce; ++c) {
      const std::int64_t b = c * chunk;
      const std::int64_t e = std::min(count, b + chunk);
      for (std::int64_t p = b; p < e; ++p) {
        const std::int64_t idx = interior[static_cast<size_t>(p)];
        if (is_kink_node(g, v, idx)) {
          ++kinks[static_cast<size_t>(c)];
          continue;
        }
        const double m = margin_at(idx);
        if (std::isfinite(m)) worst[static_cast<size_t>(c)].add(m, idx);
      }
    }
  });

  Worst total;
  std::int64_t kink_total = 0;
  for (int c = 0; c < nchunks; ++c) {
    total.merge(worst[static_cast<size_t>(c)]);
    kink_total += kinks[static_cast<size_t>(c)];
  }

  Certificate cert;
  cert.tol = tol;
  cert.kink_nodes = kink_total;
  cert.checked_nodes = count - kink_total;
  cert.worst_margin = total.node >= 0 ? total.margin : 0.0;
  cert.worst_node = total.node;
  cert.pass = total.node < 0 || total.margin >= -tol;
  cert.verdict = cert.pass ? pass_verdict : Verdict::Neither;
  if (total.node >= 0) {
    cert.worst_pos = g.position(total.node);
    Complex H[9];
    double lam[3];
    complex_hessian_at(g, v, total.node, H);
    eigenvalues_small(g.cdim(), H, lam);
    cert.worst_lambda.assign(lam, lam + g.cdim());
  }
  return cert;
}

void lambda_at(const Grid& g, const double* v, std::int64_t idx, double* lam) {
  Complex H[9];
  complex_hessian_at(g, v, idx, H);
  eigenvalues_small(g.cdim(), H, lam);
}

}  // namespace

Certificate certify_subsolution(const GridField& u, const OperatorSpec& op,
                                double tol) {
  const Grid& g = *u.grid;
  const int n = g.cdim();
  if (op.f.n != n) throw std::domain_error("certify: dimension mismatch");
  const double* v = u.values.data();
  auto margin = [&](std::int64_t idx) {
    double lam[3];
    double p[6];
    lambda_at(g, v, idx, lam);
    const std::span<const double> ls(lam, static_cast<size_t>(n));
    g.position(idx, p);
    const std::span<const double> z(p, static_cast<size_t>(g.dim()));
    const double rhs = op.rhs(z, v[idx]);
    const double val = op.is_phase() ? lagrangian_phase_span(ls)
                                     : eval_extended_span(op.f, op.cone, ls);
    return val - rhs;
  };
  return run_certify(u, tol, margin, Verdict::Subsolution);
}

Certificate certify_supersolution(const GridField& u, const OperatorSpec& op,
                                  double tol, const SupersolutionOptions& opts) {
  const Grid& g = *u.grid;
  const int n = g.cdim();
  if (op.f.n != n) throw std::domain_error("certify: dimension mismatch");
  const double* v = u.values.data();

  auto margin_analytic = [&](std::int64_t idx) {
    double lam[3];
    double p[6];
    lambda_at(g, v, idx, lam);
    const std::span<const double> ls(lam, static_cast<size_t>(n));
    g.position(idx, p);
    const std::span<const double> z(p, static_cast<size_t>(g.dim()));
    const double rhs = op.rhs(z, v[idx]);
    if (op.is_phase()) {
      const double phase = lagrangian_phase_span(ls);
      if (opts.definition == SuperDefinition::ConeRestricted &&
          !contains_span(op.cone, ls, /*closure=*/true))
        return std::numeric_limits<double>::infinity();  // vacuous pass
      // Inf over N >= 0 is attained at N = 0 (phase increases in the PSD
      // order), so the test reduces to phase <= h + tol.
      return rhs - phase;
    }
    if (!contains_span(op.cone, ls, /*closure=*/true))
      return std::numeric_limits<double>::infinity();  // vacuous pass
    double val;
    switch (op.f.kind) {
      case SymFun::Kind::SigmaK:
        val = elementary_symmetric(op.f.k, ls);
        break;
      case SymFun::Kind::SNormK:
        val = s_norm_span(op.f.k, ls);
        break;
      default:
        val = quotient_root_span(op.f.k, op.f.l, ls);
        break;
    }
    return rhs - val;
  };

  if (!opts.sampled_inf)
    return run_certify(u, tol, margin_analytic, Verdict::Supersolution);

  // Sampled fallback: rank-one PSD augmentations on a log grid of scales; the
  // node passes if any augmented state satisfies the inequality.
  Rng dir_rng(opts.seed);
  std::vector<Complex> dirs(static_cast<size_t>(opts.augmentations) * n);
  for (auto& c : dirs) c = Complex(dir_rng.normal(), dir_rng.normal());
  auto margin_sampled = [&](std::int64_t idx) {
    Complex H[9];
    double lam[3];
    double p[6];
    complex_hessian_at(g, v, idx, H);
    g.position(idx, p);
    const std::span<const double> z(p, static_cast<size_t>(g.dim()));
    const double rhs = op.rhs(z, v[idx]);
    double best = -std::numeric_limits<double>::infinity();  // max over N of rhs - F
    Complex Ha[9];
    for (int aug = -1; aug < opts.augmentations; ++aug) {
      for (int ts = 0; ts < (aug < 0 ? 1 : 7); ++ts) {
        const double t = aug < 0 ? 0.0 : std::pow(10.0, -3.0 + ts);
        for (int i = 0; i < n * n; ++i) Ha[i] = H[i];
        if (aug >= 0) {
          const Complex* w = &dirs[static_cast<size_t>(aug) * n];
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Ha[i * n + j] += t * w[i] * std::conj(w[j]);
        }
        eigenvalues_small(n, Ha, lam);
        const std::span<const double> ls(lam, static_cast<size_t>(n));
        const double val = op.is_phase()
                               ? lagrangian_phase_span(ls)
                               : eval_extended_span(op.f, op.cone, ls);
        best = std::max(best, rhs - val);
      }
    }
    return best;
  };
  return run_certify(u, tol, margin_sampled, Verdict::Supersolution);
}

Verdict certify(const GridField& u, const OperatorSpec& op, double tol,
                Certificate* sub_out, Certificate* super_out) {
  const Certificate sub = certify_subsolution(u, op, tol);
  const Certificate super = certify_supersolution(u, op, tol);
  if (sub_out) *sub_out = sub;
  if (super_out) *super_out = super;
  if (sub.pass && super.pass) return Verdict::Both;
  if (sub.pass) return Verdict::Subsolution;
  if (super.pass) return Verdict::Supersolution;
  return Verdict::Neither;
}

GammaCheckReport gamma_subharmonic_check(const GridField& u, const ConeSpec& cone,
                                         double tol) {
  const Grid& g = *u.grid;
  const int n = g.cdim();
  if (cone.n != n) throw std::domain_error("gamma check: dimension mismatch");
  const auto& interior = g.interior();
  const double* v = u.values.data();
  const std::int64_t count = static_cast<std::int64_t>(interior.size());

  const int nchunks = std::max(1, std::min<int>(max_threads() * 4, 256));
  const std::int64_t chunk = (count + nchunks - 1) / nchunks;
  std::vector<Worst> worst(static_cast<size_t>(nchunks));
  parallel_for(nchunks, [&](std::int64_t cb, std::int64_t ce) {
    for (std::int64_t c = cb; c < ce; ++c) {
      const std::int64_t b = c * chunk;
      const std::int64_t e = std::min(count, b + chunk);
      double lam[3];
      for (std::int64_t pidx = b; pidx < e; ++pidx) {
        const std::int64_t idx = interior[static_cast<size_t>(pidx)];
        lambda_at(g, v, idx, lam);
        const double dist = distance_to_boundary_span(
            cone, std::span<const double>(lam, static_cast<size_t>(n)));
        worst[static_cast<size_t>(c)].add(dist, idx);
      }
    }
  });
  Worst total;
  for (const auto& w : worst) total.merge(w);
  GammaCheckReport rep;
  rep.worst_margin = total.margin;
  rep.worst_node = total.node;
  rep.ok = total.margin >= -tol;
  return rep;
}

CompareReport compare(const GridField& u_sub, const GridField& v_super,
                      const OperatorSpec& op, double tol_c, bool recertify) {
  if (u_sub.grid != v_super.grid)
    throw std::domain_error("compare: grid mismatch");
  const Grid& g = *u_sub.grid;
  CompareReport rep;
  rep.tol_grid = tol_c * g.h();
  Worst wi;
  for (std::int64_t idx : g.interior())
    wi.add(-(u_sub[idx] - v_super[idx]), idx);  // track the max via min of -
  rep.interior_gap = -wi.margin;
  rep.argmax_node = wi.node;
  double bg = -std::numeric_limits<double>::infinity();
  for (std::int64_t idx : g.band()) bg = std::max(bg, u_sub[idx] - v_super[idx]);
  rep.boundary_gap = bg;
  rep.principle_ok =
      rep.interior_gap <= std::max(rep.boundary_gap, 0.0) + rep.tol_grid;
  if (recertify) {
    const double tol = 10.0 * g.h();
    rep.sub_certified = certify_subsolution(u_sub, op, tol).pass;
    rep.super_certified = certify_supersolution(v_super, op, tol).pass;
  } else {
    rep.certification_skipped = true;
  }
  return rep;
}

}  // namespace hessiasol
