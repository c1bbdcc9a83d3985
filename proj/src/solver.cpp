#include "hessiasol/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hessiasol/barriers.hpp"
#include "hessiasol/common.hpp"

namespace hessiasol {

namespace {

// sigma_1..sigma_n of the spectrum of an n x n Hermitian matrix straight from
// principal minors (n <= 3), no eigendecomposition.
inline void char_coeffs(int n, const Complex* m, double* sig) {
  if (n == 1) {
    sig[0] = m[0].real();
    return;
  }
  if (n == 2) {
    const double a = m[0].real(), b = m[3].real();
    sig[0] = a + b;
    sig[1] = a * b - std::norm(m[1]);
    return;
  }
  const double a = m[0].real(), b = m[4].real(), c = m[8].real();
  const Complex p = m[1], q = m[2], r = m[5];  // (0,1), (0,2), (1,2)
  sig[0] = a + b + c;
  sig[1] = a * b + a * c + b * c - std::norm(p) - std::norm(q) - std::norm(r);
  sig[2] = a * b * c + 2.0 * (p * r * std::conj(q)).real() - a * std::norm(r) -
           b * std::norm(q) - c * std::norm(p);
}

// Eigenvalues of the node Hessian, ascending order not required here.
inline void eig_small_inline(int n, const Complex* m, double* lam) {
  eigenvalues_small(n, m, lam);
}

struct NormalForm {
  SymFun::Kind kind;
  int k = 0, l = 0, m_cone = 0;
  int n = 0;
  double deg = 1.0;       // homogeneity degree of the raw f
  double binom_k = 1.0;   // binom(n,k)
  double binom_l = 1.0;
  bool phase = false;
};

NormalForm make_normal_form(const OperatorSpec& op) {
  NormalForm nf;
  nf.kind = op.f.kind;
  nf.k = op.f.k;
  nf.l = op.f.l;
  nf.n = op.f.n;
  nf.phase = op.is_phase();
  if (!nf.phase) {
    nf.m_cone = op.cone.m;
    nf.binom_k = binomial(nf.n, nf.k);
    if (nf.kind == SymFun::Kind::QuotientRoot) {
      nf.binom_l = binomial(nf.n, nf.l);
      nf.deg = 1.0;  // quotient_root is already the degree-1 normal form
    } else {
      nf.deg = static_cast<double>(nf.k);
    }
  }
  return nf;
}

// Degree-1 normal-form value of the zero-extended operator at one node.
inline double normal_form_value(const NormalForm& nf, const Complex* H,
                                double* scratch) {
  if (nf.phase) {
    double lam[3];
    eig_small_inline(nf.n, H, lam);
    double s = 0.0;
    for (int i = 0; i < nf.n; ++i) s += std::atan(lam[i]);
    return s;
  }
  double* sig = scratch;
  char_coeffs(nf.n, H, sig);
  const int top = std::max(nf.k, nf.m_cone);
  for (int j = 1; j <= top; ++j)
    if (j <= nf.m_cone && sig[j - 1] < 0.0) return 0.0;  // outside the cone
  if (nf.kind == SymFun::Kind::QuotientRoot) {
    const double sk = sig[nf.k - 1] / nf.binom_k;
    if (sk <= 0.0) return 0.0;
    const double sl = sig[nf.l - 1] / nf.binom_l;
    if (sl <= 0.0) return 0.0;
    return std::pow(sk / sl, 1.0 / static_cast<double>(nf.k - nf.l));
  }
  double v = sig[nf.k - 1];
  if (nf.kind == SymFun::Kind::SNormK) v /= nf.binom_k;
  if (v <= 0.0) return 0.0;
  return nf.k == 1 ? v : std::pow(v, 1.0 / static_cast<double>(nf.k));
}

GridField initial_field(const SolveConfig& cfg, std::shared_ptr<const Grid> grid,
                        SolveReport& report) {
  const Grid& g = *grid;
  switch (cfg.init) {
    case SolveConfig::Init::HarmonicExtension:
      return harmonic_extend(grid, cfg.phi, 1e-9);
    case SolveConfig::Init::Custom: {
      if (!cfg.custom_init.grid || cfg.custom_init.grid->size() != g.size() ||
          cfg.custom_init.grid->h() != g.h())
        throw std::domain_error("solve: custom init grid mismatch");
      return cfg.custom_init;
    }
    case SolveConfig::Init::Subsolution: {
      if (!cfg.op.is_phase())
        return build_bundle(cfg.op, grid, cfg.phi).subsolution;
      // Phase operators: A rho + harmonic extension, A doubled until the
      // phase clears the target everywhere.
      const GridField h = harmonic_extend(grid, cfg.phi, 1e-9);
      const GridField rho = defining_function(grid);
      double a = 1.0;
      while (true) {
        GridField cand = h;
        for (size_t i = 0; i < cand.values.size(); ++i)
          cand.values[i] += a * rho.values[i];
        if (certify_subsolution(cand, cfg.op, 10.0 * g.h()).pass) return cand;
        a *= 2.0;
        if (a > 1e18)
          throw NumericError("solve: phase subsolution doubling cap exceeded");
      }
    }
  }
  throw std::domain_error("solve: unknown init");
}

}  // namespace

std::pair<GridField, SolveReport> solve(const SolveConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  auto grid = make_grid(cfg.domain, cfg.h);
  const Grid& g = *grid;
  const int n = g.cdim();
  if (cfg.op.f.n != n) throw std::domain_error("solve: operator dimension mismatch");

  SolveReport report;
  report.h = cfg.h;
  const double guard = 0.5 * cfg.h * cfg.h;
  double dt = cfg.dt;
  if (dt == 0.0) dt = std::min(0.2 * cfg.h * cfg.h * n, 0.9 * guard);
  if (!(dt > 0.0) || dt > guard * (1.0 + 1e-12))
    throw std::domain_error("solve: dt must lie in (0, h^2/2]");
  report.dt = dt;
  if (cfg.domain.shape == DomainSpec::Shape::Box) {
    report.domain_caveat = true;
    report.caveat = "Box domain: defining function taken from the enclosing ball";
  }
  if (!(cfg.residual_tol > 0.0))
    throw std::domain_error("solve: residual_tol > 0 required");

  const NormalForm nf = make_normal_form(cfg.op);
  report.rhs_root_exponent = 1.0 / nf.deg;

  GridField u = initial_field(cfg, grid, report);
  // Band data is pinned to phi in both buffers and never updated.
  {
    double pos[6];
    const auto d = static_cast<size_t>(g.dim());
    for (std::int64_t idx : g.band()) {
      g.position(idx, pos);
      u.values[static_cast<size_t>(idx)] = cfg.phi(std::span<const double>(pos, d));
    }
  }
  GridField next = u;

  const auto& interior = g.interior();
  const std::int64_t count = static_cast<std::int64_t>(interior.size());

  // Node positions cached for the rhs; root-normalized rhs precomputed when it
  // does not depend on s.
  std::vector<double> node_pos(static_cast<size_t>(count) * 6);
  for (std::int64_t p = 0; p < count; ++p)
    g.position(interior[static_cast<size_t>(p)], &node_pos[static_cast<size_t>(p) * 6]);
  const double root = 1.0 / nf.deg;
  std::vector<double> rhs_fixed;
  if (!cfg.op.rhs_depends_on_s) {
    rhs_fixed.resize(static_cast<size_t>(count));
    for (std::int64_t p = 0; p < count; ++p) {
      const std::span<const double> z(&node_pos[static_cast<size_t>(p) * 6],
                                      static_cast<size_t>(g.dim()));
      const double raw = cfg.op.rhs(z, 0.0);
      rhs_fixed[static_cast<size_t>(p)] =
          nf.phase ? raw : std::pow(raw, root);
    }
  }

  std::FILE* trace = nullptr;
  if (!cfg.residual_trace_path.empty()) {
    trace = std::fopen(cfg.residual_trace_path.c_str(), "w");
    if (!trace) throw std::runtime_error("solve: cannot open residual trace");
  }

  const int nchunks = std::max(1, std::min<int>(max_threads() * 4, 256));
  const std::int64_t chunk = (count + nchunks - 1) / nchunks;
  std::vector<double> chunk_res(static_cast<size_t>(nchunks));
  std::vector<double> chunk_min_inc(static_cast<size_t>(nchunks));
  const bool track_monotone = cfg.init == SolveConfig::Init::Subsolution;

  double residual = std::numeric_limits<double>::infinity();
  double prev_residual = residual;
  double worst_inc = 0.0;
  int growth_run = 0;
  std::int64_t iter = 0;

  for (; iter < cfg.max_iters; ++iter) {
    const double* cur = u.values.data();
    double* out = next.values.data();
    parallel_for(nchunks, [&](std::int64_t cb, std::int64_t ce) {
      for (std::int64_t ci = cb; ci < ce; ++ci) {
        const std::int64_t b = ci * chunk;
        const std::int64_t e = std::min(count, b + chunk);
        double res = 0.0;
        double min_inc = std::numeric_limits<double>::infinity();
        Complex H[9];
        double scratch[3];
        for (std::int64_t p = b; p < e; ++p) {
          const std::int64_t idx = interior[static_cast<size_t>(p)];
          complex_hessian_at(g, cur, idx, H);
          const double gval = normal_form_value(nf, H, scratch);
          double rhs;
          if (cfg.op.rhs_depends_on_s) {
            const std::span<const double> z(&node_pos[static_cast<size_t>(p) * 6],
                                            static_cast<size_t>(g.dim()));
            const double raw = cfg.op.rhs(z, cur[idx]);
            rhs = nf.phase ? raw : std::pow(raw, root);
          } else {
            rhs = rhs_fixed[static_cast<size_t>(p)];
          }
          const double r = gval - rhs;
          out[idx] = cur[idx] + dt * r;
          const double ar = std::abs(r);
          if (ar > res) res = ar;
          const double inc = dt * r;
          if (inc < min_inc) min_inc = inc;
        }
        chunk_res[static_cast<size_t>(ci)] = res;
        chunk_min_inc[static_cast<size_t>(ci)] = min_inc;
      }
    });
    residual = 0.0;
    for (double r : chunk_res) residual = std::max(residual, r);
    if (track_monotone)
      for (double m : chunk_min_inc) worst_inc = std::min(worst_inc, m);
    if (trace) std::fprintf(trace, "%lld,%.17g\n", static_cast<long long>(iter), residual);

    std::swap(u.values, next.values);
    if (residual <= cfg.residual_tol) {
      ++iter;
      break;
    }
    if (residual > prev_residual * (1.0 + 1e-14))
      ++growth_run;
    else
      growth_run = 0;
    if (growth_run >= 1000) {
      if (trace) std::fclose(trace);
      throw NumericError(
          "solve: residual grew over 1000 consecutive iterations; decrease dt "
          "(residual " + format_full(residual) + ")");
    }
    prev_residual = residual;

  }
  if (trace) std::fclose(trace);
  if (residual > cfg.residual_tol)
    throw NumericError("solve: iteration cap reached, residual " +
                       format_full(residual));

  report.iterations = iter;
  report.final_residual = residual;
  report.monotone_iterates = track_monotone && worst_inc >= -1e-12 * (1.0 + u.oscillation());
  report.worst_monotonicity = track_monotone ? worst_inc : 0.0;

  const double cert_tol = 10.0 * cfg.residual_tol + 10.0 * cfg.h;
  report.sub_cert = certify_subsolution(u, cfg.op, cert_tol);
  report.super_cert = certify_supersolution(u, cfg.op, cert_tol);
  if (cfg.op.is_phase()) {
    // Supercritical regime margin delta/2 maintained by the final field.
    const double pi_2 = 1.5707963267948966;
    const ConeSpec half = ConeSpec::phase_cone(
        (n - 2) * pi_2 + 0.5 * cfg.op.phase_delta, n);
    report.gamma = gamma_subharmonic_check(u, half, 10.0 * cfg.h);
  } else {
    report.gamma = gamma_subharmonic_check(u, cfg.op.cone, 10.0 * cfg.h);
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(u), std::move(report)};
}

std::pair<GridField, SolveReport> solve_quotient(int k, int l, RhsFn psi,
                                                 ScalarFn phi,
                                                 const DomainSpec& domain,
                                                 double h, double residual_tol) {
  SolveConfig cfg;
  cfg.op = OperatorSpec::quotient(k, l, domain.n, std::move(psi));
  cfg.domain = domain;
  cfg.phi = std::move(phi);
  cfg.h = h;
  cfg.residual_tol = residual_tol;
  return solve(cfg);
}

std::pair<GridField, SolveReport> penalized_supersolution(const GridField& u,
                                                          ScalarFn gfn, double j,
                                                          int k,
                                                          double residual_tol) {
  const Grid& g = *u.grid;
  const int n = g.cdim();
  if (k < 1 || k >= n)
    throw std::domain_error("penalized_supersolution: need 1 <= k < n");
  auto base = std::make_shared<const GridField>(u);
  RhsFn rhs = [base, gfn, j](std::span<const double> z, double s) {
    return std::exp(j * (s - base->value_at_position(z))) * gfn(z);
  };
  SolveConfig cfg;
  cfg.op = OperatorSpec::quotient(n, n - k, n, std::move(rhs),
                                  /*monotone=*/true, /*depends_on_s=*/true);
  cfg.domain = g.domain();
  cfg.h = g.h();
  cfg.residual_tol = residual_tol;
  cfg.init = SolveConfig::Init::Custom;
  cfg.custom_init = u;
  // Boundary data: the trace of u on the band.
  cfg.phi = [base](std::span<const double> z) {
    return base->value_at_position(z);
  };
  return solve(cfg);
}

HolderReport measure_holder(const GridField& u, double alpha,
                            std::int64_t sample_pairs, std::uint64_t seed) {
  const Grid& g = *u.grid;
  const int d = g.dim();
  const double diam = g.domain().diameter();
  HolderReport rep;
  rep.alpha = alpha;

  int nbands = 1;
  while (diam / std::pow(2.0, nbands) > 2.0 * g.h() && nbands < 24) ++nbands;
  rep.bands.resize(static_cast<size_t>(nbands));
  for (int b = 0; b < nbands; ++b) {
    rep.bands[static_cast<size_t>(b)].dist_hi = diam / std::pow(2.0, b);
    rep.bands[static_cast<size_t>(b)].dist_lo = diam / std::pow(2.0, b + 1);
  }

  std::vector<std::int64_t> valid = g.interior();
  valid.insert(valid.end(), g.band().begin(), g.band().end());
  std::sort(valid.begin(), valid.end());

  auto add_pair = [&](std::int64_t i, std::int64_t j) {
    double pi_[6], pj_[6];
    g.position(i, pi_);
    g.position(j, pj_);
    double d2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double t = pi_[a] - pj_[a];
      d2 += t * t;
    }
    if (d2 <= 0.0) return;
    const double dist = std::sqrt(d2);
    const double q = std::abs(u[i] - u[j]) / std::pow(dist, alpha);
    rep.holder_constant = std::max(rep.holder_constant, q);
    for (auto& band : rep.bands)
      if (dist > band.dist_lo && dist <= band.dist_hi) {
        band.constant = std::max(band.constant, q);
        ++band.pairs;
        break;
      }
  };

  // All short-range pairs: positive-lex offsets within two steps per axis
  // (one step at d = 6 to bound the 5^d blowup).
  std::vector<std::int64_t> offsets;
  {
    const int reach = d >= 6 ? 1 : 2;
    std::vector<int> ticks(static_cast<size_t>(d), -reach);
    while (true) {
      std::int64_t delta = 0;
      bool positive = false, nonzero = false;
      for (int a = 0; a < d; ++a) {
        delta += ticks[static_cast<size_t>(a)] * g.stride(a);
        if (ticks[static_cast<size_t>(a)] != 0 && !nonzero) {
          nonzero = true;
          positive = ticks[static_cast<size_t>(a)] > 0;
        }
      }
      if (nonzero && positive) offsets.push_back(delta);
      int a = 0;
      for (; a < d; ++a) {
        if (++ticks[static_cast<size_t>(a)] <= reach) break;
        ticks[static_cast<size_t>(a)] = -reach;
      }
      if (a == d) break;
    }
  }
  for (std::int64_t idx : valid)
    for (std::int64_t delta : offsets) {
      const std::int64_t jdx = idx + delta;
      if (jdx < 0 || jdx >= g.size()) continue;
      if (g.node_class(jdx) == NodeClass::Exterior) continue;
      add_pair(idx, jdx);
    }

  Rng rng(seed);
  const auto nvalid = static_cast<std::int64_t>(valid.size());
  for (std::int64_t s = 0; s < sample_pairs; ++s) {
    const std::int64_t i = valid[static_cast<size_t>(rng.uniform_int(0, nvalid - 1))];
    const std::int64_t j = valid[static_cast<size_t>(rng.uniform_int(0, nvalid - 1))];
    if (i != j) add_pair(i, j);
  }
  return rep;
}

CrosscheckReport pluripotential_crosscheck(const GridField& u, const RhsFn& psi,
                                           int k, double tol_c, int b_samples,
                                           std::uint64_t seed) {
  const Grid& g = *u.grid;
  const int n = g.cdim();
  if (k < 1 || k > n) throw std::domain_error("crosscheck: k out of range");
  CrosscheckReport rep;
  rep.k = k;
  rep.b_samples = (k == n) ? 0 : b_samples;
  rep.tol = tol_c * g.h();

  // Sampled members of the normalization set: random PSD scaled so that
  // S_{n-k}(lambda(B)) = 1, verified through wedge_ratio.
  std::vector<HermitianMatrix> bsq;
  if (k < n) {
    Rng rng(seed);
    for (int s = 0; s < b_samples; ++s) {
      ComplexMatrix X(n);
      for (auto& cv : X.a) cv = Complex(rng.normal(), rng.normal());
      ComplexMatrix XXs = multiply(X, adjoint(X));
      for (int i = 0; i < n; ++i) XXs.at(i, i) += 0.05;
      HermitianMatrix B0(XXs);
      const double snk = s_k_matrix(n - k, B0);
      HermitianMatrix B = B0.scaled(1.0 / std::pow(snk, 1.0 / (n - k)));
      if (!in_calB(B, HermitianMatrix::identity(n), n - k, 1e-9))
        throw NumericError("crosscheck: B normalization failed");
      bsq.push_back(HermitianMatrix(multiply(B.as_matrix(), B.as_matrix())));
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  rep.margin_quotient = inf;
  rep.margin_sigma_form = inf;
  rep.margin_sorted_product = inf;
  rep.margin_mixed = inf;
  rep.margin_converse = inf;

  const double* v = u.values.data();
  const double inv_binom = 1.0 / binomial(n, k);
  double pos[6];
  Complex H[9];
  double lam[3];
  for (std::int64_t idx : g.interior()) {
    complex_hessian_at(g, v, idx, H);
    eigenvalues_small(n, H, lam);  // non-increasing
    const std::span<const double> ls(lam, static_cast<size_t>(n));
    g.position(idx, pos);
    const double psival =
        psi(std::span<const double>(pos, static_cast<size_t>(g.dim())), v[idx]);

    const double sn = s_norm_span(n, ls);
    const double snk = (k == n) ? 1.0 : s_norm_span(n - k, ls);
    const double sk = s_norm_span(k, ls);
    rep.margin_quotient = std::min(rep.margin_quotient, sn - psival * snk);
    rep.margin_sigma_form = std::min(rep.margin_sigma_form, sk - inv_binom * psival);

    double prod_smallest = 1.0;
    for (int i = 0; i < k; ++i) prod_smallest *= lam[n - 1 - i];
    rep.margin_sorted_product =
        std::min(rep.margin_sorted_product, prod_smallest - inv_binom * psival);

    if (!bsq.empty()) {
      const HermitianMatrix Hu = [&] {
        ComplexMatrix m(n);
        std::copy(H, H + n * n, m.a.begin());
        return HermitianMatrix(m);
      }();
      std::vector<HermitianMatrix> args;
      for (const auto& B2 : bsq) {
        args.clear();
        for (int i = 0; i < k; ++i) args.push_back(Hu);
        for (int i = 0; i < n - k; ++i) args.push_back(B2);
        rep.margin_mixed =
            std::min(rep.margin_mixed, mixed_discriminant(args) - psival);
      }
    }

    // Converse direction on nodes satisfying the strong sigma-form hypothesis
    // (product of the k smallest eigenvalues >= psi).
    if (prod_smallest >= psival && snk > 0.0)
      rep.margin_converse = std::min(rep.margin_converse, sn / snk - psival);
  }
  if (rep.margin_mixed == inf) rep.margin_mixed = 0.0;
  if (rep.margin_converse == inf) rep.margin_converse = 0.0;

  rep.failures = 0;
  for (double m : {rep.margin_quotient, rep.margin_sigma_form,
                   rep.margin_sorted_product, rep.margin_mixed,
                   rep.margin_converse})
    if (m < -rep.tol) ++rep.failures;
  rep.all_ok = rep.failures == 0;
  return rep;
}

}  // namespace hessiasol
