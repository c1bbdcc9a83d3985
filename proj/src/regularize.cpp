#include "hessiasol/regularize.hpp"

#include <algorithm>
#include <cmath>

#include "hessiasol/common.hpp"
#include "hessiasol/hermitian.hpp"

namespace hessiasol {

namespace {

constexpr double kSentinel = -1e300;

// out[i] = max_j (in[j] - c (i-j)^2 h^2) along one line.
void line_max(const std::vector<double>& in, std::vector<double>& out, double c,
              double h) {
  const int len = static_cast<int>(in.size());
  for (int i = 0; i < len; ++i) {
    double best = kSentinel;
    for (int j = 0; j < len; ++j) {
      const double d = static_cast<double>(i - j) * h;
      const double v = in[static_cast<size_t>(j)] - c * d * d;
      if (v > best) best = v;
    }
    out[static_cast<size_t>(i)] = best;
  }
}

}  // namespace

GridField sup_convolution(const GridField& u, const ConvolutionParams& params) {
  if (!(params.epsilon > 0.0))
    throw std::domain_error("sup_convolution: epsilon > 0 required");
  if (!(params.c0 >= 0.0))
    throw std::domain_error("sup_convolution: c0 >= 0 required");
  const Grid& g = *u.grid;
  const int d = g.dim();
  const double c = params.c0 / params.epsilon;

  std::vector<double> work(static_cast<size_t>(g.size()), kSentinel);
  for (std::int64_t idx : g.interior()) work[static_cast<size_t>(idx)] = u[idx];
  for (std::int64_t idx : g.band()) work[static_cast<size_t>(idx)] = u[idx];

  // One exact pass per axis over every grid line.
  std::vector<double> line_in, line_out;
  for (int a = 0; a < d; ++a) {
    const int len = g.npts(a);
    const std::int64_t st = g.stride(a);
    const std::int64_t nlines = g.size() / len;
    line_in.resize(static_cast<size_t>(len));
    line_out.resize(static_cast<size_t>(len));
    for (std::int64_t l = 0; l < nlines; ++l) {
      // Base index of line l: distribute l over the other axes.
      std::int64_t base = 0;
      std::int64_t rem = l;
      for (int b = 0; b < d; ++b) {
        if (b == a) continue;
        const std::int64_t nb = g.npts(b);
        base += (rem % nb) * g.stride(b);
        rem /= nb;
      }
      for (int i = 0; i < len; ++i) line_in[static_cast<size_t>(i)] = work[static_cast<size_t>(base + i * st)];
      line_max(line_in, line_out, c, g.h());
      for (int i = 0; i < len; ++i) work[static_cast<size_t>(base + i * st)] = line_out[static_cast<size_t>(i)];
    }
  }

  GridField out(u.grid);
  for (std::int64_t idx : g.interior()) out[idx] = work[static_cast<size_t>(idx)];
  for (std::int64_t idx : g.band()) out[idx] = work[static_cast<size_t>(idx)];
  return out;
}

GridField inf_convolution(const GridField& u, const ConvolutionParams& params) {
  GridField neg = u;
  for (double& v : neg.values) v = -v;
  GridField s = sup_convolution(neg, params);
  for (double& v : s.values) v = -v;
  return s;
}

ContactSet contact_set(const GridField& u, double delta, double net_spacing) {
  if (!(delta > 0.0)) throw std::domain_error("contact_set: delta > 0 required");
  const Grid& g = *u.grid;
  const int d = g.dim();
  const double h = g.h();
  double spacing = net_spacing;
  if (spacing <= 0.0)
    spacing = 2.0 * h * std::max<double>(1.0, std::floor(delta / (16.0 * h)));

  // Lattice slopes p in spacing*Z^d with |p| <= delta.
  const int reach = static_cast<int>(std::floor(delta / spacing + 1e-12));
  std::vector<std::vector<double>> slopes;
  std::vector<int> ticks(static_cast<size_t>(d), -reach);
  while (true) {
    double norm2 = 0.0;
    std::vector<double> p(static_cast<size_t>(d));
    for (int a = 0; a < d; ++a) {
      p[static_cast<size_t>(a)] = ticks[static_cast<size_t>(a)] * spacing;
      norm2 += p[static_cast<size_t>(a)] * p[static_cast<size_t>(a)];
    }
    if (norm2 <= delta * delta * (1.0 + 1e-12)) slopes.push_back(std::move(p));
    int a = 0;
    for (; a < d; ++a) {
      if (++ticks[static_cast<size_t>(a)] <= reach) break;
      ticks[static_cast<size_t>(a)] = -reach;
    }
    if (a == d) break;
  }

  const auto& interior = g.interior();
  const auto& band = g.band();
  std::vector<std::uint8_t> member(interior.size(), 0);
  std::vector<double> pos_dot_interior(interior.size());
  double pos[6];

  for (const auto& p : slopes) {
    // m(p) = max over valid z of u(z) - <p, z>; x supports iff it attains m(p).
    double m = kSentinel;
    auto scan = [&](const std::vector<std::int64_t>& ids, bool record) {
      for (size_t i = 0; i < ids.size(); ++i) {
        const std::int64_t idx = ids[i];
        g.position(idx, pos);
        double dot = 0.0;
        for (int a = 0; a < d; ++a) dot += p[static_cast<size_t>(a)] * pos[a];
        const double v = u[idx] - dot;
        if (record) pos_dot_interior[i] = v;
        if (v > m) m = v;
      }
    };
    scan(interior, true);
    scan(band, false);
    const double slack = 1e-12 * (1.0 + std::abs(m));
    for (size_t i = 0; i < interior.size(); ++i)
      if (pos_dot_interior[i] >= m - slack) member[i] = 1;
  }

  ContactSet cs;
  cs.delta = delta;
  for (size_t i = 0; i < interior.size(); ++i)
    if (member[i]) cs.members.push_back(interior[i]);
  cs.measure = static_cast<double>(cs.members.size()) * std::pow(h, d);
  return cs;
}

AbpReport abp_check(const GridField& u, double k) {
  const Grid& g = *u.grid;
  const int d = g.dim();
  const double h = g.h();
  AbpReport rep;
  rep.k = k;
  rep.dim = d;

  // Semi-convexity: min eigenvalue of the discrete real Hessian >= -2k.
  double min_eig = std::numeric_limits<double>::infinity();
  const double inv_h2 = 1.0 / (h * h);
  std::vector<Complex> H(static_cast<size_t>(d) * d);
  std::vector<double> lam(static_cast<size_t>(d));
  for (std::int64_t idx : g.interior()) {
    for (int a = 0; a < d; ++a) {
      const std::int64_t sa = g.stride(a);
      H[static_cast<size_t>(a * d + a)] =
          (u[idx + sa] - 2.0 * u[idx] + u[idx - sa]) * inv_h2;
      for (int b = a + 1; b < d; ++b) {
        const std::int64_t sb = g.stride(b);
        const double cross = (u[idx + sa + sb] - u[idx + sa - sb] -
                              u[idx - sa + sb] + u[idx - sa - sb]) *
                             0.25 * inv_h2;
        H[static_cast<size_t>(a * d + b)] = cross;
        H[static_cast<size_t>(b * d + a)] = cross;
      }
    }
    eigenvalues_small(d, H.data(), lam.data());
    min_eig = std::min(min_eig, lam[static_cast<size_t>(d - 1)]);
  }
  rep.min_real_hessian_eig = min_eig;
  rep.semiconvex_ok = min_eig >= -2.0 * k - 1e-9 * (1.0 + std::abs(min_eig));

  double sup_all = -std::numeric_limits<double>::infinity();
  for (std::int64_t idx : g.interior()) sup_all = std::max(sup_all, u[idx]);
  double sup_band = -std::numeric_limits<double>::infinity();
  for (std::int64_t idx : g.band()) sup_band = std::max(sup_band, u[idx]);
  sup_all = std::max(sup_all, sup_band);
  rep.delta0 = (sup_all - sup_band) / g.domain().diameter();
  if (!(rep.delta0 > 0.0))
    throw std::domain_error("abp_check: no interior maximum (delta0 <= 0)");

  for (double frac : {0.125, 0.25, 0.5}) {
    const double delta = rep.delta0 * frac;
    const ContactSet cs = contact_set(u, delta);
    AbpEntry e;
    e.delta = delta;
    e.volume = cs.measure;
    e.ratio = cs.measure * std::pow(k, d) / std::pow(delta, d);
    rep.entries.push_back(e);
  }
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (const auto& e : rep.entries) {
    rmin = std::min(rmin, e.ratio);
    rmax = std::max(rmax, e.ratio);
  }
  rep.bound_ok = rep.semiconvex_ok && rmin > 0.0 && rmin >= 0.25 * rmax;
  return rep;
}

}  // namespace hessiasol
