#include "hessiasol/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>

#include "hessiasol/common.hpp"

namespace hessiasol {

DomainSpec DomainSpec::ball(int n, double radius, std::array<double, 6> center) {
  if (n < 1 || n > 3) throw std::domain_error("DomainSpec: n in 1..3 required");
  if (!(radius > 0.0)) throw std::domain_error("DomainSpec: radius > 0 required");
  DomainSpec d;
  d.shape = Shape::Ball;
  d.n = n;
  d.radius = radius;
  d.center = center;
  return d;
}

DomainSpec DomainSpec::box(int n, std::array<double, 6> half_width,
                           std::array<double, 6> center) {
  if (n < 1 || n > 3) throw std::domain_error("DomainSpec: n in 1..3 required");
  DomainSpec d;
  d.shape = Shape::Box;
  d.n = n;
  d.half_width = half_width;
  d.center = center;
  for (int a = 0; a < d.dim(); ++a)
    if (!(half_width[static_cast<size_t>(a)] > 0.0))
      throw std::domain_error("DomainSpec: half-widths must be positive");
  return d;
}

bool DomainSpec::inside(std::span<const double> x) const {
  const int d = dim();
  if (shape == Shape::Ball) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      const double t = x[static_cast<size_t>(a)] - center[static_cast<size_t>(a)];
      s += t * t;
    }
    return s < radius * radius;
  }
  for (int a = 0; a < d; ++a)
    if (std::abs(x[static_cast<size_t>(a)] - center[static_cast<size_t>(a)]) >=
        half_width[static_cast<size_t>(a)])
      return false;
  return true;
}

double DomainSpec::diameter() const {
  if (shape == Shape::Ball) return 2.0 * radius;
  double s = 0.0;
  for (int a = 0; a < dim(); ++a) {
    const double w = 2.0 * half_width[static_cast<size_t>(a)];
    s += w * w;
  }
  return std::sqrt(s);
}

double DomainSpec::axis_extent(int axis) const {
  return shape == Shape::Ball ? radius : half_width[static_cast<size_t>(axis)];
}

namespace {

// Stencil offsets of the second-difference jet: +/-e_a and the four sign
// combinations +/-e_a +/- e_b for a < b.
std::vector<std::array<int, 6>> stencil_offsets(int d) {
  std::vector<std::array<int, 6>> offs;
  for (int a = 0; a < d; ++a)
    for (int s : {+1, -1}) {
      std::array<int, 6> o{};
      o[static_cast<size_t>(a)] = s;
      offs.push_back(o);
    }
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int sa : {+1, -1})
        for (int sb : {+1, -1}) {
          std::array<int, 6> o{};
          o[static_cast<size_t>(a)] = sa;
          o[static_cast<size_t>(b)] = sb;
          offs.push_back(o);
        }
  return offs;
}

}  // namespace

Grid::Grid(const DomainSpec& domain, double h) : domain_(domain), h_(h) {
  if (!(h > 0.0)) throw std::domain_error("Grid: h > 0 required");
  const int d = dim();
  size_ = 1;
  for (int a = 0; a < d; ++a) {
    const double extent = domain_.axis_extent(a);
    const int half = static_cast<int>(std::ceil(extent / h - 1e-12)) + 2;
    npts_[static_cast<size_t>(a)] = 2 * half + 1;
    origin_[static_cast<size_t>(a)] = domain_.center[static_cast<size_t>(a)] - half * h;
    if (npts_[static_cast<size_t>(a)] < 5)
      throw std::domain_error("Grid: fewer than 5 nodes per axis");
    size_ *= npts_[static_cast<size_t>(a)];
  }
  for (int a = d - 1; a >= 0; --a)
    strides_[static_cast<size_t>(a)] =
        (a == d - 1) ? 1 : strides_[static_cast<size_t>(a + 1)] * npts_[static_cast<size_t>(a + 1)];

  std::vector<std::uint8_t> is_inside(static_cast<size_t>(size_));
  double pos[6];
  for (std::int64_t idx = 0; idx < size_; ++idx) {
    position(idx, pos);
    is_inside[static_cast<size_t>(idx)] =
        domain_.inside(std::span<const double>(pos, static_cast<size_t>(d))) ? 1 : 0;
  }

  const auto offs = stencil_offsets(d);
  std::vector<std::int64_t> deltas;
  deltas.reserve(offs.size());
  for (const auto& o : offs) {
    std::int64_t delta = 0;
    for (int a = 0; a < d; ++a) delta += o[static_cast<size_t>(a)] * strides_[static_cast<size_t>(a)];
    deltas.push_back(delta);
  }

  cls_.assign(static_cast<size_t>(size_), NodeClass::Exterior);
  // Interior pass. The two-node pad keeps every stencil of an inside node in
  // bounds, so multi-index checks reduce to the inside flags.
  std::vector<int> mi(static_cast<size_t>(d));
  for (std::int64_t idx = 0; idx < size_; ++idx) {
    if (!is_inside[static_cast<size_t>(idx)]) continue;
    std::int64_t rem = idx;
    bool at_edge = false;
    for (int a = 0; a < d; ++a) {
      mi[static_cast<size_t>(a)] = static_cast<int>(rem / strides_[static_cast<size_t>(a)]);
      rem %= strides_[static_cast<size_t>(a)];
      if (mi[static_cast<size_t>(a)] < 1 || mi[static_cast<size_t>(a)] > npts_[static_cast<size_t>(a)] - 2)
        at_edge = true;
    }
    if (at_edge) continue;
    bool ok = true;
    for (std::int64_t delta : deltas) {
      if (!is_inside[static_cast<size_t>(idx + delta)]) {
        ok = false;
        break;
      }
    }
    if (ok) cls_[static_cast<size_t>(idx)] = NodeClass::Interior;
  }
  for (std::int64_t idx = 0; idx < size_; ++idx) {
    if (cls_[static_cast<size_t>(idx)] != NodeClass::Interior) continue;
    for (std::int64_t delta : deltas) {
      auto& c = cls_[static_cast<size_t>(idx + delta)];
      if (c == NodeClass::Exterior) c = NodeClass::Band;
    }
  }
  for (std::int64_t idx = 0; idx < size_; ++idx) {
    if (cls_[static_cast<size_t>(idx)] == NodeClass::Interior)
      interior_.push_back(idx);
    else if (cls_[static_cast<size_t>(idx)] == NodeClass::Band)
      band_.push_back(idx);
  }
  if (interior_.empty()) throw std::domain_error("Grid: no interior nodes; h too coarse");
}

void Grid::position(std::int64_t idx, double* out) const {
  const int d = dim();
  std::int64_t rem = idx;
  for (int a = 0; a < d; ++a) {
    const std::int64_t i = rem / strides_[static_cast<size_t>(a)];
    rem %= strides_[static_cast<size_t>(a)];
    out[a] = origin_[static_cast<size_t>(a)] + static_cast<double>(i) * h_;
  }
}

std::array<double, 6> Grid::position(std::int64_t idx) const {
  std::array<double, 6> p{};
  position(idx, p.data());
  return p;
}

std::int64_t Grid::index_of_position(std::span<const double> x) const {
  const int d = dim();
  std::int64_t idx = 0;
  for (int a = 0; a < d; ++a) {
    const double rel = (x[static_cast<size_t>(a)] - origin_[static_cast<size_t>(a)]) / h_;
    const std::int64_t i = std::llround(rel);
    if (i < 0 || i >= npts_[static_cast<size_t>(a)] || std::abs(rel - static_cast<double>(i)) > 1e-6)
      throw std::domain_error("Grid: position is not a grid node");
    idx += i * strides_[static_cast<size_t>(a)];
  }
  return idx;
}

int Grid::parity(std::int64_t idx) const {
  const int d = dim();
  std::int64_t rem = idx;
  int p = 0;
  for (int a = 0; a < d; ++a) {
    p += static_cast<int>(rem / strides_[static_cast<size_t>(a)]);
    rem %= strides_[static_cast<size_t>(a)];
  }
  return p & 1;
}

double GridField::value_at_position(std::span<const double> x) const {
  return values[static_cast<size_t>(grid->index_of_position(x))];
}

double GridField::oscillation() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto scan = [&](const std::vector<std::int64_t>& ids) {
    for (std::int64_t idx : ids) {
      lo = std::min(lo, values[static_cast<size_t>(idx)]);
      hi = std::max(hi, values[static_cast<size_t>(idx)]);
    }
  };
  scan(grid->interior());
  scan(grid->band());
  return hi - lo;
}

std::shared_ptr<const Grid> make_grid(const DomainSpec& domain, double h) {
  return std::make_shared<Grid>(domain, h);
}

GridField sample_field(std::shared_ptr<const Grid> grid, const ScalarFn& fn) {
  GridField f(grid);
  double pos[6];
  const auto d = static_cast<size_t>(grid->dim());
  for (std::int64_t idx = 0; idx < grid->size(); ++idx) {
    grid->position(idx, pos);
    f.values[static_cast<size_t>(idx)] = fn(std::span<const double>(pos, d));
  }
  return f;
}

GridField sample_field_valid(std::shared_ptr<const Grid> grid, const ScalarFn& fn) {
  GridField f(grid);
  double pos[6];
  const auto d = static_cast<size_t>(grid->dim());
  auto fill = [&](const std::vector<std::int64_t>& ids) {
    for (std::int64_t idx : ids) {
      grid->position(idx, pos);
      f.values[static_cast<size_t>(idx)] = fn(std::span<const double>(pos, d));
    }
  };
  fill(grid->interior());
  fill(grid->band());
  return f;
}

void complex_hessian_at(const Grid& g, const double* v, std::int64_t idx,
                        Complex* h_out) {
  const int n = g.cdim();
  const double h = g.h();
  const double inv_h2 = 1.0 / (h * h);
  const double inv_4h2 = 0.25 * inv_h2;
  const double u0 = v[idx];
  auto S = [&](int axis) { return g.stride(axis); };
  for (int j = 0; j < n; ++j) {
    const std::int64_t sx = S(2 * j), sy = S(2 * j + 1);
    const double pure = (v[idx + sx] + v[idx - sx] + v[idx + sy] + v[idx - sy] - 4.0 * u0);
    h_out[j * n + j] = Complex(pure * inv_4h2, 0.0);
    for (int k = j + 1; k < n; ++k) {
      const std::int64_t tx = S(2 * k), ty = S(2 * k + 1);
      auto cross = [&](std::int64_t sa, std::int64_t sb) {
        return (v[idx + sa + sb] - v[idx + sa - sb] - v[idx - sa + sb] + v[idx - sa - sb]) * inv_4h2;
      };
      const double re = 0.25 * (cross(sx, tx) + cross(sy, ty));
      const double im = 0.25 * (cross(sx, ty) - cross(sy, tx));
      h_out[j * n + k] = Complex(re, im);
      h_out[k * n + j] = Complex(re, -im);
    }
  }
}

ComplexHessianField complex_hessian(const GridField& u) {
  const Grid& g = *u.grid;
  const int n = g.cdim();
  const auto& interior = g.interior();
  ComplexHessianField out;
  out.grid = u.grid;
  out.n = n;
  out.hessians.resize(interior.size() * static_cast<size_t>(n) * n);
  out.gradients.resize(interior.size() * static_cast<size_t>(n));
  const double* v = u.values.data();
  const double inv_4h = 1.0 / (4.0 * g.h());
  parallel_for(static_cast<std::int64_t>(interior.size()),
               [&](std::int64_t b, std::int64_t e) {
                 for (std::int64_t p = b; p < e; ++p) {
                   const std::int64_t idx = interior[static_cast<size_t>(p)];
                   complex_hessian_at(g, v, idx, out.hessians.data() + p * n * n);
                   for (int j = 0; j < n; ++j) {
                     const std::int64_t sx = g.stride(2 * j), sy = g.stride(2 * j + 1);
                     const double dx = v[idx + sx] - v[idx - sx];
                     const double dy = v[idx + sy] - v[idx - sy];
                     out.gradients[static_cast<size_t>(p * n + j)] =
                         Complex(dx * inv_4h, -dy * inv_4h);
                   }
                 }
               });
  return out;
}

HermitianMatrix ComplexHessianField::hessian_at(std::int64_t list_pos) const {
  ComplexMatrix m(n);
  const auto sp = hessian_span(list_pos);
  std::copy(sp.begin(), sp.end(), m.a.begin());
  return HermitianMatrix(m);
}

GridField defining_function(std::shared_ptr<const Grid> grid) {
  const DomainSpec& dom = grid->domain();
  double R;
  std::array<double, 6> c = dom.center;
  if (dom.shape == DomainSpec::Shape::Ball) {
    R = dom.radius;
  } else {
    double s = 0.0;
    for (int a = 0; a < dom.dim(); ++a) {
      const double w = dom.half_width[static_cast<size_t>(a)];
      s += w * w;
    }
    R = 1.05 * std::sqrt(s);  // strictly larger enclosing ball
  }
  const int d = dom.dim();
  return sample_field(grid, [R, c, d](std::span<const double> x) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      const double t = x[static_cast<size_t>(a)] - c[static_cast<size_t>(a)];
      s += t * t;
    }
    return (s - R * R) / (2.0 * R);
  });
}

GridField defining_function(const DomainSpec& domain, double h) {
  return defining_function(make_grid(domain, h));
}

GridField harmonic_extend(std::shared_ptr<const Grid> grid, const ScalarFn& phi,
                          double tol) {
  const Grid& g = *grid;
  const int d = g.dim();
  GridField u(grid);
  double pos[6];
  for (std::int64_t idx : g.band()) {
    g.position(idx, pos);
    u.values[static_cast<size_t>(idx)] = phi(std::span<const double>(pos, static_cast<size_t>(d)));
  }
  // Interior initialized to the band mean.
  double mean = 0.0;
  for (std::int64_t idx : g.band()) mean += u.values[static_cast<size_t>(idx)];
  mean /= static_cast<double>(g.band().size());
  for (std::int64_t idx : g.interior()) u.values[static_cast<size_t>(idx)] = mean;

  std::vector<std::int64_t> red, black;
  for (std::int64_t idx : g.interior())
    (g.parity(idx) == 0 ? red : black).push_back(idx);

  double span_max = 0.0;
  for (int a = 0; a < d; ++a)
    span_max = std::max(span_max, (g.npts(a) - 1) * g.h());
  const double omega = 2.0 / (1.0 + std::sin(3.141592653589793 * g.h() / span_max));

  const double inv_h2 = 1.0 / (g.h() * g.h());
  double* v = u.values.data();
  auto axis_sum = [&](std::int64_t idx) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      const std::int64_t st = g.stride(a);
      s += v[idx + st] + v[idx - st];
    }
    return s;
  };

  const std::int64_t cap = 1000000;
  for (std::int64_t sweep = 0; sweep < cap; ++sweep) {
    for (const auto* color : {&red, &black}) {
      parallel_for(static_cast<std::int64_t>(color->size()),
                   [&](std::int64_t b, std::int64_t e) {
                     for (std::int64_t p = b; p < e; ++p) {
                       const std::int64_t idx = (*color)[static_cast<size_t>(p)];
                       const double avg = axis_sum(idx) / (2.0 * d);
                       v[idx] += omega * (avg - v[idx]);
                     }
                   });
    }
    if (sweep % 16 == 15 || sweep == cap - 1) {
      double res = 0.0;
      for (std::int64_t idx : g.interior())
        res = std::max(res, std::abs((axis_sum(idx) - 2.0 * d * v[idx]) * inv_h2));
      if (res <= tol) return u;
    }
  }
  throw NumericError("harmonic_extend: sweep cap exceeded");
}

GridField harmonic_extend(const DomainSpec& domain, double h, const ScalarFn& phi,
                          double tol) {
  return harmonic_extend(make_grid(domain, h), phi, tol);
}

void write_field_csv(const GridField& field, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_field_csv: cannot open " + path);
  const Grid& g = *field.grid;
  const int d = g.dim();
  double pos[6];
  for (std::int64_t idx = 0; idx < g.size(); ++idx) {
    g.position(idx, pos);
    for (int a = 0; a < d; ++a) std::fprintf(f, "%.17g,", pos[a]);
    const char cls = g.node_class(idx) == NodeClass::Interior  ? 'I'
                     : g.node_class(idx) == NodeClass::Band    ? 'B'
                                                               : 'E';
    std::fprintf(f, "%.17g,%c\n", field.values[static_cast<size_t>(idx)], cls);
  }
  std::fclose(f);
}

GridField read_field_csv(const std::string& path, std::shared_ptr<const Grid> grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_field_csv: cannot open " + path);
  GridField field(grid);
  const Grid& g = *grid;
  const int d = g.dim();
  std::string line;
  std::int64_t idx = 0;
  double pos[6];
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (idx >= g.size()) throw std::runtime_error("read_field_csv: too many rows");
    const char* s = line.c_str();
    char* end = nullptr;
    g.position(idx, pos);
    for (int a = 0; a < d; ++a) {
      const double x = std::strtod(s, &end);
      if (end == s || *end != ',')
        throw std::runtime_error("read_field_csv: malformed row");
      if (x != pos[a])
        throw std::runtime_error("read_field_csv: grid mismatch");
      s = end + 1;
    }
    const double val = std::strtod(s, &end);
    if (end == s || *end != ',')
      throw std::runtime_error("read_field_csv: malformed row");
    field.values[static_cast<size_t>(idx)] = val;
    ++idx;
  }
  if (idx != g.size()) throw std::runtime_error("read_field_csv: too few rows");
  return field;
}

}  // namespace hessiasol
