#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>

#include "hessiasol/hermitian.hpp"

namespace hessiasol {

/// Scalar callable on positions in R^{2n} (first 2n slots of the span).
using ScalarFn = std::function<double(std::span<const double>)>;
/// Right-hand side callable psi(z, s).
using RhsFn = std::function<double(std::span<const double>, double)>;

struct DomainSpec {
  enum class Shape { Ball, Box };
  Shape shape = Shape::Ball;
  int n = 1;  // complex dimension, 1..3
  std::array<double, 6> center{};
  double radius = 1.0;                // Ball
  std::array<double, 6> half_width{};  // Box

  static DomainSpec ball(int n, double radius,
                         std::array<double, 6> center = {});
  static DomainSpec box(int n, std::array<double, 6> half_width,
                        std::array<double, 6> center = {});

  int dim() const { return 2 * n; }
  bool inside(std::span<const double> x) const;
  double diameter() const;
  double axis_extent(int axis) const;  // R for Ball, half_width for Box
};

enum class NodeClass : std::uint8_t { Interior, Band, Exterior };

/// Uniform grid over the domain's bounding box with a two-node pad, so every
/// second-difference stencil of an interior node stays in the array.
/// Interior: inside the domain with all stencil neighbors inside.
/// Band: stencil neighbor of an interior node, not interior itself; carries
/// Dirichlet data and is never updated by solvers.
class Grid {
 public:
  Grid(const DomainSpec& domain, double h);

  const DomainSpec& domain() const { return domain_; }
  double h() const { return h_; }
  int dim() const { return domain_.dim(); }
  int cdim() const { return domain_.n; }
  std::int64_t size() const { return size_; }
  int npts(int axis) const { return npts_[static_cast<size_t>(axis)]; }
  std::int64_t stride(int axis) const { return strides_[static_cast<size_t>(axis)]; }

  NodeClass node_class(std::int64_t idx) const { return cls_[static_cast<size_t>(idx)]; }
  const std::vector<std::int64_t>& interior() const { return interior_; }
  const std::vector<std::int64_t>& band() const { return band_; }

  void position(std::int64_t idx, double* out) const;
  std::array<double, 6> position(std::int64_t idx) const;
  /// Exact node lookup; throws if x is not a grid node.
  std::int64_t index_of_position(std::span<const double> x) const;
  /// Parity (sum of multi-indices mod 2), for red-black sweeps.
  int parity(std::int64_t idx) const;

 private:
  DomainSpec domain_;
  double h_;
  std::array<int, 6> npts_{};
  std::array<double, 6> origin_{};
  std::array<std::int64_t, 6> strides_{};
  std::int64_t size_ = 0;
  std::vector<NodeClass> cls_;
  std::vector<std::int64_t> interior_;
  std::vector<std::int64_t> band_;
};

struct GridField {
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;

  GridField() = default;
  explicit GridField(std::shared_ptr<const Grid> g)
      : grid(std::move(g)), values(static_cast<size_t>(grid->size()), 0.0) {}

  double operator[](std::int64_t idx) const { return values[static_cast<size_t>(idx)]; }
  double& operator[](std::int64_t idx) { return values[static_cast<size_t>(idx)]; }
  double value_at_position(std::span<const double> x) const;
  /// max - min over interior and band nodes.
  double oscillation() const;
};

std::shared_ptr<const Grid> make_grid(const DomainSpec& domain, double h);

/// Samples fn at every node (interior, band and exterior alike).
GridField sample_field(std::shared_ptr<const Grid> grid, const ScalarFn& fn);
/// Samples fn on interior and band nodes only; exterior stays 0.
GridField sample_field_valid(std::shared_ptr<const Grid> grid, const ScalarFn& fn);

/// Per-interior-node complex Hessian (n x n, row-major) and complex gradient,
/// stored densely in interior-list order.
struct ComplexHessianField {
  std::shared_ptr<const Grid> grid;
  int n = 0;
  std::vector<Complex> hessians;   // n*n per interior node
  std::vector<Complex> gradients;  // n per interior node

  std::span<const Complex> hessian_span(std::int64_t list_pos) const {
    return {hessians.data() + list_pos * n * n, static_cast<size_t>(n) * n};
  }
  HermitianMatrix hessian_at(std::int64_t list_pos) const;
};

/// Centered second differences: pure (u+ - 2u0 + u-)/h^2 and 4-point cross
/// stencils /(4h^2); u_{j km} = ((d_xjxk + d_yjyk) + i (d_xjyk - d_yjxk))/4;
/// gradient (d_xj - i d_yj)/2 by centered first differences.
ComplexHessianField complex_hessian(const GridField& u);

/// Writes the n x n complex Hessian at one interior node (no allocation).
void complex_hessian_at(const Grid& g, const double* values, std::int64_t idx,
                        Complex* h_out);

/// Ball: rho = (|z-c|^2 - R^2)/(2R), negative inside, 0 on the boundary,
/// lambda(H rho) = (1/R) * 1. Box domains reuse the enclosing ball's rho;
/// callers surface that caveat in run reports.
GridField defining_function(const DomainSpec& domain, double h);
GridField defining_function(std::shared_ptr<const Grid> grid);

/// Discrete harmonic extension of the band data phi: red-black SOR sweeps on
/// the 2d-point Laplacian until the residual sup-norm of (Delta_h u) drops
/// below tol. Throws NumericError past 10^6 sweeps.
GridField harmonic_extend(std::shared_ptr<const Grid> grid, const ScalarFn& phi,
                          double tol);
GridField harmonic_extend(const DomainSpec& domain, double h, const ScalarFn& phi,
                          double tol);

/// One row per node: x_1,y_1,...,x_n,y_n,value,class with class in {I,B,E},
/// doubles at 17 significant digits (bit-exact round trip).
void write_field_csv(const GridField& field, const std::string& path);
GridField read_field_csv(const std::string& path, std::shared_ptr<const Grid> grid);

}  // namespace hessiasol
