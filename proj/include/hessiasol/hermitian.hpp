#pragma once

#include <complex>
#include <span>
#include <vector>

#include "hessiasol/symfun.hpp"

namespace hessiasol {

using Complex = std::complex<double>;

/// Dense n x n complex matrix, row-major. Used for the general (not
/// necessarily Hermitian) inputs of the matrix inequality.
struct ComplexMatrix {
  int n = 0;
  std::vector<Complex> a;

  ComplexMatrix() = default;
  explicit ComplexMatrix(int n_) : n(n_), a(static_cast<size_t>(n_) * n_) {}
  Complex& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const Complex& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

ComplexMatrix multiply(const ComplexMatrix& x, const ComplexMatrix& y);
ComplexMatrix adjoint(const ComplexMatrix& x);

/// n x n Hermitian matrix. Construction rejects entries further than 1e-12
/// from conjugate symmetry, then symmetrizes exactly.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(int n);
  explicit HermitianMatrix(const ComplexMatrix& m);
  static HermitianMatrix identity(int n);
  static HermitianMatrix diagonal(std::span<const double> d);

  int n() const { return n_; }
  Complex at(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  /// Sets entry (i,j) and its conjugate mirror.
  void set(int i, int j, Complex v);
  const std::vector<Complex>& data() const { return a_; }
  ComplexMatrix as_matrix() const;

  HermitianMatrix scaled(double s) const;
  HermitianMatrix plus(const HermitianMatrix& other) const;
  double frobenius() const;

 private:
  int n_;
  std::vector<Complex> a_;
};

/// Real spectrum in non-increasing order, via cyclic Jacobi rotations.
/// Converged when the off-diagonal Frobenius mass drops below 1e-13 * ||A||_F;
/// throws NumericError after 30 full sweeps.
LambdaVector eigenvalues(const HermitianMatrix& A);

/// In-place kernel for tiny matrices (n <= 8): a is row-major n x n Hermitian,
/// lam receives the non-increasing spectrum. Shared with the grid hot path.
void eigenvalues_small(int n, const Complex* a, double* lam);

/// binom(n,k)^{-1} * (coefficient of t^{n-k} in det(A + t Id)), computed from
/// the spectrum.
double s_k_matrix(int k, const HermitianMatrix& A);

/// S_k of a general complex matrix from the characteristic coefficients via
/// the Faddeev-LeVerrier / Newton trace recurrence.
Complex s_k_general(int k, const ComplexMatrix& M);

/// S_k(AA*) S_k(BB*) - |S_k(AB*)|^2 for arbitrary complex A, B.
double matrix_lemma_gap(int k, const ComplexMatrix& A, const ComplexMatrix& B);

/// Mixed discriminant D(A_1,...,A_n), normalized so D(Id,...,Id) = 1,
/// by subset polarization (2^n determinant evaluations).
double mixed_discriminant(std::span<const HermitianMatrix> mats);

struct MixedFormRatio {
  double value = 0.0;
};

/// Normalized mixed discriminant with A repeated p times and B repeated q
/// times; requires p + q = n.
MixedFormRatio wedge_ratio(const HermitianMatrix& A, int p,
                           const HermitianMatrix& B, int q);

/// Membership in the normalization set: B PSD with
/// |wedge_ratio(A, n-k, B, k) - 1| <= tol.
bool in_calB(const HermitianMatrix& B, const HermitianMatrix& A, int k,
             double tol);

Complex determinant(const ComplexMatrix& m);

}  // namespace hessiasol
