#include "hessiasol/hermitian.hpp"

#include <algorithm>
#include <cmath>

#include "hessiasol/common.hpp"

namespace hessiasol {

namespace {

double off_diagonal_fro(int n, const Complex* a) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += std::norm(a[static_cast<size_t>(i) * n + j]);
  return std::sqrt(s);
}

double full_fro(int n, const Complex* a) {
  double s = 0.0;
  for (int i = 0; i < n * n; ++i) s += std::norm(a[static_cast<size_t>(i)]);
  return std::sqrt(s);
}

// One cyclic sweep of complex Jacobi rotations on the (p,q) planes. The
// rotation is the real Jacobi angle applied after a diagonal phase that makes
// a_pq real, so each step annihilates one off-diagonal pair exactly.
void jacobi_sweep(int n, Complex* a) {
  auto at = [&](int i, int j) -> Complex& { return a[static_cast<size_t>(i) * n + j]; };
  for (int p = 0; p < n - 1; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const Complex g = at(p, q);
      const double absg = std::abs(g);
      if (absg == 0.0) continue;
      const Complex u = g / absg;  // e^{i phi}
      const double alpha = at(p, p).real();
      const double beta = at(q, q).real();
      const double tau = (beta - alpha) / (2.0 * absg);
      const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                       (std::abs(tau) + std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      // Plane unitary V: V(p,p)=c, V(p,q)=s, V(q,p)=-s*conj(u), V(q,q)=c*conj(u).
      const Complex vqp = -s * std::conj(u);
      const Complex vqq = c * std::conj(u);
      // Columns: A <- A V.
      for (int i = 0; i < n; ++i) {
        const Complex aip = at(i, p);
        const Complex aiq = at(i, q);
        at(i, p) = c * aip + vqp * aiq;
        at(i, q) = s * aip + vqq * aiq;
      }
      // Rows: A <- V* A.
      for (int j = 0; j < n; ++j) {
        const Complex apj = at(p, j);
        const Complex aqj = at(q, j);
        at(p, j) = c * apj + std::conj(vqp) * aqj;
        at(q, j) = s * apj + std::conj(vqq) * aqj;
      }
      at(p, q) = Complex(0.0, 0.0);
      at(q, p) = Complex(0.0, 0.0);
      at(p, p) = Complex(at(p, p).real(), 0.0);
      at(q, q) = Complex(at(q, q).real(), 0.0);
    }
  }
}

void jacobi_eigenvalues(int n, Complex* a, double* lam) {
  const double scale = full_fro(n, a);
  if (scale > 0.0) {
    bool converged = false;
    for (int sweep = 0; sweep < 30; ++sweep) {
      if (off_diagonal_fro(n, a) <= 1e-13 * scale) {
        converged = true;
        break;
      }
      jacobi_sweep(n, a);
    }
    if (!converged && off_diagonal_fro(n, a) > 1e-13 * scale)
      throw NumericError("eigenvalues: Jacobi did not converge in 30 sweeps");
  }
  for (int i = 0; i < n; ++i) lam[i] = a[static_cast<size_t>(i) * n + i].real();
  std::sort(lam, lam + n, std::greater<double>());
}

int factorial_table(int n) {
  int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

ComplexMatrix multiply(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.n != y.n) throw std::domain_error("multiply: size mismatch");
  const int n = x.n;
  ComplexMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Complex xik = x.at(i, k);
      if (xik == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < n; ++j) r.at(i, j) += xik * y.at(k, j);
    }
  return r;
}

ComplexMatrix adjoint(const ComplexMatrix& x) {
  ComplexMatrix r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) r.at(i, j) = std::conj(x.at(j, i));
  return r;
}

HermitianMatrix::HermitianMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) {
  if (n < 1) throw std::domain_error("HermitianMatrix: n >= 1 required");
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) : HermitianMatrix(m.n) {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const Complex v = m.at(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::domain_error("HermitianMatrix: entries must be finite");
      const Complex w = std::conj(m.at(j, i));
      if (std::abs(v - w) > 1e-12)
        throw std::domain_error("HermitianMatrix: not conjugate-symmetric");
    }
  for (int i = 0; i < n_; ++i) {
    a_[static_cast<size_t>(i) * n_ + i] = Complex(m.at(i, i).real(), 0.0);
    for (int j = i + 1; j < n_; ++j) {
      const Complex v = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
      a_[static_cast<size_t>(i) * n_ + j] = v;
      a_[static_cast<size_t>(j) * n_ + i] = std::conj(v);
    }
  }
}

HermitianMatrix HermitianMatrix::identity(int n) {
  HermitianMatrix m(n);
  for (int i = 0; i < n; ++i) m.a_[static_cast<size_t>(i) * n + i] = 1.0;
  return m;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  HermitianMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.n_; ++i) m.a_[static_cast<size_t>(i) * m.n_ + i] = d[static_cast<size_t>(i)];
  return m;
}

void HermitianMatrix::set(int i, int j, Complex v) {
  if (i == j) v = Complex(v.real(), 0.0);
  a_[static_cast<size_t>(i) * n_ + j] = v;
  a_[static_cast<size_t>(j) * n_ + i] = std::conj(v);
}

ComplexMatrix HermitianMatrix::as_matrix() const {
  ComplexMatrix m(n_);
  m.a = a_;
  return m;
}

HermitianMatrix HermitianMatrix::scaled(double s) const {
  HermitianMatrix r(n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
  return r;
}

HermitianMatrix HermitianMatrix::plus(const HermitianMatrix& other) const {
  if (other.n_ != n_) throw std::domain_error("plus: size mismatch");
  HermitianMatrix r(n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + other.a_[i];
  return r;
}

double HermitianMatrix::frobenius() const { return full_fro(n_, a_.data()); }

LambdaVector eigenvalues(const HermitianMatrix& A) {
  const int n = A.n();
  std::vector<Complex> work = A.data();
  std::vector<double> lam(static_cast<size_t>(n));
  jacobi_eigenvalues(n, work.data(), lam.data());
  return LambdaVector(std::move(lam));
}

void eigenvalues_small(int n, const Complex* a, double* lam) {
  if (n == 1) {
    lam[0] = a[0].real();
    return;
  }
  if (n == 2) {
    const double m = 0.5 * (a[0].real() + a[3].real());
    const double d = 0.5 * (a[0].real() - a[3].real());
    const double r = std::sqrt(d * d + std::norm(a[1]));
    lam[0] = m + r;
    lam[1] = m - r;
    return;
  }
  if (n > 8) throw std::domain_error("eigenvalues_small: n <= 8 only");
  Complex work[64];
  std::copy(a, a + n * n, work);
  jacobi_eigenvalues(n, work, lam);
}

double s_k_matrix(int k, const HermitianMatrix& A) {
  return s_norm(k, eigenvalues(A));
}

Complex s_k_general(int k, const ComplexMatrix& M) {
  const int n = M.n;
  if (k < 1 || k > n) throw std::domain_error("s_k_general: k out of range");
  // Newton identities on the power sums p_i = tr(M^i):
  //   j e_j = sum_{i=1..j} (-1)^{i-1} e_{j-i} p_i.
  std::vector<Complex> p(static_cast<size_t>(k) + 1);
  ComplexMatrix power = M;
  for (int i = 1; i <= k; ++i) {
    Complex tr = 0.0;
    for (int d = 0; d < n; ++d) tr += power.at(d, d);
    p[static_cast<size_t>(i)] = tr;
    if (i < k) power = multiply(power, M);
  }
  std::vector<Complex> e(static_cast<size_t>(k) + 1);
  e[0] = 1.0;
  for (int j = 1; j <= k; ++j) {
    Complex acc = 0.0;
    double sign = 1.0;
    for (int i = 1; i <= j; ++i) {
      acc += sign * e[static_cast<size_t>(j - i)] * p[static_cast<size_t>(i)];
      sign = -sign;
    }
    e[static_cast<size_t>(j)] = acc / static_cast<double>(j);
  }
  return e[static_cast<size_t>(k)] / binomial(n, k);
}

double matrix_lemma_gap(int k, const ComplexMatrix& A, const ComplexMatrix& B) {
  if (A.n != B.n) throw std::domain_error("matrix_lemma_gap: size mismatch");
  const ComplexMatrix Astar = adjoint(A);
  const ComplexMatrix Bstar = adjoint(B);
  const double skAA = s_k_general(k, multiply(A, Astar)).real();
  const double skBB = s_k_general(k, multiply(B, Bstar)).real();
  const Complex skAB = s_k_general(k, multiply(A, Bstar));
  return skAA * skBB - std::norm(skAB);
}

Complex determinant(const ComplexMatrix& m) {
  const int n = m.n;
  ComplexMatrix lu = m;
  Complex det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(lu.at(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(lu.at(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return Complex(0.0, 0.0);
    if (piv != col) {
      for (int j = col; j < n; ++j) std::swap(lu.at(piv, j), lu.at(col, j));
      det = -det;
    }
    det *= lu.at(col, col);
    for (int r = col + 1; r < n; ++r) {
      const Complex f = lu.at(r, col) / lu.at(col, col);
      for (int j = col; j < n; ++j) lu.at(r, j) -= f * lu.at(col, j);
    }
  }
  return det;
}

namespace {

double polarization_sum(std::span<const HermitianMatrix> mats) {
  const int n = static_cast<int>(mats.size());
  double acc = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    ComplexMatrix sum(n);
    int card = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        ++card;
        const auto& d = mats[static_cast<size_t>(i)].data();
        for (size_t idx = 0; idx < d.size(); ++idx) sum.a[idx] += d[idx];
      }
    const double sign = ((n - card) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * determinant(sum).real();
  }
  return acc / factorial_table(n);
}

}  // namespace

double mixed_discriminant(std::span<const HermitianMatrix> mats) {
  const int n = static_cast<int>(mats.size());
  if (n < 1) throw std::domain_error("mixed_discriminant: empty argument list");
  if (n > 12) throw std::domain_error("mixed_discriminant: n > 12 unsupported");
  for (const auto& m : mats)
    if (m.n() != n)
      throw std::domain_error("mixed_discriminant: needs n matrices of size n");
  std::vector<HermitianMatrix> ids(static_cast<size_t>(n), HermitianMatrix::identity(n));
  return polarization_sum(mats) / polarization_sum(ids);
}

MixedFormRatio wedge_ratio(const HermitianMatrix& A, int p,
                           const HermitianMatrix& B, int q) {
  const int n = A.n();
  if (p < 0 || q < 0 || p + q != n)
    throw std::domain_error("wedge_ratio: need p + q = n, p,q >= 0");
  if (B.n() != n) throw std::domain_error("wedge_ratio: size mismatch");
  std::vector<HermitianMatrix> list;
  list.reserve(static_cast<size_t>(n));
  for (int i = 0; i < p; ++i) list.push_back(A);
  for (int i = 0; i < q; ++i) list.push_back(B);
  return MixedFormRatio{mixed_discriminant(list)};
}

bool in_calB(const HermitianMatrix& B, const HermitianMatrix& A, int k,
             double tol) {
  const LambdaVector lam = eigenvalues(B);
  double min_eig = lam[0];
  for (int i = 0; i < lam.n(); ++i) min_eig = std::min(min_eig, lam[i]);
  if (min_eig < -1e-12)
    throw std::domain_error("in_calB: B is not positive semidefinite");
  const int n = B.n();
  return std::abs(wedge_ratio(A, n - k, B, k).value - 1.0) <= tol;
}

}  // namespace hessiasol
