#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace qwasser {

using cplx = std::complex<double>;

// Dense complex square matrix of compile-time dimension (2 or 4 in this
// library), row-major storage. Value type, no heap.
template <std::size_t N>
class Matrix {
 public:
  static constexpr std::size_t dim = N;

  constexpr Matrix() : e_{} {}

  static Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix zero() { return Matrix{}; }

  cplx& operator()(std::size_t r, std::size_t c) { return e_[r * N + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return e_[r * N + c]; }

  cplx* data() { return e_.data(); }
  const cplx* data() const { return e_.data(); }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) e_[i] += o.e_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) e_[i] -= o.e_[i];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (std::size_t i = 0; i < N * N; ++i) e_[i] *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, double s) { return a *= cplx(s); }
  friend Matrix operator*(double s, Matrix a) { return a *= cplx(s); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  Matrix adjoint() const {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  Matrix transpose() const {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  Matrix conj() const {
    Matrix r;
    for (std::size_t i = 0; i < N * N; ++i) r.e_[i] = std::conj(e_[i]);
    return r;
  }

  cplx trace() const {
    cplx t{};
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0;
    for (const cplx& v : e_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0;
    for (const cplx& v : e_) m = std::max(m, std::abs(v));
    return m;
  }

  // max_{j,k} |M[j][k] - conj(M[k][j])|
  double hermiticity_defect() const {
    double m = 0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
  }

  bool is_hermitian(double tol) const { return hermiticity_defect() <= tol; }

  // Replace by the Hermitian part (M + M*)/2. Projections and iterative
  // updates drift off the Hermitian subspace through rounding; the drift is
  // not contracted by eigensolver-based steps and must be removed explicitly.
  void hermitize() {
    for (std::size_t i = 0; i < N; ++i) {
      e_[i * N + i] = cplx(e_[i * N + i].real(), 0.0);
      for (std::size_t j = i + 1; j < N; ++j) {
        const cplx a = e_[i * N + j], b = std::conj(e_[j * N + i]);
        const cplx m = 0.5 * (a + b);
        e_[i * N + j] = m;
        e_[j * N + i] = std::conj(m);
      }
    }
  }

  friend bool operator==(const Matrix& a, const Matrix& b) { return a.e_ == b.e_; }

 private:
  std::array<cplx, N * N> e_;
};

using Mat2 = Matrix<2>;
using Mat4 = Matrix<4>;
using Vec4 = std::array<cplx, 4>;

// Hilbert-Schmidt inner product tr(A* B).
template <std::size_t N>
cplx hs_inner(const Matrix<N>& a, const Matrix<N>& b) {
  cplx s{};
  for (std::size_t i = 0; i < N * N; ++i) s += std::conj(a.data()[i]) * b.data()[i];
  return s;
}

// Kronecker product with block convention: block (j,k) of the result is
// a[j][k] * b, i.e. (a (x) b)[2j+m][2k+n] = a[j][k] b[m][n].
inline Mat4 tensor_product(const Mat2& a, const Mat2& b) {
  Mat4 r;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 2; ++k) {
      const cplx ajk = a(j, k);
      for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t n = 0; n < 2; ++n) r(2 * j + m, 2 * k + n) = ajk * b(m, n);
    }
  return r;
}

// Trace over the second tensor factor: M[j][k] = sum_m pi[2j+m][2k+m].
// Satisfies tr(M A) = tr(pi (A (x) I)) for all 2x2 A.
inline Mat2 partial_trace_second(const Mat4& pi) {
  Mat2 m;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 2; ++k)
      m(j, k) = pi(2 * j, 2 * k) + pi(2 * j + 1, 2 * k + 1);
  return m;
}

// Trace over the first tensor factor: M[m][n] = sum_j pi[2j+m][2j+n].
inline Mat2 partial_trace_first(const Mat4& pi) {
  Mat2 m;
  for (std::size_t mm = 0; mm < 2; ++mm)
    for (std::size_t n = 0; n < 2; ++n)
      m(mm, n) = pi(mm, n) + pi(2 + mm, 2 + n);
  return m;
}

// Row-major flattening ||A>>. With this convention <<A||B>> = tr(A* B) equals
// the plain complex dot product of the flattened vectors.
inline Vec4 vectorize(const Mat2& a) {
  return {a(0, 0), a(0, 1), a(1, 0), a(1, 1)};
}

inline Mat2 devectorize(const Vec4& v) {
  Mat2 m;
  m(0, 0) = v[0];
  m(0, 1) = v[1];
  m(1, 0) = v[2];
  m(1, 1) = v[3];
  return m;
}

inline cplx vec_inner(const Vec4& a, const Vec4& b) {
  cplx s{};
  for (std::size_t i = 0; i < 4; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Quadratic form <<v|| M ||v>> of a Hermitian 4x4 operator at a vector.
inline double quadratic_form(const Mat4& m, const Vec4& v) {
  cplx s{};
  for (std::size_t i = 0; i < 4; ++i) {
    cplx row{};
    for (std::size_t j = 0; j < 4; ++j) row += m(i, j) * v[j];
    s += std::conj(v[i]) * row;
  }
  return s.real();
}

}  // namespace qwasser
