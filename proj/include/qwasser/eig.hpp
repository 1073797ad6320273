#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "qwasser/errors.hpp"
#include "qwasser/matrix.hpp"

namespace qwasser {

template <std::size_t N>
struct SpectralDecomposition {
  std::array<double, N> eigenvalues;  // ascending
  Matrix<N> eigenvectors;             // orthonormal columns, eigenvectors[.][k] <-> eigenvalues[k]

  Matrix<N> reconstruct() const {
    Matrix<N> m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        cplx s{};
        for (std::size_t k = 0; k < N; ++k)
          s += eigenvalues[k] * eigenvectors(i, k) * std::conj(eigenvectors(j, k));
        m(i, j) = s;
      }
    return m;
  }
};

namespace detail {

template <std::size_t N>
double offdiag_frobenius(const Matrix<N>& a) {
  double s = 0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

// Cyclic Jacobi eigendecomposition for Hermitian matrices. Terminates when
// the off-diagonal Frobenius norm falls below 1e-13 * max(1, ||A||_F), at
// most 100 sweeps.
template <std::size_t N>
SpectralDecomposition<N> eigh(const Matrix<N>& m, double hermitian_tol = 1e-12) {
  const double defect = m.hermiticity_defect();
  if (defect > hermitian_tol)
    throw std::invalid_argument("eigh: matrix is not Hermitian within tolerance");

  Matrix<N> a = m;
  a.hermitize();
  Matrix<N> v = Matrix<N>::identity();

  const double scale = std::max(1.0, a.frobenius_norm());
  const double threshold = 1e-13 * scale;
  constexpr int kMaxSweeps = 100;

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (detail::offdiag_frobenius(a) <= threshold) break;
    for (std::size_t p = 0; p < N - 1; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300) {
          a(p, q) = 0;
          a(q, p) = 0;
          continue;
        }
        const cplx u = apq / r;  // phase of the pivot
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        double t;
        if (tau >= 0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // A <- J* A J, V <- V J with J(p,p)=c, J(p,q)=s u, J(q,p)=-s conj(u), J(q,q)=c
        for (std::size_t k = 0; k < N; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * std::conj(u) * akq;
          a(k, q) = s * u * akp + c * akq;
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * std::conj(u) * vkq;
          v(k, q) = s * u * vkp + c * vkq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * u * aqk;
          a(q, k) = s * std::conj(u) * apk + c * aqk;
        }
        a(p, q) = 0;
        a(q, p) = 0;
        a(p, p) = cplx(a(p, p).real(), 0);
        a(q, q) = cplx(a(q, q).real(), 0);
      }
    }
  }
  if (sweep == kMaxSweeps && detail::offdiag_frobenius(a) > threshold)
    throw numeric_error("eigh: Jacobi sweeps did not converge",
                        detail::offdiag_frobenius(a));

  std::array<std::size_t, N> order;
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  SpectralDecomposition<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < N; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

// Positive square root of a PSD 2x2 matrix. Eigenvalues in [-1e-10, 0) are
// clamped to zero; anything below that is rejected.
inline Mat2 sqrt_psd(const Mat2& rho) {
  auto sd = eigh(rho);
  for (double& lam : sd.eigenvalues) {
    if (lam < -1e-10)
      throw std::invalid_argument("sqrt_psd: matrix has a negative eigenvalue beyond tolerance");
    lam = std::sqrt(std::max(lam, 0.0));
  }
  return sd.reconstruct();
}

// PSD part: clamp negative eigenvalues to zero and reconstruct.
template <std::size_t N>
Matrix<N> psd_projection(const Matrix<N>& m) {
  auto sd = eigh(m, 1e-8);
  for (double& lam : sd.eigenvalues) lam = std::max(lam, 0.0);
  return sd.reconstruct();
}

}  // namespace qwasser
