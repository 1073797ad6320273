#include "qwasser/states.hpp"

#include <stdexcept>

#include "qwasser/eig.hpp"

namespace qwasser {

Mat2 pauli(int j) {
  Mat2 m;
  switch (j) {
    case 1:
      m(0, 1) = 1;
      m(1, 0) = 1;
      return m;
    case 2:
      m(0, 1) = cplx(0, -1);
      m(1, 0) = cplx(0, 1);
      return m;
    case 3:
      m(0, 0) = 1;
      m(1, 1) = -1;
      return m;
    default:
      throw std::invalid_argument("pauli: index must be 1, 2 or 3");
  }
}

QubitState QubitState::from_bloch(const BlochVector& b) {
  BlochVector v = b;
  const double n = v.norm();
  if (n > 1.0 + 1e-10)
    throw std::invalid_argument("QubitState: Bloch vector outside the unit ball");
  if (n > 1.0) {
    v.x /= n;
    v.y /= n;
    v.z /= n;
  }
  Mat2 m;
  m(0, 0) = 0.5 * (1.0 + v.z);
  m(0, 1) = 0.5 * cplx(v.x, -v.y);
  m(1, 0) = 0.5 * cplx(v.x, v.y);
  m(1, 1) = 0.5 * (1.0 - v.z);
  return QubitState(m, v);
}

QubitState QubitState::from_matrix(const Mat2& m) {
  if (!m.is_hermitian(1e-12))
    throw std::invalid_argument("QubitState: matrix is not Hermitian");
  if (std::abs(m.trace() - cplx(1.0)) > 1e-12)
    throw std::invalid_argument("QubitState: trace differs from one");
  const auto sd = eigh(m);
  if (sd.eigenvalues[0] < -1e-10)
    throw std::invalid_argument("QubitState: matrix is not positive semidefinite");
  BlochVector b = to_bloch(m);
  Mat2 h = m;
  h.hermitize();
  return QubitState(h, b);
}

QubitState QubitState::conjugated() const {
  return QubitState(m_.conj(), BlochVector{b_.x, -b_.y, b_.z});
}

BlochVector to_bloch(const Mat2& m) {
  BlochVector b;
  b.x = (m(0, 1) + m(1, 0)).real();
  b.y = (cplx(0, 1) * (m(0, 1) - m(1, 0))).real();
  b.z = (m(0, 0) - m(1, 1)).real();
  return b;
}

QubitState random_state(SplitMix64& rng, StateKind kind) {
  if (kind == StateKind::RealPlane) {
    const double theta = 2.0 * M_PI * rng.next_double();
    const double r = std::sqrt(rng.next_double());
    return QubitState::from_bloch({r * std::cos(theta), 0.0, r * std::sin(theta)});
  }
  const double zdir = 1.0 - 2.0 * rng.next_double();
  const double phi = 2.0 * M_PI * rng.next_double();
  const double s = std::sqrt(std::max(0.0, 1.0 - zdir * zdir));
  BlochVector dir{s * std::cos(phi), s * std::sin(phi), zdir};
  double r = 1.0;
  if (kind == StateKind::MixedBall) r = std::cbrt(rng.next_double());
  return QubitState::from_bloch({r * dir.x, r * dir.y, r * dir.z});
}

}  // namespace qwasser
