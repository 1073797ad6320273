#pragma once

#include <cmath>

#include "qwasser/matrix.hpp"
#include "qwasser/rng.hpp"

namespace qwasser {

struct BlochVector {
  double x = 0, y = 0, z = 0;

  double norm_sq() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }

  friend BlochVector operator-(const BlochVector& a, const BlochVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend double dot(const BlochVector& a, const BlochVector& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
  }
};

// Pauli matrix, j in {1,2,3}.
Mat2 pauli(int j);

// Hermitian, PSD, unit-trace 2x2 matrix together with its Bloch vector
// rho = (I + x s1 + y s2 + z s3)/2. Immutable.
class QubitState {
 public:
  // ||b|| in (1, 1+1e-10] is projected back to the unit sphere; anything
  // larger is rejected.
  static QubitState from_bloch(const BlochVector& b);

  // Validates hermiticity (1e-12), unit trace (1e-12) and positivity
  // (eigenvalues >= -1e-10).
  static QubitState from_matrix(const Mat2& m);

  const Mat2& matrix() const { return m_; }
  const BlochVector& bloch() const { return b_; }

  // Purity test on the Bloch radius: 1 - ||b|| <= tol.
  bool is_pure(double tol) const { return 1.0 - b_.norm() <= tol; }

  // Entrywise complex conjugate; (x, y, z) -> (x, -y, z).
  QubitState conjugated() const;

 private:
  QubitState(const Mat2& m, const BlochVector& b) : m_(m), b_(b) {}
  Mat2 m_;
  BlochVector b_;
};

// Bloch coordinates recovered as tr(rho sigma_j).
BlochVector to_bloch(const Mat2& m);

enum class StateKind { MixedBall, PureSphere, RealPlane };

// MixedBall: uniform over the solid Bloch ball (uniform direction, radius
// u^(1/3)). PureSphere: uniform over the unit sphere. RealPlane: uniform over
// the y = 0 disk. Draw order per sample: two direction uniforms, then the
// radius uniform where applicable.
QubitState random_state(SplitMix64& rng, StateKind kind);

}  // namespace qwasser
