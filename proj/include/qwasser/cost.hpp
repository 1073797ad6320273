#pragma once

#include <string>
#include <vector>

#include "qwasser/eig.hpp"
#include "qwasser/matrix.hpp"

namespace qwasser {

// Quadratic cost operator sum_j (A_j (x) I - I (x) A_j^T)^2 built from a list
// of Hermitian 2x2 observables. The generator list and the spectrum are kept
// alongside the assembled matrix.
class CostOperator {
 public:
  static CostOperator build(std::vector<Mat2> generators, std::string name = "custom");

  const Mat4& matrix() const { return m_; }
  const std::vector<Mat2>& generators() const { return gens_; }
  const SpectralDecomposition<4>& spectrum() const { return spec_; }
  const std::string& name() const { return name_; }
  double max_eigenvalue() const { return spec_.eigenvalues[3]; }

 private:
  CostOperator(Mat4 m, std::vector<Mat2> gens, SpectralDecomposition<4> spec, std::string name)
      : m_(m), gens_(std::move(gens)), spec_(spec), name_(std::move(name)) {}

  Mat4 m_;
  std::vector<Mat2> gens_;
  SpectralDecomposition<4> spec_;
  std::string name_;
};

// The two distinguished costs. Entries are exact small integers.
const CostOperator& cost_sym();  // generators s1, s2, s3
const CostOperator& cost_xz();   // generators s1, s3

// ||(U (x) conj(U)) C (U (x) conj(U))* - C||_F for a 2x2 unitary U. Zero for
// every U when the cost commutes with the induced conjugation.
double conjugation_invariance_residual(const CostOperator& cost, const Mat2& u);

}  // namespace qwasser
