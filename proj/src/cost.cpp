#include "qwasser/cost.hpp"

#include <stdexcept>

#include "qwasser/states.hpp"

namespace qwasser {

CostOperator CostOperator::build(std::vector<Mat2> generators, std::string name) {
  if (generators.empty())
    throw std::invalid_argument("CostOperator: generator list is empty");
  for (const Mat2& g : generators)
    if (!g.is_hermitian(1e-12))
      throw std::invalid_argument("CostOperator: generator is not Hermitian");

  const Mat2 id = Mat2::identity();
  Mat4 c;
  for (const Mat2& g : generators) {
    const Mat4 d = tensor_product(g, id) - tensor_product(id, g.transpose());
    c += d * d;
  }
  c.hermitize();
  auto spec = eigh(c);
  return CostOperator(c, std::move(generators), spec, std::move(name));
}

const CostOperator& cost_sym() {
  static const CostOperator c = CostOperator::build({pauli(1), pauli(2), pauli(3)}, "sym");
  return c;
}

const CostOperator& cost_xz() {
  static const CostOperator c = CostOperator::build({pauli(1), pauli(3)}, "xz");
  return c;
}

double conjugation_invariance_residual(const CostOperator& cost, const Mat2& u) {
  const Mat2 uu = u * u.adjoint();
  if ((uu - Mat2::identity()).max_abs() > 1e-10)
    throw std::invalid_argument("conjugation_invariance_residual: matrix is not unitary");
  const Mat4 big = tensor_product(u, u.conj());
  const Mat4 moved = big * cost.matrix() * big.adjoint();
  return (moved - cost.matrix()).frobenius_norm();
}

}  // namespace qwasser
