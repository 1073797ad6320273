#pragma once

#include <optional>

#include "qwasser/cost.hpp"
#include "qwasser/matrix.hpp"
#include "qwasser/states.hpp"

namespace qwasser {

// A state on the doubled space whose partial traces are the prescribed
// marginals (omega on the first factor, rho^T on the second).
struct Coupling {
  Mat4 matrix;
};

enum class CertificateKind { UniqueCoupling, DualityGap, ClosedForm };

// For DualityGap certificates the dual pair (x, y) satisfies
//   C - x (x) I - I (x) y^T  >= 0,
// and dual_value = tr(omega x) + tr(rho y) is a lower bound on the optimum.
struct Certificate {
  CertificateKind kind = CertificateKind::ClosedForm;
  double gap = 0.0;
  double dual_value = 0.0;
  Mat2 dual_x;
  Mat2 dual_y;
};

struct TransportResult {
  double value = 0.0;     // squared distance, clamped to >= 0
  double distance = 0.0;  // sqrt(value)
  Coupling coupling;
  Certificate certificate;
  int iterations = 0;
};

struct SolverOptions {
  double penalty = 1.0;         // initial ADMM step
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  int max_iters = 50000;
  double pure_threshold = 1e-9;
};

Coupling trivial_coupling(const QubitState& rho, const QubitState& omega);

// tr((omega (x) rho^T) C); equals 6 - 2<b_rho, b_omega> for the symmetric
// cost and 4 - 2(xu + zw) for the clock-shift cost.
double trivial_cost(const QubitState& rho, const QubitState& omega, const CostOperator& cost);

// Squared quantum Wasserstein distance. If either marginal is pure within
// opts.pure_threshold the coupling set is the single point omega (x) rho^T
// and the value is returned directly; otherwise the semidefinite program is
// solved (see solve_qw_admm).
TransportResult solve_qw(const QubitState& rho, const QubitState& omega,
                         const CostOperator& cost, const SolverOptions& opts = {});

// The general-path solver, no pure-marginal shortcut: ADMM over the splitting
// {affine marginals} / {PSD cone}, refined by a Gauss-Newton polish of the
// KKT system on the optimal face, with a verified duality-gap certificate.
// Throws numeric_error if no certified or residual-converged result is found
// within opts.max_iters.
TransportResult solve_qw_admm(const QubitState& rho, const QubitState& omega,
                              const CostOperator& cost, const SolverOptions& opts = {});

// Self-distance via the canonical purification: <<sqrt(rho)|| C ||sqrt(rho)>>.
double self_distance(const QubitState& rho, const CostOperator& cost);

// Closed form 2(1 - sqrt(1 - ||b||^2))(1 + y^2/||b||^2) for the clock-shift
// cost; 0 at b = 0 (the limit along every admissible path).
double self_distance_xz_closed(const BlochVector& b);

// Closed form 4(1 - sqrt(1 - ||b||^2)) for the symmetric cost.
double self_distance_sym_closed(const BlochVector& b);

// vectorize(sqrt_psd(rho)); a unit vector.
Vec4 canonical_purification(const QubitState& rho);

// Independent re-check of a stored duality-gap certificate.
struct CertificateCheck {
  double dual_value = 0.0;    // recomputed tr(omega x) + tr(rho y)
  double slack_min_eig = 0.0; // min eig of C - x (x) I - I (x) y^T
  double gap = 0.0;           // primal value - recomputed dual value
};
CertificateCheck verify_certificate(const TransportResult& result, const QubitState& rho,
                                    const QubitState& omega, const CostOperator& cost);

// Frobenius norms of the marginal constraint violations of a coupling.
struct MarginalResidual {
  double second_vs_omega = 0.0;
  double first_vs_rho_t = 0.0;
};
MarginalResidual coupling_marginal_residual(const Coupling& pi, const QubitState& rho,
                                            const QubitState& omega);

}  // namespace qwasser
