#include "qwasser/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <vector>

#include "qwasser/errors.hpp"

namespace qwasser {
namespace {

// ---------------------------------------------------------------------------
// Small real linear algebra used by the polish step.

// Jacobi eigendecomposition of a real symmetric n x n matrix, n <= 8.
void sym_eig(const double* a_in, int n, double* eval, double* evec) {
  double a[64];
  std::memcpy(a, a_in, sizeof(double) * n * n);
  double v[64] = {0};
  for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off <= 1e-26) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double tau = (a[q * n + q] - a[p * n + p]) / (2 * apq);
        const double t = (tau >= 0) ? 1.0 / (tau + std::sqrt(1 + tau * tau))
                                    : -1.0 / (-tau + std::sqrt(1 + tau * tau));
        const double c = 1.0 / std::sqrt(1 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
          const double vpk = v[p * n + k], vqk = v[q * n + k];
          // accumulate rows of V^T for cache friendliness
          v[p * n + k] = c * vpk - s * vqk;
          v[q * n + k] = s * vpk + c * vqk;
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) eval[i] = a[i * n + i];
  std::memcpy(evec, v, sizeof(double) * n * n);  // row k of evec = k-th eigenvector
}

// Min-norm solution of G x = b for symmetric PSD-ish G (n <= 8) via
// eigen-pseudo-inverse with a relative cutoff.
void pinv_solve(const double* g, int n, const double* b, double* x) {
  double eval[8], evec[64];
  sym_eig(g, n, eval, evec);
  double emax = 0;
  for (int i = 0; i < n; ++i) emax = std::max(emax, std::abs(eval[i]));
  const double cutoff = 1e-13 * std::max(emax, 1e-300);
  for (int i = 0; i < n; ++i) x[i] = 0;
  for (int k = 0; k < n; ++k) {
    if (std::abs(eval[k]) <= cutoff) continue;
    double proj = 0;
    for (int i = 0; i < n; ++i) proj += evec[k * n + i] * b[i];
    proj /= eval[k];
    for (int i = 0; i < n; ++i) x[i] += proj * evec[k * n + i];
  }
}

// Cholesky solve of (G + mu I) x = b, G symmetric n x n, n <= 32.
bool chol_solve(double* g, int n, double mu, const double* b, double* x) {
  for (int i = 0; i < n; ++i) g[i * n + i] += mu;
  // in-place LL^T
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = g[i * n + j];
      for (int k = 0; k < j; ++k) s -= g[i * n + k] * g[j * n + k];
      if (i == j) {
        if (s <= 0) return false;
        g[i * n + i] = std::sqrt(s);
      } else {
        g[i * n + j] = s / g[j * n + j];
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= g[i * n + k] * x[k];
    x[i] = s / g[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n; ++k) s -= g[k * n + i] * x[k];
    x[i] = s / g[i * n + i];
  }
  return true;
}

// ---------------------------------------------------------------------------
// Constraint algebra. The 8 real marginal components of a Hermitian 4x4 are
// ordered [R00, R11, Re R01, Im R01, S00, S11, Re S01, Im S01] with
// R = tr_2(Pi) - omega, S = tr_1(Pi) - rho^T.

struct Targets {
  Mat2 omega;
  Mat2 rho_t;
};

void marg8(const Mat4& pi, const Targets& tg, double* out) {
  const Mat2 r = partial_trace_second(pi) - tg.omega;
  const Mat2 s = partial_trace_first(pi) - tg.rho_t;
  out[0] = r(0, 0).real();
  out[1] = r(1, 1).real();
  out[2] = r(0, 1).real();
  out[3] = r(0, 1).imag();
  out[4] = s(0, 0).real();
  out[5] = s(1, 1).real();
  out[6] = s(0, 1).real();
  out[7] = s(0, 1).imag();
}

double marg_frobenius(const Mat4& pi, const Targets& tg) {
  const Mat2 r = partial_trace_second(pi) - tg.omega;
  const Mat2 s = partial_trace_first(pi) - tg.rho_t;
  return std::sqrt(r.frobenius_norm() * r.frobenius_norm() +
                   s.frobenius_norm() * s.frobenius_norm());
}

// Min-norm (X, Y) with X (x) I + I (x) Y closest to W in Frobenius norm.
// Solves the normal equations (2X + tr(Y) I, tr(X) I + 2Y) = (tr_2 W, tr_1 W)
// in the component orthogonal to the kernel direction (I, -I).
void dual_lsq_from(const Mat4& w, Mat2& x, Mat2& y) {
  Mat2 r = partial_trace_second(w);
  Mat2 s = partial_trace_first(w);
  const double tr_r = r.trace().real();
  const double tr_s = s.trace().real();
  const double t = (tr_r + tr_s) / 8.0;
  const Mat2 id = Mat2::identity();
  x = (r - id * (tr_r / 2.0)) * 0.5 + id * (t / 2.0);
  y = (s - id * (tr_s / 2.0)) * 0.5 + id * (t / 2.0);
  x.hermitize();
  y.hermitize();
}

Mat4 kron_xy(const Mat2& x, const Mat2& y) {
  static const Mat2 id = Mat2::identity();
  return tensor_product(x, id) + tensor_product(id, y);
}

// Orthogonal projection onto {Pi Hermitian : tr_2(Pi) = omega, tr_1(Pi) = rho^T}.
// The correction lives in range(A*) = {X (x) I + I (x) Y}; the normal
// equations (2X + tr(Y) I, tr(X) I + 2Y) = (residuals) are solved in closed
// form, picking the component orthogonal to the kernel direction (I, -I).
Mat4 proj_affine(const Mat4& v, const Targets& tg) {
  const Mat2 r = partial_trace_second(v) - tg.omega;
  const Mat2 s = partial_trace_first(v) - tg.rho_t;
  const double tr_r = r.trace().real();
  const double tr_s = s.trace().real();
  const double t = (tr_r + tr_s) / 8.0;
  const Mat2 id = Mat2::identity();
  const Mat2 x = (r - id * (tr_r / 2.0)) * 0.5 + id * (t / 2.0);
  const Mat2 y = (s - id * (tr_s / 2.0)) * 0.5 + id * (t / 2.0);
  return v - kron_xy(x, y);
}

// ---------------------------------------------------------------------------
// Hermitian 2x2 parametrization for the dual unknowns: coefficients on
// {E0 = diag(1,0), E1 = diag(0,1), E2 = [[0,1],[1,0]], E3 = [[0,i],[-i,0]]}.

Mat2 unpack_h2(const double* c) {
  Mat2 m;
  m(0, 0) = c[0];
  m(1, 1) = c[1];
  m(0, 1) = cplx(c[2], c[3]);
  m(1, 0) = cplx(c[2], -c[3]);
  return m;
}

void pack_h2(const Mat2& m, double* c) {
  c[0] = m(0, 0).real();
  c[1] = m(1, 1).real();
  c[2] = m(0, 1).real();
  c[3] = m(0, 1).imag();
}

// ---------------------------------------------------------------------------
// Low-rank factor L (4 x r, column major), Pi = L L^*.

struct Factor {
  int r = 0;
  std::array<cplx, 12> c{};  // column j entries c[4j .. 4j+3]

  cplx& at(int i, int j) { return c[4 * j + i]; }
  const cplx& at(int i, int j) const { return c[4 * j + i]; }
};

Mat4 factor_to_matrix(const Factor& l) {
  Mat4 p;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cplx s{};
      for (int k = 0; k < l.r; ++k) s += l.at(i, k) * std::conj(l.at(j, k));
      p(i, j) = s;
    }
  p.hermitize();
  return p;
}

// d(L L^*) for a unit perturbation of parameter (i, col, imag?), evaluated
// into the 8 marginal components.
void dmarg_of_param(const Factor& l, int i, int col, bool imag, double* out) {
  Mat4 dp;
  const cplx unit = imag ? cplx(0, 1) : cplx(1, 0);
  for (int b = 0; b < 4; ++b) {
    dp(i, b) += unit * std::conj(l.at(b, col));
    dp(b, i) += l.at(b, col) * std::conj(unit);
  }
  static const Targets zero_tg{Mat2::zero(), Mat2::zero()};
  marg8(dp, zero_tg, out);
}

// Gauss-Newton for marg(L L^*) = targets over L. Returns false if stuck.
bool feasibility_newton(Factor& l, const Targets& tg) {
  const int np = 8 * l.r;
  for (int it = 0; it < 30; ++it) {
    double f[8];
    marg8(factor_to_matrix(l), tg, f);
    double nf = 0;
    for (double v : f) nf += v * v;
    nf = std::sqrt(nf);
    if (nf < 1e-13) return true;

    double jac[8 * 24];  // rows 8, cols np
    for (int p = 0; p < np; ++p) {
      const int col = (p % (4 * l.r)) / 4;
      const int i = p % 4;
      const bool im = p >= 4 * l.r;
      double d[8];
      dmarg_of_param(l, i, col, im, d);
      for (int row = 0; row < 8; ++row) jac[row * np + p] = d[row];
    }
    // min-norm step: J^T (J J^T)^+ (-f)
    double g[64];
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        double s = 0;
        for (int p = 0; p < np; ++p) s += jac[a * np + p] * jac[b * np + p];
        g[a * 8 + b] = s;
      }
    double rhs[8], yv[8];
    for (int a = 0; a < 8; ++a) rhs[a] = -f[a];
    pinv_solve(g, 8, rhs, yv);
    double step[24];
    for (int p = 0; p < np; ++p) {
      double s = 0;
      for (int a = 0; a < 8; ++a) s += jac[a * np + p] * yv[a];
      step[p] = s;
    }

    double lambda = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 12; ++ls) {
      Factor cand = l;
      for (int p = 0; p < np; ++p) {
        const int col = (p % (4 * l.r)) / 4;
        const int i = p % 4;
        if (p < 4 * l.r)
          cand.at(i, col) += lambda * step[p];
        else
          cand.at(i, col) += cplx(0, lambda * step[p]);
      }
      double f2[8];
      marg8(factor_to_matrix(cand), tg, f2);
      double nf2 = 0;
      for (double v : f2) nf2 += v * v;
      if (std::sqrt(nf2) < nf) {
        l = cand;
        moved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!moved) return marg_frobenius(factor_to_matrix(l), tg) < 1e-11;
  }
  return marg_frobenius(factor_to_matrix(l), tg) < 1e-11;
}

// Least-squares dual (X, Y): minimize ||(C - X (x) I - I (x) Y) L||_F over
// Hermitian X, Y. Linear in the 8 real parameters.
void dual_from_factor(const Mat4& c, const Factor& l, Mat2& x, Mat2& y) {
  // columns: op_a L for the 8 basis operators
  cplx cols[8][12];
  static const Mat2 id = Mat2::identity();
  for (int a = 0; a < 8; ++a) {
    double coef[4] = {0, 0, 0, 0};
    coef[a % 4] = 1.0;
    const Mat2 e = unpack_h2(coef);
    const Mat4 op = (a < 4) ? tensor_product(e, id) : tensor_product(id, e);
    for (int j = 0; j < l.r; ++j)
      for (int i = 0; i < 4; ++i) {
        cplx s{};
        for (int k = 0; k < 4; ++k) s += op(i, k) * l.at(k, j);
        cols[a][4 * j + i] = s;
      }
  }
  cplx rhs[12];
  for (int j = 0; j < l.r; ++j)
    for (int i = 0; i < 4; ++i) {
      cplx s{};
      for (int k = 0; k < 4; ++k) s += c(i, k) * l.at(k, j);
      rhs[4 * j + i] = s;
    }
  const int ne = 4 * l.r;
  double g[64], b8[8];
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      double s = 0;
      for (int e = 0; e < ne; ++e)
        s += (std::conj(cols[a][e]) * cols[b][e]).real();
      g[a * 8 + b] = s;
    }
    double s = 0;
    for (int e = 0; e < ne; ++e) s += (std::conj(cols[a][e]) * rhs[e]).real();
    b8[a] = s;
  }
  double z[8];
  pinv_solve(g, 8, b8, z);
  x = unpack_h2(z);
  y = unpack_h2(z + 4);
}

// Joint Levenberg-Marquardt on F(L, X, Y) = [marginals; (C - X(x)I - I(x)Y) L].
// The system is bilinear; the Jacobian is assembled exactly. Columns are
// equilibrated before the normal equations are formed: near-degenerate
// instances carry dual blocks several orders larger than the primal ones and
// the unscaled normal matrix loses the small directions.
void joint_newton(const Mat4& c, const Targets& tg, Factor& l, Mat2& x, Mat2& y,
                  int max_iter = 40) {
  const int r = l.r;
  const int np = 8 * r + 8;
  const int rows = 8 + 8 * r;

  auto eval_f = [&](const Factor& lf, const Mat2& xf, const Mat2& yf, double* out) {
    marg8(factor_to_matrix(lf), tg, out);
    const Mat4 slack = c - kron_xy(xf, yf);
    int idx = 8;
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < 4; ++i) {
        cplx s{};
        for (int k = 0; k < 4; ++k) s += slack(i, k) * lf.at(k, j);
        out[idx] = s.real();
        out[idx + 4 * r] = s.imag();
        ++idx;
      }
  };

  auto norm_of = [&](const double* v) {
    double s = 0;
    for (int i = 0; i < rows; ++i) s += v[i] * v[i];
    return std::sqrt(s);
  };

  double f[8 + 24];
  eval_f(l, x, y, f);
  double nf_cur = norm_of(f);

  double mu = 1e-12;
  for (int it = 0; it < max_iter && nf_cur > 1e-13; ++it) {
    const Mat4 slack = c - kron_xy(x, y);
    std::vector<double> jac(static_cast<std::size_t>(rows) * np, 0.0);

    // derivatives wrt L parameters
    for (int p = 0; p < 8 * r; ++p) {
      const int col = (p % (4 * r)) / 4;
      const int i = p % 4;
      const bool im = p >= 4 * r;
      double dm[8];
      dmarg_of_param(l, i, col, im, dm);
      for (int row = 0; row < 8; ++row) jac[row * np + p] = dm[row];
      const cplx unit = im ? cplx(0, 1) : cplx(1, 0);
      for (int a = 0; a < 4; ++a) {
        const cplx v = slack(a, i) * unit;
        jac[(8 + 4 * col + a) * np + p] = v.real();
        jac[(8 + 4 * r + 4 * col + a) * np + p] = v.imag();
      }
    }
    // derivatives wrt dual parameters
    static const Mat2 id2 = Mat2::identity();
    for (int a = 0; a < 8; ++a) {
      double coef[4] = {0, 0, 0, 0};
      coef[a % 4] = 1.0;
      const Mat2 e = unpack_h2(coef);
      const Mat4 op = (a < 4) ? tensor_product(e, id2) : tensor_product(id2, e);
      for (int j = 0; j < r; ++j)
        for (int i = 0; i < 4; ++i) {
          cplx s{};
          for (int k = 0; k < 4; ++k) s += op(i, k) * l.at(k, j);
          jac[(8 + 4 * j + i) * np + (8 * r + a)] = -s.real();
          jac[(8 + 4 * r + 4 * j + i) * np + (8 * r + a)] = -s.imag();
        }
    }

    // column equilibration, then normal equations with an LM ridge
    double colscale[32];
    for (int a = 0; a < np; ++a) {
      double s = 0;
      for (int row = 0; row < rows; ++row) s += jac[row * np + a] * jac[row * np + a];
      colscale[a] = 1.0 / std::max(std::sqrt(s), 1e-100);
    }
    std::vector<double> g(static_cast<std::size_t>(np) * np);
    double grad[32];
    for (int a = 0; a < np; ++a) {
      for (int b = a; b < np; ++b) {
        double s = 0;
        for (int row = 0; row < rows; ++row) s += jac[row * np + a] * jac[row * np + b];
        s *= colscale[a] * colscale[b];
        g[a * np + b] = s;
        g[b * np + a] = s;
      }
      double s = 0;
      for (int row = 0; row < rows; ++row) s += jac[row * np + a] * f[row];
      grad[a] = -s * colscale[a];
    }

    bool accepted = false;
    for (int trial = 0; trial < 8 && !accepted; ++trial) {
      std::vector<double> gk = g;
      double step[32];
      if (!chol_solve(gk.data(), np, mu, grad, step)) {
        mu = std::max(mu * 30, 1e-12);
        continue;
      }
      for (int a = 0; a < np; ++a) step[a] *= colscale[a];
      double lambda = 1.0;
      for (int ls = 0; ls < 12; ++ls) {
        Factor l2 = l;
        for (int p = 0; p < 8 * r; ++p) {
          const int col = (p % (4 * r)) / 4;
          const int i = p % 4;
          if (p < 4 * r)
            l2.at(i, col) += lambda * step[p];
          else
            l2.at(i, col) += cplx(0, lambda * step[p]);
        }
        double xc[4], yc[4];
        pack_h2(x, xc);
        pack_h2(y, yc);
        for (int a = 0; a < 4; ++a) {
          xc[a] += lambda * step[8 * r + a];
          yc[a] += lambda * step[8 * r + 4 + a];
        }
        const Mat2 x2 = unpack_h2(xc), y2 = unpack_h2(yc);
        double f2[8 + 24];
        eval_f(l2, x2, y2, f2);
        const double nf2 = norm_of(f2);
        if (nf2 < nf_cur) {
          l = l2;
          x = x2;
          y = y2;
          std::memcpy(f, f2, sizeof(double) * rows);
          nf_cur = nf2;
          mu = std::max(mu / 5, 1e-15);
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted) mu *= 30;
    }
    if (!accepted) return;  // stalled; caller certifies whatever we have
  }
}

struct Certified {
  double value;
  double gap;
  double dual_value;
  Mat2 x;  // first-factor dual
  Mat2 y;  // second-factor dual (acts as I (x) y)
  Mat4 pi;
};

// Verification gates. Everything here is checked from scratch so that an
// accepted result is correct independently of how the candidate was produced.
std::optional<Certified> certify(const Mat4& c, const Targets& tg, const Factor& l,
                                 Mat2 x, Mat2 y, double trivial_value) {
  Mat4 pi = factor_to_matrix(l);
  if (marg_frobenius(pi, tg) > 1e-10) return std::nullopt;
  const double value = hs_inner(c, pi).real();
  if (value > trivial_value + 1e-8) return std::nullopt;

  Mat4 slack = c - kron_xy(x, y);
  slack.hermitize();
  const auto sd = eigh(slack, 1e-6);
  const double lam_min = sd.eigenvalues[0];
  if (lam_min < -1e-6) return std::nullopt;
  const double shift = std::min(lam_min, 0.0);
  const Mat2 id = Mat2::identity();
  x += id * (shift / 2.0);
  y += id * (shift / 2.0);
  const double dual = (hs_inner(tg.omega, x) + hs_inner(tg.rho_t, y)).real();
  const double gap = value - dual;
  if (gap < -1e-9 || gap > 1e-7) return std::nullopt;
  return Certified{value, gap, dual, x, y, pi};
}

std::optional<Certified> try_polish(const Mat4& c, const Targets& tg, Factor l,
                                    double trivial_value) {
  if (!feasibility_newton(l, tg)) return std::nullopt;
  Mat2 x, y;
  dual_from_factor(c, l, x, y);
  joint_newton(c, tg, l, x, y);
  // re-pin the marginals exactly; the joint step trades feasibility against
  // complementarity when the dual optimum is unattained
  if (!feasibility_newton(l, tg)) return std::nullopt;
  return certify(c, tg, l, x, y, trivial_value);
}

Factor face_of(const Mat4& psd, int r) {
  const auto sd = eigh(psd, 1e-8);
  Factor l;
  l.r = r;
  for (int j = 0; j < r; ++j) {
    const int k = 3 - j;  // descending eigenvalues
    const double lam = std::sqrt(std::max(sd.eigenvalues[k], 1e-14));
    for (int i = 0; i < 4; ++i) l.at(i, j) = lam * sd.eigenvectors(i, k);
  }
  return l;
}

TransportResult make_result(const Certified& cert, int iterations) {
  TransportResult res;
  res.value = std::max(cert.value, 0.0);
  res.distance = std::sqrt(res.value);
  res.coupling = Coupling{cert.pi};
  res.certificate.kind = CertificateKind::DualityGap;
  res.certificate.gap = cert.gap;
  res.certificate.dual_value = cert.dual_value;
  res.certificate.dual_x = cert.x;
  res.certificate.dual_y = cert.y.transpose();
  res.iterations = iterations;
  return res;
}

}  // namespace

Coupling trivial_coupling(const QubitState& rho, const QubitState& omega) {
  return Coupling{tensor_product(omega.matrix(), rho.matrix().transpose())};
}

double trivial_cost(const QubitState& rho, const QubitState& omega, const CostOperator& cost) {
  const Mat4 t = tensor_product(omega.matrix(), rho.matrix().transpose());
  return hs_inner(cost.matrix(), t).real();
}

TransportResult solve_qw(const QubitState& rho, const QubitState& omega,
                         const CostOperator& cost, const SolverOptions& opts) {
  if (rho.is_pure(opts.pure_threshold) || omega.is_pure(opts.pure_threshold)) {
    TransportResult res;
    res.value = std::max(trivial_cost(rho, omega, cost), 0.0);
    res.distance = std::sqrt(res.value);
    res.coupling = trivial_coupling(rho, omega);
    res.certificate.kind = CertificateKind::UniqueCoupling;
    res.iterations = 0;
    return res;
  }
  return solve_qw_admm(rho, omega, cost, opts);
}

TransportResult solve_qw_admm(const QubitState& rho, const QubitState& omega,
                              const CostOperator& cost, const SolverOptions& opts) {
  const Targets tg{omega.matrix(), rho.matrix().transpose()};
  const Mat4& c = cost.matrix();
  const Mat4 trivial = tensor_product(omega.matrix(), rho.matrix().transpose());
  const double trivial_value = hs_inner(c, trivial).real();

  // Analytic warm starts. Near-pure marginals make the coupling set thin and
  // first-order iterations crawl, but there the optimal face approaches the
  // product face; near-identical marginals the optimum is the canonical
  // purification. In both regimes the polish can finish without ADMM.
  const double purity = std::max(rho.bloch().norm(), omega.bloch().norm());
  const double closeness = (rho.bloch() - omega.bloch()).norm();
  if (closeness < 5e-2) {
    Mat2 avg = (rho.matrix() + omega.matrix()) * 0.5;
    avg.hermitize();
    const Vec4 v = vectorize(sqrt_psd(avg));
    Factor l;
    l.r = 1;
    for (int i = 0; i < 4; ++i) l.at(i, 0) = v[i];
    if (auto cert = try_polish(c, tg, l, trivial_value)) return make_result(*cert, 0);
  }
  if (purity > 0.99) {
    for (int r : {2, 1, 3}) {
      if (auto cert = try_polish(c, tg, face_of(trivial, r), trivial_value))
        return make_result(*cert, 0);
    }
  }

  // Scale the cost so the penalty parameter is dimensionless.
  const double scale = std::max(cost.max_eigenvalue(), 1e-30);
  Mat4 ch = c;
  ch *= 1.0 / scale;

  constexpr double kAlpha = 1.6;  // over-relaxation
  double t = opts.penalty;
  Mat4 z = trivial;
  Mat4 u;
  Mat4 pi = trivial;
  double r_norm = 0, s_norm = 0;
  int it = 0;
  bool converged = false;

  int next_polish = 60;
  while (it < opts.max_iters) {
    ++it;
    Mat4 arg = z - u - ch * (1.0 / t);
    pi = proj_affine(arg, tg);
    pi.hermitize();
    Mat4 pihat = pi * kAlpha + z * (1.0 - kAlpha);
    const Mat4 zold = z;
    Mat4 w = pihat + u;
    w.hermitize();
    z = psd_projection(w);
    u += pihat - z;
    u.hermitize();

    r_norm = (pi - z).frobenius_norm();
    s_norm = t * (z - zold).frobenius_norm();
    const double eps_pri =
        opts.abs_tol + opts.rel_tol * std::max(pi.frobenius_norm(), z.frobenius_norm());
    const double eps_dual = opts.abs_tol + opts.rel_tol * t * u.frobenius_norm();
    if (r_norm < eps_pri && s_norm < eps_dual) {
      converged = true;
    }

    // residual balancing keeps the two residuals comparable
    if (!converged && it % 20 == 0) {
      if (r_norm > 10 * s_norm && t < 1e4 * opts.penalty) {
        t *= 2.0;
        u *= 0.5;
      } else if (s_norm > 10 * r_norm && t > 1e-4 * opts.penalty) {
        t *= 0.5;
        u *= 2.0;
      }
    }

    if (converged || it >= next_polish || it == opts.max_iters) {
      next_polish = it + 120;
      for (int r : {2, 3, 1}) {
        if (auto cert = try_polish(c, tg, face_of(z, r), trivial_value))
          return make_result(*cert, it);
      }
      if (purity > 0.9 || closeness < 0.1) {
        for (int r : {2, 1}) {
          if (auto cert = try_polish(c, tg, face_of(trivial, r), trivial_value))
            return make_result(*cert, it);
        }
      }
      if (converged) break;
    }
  }

  if (!converged)
    throw numeric_error("solve_qw_admm: no certified or converged solution within max-iters",
                        r_norm, hs_inner(c, pi).real(), r_norm, s_norm, it);

  // Raw result from the residual-converged iterate: primal value at the
  // affine-feasible Pi, dual from the scaled multiplier shifted into the
  // feasible cone.
  Mat4 w = (ch + u * t) * scale;
  Mat2 dx, dy;
  dual_lsq_from(w, dx, dy);
  Mat4 slack = c - kron_xy(dx, dy);
  slack.hermitize();
  const auto sd = eigh(slack, 1e-6);
  const double shift = std::min(sd.eigenvalues[0], 0.0);
  const Mat2 id = Mat2::identity();
  dx += id * (shift / 2.0);
  dy += id * (shift / 2.0);
  const double dual = (hs_inner(tg.omega, dx) + hs_inner(tg.rho_t, dy)).real();
  const double value = hs_inner(c, pi).real();

  TransportResult res;
  res.value = std::max(value, 0.0);
  res.distance = std::sqrt(res.value);
  res.coupling = Coupling{pi};
  res.certificate.kind = CertificateKind::DualityGap;
  res.certificate.gap = value - dual;
  res.certificate.dual_value = dual;
  res.certificate.dual_x = dx;
  res.certificate.dual_y = dy.transpose();
  res.iterations = it;
  return res;
}

Vec4 canonical_purification(const QubitState& rho) {
  return vectorize(sqrt_psd(rho.matrix()));
}

double self_distance(const QubitState& rho, const CostOperator& cost) {
  const Vec4 v = canonical_purification(rho);
  return std::max(quadratic_form(cost.matrix(), v), 0.0);
}

double self_distance_xz_closed(const BlochVector& b) {
  const double n2 = b.norm_sq();
  if (n2 > 1.0 + 1e-10)
    throw std::invalid_argument("self_distance_xz_closed: Bloch vector outside the unit ball");
  if (n2 == 0.0) return 0.0;
  const double rad = std::sqrt(std::max(0.0, 1.0 - std::min(n2, 1.0)));
  return 2.0 * (1.0 - rad) * (1.0 + (b.y * b.y) / n2);
}

double self_distance_sym_closed(const BlochVector& b) {
  const double n2 = b.norm_sq();
  if (n2 > 1.0 + 1e-10)
    throw std::invalid_argument("self_distance_sym_closed: Bloch vector outside the unit ball");
  const double rad = std::sqrt(std::max(0.0, 1.0 - std::min(n2, 1.0)));
  return 4.0 * (1.0 - rad);
}

CertificateCheck verify_certificate(const TransportResult& result, const QubitState& rho,
                                    const QubitState& omega, const CostOperator& cost) {
  CertificateCheck chk;
  const Mat2 x = result.certificate.dual_x;
  const Mat2 y_second = result.certificate.dual_y.transpose();
  Mat4 slack = cost.matrix() - kron_xy(x, y_second);
  slack.hermitize();
  chk.slack_min_eig = eigh(slack, 1e-6).eigenvalues[0];
  chk.dual_value = (hs_inner(omega.matrix(), x) +
                    hs_inner(rho.matrix().transpose(), y_second)).real();
  chk.gap = result.value - chk.dual_value;
  return chk;
}

MarginalResidual coupling_marginal_residual(const Coupling& pi, const QubitState& rho,
                                            const QubitState& omega) {
  MarginalResidual r;
  r.second_vs_omega = (partial_trace_second(pi.matrix) - omega.matrix()).frobenius_norm();
  r.first_vs_rho_t = (partial_trace_first(pi.matrix) - rho.matrix().transpose()).frobenius_norm();
  return r;
}

}  // namespace qwasser
