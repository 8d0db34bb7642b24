#include "edgewise/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "edgewise/errors.hpp"
#include "edgewise/painleve.hpp"
#include "edgewise/quadrature.hpp"
#include "edgewise/special.hpp"

namespace edgewise {

namespace {

constexpr int kMaxDegree = 600;
constexpr int kMaxGram = 385;
constexpr int kPanelPoints = 32;
constexpr double kDoublingTol = 1e-10;
constexpr double kMaxCondition = 1e12;

/** \brief Hermite functions p_j(x) e^{-n x^2/2}, j < m, by the normalized recurrence. */
void hermite_functions(int n_scale, int m, double x, long double* out) {
  const long double ns = n_scale;
  const long double xl = x;
  long double prev = std::pow(ns / std::numbers::pi_v<long double>, 0.25L) * std::exp(-0.5L * ns * xl * xl);
  out[0] = prev;
  if (m == 1) return;
  long double cur = xl * prev / std::sqrt(1.0L / (2.0L * ns));
  out[1] = cur;
  for (int j = 1; j + 1 < m; ++j) {
    const long double bj = std::sqrt(j / (2.0L * ns));
    const long double bj1 = std::sqrt((j + 1) / (2.0L * ns));
    const long double next = (xl * cur - bj * prev) / bj1;
    out[j + 1] = next;
    prev = cur;
    cur = next;
  }
}

/** \brief Abscissa beyond which every Hermite function of degree < m is below 1e-18. */
double truncation(int n_scale, int m) {
  std::vector<long double> buf(m);
  double L = std::sqrt((2.0 * m + 1.0) / n_scale);
  const double step = 0.25 / std::sqrt(static_cast<double>(n_scale));
  for (int it = 0; it < 10000; ++it, L += step) {
    hermite_functions(n_scale, m, L, buf.data());
    long double mx = 0;
    for (int j = 0; j < m; ++j) mx = std::max(mx, std::fabs(buf[j]));
    if (mx < 1e-18L) return L;
  }
  fail(ErrorKind::numerical, "hermite truncation search failed");
}

struct NodeSet {
  std::vector<double> x, w;
};

/** \brief Quadrature for f(x) omega(x - lambda) on [lo, hi] truncated to the Hermite support. */
NodeSet build_nodes(const FHWeight& w, int m, double lo, double hi, int refine) {
  const double L = truncation(w.n, m);
  double a = std::max(lo, -L), b = std::min(hi, L);
  // Keep lambda as a breakpoint when it sits just outside the truncated window.
  const double pad = 1.0;
  if (w.lambda > b && w.lambda < b + pad && hi >= w.lambda) b = w.lambda;
  if (w.lambda < a && w.lambda > a - pad && lo <= w.lambda) a = w.lambda;
  NodeSet ns;
  if (!(b > a)) return ns;

  const double h = std::min(0.5, 4.0 / std::sqrt(static_cast<double>(m) * w.n)) / refine;
  static const QuadratureRule gl = gauss_legendre(kPanelPoints);
  const QuadratureRule gj = gauss_jacobi(kPanelPoints, w.alpha);

  std::vector<double> brk{a};
  if (w.lambda > a && w.lambda < b) brk.push_back(w.lambda);
  brk.push_back(b);

  for (std::size_t sidx = 0; sidx + 1 < brk.size(); ++sidx) {
    const double sa = brk[sidx], sb = brk[sidx + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((sb - sa) / h)));
    const double width = (sb - sa) / panels;
    for (int p = 0; p < panels; ++p) {
      const double pa = sa + p * width, pb = pa + width;
      const bool jac_left = (p == 0 && sa == w.lambda);
      const bool jac_right = (p == panels - 1 && sb == w.lambda);
      if (jac_left || jac_right) {
        const double scale = std::pow(width, 1.0 + w.alpha) * (jac_left ? w.beta : 1.0);
        for (int i = 0; i < kPanelPoints; ++i) {
          const double t = gj.nodes[i];
          ns.x.push_back(jac_left ? w.lambda + width * t : w.lambda - width * t);
          ns.w.push_back(scale * gj.weights[i]);
        }
      } else {
        const double mid = 0.5 * (pa + pb), half = 0.5 * width;
        for (int i = 0; i < kPanelPoints; ++i) {
          const double x = mid + half * gl.nodes[i];
          ns.x.push_back(x);
          ns.w.push_back(half * gl.weights[i] * w.omega(x));
        }
      }
    }
  }
  return ns;
}

Eigen::MatrixXd assemble(const FHWeight& w, int m, double lo, double hi, int refine) {
  const NodeSet ns = build_nodes(w, m, lo, hi, refine);
  const Eigen::Index N = static_cast<Eigen::Index>(ns.x.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  if (N == 0) return g;
  Eigen::MatrixXd phi(m, N);
  std::vector<long double> buf(m);
  for (Eigen::Index i = 0; i < N; ++i) {
    hermite_functions(w.n, m, ns.x[i], buf.data());
    const long double sw = std::sqrt(static_cast<long double>(ns.w[i]));
    for (int j = 0; j < m; ++j) phi(j, i) = static_cast<double>(buf[j] * sw);
  }
  g.selfadjointView<Eigen::Lower>().rankUpdate(phi);
  return g.selfadjointView<Eigen::Lower>();
}

struct Factor {
  Eigen::MatrixXd l;
  double log_det = 0.0;
  double condition = 1.0;
};

Factor factor(const Eigen::MatrixXd& g) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) fail(ErrorKind::numerical, "Gram matrix is not positive definite");
  Factor f;
  f.l = llt.matrixL();
  for (Eigen::Index i = 0; i < g.rows(); ++i) f.log_det += 2.0 * std::log(f.l(i, i));
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g, Eigen::EigenvaluesOnly).eigenvalues();
  f.condition = ev.maxCoeff() / ev.minCoeff();
  return f;
}

/** \brief ln det(I - L^{-1} T L^{-T}) with T the Gram restricted to (c, inf). */
double log_fredholm(const FHWeight& w, const Eigen::MatrixXd& l, double c) {
  const Eigen::MatrixXd t = gram_matrix(w, GramOptions{w.n, c, std::numeric_limits<double>::infinity(), true});
  const auto lv = l.triangularView<Eigen::Lower>();
  Eigen::MatrixXd a = lv.solve(t);
  a = lv.solve(a.transpose()).transpose();
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(w.n, w.n) - a;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::MatrixXd u = lu.matrixLU();
  double logabs = 0.0;
  int sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double d = u(i, i);
    if (d == 0.0) return -std::numeric_limits<double>::infinity();
    if (d < 0) sign = -sign;
    logabs += std::log(std::fabs(d));
  }
  if (sign < 0) fail(ErrorKind::numerical, "finite Fredholm determinant came out negative");
  return logabs;
}

cplx sigma_at(double alpha, double gamma, double s) {
  const LaxTrajectory traj = solve_lax(PainleveParams{alpha, gamma}, std::min(s, 0.0) - 0.5);
  return traj.sigma(s);
}

}  // namespace

void FHWeight::validate() const {
  if (!(alpha > -1.0)) fail(ErrorKind::domain, "weight requires alpha > -1");
  if (!(beta > 0.0)) fail(ErrorKind::domain, "weight requires real beta > 0");
  if (n < 1) fail(ErrorKind::domain, "weight requires n >= 1");
  if (!std::isfinite(lambda)) fail(ErrorKind::domain, "weight requires finite lambda");
}

double FHWeight::omega(double x) const {
  const double d = x - lambda;
  const double mag = alpha == 0.0 ? 1.0 : std::pow(std::fabs(d), alpha);
  return d >= 0 ? beta * mag : mag;
}

double FHWeight::operator()(double x) const { return omega(x) * std::exp(-n * x * x); }

double hermite_orthonormal(int n_scale, int j, double x) {
  if (j < 0 || j > kMaxDegree) fail(ErrorKind::domain, "hermite_orthonormal requires 0 <= j <= 600");
  if (n_scale < 1) fail(ErrorKind::domain, "hermite_orthonormal requires n_scale >= 1");
  const long double ns = n_scale, xl = x;
  long double prev = std::pow(ns / std::numbers::pi_v<long double>, 0.25L);
  if (j == 0) return static_cast<double>(prev);
  long double cur = xl * prev / std::sqrt(1.0L / (2.0L * ns));
  for (int k = 1; k < j; ++k) {
    const long double next = (xl * cur - std::sqrt(k / (2.0L * ns)) * prev) / std::sqrt((k + 1) / (2.0L * ns));
    prev = cur;
    cur = next;
  }
  return static_cast<double>(cur);
}

double hermite_log_leading(int n_scale, int j) {
  // 1 / (b_1 ... b_j) with b_k = sqrt(k / (2n)).
  const double ns = n_scale;
  return 0.25 * std::log(ns / std::numbers::pi) + 0.5 * j * std::log(2.0 * ns) - 0.5 * std::lgamma(j + 1.0);
}

Eigen::MatrixXd gram_matrix(const FHWeight& w, const GramOptions& opts) {
  w.validate();
  const int m = opts.size > 0 ? opts.size : w.n;
  if (m > kMaxGram) fail(ErrorKind::domain, "gram_matrix supports sizes up to n + 1 with n <= 384");
  if (!(opts.hi > opts.lo)) fail(ErrorKind::domain, "gram_matrix requires lo < hi");
  Eigen::MatrixXd g = assemble(w, m, opts.lo, opts.hi, 1);
  if (!opts.check) return g;
  Eigen::MatrixXd g2 = assemble(w, m, opts.lo, opts.hi, 2);
  const double diff = (g2 - g).cwiseAbs().maxCoeff();
  if (diff > kDoublingTol)
    fail(ErrorKind::numerical, "Gram quadrature did not converge: panel doubling moved an entry by " +
                                   std::to_string(diff));
  return g2;
}

GramResult log_ratio(const FHWeight& w) {
  const Factor f = factor(gram_matrix(w));
  return GramResult{w.n, f.log_det, f.condition};
}

OPData op_data(const FHWeight& w) {
  w.validate();
  const int n = w.n;
  const Factor f = factor(gram_matrix(w, GramOptions{n + 1}));
  if (f.condition > kMaxCondition) fail(ErrorKind::numerical, "Gram section too ill-conditioned for op_data");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 1);
  e[n] = 1.0;
  const Eigen::VectorXd ell = f.l.transpose().triangularView<Eigen::Upper>().solve(e);
  const double bn = std::sqrt(n / (2.0 * w.n));
  const double bn1 = std::sqrt((n - 1) / (2.0 * w.n));
  OPData d;
  d.log_kappa_n = hermite_log_leading(w.n, n) - std::log(f.l(n, n));
  d.log_kappa_n1 = hermite_log_leading(w.n, n - 1) - std::log(f.l(n - 1, n - 1));
  d.kappa_n = std::exp(d.log_kappa_n);
  d.kappa_n1 = std::exp(d.log_kappa_n1);
  d.delta_nn = ell[n - 1] / ell[n] * bn;
  const double hermite_sub = -static_cast<double>(n) * (n - 1) / (4.0 * w.n);
  d.gamma_nn = n >= 2 ? ell[n - 2] / ell[n] * bn * bn1 + hermite_sub : 0.0;
  return d;
}

A9Check check_a9(const FHWeight& w, double h) {
  if (!(h >= 1e-6 && h <= 1e-3)) fail(ErrorKind::domain, "check_a9 requires h in [1e-6, 1e-3]");
  FHWeight up = w, dn = w;
  up.lambda += h;
  dn.lambda -= h;
  A9Check c;
  c.fd = (log_ratio(up).log_det - log_ratio(dn).log_det) / (2 * h);
  c.exact = 2.0 * w.n * op_data(w).delta_nn;
  c.residual = std::fabs(c.fd - c.exact);
  return c;
}

double finite_fredholm(const FHWeight& w, double c) {
  w.validate();
  if (w.n > 128) fail(ErrorKind::domain, "finite_fredholm requires n <= 128");
  const Factor f = factor(gram_matrix(w));
  return std::exp(log_fredholm(w, f.l, c));
}

FiniteKernel::FiniteKernel(const FHWeight& w) : w_(w) { l_ = factor(gram_matrix(w)).l; }

Eigen::VectorXd FiniteKernel::psi(double x) const {
  if (w_.alpha < 0 && x == w_.lambda) fail(ErrorKind::domain, "kernel is singular at lambda for alpha < 0");
  std::vector<long double> buf(w_.n);
  hermite_functions(w_.n, w_.n, x, buf.data());
  const double sw = std::sqrt(w_.omega(x));
  Eigen::VectorXd v(w_.n);
  for (int j = 0; j < w_.n; ++j) v[j] = static_cast<double>(buf[j]) * sw;
  return l_.triangularView<Eigen::Lower>().solve(v);
}

double FiniteKernel::operator()(double x, double y) const { return psi(x).dot(psi(y)); }

double kernel_Kn(const FHWeight& w, double x, double y) { return FiniteKernel(w)(x, y); }

double lambda_edge(double s, int n) {
  return std::sqrt(2.0) + s / std::pow(n * std::pow(2.0, 0.75), 2.0 / 3.0);
}

std::vector<TrendRow> check_e21_trend(double alpha, double beta, double s, const std::vector<int>& n_list) {
  std::vector<TrendRow> rows;
  for (int n : n_list) {
    if (n < 32 || n > 384) fail(ErrorKind::domain, "check_e21_trend requires 32 <= n <= 384");
    const double lam = lambda_edge(s, n);
    TrendRow r;
    r.n = n;
    r.log_ratio = alpha == 0.0 ? 0.0
                               : log_ratio(FHWeight{lam, alpha, beta, n}).log_det -
                                     log_ratio(FHWeight{lam, 0.0, beta, n}).log_det;
    r.predicted = n * alpha * (1 - std::log(2.0)) / 2 + alpha * s * std::cbrt(n) + alpha * alpha / 6 * std::log(n);
    r.remainder = r.log_ratio - r.predicted;
    rows.push_back(r);
  }
  return rows;
}

SlopeCheck check_root_slope(double alpha, double beta, double s, int n, double h) {
  if (!(h > 0)) fail(ErrorKind::domain, "check_root_slope requires h > 0");
  const double rp = check_e21_trend(alpha, beta, s + h, {n})[0].remainder;
  const double rm = check_e21_trend(alpha, beta, s - h, {n})[0].remainder;
  SlopeCheck c;
  c.fd = (rp - rm) / (2 * h);
  c.reference = (sigma_at(alpha, beta, s) - sigma_at(0.0, beta, s)).real();
  c.residual = std::fabs(c.fd - c.reference);
  return c;
}

SlopeCheck check_e25(double alpha, double s, int n, double h) {
  if (n < 1 || n > 256) fail(ErrorKind::domain, "check_e25 requires 1 <= n <= 256");
  if (!(h > 0)) fail(ErrorKind::domain, "check_e25 requires h > 0");
  auto log_e = [&](double sv) {
    const FHWeight w{lambda_edge(sv, n), alpha, 1.0, n};
    const Factor f = factor(gram_matrix(w));
    return f.log_det + log_fredholm(w, f.l, w.lambda) - alpha * sv * std::cbrt(n);
  };
  SlopeCheck c;
  c.fd = (log_e(s + h) - log_e(s - h)) / (2 * h);
  c.reference = sigma_at(alpha, 0.0, s).real();
  c.residual = std::fabs(c.fd - c.reference);
  return c;
}

double sigma0_integral(double gamma, double s) {
  const LaxTrajectory traj = solve_lax(PainleveParams{0.0, gamma}, std::min(s, 0.0) - 0.5);
  const double t0 = traj.t0();
  if (s >= t0) fail(ErrorKind::domain, "sigma0_integral requires s below the launch abscissa");
  // Beyond t0 the solution is (1 - gamma)(Ai'^2 - x Ai^2) to within O(Ai^4).
  static const QuadratureRule gl = gauss_legendre(40);
  const double tail = integrate_panels(gl, t0, t0 + 12.0, 4, [](double x) {
    const AiryPair p = airy_ai_pair(x);
    return p.aip * p.aip - x * p.ai * p.ai;
  });
  return traj.integrate_sigma(s).real() + (1.0 - gamma) * tail;
}

RatioCheck check_jump_ratio(double beta, double s, int n) {
  RatioCheck c;
  c.log_det = log_ratio(FHWeight{lambda_edge(s, n), 0.0, beta, n}).log_det;
  c.reference = -sigma0_integral(beta, s);
  c.defect = std::fabs(c.log_det - c.reference);
  return c;
}

double DeltaBrackets::predict(double n, int order) const {
  if (order < 0 || order > 3) fail(ErrorKind::domain, "delta prediction order must be in [0, 3]");
  const double cs[4] = {c0, c1, c2, c3};
  double v = 0.0;
  for (int k = 0; k <= order; ++k) {
    if (!std::isfinite(cs[k])) fail(ErrorKind::domain, "delta bracket not available at this order");
    v += cs[k] * std::pow(n, -k / 3.0);
  }
  return v;
}

DeltaBrackets delta_brackets(double alpha, double s, double a, double b, double da_ds, double q1_21,
                             double q2_12) {
  const double al2 = alpha * alpha, s2 = s * s;
  DeltaBrackets d;
  d.c0 = alpha;
  d.c1 = -(a - s2 / 4);
  d.c2 = alpha / 2 * (b + a * a + s / 2);
  d.c3 = 0.25 * (al2 / 4 - 1.0 / 8 + (al2 - 1) * q1_21 - (al2 + 0.2) * q2_12 + 0.15 * s2 * (b + a * a) -
                 al2 * a * a * a - 1.5 * a * b * (al2 - 0.2) - s2 / 5 * da_ds - 0.3 * s * a + s2 * s / 8);
  return d;
}

DeltaBrackets delta_brackets_lax(double alpha, double beta, double s) {
  const LaxTrajectory traj = solve_lax(PainleveParams{alpha, beta}, std::min(s, 0.0) - 0.5);
  const LaxState st = traj.state(s);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double da = s / 2 - st.q.real();
  return delta_brackets(alpha, s, st.a.real(), st.b.real(), da, nan, nan);
}

}  // namespace edgewise
