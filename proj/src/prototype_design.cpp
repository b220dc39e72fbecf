#include "wola/prototype_design.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "wola/filterbank_core.hpp"

namespace wola {

namespace {
constexpr double kPi = std::numbers::pi;

// Nullspace basis of the PR constraints. The PR spectra here are nearly
// flat (clustered singular values), which trips the divide-and-conquer
// SVD; the symmetric eigensolver on A'A is accurate and the huge spectral
// gap makes the squared conditioning harmless.
MatXd pr_nullspace(const MatXd& A) {
  Eigen::SelfAdjointEigenSolver<MatXd> es(A.transpose() * A);
  const VecXd& ev = es.eigenvalues();  // ascending
  // Numerically-zero eigenvalues of A'A land near eps*lambda_max; the PR
  // spectra have no genuine eigenvalues between that floor and the cluster
  // at lambda_max, so a coarse relative cutoff separates them cleanly.
  const double cut = 1e-12 * ev[ev.size() - 1];
  int null_dim = 0;
  while (null_dim < ev.size() && ev[null_dim] <= cut) ++null_dim;
  return es.eigenvectors().leftCols(null_dim);
}
}  // namespace

std::string window_name(const WindowSpec& w) {
  switch (w.kind) {
    case WindowKind::kRect: return "rect";
    case WindowKind::kCosine: return "cosine";
    case WindowKind::kRootHann: return "root-hann";
    case WindowKind::kRaisedRoot:
      return "raised:" + std::to_string(w.rho) + ":" + std::to_string(w.eta);
  }
  return "?";
}

WindowSpec parse_window(const std::string& s) {
  if (s == "rect") return {WindowKind::kRect};
  if (s == "cosine") return {WindowKind::kCosine};
  if (s == "root-hann" || s == "root_hann") return {WindowKind::kRootHann};
  if (s.rfind("raised:", 0) == 0) {
    auto rest = s.substr(7);
    auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw DesignError("raised window needs raised:RHO:ETA");
    WindowSpec w{WindowKind::kRaisedRoot};
    w.rho = std::stod(rest.substr(0, colon));
    w.eta = std::stod(rest.substr(colon + 1));
    return w;
  }
  throw DesignError("unknown window: " + s);
}

VecXd make_window(const WindowSpec& spec, int N) {
  if (N < 2 || N % 2 != 0) throw DesignError("window length must be even");
  VecXd h(N);
  for (int n = 0; n < N; ++n) {
    const double x = 2.0 * kPi * n / N;
    switch (spec.kind) {
      case WindowKind::kRect: h[n] = 1.0; break;
      case WindowKind::kCosine: h[n] = 0.5 - 0.5 * std::cos(x); break;
      case WindowKind::kRootHann: h[n] = std::sin(kPi * n / N); break;
      case WindowKind::kRaisedRoot: {
        const double v = spec.rho - spec.eta * std::cos(x);
        if (v < 0) throw DesignError("raised window needs rho >= eta");
        h[n] = std::sqrt(v);
        break;
      }
    }
  }
  return h;
}

int CosineSeries::effective_order(double tol) const {
  int R = 0;
  for (int r = 0; r < gamma.size(); ++r)
    if (std::abs(gamma[r]) > tol) R = r;
  return R;
}

CosineSeries cosine_series(const VecXd& h0) {
  const int N = static_cast<int>(h0.size());
  const int R = N / 2;
  CosineSeries s;
  s.gamma.resize(R + 1);
  for (int r = 0; r <= R; ++r) {
    double dot = 0;
    for (int n = 0; n < N; ++n) dot += h0[n] * std::cos(2.0 * kPi * r * n / N);
    const double scale = (r == 0 || r == R) ? 1.0 / N : 2.0 / N;
    s.gamma[r] = scale * dot;
  }
  return s;
}

PrSystem pr_constraints(const VecXd& h0, int D) {
  const int N = static_cast<int>(h0.size());
  if (D <= 0 || N % D != 0) throw DesignError("D must divide N");
  // Row m: N*psi_m(N-1) = (N/D) sum_j h0(N-1-j) f0(j) e^{i 2 pi (N-1-j) m / D}
  MatXcd rows(D, N);
  for (int m = 0; m < D; ++m) {
    for (int j = 0; j < N; ++j) {
      const int p = N - 1 - j;
      const double ang = 2.0 * kPi * ((p * m) % D) / D;
      rows(m, j) = (static_cast<double>(N) / D) * h0[p] * cd(std::cos(ang), std::sin(ang));
    }
  }
  PrSystem sys;
  sys.A.resize(2 * D, N);
  sys.A.topRows(D) = rows.real();
  sys.A.bottomRows(D) = rows.imag();
  sys.b = VecXd::Zero(2 * D);
  sys.b[0] = 1.0;
  return sys;
}

VecXd design_min_norm(const VecXd& h0, int D) {
  PrSystem sys = pr_constraints(h0, D);
  Eigen::CompleteOrthogonalDecomposition<MatXd> cod(sys.A);
  VecXd f0 = cod.solve(sys.b);  // minimum-norm least-squares solution
  PrReport rep = verify_pr(h0, f0, D);
  if (!rep.pass(1e-8))
    throw DesignError("PR infeasible for this window/D (dev " +
                      std::to_string(rep.max_distortion_dev + rep.max_alias) + ")");
  return f0;
}

VecXd design_min_distortion(const VecXd& h0, int D, double t60_design,
                            double fs) {
  const int N = static_cast<int>(h0.size());
  const double kd = 3.0 * std::log(10.0) / (t60_design * fs);

  // One-sided normalized autocorrelation of h0.
  VecXd zeta(N);
  for (int j = 0; j < N; ++j) {
    double acc = 0;
    for (int n = 0; n < N - j; ++n) acc += h0[n] * h0[n + j];
    zeta[j] = acc;
  }
  zeta /= zeta[0];

  // Weights over the full distortion-kernel support [0, 2N-2]. Index n maps
  // to circular tap jn = (n+1) mod N; the linear target lives at n >= N-1
  // (the PR delay onward).
  const int M = 2 * N - 1;
  VecXd V(M), lin(M);
  for (int n = 0; n < M; ++n) {
    const int jn = (n + 1) % N;
    const double s2 = std::exp(-2.0 * kd * jn);
    const double nz = N * zeta[jn];
    V[n] = s2 * nz * nz;
    lin[n] = (n >= N - 1) ? s2 * nz : 0.0;
  }

  // Quadratic form J = f0' Q f0 - 2 b' f0 (+const). Q is 3-banded in the
  // synthesis index: bands at 0 and +-D from the h0(a) h0(a - sD) coupling.
  MatXd Q = MatXd::Zero(N, N);
  for (int sD : {-D, 0, D}) {
    const int a_lo = std::max(0, sD);
    const int a_hi = std::min(N, N + sD);
    for (int p = 0; p < N; ++p) {
      const int col = p + sD;
      if (col < 0 || col >= N) continue;
      double acc = 0;
      for (int a = a_lo; a < a_hi; ++a) acc += h0[a] * h0[a - sD] * V[a + p];
      Q(p, col) += acc / D;
    }
  }
  VecXd b(N);
  for (int p = 0; p < N; ++p) {
    double acc = 0;
    for (int m = 0; m < N; ++m) acc += h0[m] * lin[p + m];
    b[p] = acc / D;
  }

  PrSystem sys = pr_constraints(h0, D);
  Eigen::CompleteOrthogonalDecomposition<MatXd> cod(sys.A);
  VecXd fp = cod.solve(sys.b);
  MatXd Z = pr_nullspace(sys.A);
  if (Z.cols() == 0) return fp;

  MatXd Ared = Z.transpose() * Q * Z;
  VecXd rhs = Z.transpose() * (b - Q * fp);
  Eigen::LDLT<MatXd> ldlt(Ared);
  VecXd y = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success ||
      (Ared * y - rhs).norm() > 1e-8 * (rhs.norm() + 1e-30)) {
    Eigen::CompleteOrthogonalDecomposition<MatXd> rcod(Ared);
    y = rcod.solve(rhs);
  }
  VecXd f0 = fp + Z * y;
  PrReport rep = verify_pr(h0, f0, D);
  if (!rep.pass(1e-8)) throw DesignError("min-distortion design violates PR");
  return f0;
}

PrReport verify_pr(const VecXd& h0, const VecXd& f0, int D) {
  const int N = static_cast<int>(h0.size());
  Kernels ker = compute_kernels(h0, f0, D);
  PrReport rep;
  rep.tau = N - 1;
  // For length-N prototypes the passthrough chain response collapses onto
  // the delay tap: T(z) - z^-tau has the single coefficient N*g0(N-1) - 1,
  // and A_m(z) the single coefficient N*psi_m(N-1).
  rep.max_distortion_dev = std::abs(N * ker.g0[N - 1] - 1.0);
  double alias = 0;
  for (int m = 1; m < D; ++m) alias = std::max(alias, std::abs(ker.psi(m, N - 1)));
  rep.max_alias = N * alias;
  return rep;
}

}  // namespace wola
