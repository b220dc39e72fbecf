#include "wola/steady_state.hpp"

#include <numbers>
#include <vector>

namespace wola {

namespace {
constexpr double kPi = std::numbers::pi;

cd unit_phase(double turns) {
  const double ang = 2.0 * kPi * turns;
  return {std::cos(ang), std::sin(ang)};
}
}  // namespace

MatXd toeplitz_windows(const VecXd& h0, int N) {
  MatXd Hw = MatXd::Zero(2 * N - 1, N);
  for (int j = 0; j < N; ++j) Hw.block(j, j, N, 1) = h0;
  return Hw;
}

MatXd compute_Z0(const VecXd& h0, int T) {
  const int N = static_cast<int>(h0.size());
  MatXd Hw = toeplitz_windows(h0, N);
  MatXd Hc = Hw.leftCols(T);
  return Hc.colPivHouseholderQr().solve(Hw);
}

VecXcd solve_subband_ls(const VecXd& h0, int T, const VecXd& w_in, int k) {
  const int N = static_cast<int>(h0.size());
  VecXd w = VecXd::Zero(N);
  w.head(w_in.size()) = w_in;
  MatXd Hw = toeplitz_windows(h0, N);
  MatXcd A(2 * N - 1, T);
  for (int t = 0; t < T; ++t)
    A.col(t) = Hw.col(t) * unit_phase(-static_cast<double>(k) * t / N);
  VecXcd wk(N);
  for (int n = 0; n < N; ++n)
    wk[n] = w[n] * unit_phase(-static_cast<double>(k) * n / N);
  VecXcd b = Hw.cast<cd>() * wk;
  return A.colPivHouseholderQr().solve(b);
}

MatXcd steady_images(const VecXd& h0, int T, const VecXd& w_in) {
  const int N = static_cast<int>(h0.size());
  VecXd w = VecXd::Zero(N);
  w.head(w_in.size()) = w_in;
  MatXd Z0 = compute_Z0(h0, T);
  MatXcd ct(T, N);
  for (int l = 0; l < T; ++l) {
    for (int n = 0; n < N; ++n) {
      const int idx = (n + l + 1) % N;
      ct(l, n) = static_cast<double>(N) * Z0(l, idx) * w[idx];
    }
  }
  return ct;
}

ErleBreakdown analytical_erle(const VecXd& h0, const VecXd& f0, int D, int T,
                              const VecXd& w_in, const Kernels* ker) {
  const int N = static_cast<int>(h0.size());
  VecXd w = VecXd::Zero(N);
  w.head(w_in.size()) = w_in;
  Kernels local;
  if (!ker) {
    local = compute_kernels(h0, f0, D);
    ker = &local;
  }
  MatXd Z0 = compute_Z0(h0, T);
  const int L = 2 * N + T - 2;
  const int M = 2 * N - 1;

  // Z0 rows and the N*w factor read out through the shifted index (n+1)%N.
  MatXd Zs(T, L);
  VecXd Wn(L);
  for (int n = 0; n < L; ++n) {
    const int jn = (n + 1) % N;
    Wn[n] = N * w[jn];
    for (int l = 0; l < T; ++l) Zs(l, n) = Z0(l, jn);
  }

  // Time-invariant part vs the PR-delayed response.
  VecXd S = VecXd::Zero(L);
  for (int l = 0; l < T; ++l)
    S.segment(l, M).array() +=
        ker->g0.array() * Zs.row(l).segment(l, M).transpose().array();
  const VecXd that = S.cwiseProduct(Wn);
  double dist = 0;
  for (int n = 0; n < L; ++n) {
    const double target = (n >= N - 1 && n <= 2 * N - 2) ? w[n - (N - 1)] : 0.0;
    const double dv = that[n] - target;
    dist += dv * dv;
  }

  double alias = 0;
  std::vector<VecXcd> zc(T);
  for (int l = 0; l < T; ++l) zc[l] = Zs.row(l).transpose().cast<cd>();
  VecXcd am(L);
  VecXcd psim(M);
  for (int m = 1; m < D; ++m) {
    am.setZero();
    psim = ker->psi.row(m).transpose();
    for (int l = 0; l < T; ++l) {
      const cd ph = unit_phase(static_cast<double>(l) * m / D);
      am.segment(l, M) += psim.cwiseProduct(zc[l].segment(l, M)) * ph;
    }
    alias += (am.array().abs2() * Wn.array().square()).sum();
  }

  ErleBreakdown out;
  out.distortion = dist;
  out.alias = alias;
  out.erle_db = 10.0 * std::log10(w.squaredNorm() / (dist + alias));
  return out;
}

VecXd polack_rir(int L, double fs, double t60, std::mt19937_64& rng) {
  const double kappa = 3.0 * std::log(10.0) / (t60 * fs);
  std::normal_distribution<double> nd;
  VecXd w(L);
  for (int n = 0; n < L; ++n) w[n] = nd(rng) * std::exp(-kappa * n);
  return w;
}

}  // namespace wola
