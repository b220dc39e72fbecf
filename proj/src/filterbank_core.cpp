#include "wola/filterbank_core.hpp"

#include <numbers>

namespace wola {

namespace {
constexpr double kPi = std::numbers::pi;

cd unit_phase(double turns) {
  const double ang = 2.0 * kPi * turns;
  return {std::cos(ang), std::sin(ang)};
}
}  // namespace

VecXcd analysis_at(const VecXd& h0, const double* u, long len, long s) {
  const int N = static_cast<int>(h0.size());
  VecXd frame = VecXd::Zero(N);
  for (int m = 0; m < N; ++m) {
    const long idx = s - m;
    if (idx >= 0 && idx < len) frame[m] = h0[m] * u[idx];
  }
  return rfft_pos(frame);
}

VecXcd plain_transform_at(int N, const double* u, long len, long s) {
  VecXd frame = VecXd::Zero(N);
  for (int m = 0; m < N; ++m) {
    const long idx = s - m;
    if (idx >= 0 && idx < len) frame[m] = u[idx];
  }
  return fft_pos_full(frame);
}

VecXcd analysis_full(const VecXd& h0, const double* u, long len, long s) {
  const int N = static_cast<int>(h0.size());
  VecXd frame = VecXd::Zero(N);
  for (int m = 0; m < N; ++m) {
    const long idx = s - m;
    if (idx >= 0 && idx < len) frame[m] = h0[m] * u[idx];
  }
  return fft_pos_full(frame);
}

VecXcd analysis_full_c(const VecXd& h0, const cd* u, long len, long s) {
  const int N = static_cast<int>(h0.size());
  VecXcd frame = VecXcd::Zero(N);
  for (int m = 0; m < N; ++m) {
    const long idx = s - m;
    if (idx >= 0 && idx < len) frame[m] = h0[m] * u[idx];
  }
  return ifft(frame) * static_cast<double>(N);
}

VecXd synth_segment(const VecXcd& yk, const VecXd& f0) {
  const int N = static_cast<int>(f0.size());
  VecXd z = synth_irfft_shift(yk, N);
  return f0.cwiseProduct(z);
}

Kernels compute_kernels(const VecXd& h0, const VecXd& f0, int D) {
  const int N = static_cast<int>(h0.size());
  const int M = 2 * N - 1;
  Kernels ker;
  ker.g0.resize(M);
  ker.psi.resize(D, M);
  VecXcd fold(D);
  for (int n = 0; n < M; ++n) {
    fold.setZero();
    const int p_lo = std::max(0, n - N + 1);
    const int p_hi = std::min(N, n + 1);
    double g = 0;
    for (int p = p_lo; p < p_hi; ++p) {
      const double v = h0[p] * f0[n - p];
      g += v;
      fold[p % D] += v;
    }
    ker.g0[n] = g / D;
    ker.psi.col(n) = ifft(fold);  // (1/D) sum_r fold(r) e^{+i 2 pi r m / D}
  }
  return ker;
}

MatXcd images_from_filters(const MatXcd& c) {
  const int N = static_cast<int>(c.rows());
  const int T = static_cast<int>(c.cols());
  MatXcd ct(T, N);
  for (int l = 0; l < T; ++l) {
    VecXcd z = ifft(VecXcd(c.col(l))) * static_cast<double>(N);
    for (int n = 0; n < N; ++n) ct(l, n) = z[(n + 1) % N];
  }
  return ct;
}

LptvResponse characterize(const VecXd& h0, const VecXd& f0, int D,
                          const MatXcd& c, bool with_alias) {
  const int N = static_cast<int>(h0.size());
  const int T = static_cast<int>(c.cols());
  Kernels ker = compute_kernels(h0, f0, D);
  MatXcd ct = images_from_filters(c);
  const int L = 2 * N + T - 2;
  LptvResponse r;
  r.t_hat = VecXcd::Zero(L);
  r.a_hat = MatXcd::Zero(with_alias ? D - 1 : 0, L);
  for (int n = 0; n < L; ++n) {
    for (int l = 0; l < T; ++l) {
      const int a = n - l;
      if (a < 0 || a > 2 * N - 2) continue;
      const cd cv = ct(l, a % N);
      r.t_hat[n] += ker.g0[a] * cv;
      if (!with_alias) continue;
      for (int m = 1; m < D; ++m) {
        r.a_hat(m - 1, n) +=
            unit_phase(static_cast<double>(l) * m / D) * ker.psi(m, a) * cv;
      }
    }
  }
  return r;
}

VecXcd lptv_chain(const VecXd& h0, const VecXd& f0, int D, const MatXcd& c,
                  const VecXd& u) {
  const int N = static_cast<int>(h0.size());
  const int T = static_cast<int>(c.cols());
  const long len = u.size();
  VecXcd yhat = VecXcd::Zero(len);
  VecXcd X(len), V(len), W(len);
  for (int k = 0; k < N; ++k) {
    // Modulated analysis/synthesis filters for subband k. The extra e^{+i
    // 2 pi k / N} on the synthesis side is the one-sample shift of the
    // synthesis mirror.
    for (long n = 0; n < len; ++n) {
      cd acc = 0;
      const long m_hi = std::min<long>(N, n + 1);
      for (long m = 0; m < m_hi; ++m)
        acc += h0[m] * unit_phase(static_cast<double>(m) * k / N) * u[n - m];
      X[n] = acc;
    }
    for (long n = 0; n < len; ++n) {
      cd acc = 0;
      const long t_hi = std::min<long>(T, n + 1);
      for (long t = 0; t < t_hi; ++t) acc += c(k, t) * X[n - t];
      V[n] = acc;
    }
    W.setZero();
    for (long n = 0; n < len; n += D) W[n] = V[n];
    for (long n = 0; n < len; ++n) {
      cd acc = 0;
      const long j_hi = std::min<long>(N, n + 1);
      for (long j = 0; j < j_hi; ++j)
        acc += f0[j] * unit_phase(static_cast<double>(j + 1) * k / N) * W[n - j];
      yhat[n] += acc;
    }
  }
  return yhat;
}

VecXcd lptv_apply(const LptvResponse& r, int D, const VecXd& u) {
  const long len = u.size();
  const long L = r.t_hat.size();
  VecXcd y = VecXcd::Zero(len);
  for (long n = 0; n < len; ++n) {
    cd acc = 0;
    const long t_hi = std::min(L, n + 1);
    for (long t = 0; t < t_hi; ++t) acc += r.t_hat[t] * u[n - t];
    y[n] = acc;
  }
  const int Dm = static_cast<int>(r.a_hat.rows()) + 1;
  for (int m = 1; m < Dm; ++m) {
    for (long n = 0; n < len; ++n) {
      cd acc = 0;
      const long t_hi = std::min(L, n + 1);
      for (long t = 0; t < t_hi; ++t)
        acc += r.a_hat(m - 1, t) * (u[n - t] * unit_phase(static_cast<double>((n - t) % D) * m / D));
      y[n] += acc;
    }
  }
  return y;
}

}  // namespace wola
