#include "wola/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace wola {
namespace {

// One cached plan set per transform size. FFTW_ESTIMATE keeps plan choice
// deterministic run to run (FFTW_MEASURE is timing-dependent).
struct PlanSet {
  int N = 0;
  double* re = nullptr;
  fftw_complex* cx = nullptr;
  fftw_complex* cx2 = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan c2c_fwd = nullptr;
  fftw_plan c2c_bwd = nullptr;

  explicit PlanSet(int n) : N(n) {
    re = fftw_alloc_real(N);
    cx = fftw_alloc_complex(N);
    cx2 = fftw_alloc_complex(N);
    r2c = fftw_plan_dft_r2c_1d(N, re, cx, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_1d(N, cx, re, FFTW_ESTIMATE);
    c2c_fwd = fftw_plan_dft_1d(N, cx, cx2, FFTW_FORWARD, FFTW_ESTIMATE);
    c2c_bwd = fftw_plan_dft_1d(N, cx, cx2, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~PlanSet() {
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
    fftw_destroy_plan(c2c_fwd);
    fftw_destroy_plan(c2c_bwd);
    fftw_free(re);
    fftw_free(cx);
    fftw_free(cx2);
  }
};

std::mutex g_mutex;

PlanSet& plans(int N) {
  static std::map<int, PlanSet*> cache;
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, new PlanSet(N)).first;
  return *it->second;
}

}  // namespace

VecXcd rfft_pos(const VecXd& x) {
  const int N = static_cast<int>(x.size());
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSet& p = plans(N);
  for (int m = 0; m < N; ++m) p.re[m] = x[m];
  fftw_execute(p.r2c);
  // r2c is the negative-exponent transform; real input, so conjugate.
  VecXcd out(N / 2 + 1);
  for (int k = 0; k <= N / 2; ++k) out[k] = cd(p.cx[k][0], -p.cx[k][1]);
  return out;
}

VecXd synth_irfft_shift(const VecXcd& y, int N) {
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSet& p = plans(N);
  // c2r is the unnormalized positive-exponent inverse of the Hermitian
  // extension, exactly the mirror sum we need.
  for (int k = 0; k <= N / 2; ++k) {
    p.cx[k][0] = y[k].real();
    p.cx[k][1] = y[k].imag();
  }
  fftw_execute(p.c2r);
  VecXd out(N);
  for (int n = 0; n < N; ++n) out[n] = p.re[(n + 1) % N];
  return out;
}

VecXcd fft_pos_full(const VecXd& x) {
  const int N = static_cast<int>(x.size());
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSet& p = plans(N);
  for (int m = 0; m < N; ++m) {
    p.cx[m][0] = x[m];
    p.cx[m][1] = 0.0;
  }
  fftw_execute(p.c2c_bwd);  // positive exponent
  VecXcd out(N);
  for (int k = 0; k < N; ++k) out[k] = cd(p.cx2[k][0], p.cx2[k][1]);
  return out;
}

VecXcd ifft(const VecXcd& x) {
  const int N = static_cast<int>(x.size());
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSet& p = plans(N);
  for (int k = 0; k < N; ++k) {
    p.cx[k][0] = x[k].real();
    p.cx[k][1] = x[k].imag();
  }
  fftw_execute(p.c2c_bwd);
  VecXcd out(N);
  for (int n = 0; n < N; ++n)
    out[n] = cd(p.cx2[n][0], p.cx2[n][1]) / static_cast<double>(N);
  return out;
}

VecXd fft_convolve(const VecXd& a, const VecXd& b, long out_len) {
  const long full = a.size() + b.size() - 1;
  if (out_len < 0) out_len = full;
  long Np = 1;
  while (Np < full) Np <<= 1;
  const int N = static_cast<int>(Np);
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSet& p = plans(N);
  const int K = N / 2 + 1;
  VecXcd A(K), B(K);
  for (int m = 0; m < N; ++m) p.re[m] = m < a.size() ? a[m] : 0.0;
  fftw_execute(p.r2c);
  for (int k = 0; k < K; ++k) A[k] = cd(p.cx[k][0], p.cx[k][1]);
  for (int m = 0; m < N; ++m) p.re[m] = m < b.size() ? b[m] : 0.0;
  fftw_execute(p.r2c);
  for (int k = 0; k < K; ++k) B[k] = cd(p.cx[k][0], p.cx[k][1]);
  for (int k = 0; k < K; ++k) {
    const cd c = A[k] * B[k];
    p.cx[k][0] = c.real();
    p.cx[k][1] = c.imag();
  }
  fftw_execute(p.c2r);
  VecXd out(out_len);
  for (long n = 0; n < out_len; ++n)
    out[n] = n < full ? p.re[n] / N : 0.0;
  return out;
}

}  // namespace wola
