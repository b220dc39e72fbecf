#pragma once

#include "wola/fft.hpp"

namespace wola {

// Analysis at full-rate sample s over a zero-extended signal:
//   X_k(s) = sum_{m=0}^{N-1} h0(m) u(s-m) e^{+i 2 pi m k / N},  k = 0..N/2.
// u indices below 0 or >= len read as zero.
VecXcd analysis_at(const VecXd& h0, const double* u, long len, long s);

// Same transform without the window (all N bins), for the cross-term path.
VecXcd plain_transform_at(int N, const double* u, long len, long s);

// Full-band windowed analysis, k = 0..N-1; real and complex signals.
VecXcd analysis_full(const VecXd& h0, const double* u, long len, long s);
VecXcd analysis_full_c(const VecXd& h0, const cd* u, long len, long s);

// Synthesis mirror of one frame of half-spectrum subband values:
//   z(j) = sum_{k=0}^{N-1} Yk_full e^{+i 2 pi k (j+1) / N},  j = 0..N-1,
// returned already multiplied by the synthesis prototype f0.
VecXd synth_segment(const VecXcd& yk, const VecXd& f0);

// Distortion / alias kernels of a prototype pair:
//   g0(n)     = (1/D) sum_p h0(p) f0(n-p)
//   psi_m(n)  = (1/D) sum_p h0(p) f0(n-p) e^{+i 2 pi p m / D}
// n = 0..2N-2; psi_0 = g0.
struct Kernels {
  VecXd g0;     // 2N-1
  MatXcd psi;   // D x (2N-1)
};
Kernels compute_kernels(const VecXd& h0, const VecXd& f0, int D);

// Periodic time-domain images of a full set of subband filters c (N x T):
//   ctilde(l, n) = sum_k c(k, l) e^{+i 2 pi k (n+1) / N}.
MatXcd images_from_filters(const MatXcd& c);

// Equivalent linear-periodically-time-varying description of the
// analysis -> subband FIR -> synthesis chain with filters c (N x T):
// a time-invariant response t_hat and D-1 modulated image responses,
// each of length 2N + T - 2.
struct LptvResponse {
  VecXcd t_hat;
  MatXcd a_hat;  // (D-1) x (2N+T-2)
};
LptvResponse characterize(const VecXd& h0, const VecXd& f0, int D,
                          const MatXcd& c, bool with_alias = true);

// Brute-force reference chain: per-subband full-rate filtering, decimation,
// expansion, synthesis filtering, summed over all N subbands. O(N^2 len);
// for oracle comparisons at small N only.
VecXcd lptv_chain(const VecXd& h0, const VecXd& f0, int D, const MatXcd& c,
                  const VecXd& u);

// Applies an LptvResponse to a signal (the prediction to compare against
// lptv_chain).
VecXcd lptv_apply(const LptvResponse& r, int D, const VecXd& u);

}  // namespace wola
