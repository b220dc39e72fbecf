#pragma once

#include "wola/complexity.hpp"
#include "wola/fft.hpp"
#include "wola/prototype_design.hpp"

namespace wola {

struct PtwolaConfig {
  int R = 0;        // single-sided cross-term count
  int T_total = 1;  // regressor length per subband
  int diff_count() const { return T_total - 2 * R - 1; }
  void validate(int N) const;
};

// Shared per-frame state: one non-windowed length-N transform of the newest
// frame plus the sliding-update difference samples
//   du[j] = u(s0 - j) - u(s0 - j - N),  j = 0..diff_count-1.
struct PtwolaFrame {
  VecXcd u_rec;
  VecXd du;
};

PtwolaFrame ptwola_frame(const double* u, long len, long s0, int N,
                         const PtwolaConfig& cfg, FlopCounter* fc = nullptr);

// Regressor for bin k: transform values at bins (k-R .. k+R) mod N followed
// by the difference samples. Length T_total.
VecXcd ptwola_regressor(const PtwolaFrame& fr, int k, const PtwolaConfig& cfg);

// Signed-frequency weights of the window's cosine series: gt[0] = gamma[0],
// gt[r] = gamma[r]/2 for 0 < r < N/2, gt[N/2] = gamma[N/2] (that bin has a
// single exponential).
VecXd gamma_tilde(const CosineSeries& series);

// Reweights sample-spaced taps c (length T_total - 2R) into the
// cross+difference coordinates. Exact when the window's cosine series
// terminates at R; provided for validation, adaptive runs learn the
// reweighted coefficients directly.
VecXcd map_coefficients(const VecXcd& c, const CosineSeries& series, int k,
                        int N, const PtwolaConfig& cfg);

// Builds the stacked shifted windowed-transform rows, their block-triangular
// reweighting and the sparse transform+difference matrix explicitly and
// returns the max abs reconstruction error. Zero up to rounding when the
// series terminates at R; for other windows it measures the truncation
// error, identical in magnitude across k.
double decomposition_check(const VecXd& h0, const CosineSeries& series, int k,
                           int R, int T);

}  // namespace wola
