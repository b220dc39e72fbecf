#pragma once

#include "wola/complexity.hpp"
#include "wola/fft.hpp"

namespace wola {

// Regressor for one frame anchored at sample s0: entry (t, k) holds the
// windowed analysis value X_k(s0 - t*step) for bins k = 0..N/2 of a real
// signal. step = 1 gives sample-spaced taps, step = D frame-spaced taps.
MatXcd build_regressor(const VecXd& h0, const double* u, long len, long s0,
                       int T, int step = 1, FlopCounter* fc = nullptr);

// Full-band variant (k = 0..N-1), for small-size oracle comparisons.
MatXcd build_regressor_full(const VecXd& h0, const double* u, long len,
                            long s0, int T, int step = 1);

// Output of subband k: plain inner product of the k-th regressor column
// with the taps (no conjugation on either side).
cd subband_output(const MatXcd& reg, const VecXcd& taps, int k);

// Streaming chain for a full N x T filter set c: per-frame subband
// filtering of the analysis outputs, then synthesis overlap-add. Output has
// the same length as u. Complex-valued because c is unconstrained.
VecXcd apply_full_system(const VecXd& u, const VecXd& h0, const VecXd& f0,
                         int D, const MatXcd& c, int step = 1);

}  // namespace wola
