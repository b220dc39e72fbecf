#pragma once

#include <random>

#include "wola/filterbank_core.hpp"

namespace wola {

// Tall banded convolution matrix of h0: column j holds h0 shifted down by j,
// size (2N-1) x N. The first T columns form the regressor-side block.
MatXd toeplitz_windows(const VecXd& h0, int N);

// Left pseudoinverse action Z0 = pinv(Hc) * Hw, a T x N matrix whose leading
// T x T block is the identity; the trailing block is the coupling xi0.
MatXd compute_Z0(const VecXd& h0, int T);

// Converged per-subband least-squares filter for subband k and a length-N
// zero-padded room response w.
VecXcd solve_subband_ls(const VecXd& h0, int T, const VecXd& w, int k);

// Closed-form periodic images of the converged filter set:
//   ctilde(l, n) = N * Z0(l, (n+l+1) mod N) * w((n+l+1) mod N).
MatXcd steady_images(const VecXd& h0, int T, const VecXd& w);

struct ErleBreakdown {
  double erle_db = 0;
  double distortion = 0;  // squared error energy of the time-invariant part
  double alias = 0;       // total image energy
};

// Analytical steady-state ERLE of the converged system for a length-N
// zero-padded room response; kernels may be precomputed and reused.
ErleBreakdown analytical_erle(const VecXd& h0, const VecXd& f0, int D, int T,
                              const VecXd& w, const Kernels* ker = nullptr);

// Exponentially decaying Gaussian room response; kappa = 3 ln10 / (t60 fs).
VecXd polack_rir(int L, double fs, double t60, std::mt19937_64& rng);

}  // namespace wola
