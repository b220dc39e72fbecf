#pragma once

#include <Eigen/Dense>
#include <complex>

namespace wola {

using VecXd = Eigen::VectorXd;
using VecXcd = Eigen::VectorXcd;
using MatXd = Eigen::MatrixXd;
using MatXcd = Eigen::MatrixXcd;
using cd = std::complex<double>;

// Forward real FFT, positive-exponent convention:
//   out[k] = sum_m x[m] e^{+i 2 pi m k / N},  k = 0..N/2.
// (Equals the conjugate of the engineering-sign DFT of real input.)
VecXcd rfft_pos(const VecXd& x);

// Inverse of the half spectrum without the 1/N factor, then a circular
// left shift by one:
//   out[n] = sum_k Yk_full e^{+i 2 pi k (n+1) / N}
// where Yk_full is the Hermitian extension of y. This is the synthesis
// mirror used throughout; y.size() must be N/2+1.
VecXd synth_irfft_shift(const VecXcd& y, int N);

// Full complex-spectrum transform of a real frame, positive exponent:
//   out[k] = sum_m x[m] e^{+i 2 pi m k / N},  k = 0..N-1.
VecXcd fft_pos_full(const VecXd& x);

// Plain inverse DFT with 1/N: out[p] = (1/N) sum_k x[k] e^{+i 2 pi k p / N}.
VecXcd ifft(const VecXcd& x);

// Linear convolution via zero-padded FFTs, truncated to out_len samples
// (full length a+b-1 when out_len < 0).
VecXd fft_convolve(const VecXd& a, const VecXd& b, long out_len = -1);

}  // namespace wola
