#include "wola/gwola_engine.hpp"

#include <stdexcept>

#include "wola/filterbank_core.hpp"

namespace wola {

MatXcd build_regressor(const VecXd& h0, const double* u, long len, long s0,
                       int T, int step, FlopCounter* fc) {
  const int N = static_cast<int>(h0.size());
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  MatXcd reg(T, N / 2 + 1);
  for (int t = 0; t < T; ++t) {
    reg.row(t) = analysis_at(h0, u, len, s0 - static_cast<long>(t) * step)
                     .transpose();
    if (fc) {
      fc->add_fft(N);
      fc->add_window(N);
    }
  }
  return reg;
}

MatXcd build_regressor_full(const VecXd& h0, const double* u, long len,
                            long s0, int T, int step) {
  const int N = static_cast<int>(h0.size());
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  MatXcd reg(T, N);
  for (int t = 0; t < T; ++t)
    reg.row(t) = analysis_full(h0, u, len, s0 - static_cast<long>(t) * step)
                     .transpose();
  return reg;
}

cd subband_output(const MatXcd& reg, const VecXcd& taps, int k) {
  if (taps.size() != reg.rows())
    throw std::invalid_argument("tap count does not match regressor");
  return (taps.transpose() * reg.col(k)).value();
}

VecXcd apply_full_system(const VecXd& u, const VecXd& h0, const VecXd& f0,
                         int D, const MatXcd& c, int step) {
  const int N = static_cast<int>(h0.size());
  const int T = static_cast<int>(c.cols());
  const long len = u.size();
  VecXcd out = VecXcd::Zero(len);
  VecXcd y(N);
  for (long q = 0; q * D < len; ++q) {
    const long s0 = q * D;
    MatXcd reg = build_regressor_full(h0, u.data(), len, s0, T, step);
    y.noalias() = (c.array() * reg.transpose().array()).matrix().rowwise().sum();
    // Synthesis frame: z(j) = f0(j) * sum_k y_k e^{+i 2 pi k (j+1) / N}.
    VecXcd z = ifft(y) * static_cast<double>(N);
    for (int j = 0; j < N && s0 + j < len; ++j)
      out[s0 + j] += f0[j] * z[(j + 1) % N];
  }
  return out;
}

}  // namespace wola
