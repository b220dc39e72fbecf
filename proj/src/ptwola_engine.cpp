#include "wola/ptwola_engine.hpp"

#include <numbers>
#include <stdexcept>

#include "wola/filterbank_core.hpp"

namespace wola {

namespace {
constexpr double kPi = std::numbers::pi;

cd unit_phase(double turns) {
  const double ang = 2.0 * kPi * turns;
  return {std::cos(ang), std::sin(ang)};
}
}  // namespace

void PtwolaConfig::validate(int N) const {
  if (R < 0 || T_total < 2 * R + 1)
    throw std::invalid_argument("ptwola requires 0 <= 2R+1 <= T_total");
  if (2 * R >= N) throw std::invalid_argument("2R must be < N");
}

PtwolaFrame ptwola_frame(const double* u, long len, long s0, int N,
                         const PtwolaConfig& cfg, FlopCounter* fc) {
  cfg.validate(N);
  PtwolaFrame fr;
  fr.u_rec = plain_transform_at(N, u, len, s0);
  const int nd = cfg.diff_count();
  fr.du.resize(nd);
  auto sample = [&](long idx) {
    return (idx >= 0 && idx < len) ? u[idx] : 0.0;
  };
  for (int j = 0; j < nd; ++j)
    fr.du[j] = sample(s0 - j) - sample(s0 - j - N);
  if (fc) {
    fc->add_fft(N);
    fc->add_real_adds(nd);
  }
  return fr;
}

VecXcd ptwola_regressor(const PtwolaFrame& fr, int k, const PtwolaConfig& cfg) {
  const int N = static_cast<int>(fr.u_rec.size());
  VecXcd reg(cfg.T_total);
  for (int r = -cfg.R; r <= cfg.R; ++r)
    reg[r + cfg.R] = fr.u_rec[((k + r) % N + N) % N];
  const int nd = cfg.diff_count();
  for (int j = 0; j < nd; ++j) reg[2 * cfg.R + 1 + j] = fr.du[j];
  return reg;
}

VecXd gamma_tilde(const CosineSeries& series) {
  const int half = static_cast<int>(series.gamma.size()) - 1;
  VecXd gt = series.gamma;
  for (int r = 1; r < half; ++r) gt[r] *= 0.5;
  return gt;
}

VecXcd map_coefficients(const VecXcd& c, const CosineSeries& series, int k,
                        int N, const PtwolaConfig& cfg) {
  cfg.validate(N);
  const int T = static_cast<int>(c.size());
  if (T != cfg.T_total - 2 * cfg.R)
    throw std::invalid_argument("mapping needs T_total - 2R sample taps");
  const VecXd gt = gamma_tilde(series);
  VecXcd v = VecXcd::Zero(cfg.T_total);
  for (int r = -cfg.R; r <= cfg.R; ++r) {
    cd acc = 0;
    for (int t = 0; t < T; ++t)
      acc += c[t] * unit_phase(-static_cast<double>(t) * (k + r) / N);
    v[r + cfg.R] = gt[std::abs(r)] * acc;
  }
  for (int j = 0; j + 1 < T; ++j) {
    cd acc = 0;
    for (int r = -cfg.R; r <= cfg.R; ++r)
      for (int t = j + 1; t < T; ++t)
        acc += gt[std::abs(r)] * c[t] *
               unit_phase(-static_cast<double>(t - j) * (k + r) / N);
    v[2 * cfg.R + 1 + j] = -acc;
  }
  return v;
}

double decomposition_check(const VecXd& h0, const CosineSeries& series, int k,
                           int R, int T) {
  const int N = static_cast<int>(h0.size());
  const int cols = N + T - 1;
  const int rows_mixed = 2 * R + T;  // cross rows + T-1 difference rows
  const VecXd gt = gamma_tilde(series);

  // Stacked windowed-transform rows: row t applies X_k at delay t to the
  // history [u(s0), u(s0-1), ..., u(s0-N-T+2)].
  MatXcd F_win = MatXcd::Zero(T, cols);
  for (int t = 0; t < T; ++t)
    for (int m = 0; m < N; ++m)
      F_win(t, t + m) = h0[m] * unit_phase(static_cast<double>(m) * k / N);

  // Sparse factor: 2R+1 non-windowed transform rows of the newest frame,
  // then the difference rows.
  MatXcd F_sp = MatXcd::Zero(rows_mixed, cols);
  for (int r = -R; r <= R; ++r)
    for (int m = 0; m < N; ++m)
      F_sp(r + R, m) = unit_phase(static_cast<double>(m) * (k + r) / N);
  for (int j = 0; j + 1 < T; ++j) {
    F_sp(2 * R + 1 + j, j) = 1.0;
    F_sp(2 * R + 1 + j, j + N) = -1.0;
  }

  // Block-triangular reweighting: delay t of the windowed row in terms of
  // the newest-frame transforms and the difference samples.
  MatXcd Lk = MatXcd::Zero(T, rows_mixed);
  for (int t = 0; t < T; ++t) {
    for (int r = -R; r <= R; ++r)
      Lk(t, r + R) =
          gt[std::abs(r)] * unit_phase(-static_cast<double>(t) * (k + r) / N);
    for (int j = 0; j < t; ++j) {
      cd acc = 0;
      for (int r = -R; r <= R; ++r)
        acc += gt[std::abs(r)] *
               unit_phase(-static_cast<double>(t - j) * (k + r) / N);
      Lk(t, 2 * R + 1 + j) = -acc;
    }
  }

  return (F_win - Lk * F_sp).cwiseAbs().maxCoeff();
}

}  // namespace wola
