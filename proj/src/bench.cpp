#include "wola/bench.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "wola/adaptation.hpp"
#include "wola/filterbank_core.hpp"
#include "wola/gwola_engine.hpp"
#include "wola/ptwola_engine.hpp"
#include "wola/steady_state.hpp"

namespace wola {

Synthesis parse_synthesis(const std::string& s) {
  if (s == "min-norm" || s == "min_norm") return Synthesis::kMinNorm;
  if (s == "min-distortion" || s == "min_distortion")
    return Synthesis::kMinDistortion;
  throw std::invalid_argument("unknown synthesis: " + s);
}

std::string synthesis_name(Synthesis s) {
  return s == Synthesis::kMinNorm ? "min-norm" : "min-distortion";
}

namespace {

std::mutex g_cache_mutex;

std::string design_key(const WindowSpec& w, int N, int D, int synth) {
  std::ostringstream os;
  os << window_name(w) << ':' << N << ':' << D << ':' << synth;
  return os.str();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

const VecXd& cached_analysis_window(const WindowSpec& w, int N) {
  static std::map<std::string, VecXd> cache;
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  const std::string key = design_key(w, N, 0, -1);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make_window(w, N)).first;
  return it->second;
}

const VecXd& cached_synthesis_window(const WindowSpec& w, int N, int D,
                                     Synthesis s) {
  static std::map<std::string, VecXd> cache;
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  const std::string key = design_key(w, N, D, static_cast<int>(s));
  auto it = cache.find(key);
  if (it == cache.end()) {
    const VecXd h0 = make_window(w, N);
    VecXd f0 = s == Synthesis::kMinNorm ? design_min_norm(h0, D)
                                        : design_min_distortion(h0, D);
    it = cache.emplace(key, std::move(f0)).first;
  }
  return it->second;
}

void ScenarioConfig::validate() const {
  if (N < 4 || N % 2) throw std::invalid_argument("N must be even and >= 4");
  if (D < 1 || D > N || N % D != 0)
    throw std::invalid_argument("D must divide N");
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  if (L < 1 || L > N)
    throw std::invalid_argument("rir length must be in [1, N]");
  if (!(t60 > 0)) throw std::invalid_argument("t60 must be positive");
  if (!(fs > 0)) throw std::invalid_argument("fs must be positive");
  if (!(sigma_u > 0)) throw std::invalid_argument("sigma_u must be positive");
  if (frames < 1) throw std::invalid_argument("frames must be >= 1");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
    throw std::invalid_argument("warmup_fraction must be in [0, 1)");
  if (method == Method::kPtwola) PtwolaConfig{R, T}.validate(N);
}

double measure_erle(const VecXd& y_ref, const VecXd& y_hat, long begin,
                    long end) {
  if (y_ref.size() != y_hat.size())
    throw std::invalid_argument("signal lengths differ");
  if (begin < 0 || end > y_ref.size() || end <= begin)
    throw std::invalid_argument("steady window too short");
  double num = 0, den = 0;
  for (long n = begin; n < end; ++n) {
    num += y_ref[n] * y_ref[n];
    const double dv = y_ref[n] - y_hat[n];
    den += dv * dv;
  }
  if (den == 0) return 300.0;
  if (num == 0) return 0.0;
  return std::min(300.0, 10.0 * std::log10(num / den));
}

double system_distance(const VecXcd& t_hat, const VecXd& w_ext) {
  const long L = std::max(t_hat.size(), w_ext.size());
  double ref = 0, diff = 0;
  for (long n = 0; n < L; ++n) {
    const double wn = n < w_ext.size() ? w_ext[n] : 0.0;
    const cd tn = n < t_hat.size() ? t_hat[n] : cd(0, 0);
    ref += wn * wn;
    diff += std::norm(tn - wn);
  }
  if (ref == 0) throw std::invalid_argument("zero reference response");
  if (diff == 0) return -300.0;
  return std::max(-300.0, 10.0 * std::log10(diff / ref));
}

namespace {

// Mean response of the frozen PT-WOLA chain to impulses at every phase.
// Averaging over phases cancels the modulated image components and leaves
// the time-invariant part.
VecXd pt_mean_response(const VecXd& f0, int N, int D,
                       const PtwolaConfig& pcfg, const RlsBank& bank) {
  const int K = N / 2 + 1;
  const int Lt = 2 * N + pcfg.T_total;
  const long reach = N + pcfg.T_total;  // deepest history sample a frame uses
  const long n0 = reach + 4;
  const long len = n0 + D + Lt + N;
  VecXd acc = VecXd::Zero(Lt);
  VecXd x = VecXd::Zero(len);
  VecXcd Y(K);
  for (int p = 0; p < D; ++p) {
    x.setZero();
    const long pos = n0 + p;
    x[pos] = 1.0;
    VecXd y = VecXd::Zero(len);
    for (long q = (pos + D - 1) / D; q * D <= pos + reach && q * D < len;
         ++q) {
      const long s0 = q * D;
      PtwolaFrame fr = ptwola_frame(x.data(), len, s0, N, pcfg, nullptr);
      for (int k = 0; k < K; ++k)
        Y[k] = bank.predict(k, ptwola_regressor(fr, k, pcfg));
      const VecXd seg = synth_segment(Y, f0);
      const long jmax = std::min<long>(N, len - s0);
      for (long j = 0; j < jmax; ++j) y[s0 + j] += seg[j];
    }
    acc += y.segment(pos, Lt);
  }
  return acc / D;
}

}  // namespace

std::vector<MetricSeries> run_simulation_multi(
    const ScenarioConfig& cfg, const std::vector<Synthesis>& syntheses,
    bool want_analytical) {
  cfg.validate();
  if (syntheses.empty())
    throw std::invalid_argument("need at least one synthesis");
  const int N = cfg.N, D = cfg.D, K = N / 2 + 1;
  const VecXd& h0 = cached_analysis_window(cfg.window, N);
  std::vector<const VecXd*> f0s;
  for (Synthesis s : syntheses)
    f0s.push_back(&cached_synthesis_window(cfg.window, N, D, s));

  // One seeded stream generates, in order: room response, far-end signal,
  // near-end noise. The draws depend only on the scenario geometry, so
  // different methods under the same seed see identical signals.
  std::mt19937_64 rng(cfg.seed);
  const VecXd w = polack_rir(cfg.L, cfg.fs, cfg.t60, rng);
  const long n_samp = static_cast<long>(cfg.frames) * D + N;
  std::normal_distribution<double> nd;
  VecXd u(n_samp);
  for (long n = 0; n < n_samp; ++n) u[n] = cfg.sigma_u * nd(rng);
  const VecXd echo = fft_convolve(u, w, n_samp);
  const double noise_scale = std::sqrt(echo.squaredNorm() / n_samp) *
                             std::pow(10.0, -cfg.ebr_db / 20.0);
  VecXd mic(n_samp);
  for (long n = 0; n < n_samp; ++n) mic[n] = echo[n] + noise_scale * nd(rng);

  RlsBank bank(K, cfg.T);
  FlopCounter fc;
  PtwolaConfig pcfg{cfg.R, cfg.T};
  const int n_out = static_cast<int>(syntheses.size());
  std::vector<VecXd> yhat(n_out, VecXd::Zero(n_samp));

  std::vector<VecXcd> ring;  // past analysis spectra for frame-spaced taps
  if (cfg.method == Method::kConventional)
    ring.assign(cfg.T, VecXcd::Zero(K));

  MatXcd reg;
  PtwolaFrame pf;
  VecXcd Y(K), d(K);
  for (long q = 0; q < cfg.frames; ++q) {
    const long s0 = q * D;
    switch (cfg.method) {
      case Method::kGwola:
        reg = build_regressor(h0, u.data(), n_samp, s0, cfg.T, 1, &fc);
        fc.add_products_cc(N / 2, cfg.T);
        fc.add_accumulate(N / 2, cfg.T);
        break;
      case Method::kConventional: {
        ring[q % cfg.T] = analysis_at(h0, u.data(), n_samp, s0);
        fc.add_fft(N);
        fc.add_window(N);
        reg.resize(cfg.T, K);
        for (int t = 0; t < cfg.T; ++t) {
          if (q - t >= 0)
            reg.row(t) = ring[(q - t) % cfg.T].transpose();
          else
            reg.row(t).setZero();
        }
        fc.add_products_cc(N / 2, cfg.T);
        fc.add_accumulate(N / 2, cfg.T);
        break;
      }
      case Method::kPtwola:
        pf = ptwola_frame(u.data(), n_samp, s0, N, pcfg, &fc);
        fc.add_products_cc(N / 2, 2 * cfg.R + 1);
        fc.add_products_cr(N / 2, pcfg.diff_count());
        fc.add_accumulate(N / 2, cfg.T);
        break;
    }
    d = analysis_at(h0, mic.data(), n_samp, s0);
    if (cfg.method == Method::kPtwola) {
      for (int k = 0; k < K; ++k)
        Y[k] = bank.update(k, ptwola_regressor(pf, k, pcfg), d[k]).estimate;
    } else {
      for (int k = 0; k < K; ++k)
        Y[k] = bank.update(k, reg.col(k), d[k]).estimate;
    }
    for (int i = 0; i < n_out; ++i)
      yhat[i].segment(s0, N) += synth_segment(Y, *f0s[i]);
  }

  const long tau = N - 1;
  VecXd yref = VecXd::Zero(n_samp);
  yref.segment(tau, n_samp - tau) = echo.head(n_samp - tau);
  const long sb =
      static_cast<long>(std::floor(cfg.frames * cfg.warmup_fraction)) * D;
  const long se = static_cast<long>(cfg.frames) * D - N;

  VecXd wN = VecXd::Zero(N);
  wN.head(cfg.L) = w;

  std::vector<MetricSeries> out(n_out);
  const long long fm = fc.mults() / cfg.frames;
  const long long fa = fc.adds() / cfg.frames;
  for (int i = 0; i < n_out; ++i) {
    MetricSeries& ms = out[i];
    ms.flops_mult = fm;
    ms.flops_add = fa;
    ms.steady_erle_db = measure_erle(yref, yhat[i], sb, se);
    ms.erle_db_over_time.resize(cfg.frames);
    for (long q = 0; q < cfg.frames; ++q) {
      double num = 0, den = 0;
      for (long n = q * D; n < std::min<long>(q * D + D, n_samp); ++n) {
        num += yref[n] * yref[n];
        const double dv = yref[n] - yhat[i][n];
        den += dv * dv;
      }
      ms.erle_db_over_time[q] =
          den == 0 ? 300.0
                   : (num == 0 ? 0.0
                               : std::min(300.0, 10.0 * std::log10(num / den)));
    }

    const VecXd& f0 = *f0s[i];
    if (cfg.method == Method::kPtwola) {
      const VecXd th = pt_mean_response(f0, N, D, pcfg, bank);
      VecXd wext = VecXd::Zero(2 * N - 1);
      wext.segment(N - 1, N) = wN;
      ms.system_distance_db = system_distance(th.cast<cd>(), wext);
    } else {
      const int Teff =
          cfg.method == Method::kConventional ? (cfg.T - 1) * D + 1 : cfg.T;
      MatXcd cfull = MatXcd::Zero(N, Teff);
      for (int k = 0; k < K; ++k) {
        const VecXcd& ck = bank.coeffs(k);
        for (int t = 0; t < cfg.T; ++t) {
          const int tt = cfg.method == Method::kConventional ? t * D : t;
          cfull(k, tt) = ck[t];
          if (k > 0 && k < N - k) cfull(N - k, tt) = std::conj(ck[t]);
        }
      }
      const LptvResponse lr = characterize(h0, f0, D, cfull, false);
      VecXd wext = VecXd::Zero(2 * N + Teff - 2);
      wext.segment(N - 1, N) = wN;
      ms.system_distance_db = system_distance(lr.t_hat, wext);
      if (cfg.method == Method::kGwola && want_analytical)
        ms.analytical_erle_db = analytical_erle(h0, f0, D, cfg.T, wN).erle_db;
    }
  }
  return out;
}

MetricSeries run_simulation(const ScenarioConfig& cfg) {
  return run_simulation_multi(cfg, {cfg.synthesis})[0];
}

std::uint64_t cell_seed(std::uint64_t base, std::uint64_t cell_index,
                        std::uint64_t rep) {
  return splitmix64(splitmix64(base + cell_index * 0x9e3779b97f4a7c15ULL) +
                    rep);
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  if (spec.windows.empty() || spec.syntheses.empty() ||
      spec.methods.empty() || spec.taps.empty())
    throw std::invalid_argument("empty sweep grid");
  if (spec.num_seeds < 1) throw std::invalid_argument("need >= 1 seed");
  const std::vector<int> crosses =
      spec.cross_terms.empty() ? std::vector<int>{spec.base.R}
                               : spec.cross_terms;
  std::vector<SweepRow> rows;
  std::uint64_t cell = 0;
  for (const WindowSpec& w : spec.windows) {
    for (Method m : spec.methods) {
      for (int T : spec.taps) {
        const std::vector<int> rlist =
            m == Method::kPtwola ? crosses : std::vector<int>{0};
        for (int R : rlist) {
          for (int rep = 0; rep < spec.num_seeds; ++rep) {
            ScenarioConfig cfg = spec.base;
            cfg.window = w;
            cfg.method = m;
            cfg.T = T;
            cfg.R = R;
            cfg.seed = cell_seed(spec.base.seed, cell, rep);
            std::vector<MetricSeries> ms;
            std::string error;
            try {
              ms = run_simulation_multi(cfg, spec.syntheses, true);
            } catch (const std::exception& ex) {
              error = ex.what();
            }
            for (std::size_t i = 0; i < spec.syntheses.size(); ++i) {
              SweepRow row;
              row.window = window_name(w);
              row.synthesis = synthesis_name(spec.syntheses[i]);
              row.method = method_name(m);
              row.T = T;
              row.R = R;
              row.seed = cfg.seed;
              if (error.empty()) {
                row.metrics = ms[i];
              } else {
                row.failed = true;
                row.error = error;
              }
              rows.push_back(std::move(row));
            }
          }
          ++cell;
        }
      }
    }
  }
  return rows;
}

namespace {
std::string fmt6(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}
}  // namespace

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "window,synthesis,method,T,R,seed,steady_erle_db,system_distance_db,"
        "analytical_erle_db,flops_mult,flops_add\n";
  for (const SweepRow& r : rows) {
    os << r.window << ',' << r.synthesis << ',' << r.method << ',' << r.T
       << ',' << r.R << ',' << r.seed << ',';
    if (r.failed) {
      os << ",,,,\n";
      continue;
    }
    os << fmt6(r.metrics.steady_erle_db) << ','
       << fmt6(r.metrics.system_distance_db) << ',';
    if (!std::isnan(r.metrics.analytical_erle_db))
      os << fmt6(r.metrics.analytical_erle_db);
    os << ',' << r.metrics.flops_mult << ',' << r.metrics.flops_add << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepRow& r : rows) {
    nlohmann::ordered_json o;
    o["window"] = r.window;
    o["synthesis"] = r.synthesis;
    o["method"] = r.method;
    o["T"] = r.T;
    o["R"] = r.R;
    o["seed"] = r.seed;
    if (r.failed) {
      o["failed"] = true;
      o["error"] = r.error;
    } else {
      o["steady_erle_db"] = r.metrics.steady_erle_db;
      o["system_distance_db"] = r.metrics.system_distance_db;
      if (std::isnan(r.metrics.analytical_erle_db))
        o["analytical_erle_db"] = nullptr;
      else
        o["analytical_erle_db"] = r.metrics.analytical_erle_db;
      o["flops_mult"] = r.metrics.flops_mult;
      o["flops_add"] = r.metrics.flops_add;
    }
    arr.push_back(std::move(o));
  }
  os << arr.dump(2) << '\n';
}

}  // namespace wola
