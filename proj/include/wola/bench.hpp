#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "wola/complexity.hpp"
#include "wola/fft.hpp"
#include "wola/prototype_design.hpp"

namespace wola {

enum class Synthesis { kMinNorm, kMinDistortion };

Synthesis parse_synthesis(const std::string& s);
std::string synthesis_name(Synthesis s);

// Process-wide design cache (prototype designs are deterministic and
// relatively expensive at N = 1024).
const VecXd& cached_analysis_window(const WindowSpec& w, int N);
const VecXd& cached_synthesis_window(const WindowSpec& w, int N, int D,
                                     Synthesis s);

struct ScenarioConfig {
  int N = 1024;
  int D = 512;
  WindowSpec window{};
  Synthesis synthesis = Synthesis::kMinNorm;
  Method method = Method::kGwola;
  int T = 1;  // taps per subband; total regressor length for ptwola
  int R = 0;  // ptwola single-sided cross-term count
  int L = 512;
  double t60 = 0.07;
  double ebr_db = 20.0;
  double sigma_u = 100.0;
  int frames = 4000;
  double fs = 16000.0;
  std::uint64_t seed = 1;
  double warmup_fraction = 0.75;
  void validate() const;
};

struct MetricSeries {
  VecXd erle_db_over_time;  // one value per frame hop
  double steady_erle_db = 0;
  double system_distance_db = 0;
  // Model prediction of the converged ERLE; only filled for gwola cells.
  double analytical_erle_db = std::numeric_limits<double>::quiet_NaN();
  long long flops_mult = 0;  // per frame, transform + filtering stages
  long long flops_add = 0;
};

// ERLE of y_hat against the aligned reference over samples [begin, end),
// capped at 300 dB.
double measure_erle(const VecXd& y_ref, const VecXd& y_hat, long begin,
                    long end);

// 10 log10(|w_ext - t_hat|^2 / |w_ext|^2) after zero-padding to a common
// length, capped below at -300 dB.
double system_distance(const VecXcd& t_hat, const VecXd& w_ext);

MetricSeries run_simulation(const ScenarioConfig& cfg);

// Same adaptation pass evaluated under several synthesis prototypes (the
// adapted coefficients do not depend on the synthesis side). Returns one
// MetricSeries per entry of syntheses.
std::vector<MetricSeries> run_simulation_multi(
    const ScenarioConfig& cfg, const std::vector<Synthesis>& syntheses,
    bool want_analytical = true);

struct SweepSpec {
  ScenarioConfig base;
  std::vector<WindowSpec> windows;
  std::vector<Synthesis> syntheses;
  std::vector<Method> methods;
  std::vector<int> taps;
  std::vector<int> cross_terms;  // ptwola cells only; others emit R = 0
  int num_seeds = 1;
};

struct SweepRow {
  std::string window;
  std::string synthesis;
  std::string method;
  int T = 0;
  int R = 0;
  std::uint64_t seed = 0;
  MetricSeries metrics;
  bool failed = false;
  std::string error;
};

// Cartesian sweep; syntheses within a cell share the seed and the
// adaptation pass, so min-norm/min-distortion rows are paired.
std::vector<SweepRow> sweep(const SweepSpec& spec);

std::uint64_t cell_seed(std::uint64_t base, std::uint64_t cell_index,
                        std::uint64_t rep);

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_json(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace wola
