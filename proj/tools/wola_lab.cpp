#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wola/bench.hpp"
#include "wola/steady_state.hpp"

namespace {

using nlohmann::ordered_json;

struct Options {
  int n = 1024;
  int d = 512;
  std::string window = "root-hann";
  std::string synthesis = "min-norm";
  std::string method = "gwola";
  std::string taps = "1";
  std::string cross_terms = "0";
  int rir_len = 512;
  double t60 = 0.07;
  double ebr_db = 20.0;
  double fs = 16000.0;
  int frames = 4000;
  std::uint64_t seed = 1;
  int seeds = 1;
  double sigma_u = 100.0;        // config-file only
  double warmup = 0.75;          // config-file only
  std::string out;
  std::string format = "csv";
  std::string config;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + s);
  return out;
}

std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  for (const std::string& item : split_list(s)) out.push_back(std::stoi(item));
  return out;
}

int single_int(const std::string& s, const char* what) {
  const std::vector<int> v = split_ints(s);
  if (v.size() != 1)
    throw std::invalid_argument(std::string("expected a single ") + what);
  return v[0];
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--n", o.n, "Transform size N (power of two)");
  sub->add_option("--d", o.d, "Hop size D (must divide N)");
  sub->add_option("--window", o.window,
                  "Analysis window: rect, cosine, root-hann, raised:RHO:ETA "
                  "(comma list for grids)");
  sub->add_option("--synthesis", o.synthesis,
                  "Synthesis design: min-norm, min-distortion "
                  "(comma list for grids)");
  sub->add_option("--method", o.method,
                  "Subband engine: gwola, ptwola, conventional "
                  "(comma list for grids)");
  sub->add_option("--taps", o.taps,
                  "Subband filter taps T (comma list for grids)");
  sub->add_option("--cross-terms", o.cross_terms,
                  "PT-WOLA cross-terms R (comma list for grids)");
  sub->add_option("--rir-len", o.rir_len, "Room response length L (<= N)");
  sub->add_option("--t60", o.t60, "Reverberation time in seconds");
  sub->add_option("--ebr-db", o.ebr_db, "Echo-to-background ratio in dB");
  sub->add_option("--frames", o.frames, "Number of adaptation frames");
  sub->add_option("--fs", o.fs, "Sample rate in Hz");
  sub->add_option("--seed", o.seed, "Base RNG seed");
  sub->add_option("--seeds", o.seeds, "Number of seeds per grid cell");
  sub->add_option("--out", o.out, "Output path (stdout if omitted)");
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--config", o.config,
                  "Flat JSON config file; command-line flags override it");
}

void apply_config(const CLI::App* sub, Options& o) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw std::runtime_error("cannot open config: " + o.config);
  nlohmann::json j;
  in >> j;
  const auto unset = [&](const char* flag) { return sub->count(flag) == 0; };
  const auto as_list = [](const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw std::runtime_error("config value must be an integer or string");
  };
  if (j.contains("N") && unset("--n")) o.n = j["N"].get<int>();
  if (j.contains("D") && unset("--d")) o.d = j["D"].get<int>();
  if (j.contains("window") && unset("--window"))
    o.window = j["window"].get<std::string>();
  if (j.contains("synthesis") && unset("--synthesis"))
    o.synthesis = j["synthesis"].get<std::string>();
  if (j.contains("method") && unset("--method"))
    o.method = j["method"].get<std::string>();
  if (j.contains("T") && unset("--taps")) o.taps = as_list(j["T"]);
  if (j.contains("R") && unset("--cross-terms"))
    o.cross_terms = as_list(j["R"]);
  if (j.contains("L") && unset("--rir-len")) o.rir_len = j["L"].get<int>();
  if (j.contains("t60") && unset("--t60")) o.t60 = j["t60"].get<double>();
  if (j.contains("ebr_db") && unset("--ebr-db"))
    o.ebr_db = j["ebr_db"].get<double>();
  if (j.contains("frames") && unset("--frames"))
    o.frames = j["frames"].get<int>();
  if (j.contains("fs") && unset("--fs")) o.fs = j["fs"].get<double>();
  if (j.contains("seed") && unset("--seed"))
    o.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("sigma_u")) o.sigma_u = j["sigma_u"].get<double>();
  if (j.contains("warmup_fraction"))
    o.warmup = j["warmup_fraction"].get<double>();
}

int with_output(const std::string& path,
                const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(std::cout);
    return 0;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output: " + path);
  fn(f);
  return 0;
}

std::string fmt6(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

wola::ScenarioConfig make_cfg(const Options& o) {
  wola::ScenarioConfig c;
  c.N = o.n;
  c.D = o.d;
  c.window = wola::parse_window(o.window);
  c.synthesis = wola::parse_synthesis(o.synthesis);
  c.method = wola::parse_method(o.method);
  c.T = single_int(o.taps, "tap count");
  c.R = single_int(o.cross_terms, "cross-term count");
  c.L = o.rir_len;
  c.t60 = o.t60;
  c.ebr_db = o.ebr_db;
  c.sigma_u = o.sigma_u;
  c.frames = o.frames;
  c.fs = o.fs;
  c.seed = o.seed;
  c.warmup_fraction = o.warmup;
  return c;
}

int run_design(const Options& o) {
  const wola::WindowSpec wspec = wola::parse_window(o.window);
  const wola::Synthesis syn = wola::parse_synthesis(o.synthesis);
  const wola::VecXd h0 = wola::make_window(wspec, o.n);
  const wola::VecXd f0 = syn == wola::Synthesis::kMinNorm
                             ? wola::design_min_norm(h0, o.d)
                             : wola::design_min_distortion(h0, o.d);
  return with_output(o.out, [&](std::ostream& os) {
    if (o.format == "json") {
      ordered_json j;
      j["window"] = wola::window_name(wspec);
      j["synthesis"] = wola::synthesis_name(syn);
      j["N"] = o.n;
      j["D"] = o.d;
      j["h0"] = std::vector<double>(h0.data(), h0.data() + h0.size());
      j["f0"] = std::vector<double>(f0.data(), f0.data() + f0.size());
      os << j.dump(2) << '\n';
      return;
    }
    os << "n,h0,f0\n" << std::setprecision(17);
    for (int i = 0; i < o.n; ++i)
      os << i << ',' << h0[i] << ',' << f0[i] << '\n';
  });
}

int run_verify_pr(const Options& o) {
  const wola::WindowSpec wspec = wola::parse_window(o.window);
  const wola::Synthesis syn = wola::parse_synthesis(o.synthesis);
  const wola::VecXd h0 = wola::make_window(wspec, o.n);
  const wola::VecXd f0 = syn == wola::Synthesis::kMinNorm
                             ? wola::design_min_norm(h0, o.d)
                             : wola::design_min_distortion(h0, o.d);
  const wola::PrReport rep = wola::verify_pr(h0, f0, o.d);
  with_output(o.out, [&](std::ostream& os) {
    if (o.format == "json") {
      ordered_json j;
      j["window"] = wola::window_name(wspec);
      j["synthesis"] = wola::synthesis_name(syn);
      j["N"] = o.n;
      j["D"] = o.d;
      j["delay"] = rep.tau;
      j["max_distortion_dev"] = rep.max_distortion_dev;
      j["max_alias"] = rep.max_alias;
      j["pass"] = rep.pass();
      os << j.dump(2) << '\n';
      return;
    }
    os << "window,synthesis,N,D,delay,max_distortion_dev,max_alias,pass\n"
       << wola::window_name(wspec) << ',' << wola::synthesis_name(syn) << ','
       << o.n << ',' << o.d << ',' << rep.tau << ','
       << fmt6(rep.max_distortion_dev) << ',' << fmt6(rep.max_alias) << ','
       << (rep.pass() ? "true" : "false") << '\n';
  });
  return rep.pass() ? 0 : 2;
}

int run_analyze(const Options& o) {
  struct Row {
    std::string window, synthesis;
    int T;
    double erle_db, distortion_err, alias_err;
  };
  std::vector<Row> rows;
  for (const std::string& wname : split_list(o.window)) {
    const wola::WindowSpec wspec = wola::parse_window(wname);
    const wola::VecXd& h0 = wola::cached_analysis_window(wspec, o.n);
    for (const std::string& sname : split_list(o.synthesis)) {
      const wola::Synthesis syn = wola::parse_synthesis(sname);
      const wola::VecXd& f0 =
          wola::cached_synthesis_window(wspec, o.n, o.d, syn);
      const wola::Kernels ker = wola::compute_kernels(h0, f0, o.d);
      for (int T : split_ints(o.taps)) {
        double erle = 0, dist = 0, alias = 0;
        for (int i = 0; i < o.seeds; ++i) {
          std::mt19937_64 rng(o.seed + static_cast<std::uint64_t>(i));
          const wola::VecXd w =
              wola::polack_rir(o.rir_len, o.fs, o.t60, rng);
          const wola::ErleBreakdown r =
              wola::analytical_erle(h0, f0, o.d, T, w, &ker);
          erle += r.erle_db;
          dist += r.distortion;
          alias += r.alias;
        }
        rows.push_back({wola::window_name(wspec), wola::synthesis_name(syn),
                        T, erle / o.seeds, dist / o.seeds, alias / o.seeds});
      }
    }
  }
  return with_output(o.out, [&](std::ostream& os) {
    if (o.format == "json") {
      ordered_json arr = ordered_json::array();
      for (const Row& r : rows) {
        ordered_json j;
        j["window"] = r.window;
        j["synthesis"] = r.synthesis;
        j["T"] = r.T;
        j["erle_db"] = r.erle_db;
        j["distortion_err"] = r.distortion_err;
        j["alias_err"] = r.alias_err;
        arr.push_back(std::move(j));
      }
      os << arr.dump(2) << '\n';
      return;
    }
    os << "window,synthesis,T,erle_db,distortion_err,alias_err\n";
    for (const Row& r : rows)
      os << r.window << ',' << r.synthesis << ',' << r.T << ','
         << fmt6(r.erle_db) << ',' << fmt6(r.distortion_err) << ','
         << fmt6(r.alias_err) << '\n';
  });
}

int run_simulate(const Options& o) {
  wola::ScenarioConfig cfg = make_cfg(o);
  std::vector<wola::SweepRow> rows;
  for (int i = 0; i < o.seeds; ++i) {
    cfg.seed = o.seed + static_cast<std::uint64_t>(i);
    wola::SweepRow row;
    row.window = wola::window_name(cfg.window);
    row.synthesis = wola::synthesis_name(cfg.synthesis);
    row.method = wola::method_name(cfg.method);
    row.T = cfg.T;
    row.R = cfg.R;
    row.seed = cfg.seed;
    row.metrics = wola::run_simulation(cfg);
    rows.push_back(std::move(row));
  }
  return with_output(o.out, [&](std::ostream& os) {
    if (o.format == "json") {
      ordered_json arr = ordered_json::array();
      for (const wola::SweepRow& r : rows) {
        ordered_json j;
        j["window"] = r.window;
        j["synthesis"] = r.synthesis;
        j["method"] = r.method;
        j["T"] = r.T;
        j["R"] = r.R;
        j["seed"] = r.seed;
        j["steady_erle_db"] = r.metrics.steady_erle_db;
        j["system_distance_db"] = r.metrics.system_distance_db;
        if (std::isnan(r.metrics.analytical_erle_db))
          j["analytical_erle_db"] = nullptr;
        else
          j["analytical_erle_db"] = r.metrics.analytical_erle_db;
        j["flops_mult"] = r.metrics.flops_mult;
        j["flops_add"] = r.metrics.flops_add;
        j["erle_db_over_time"] = std::vector<double>(
            r.metrics.erle_db_over_time.data(),
            r.metrics.erle_db_over_time.data() +
                r.metrics.erle_db_over_time.size());
        arr.push_back(std::move(j));
      }
      os << arr.dump(2) << '\n';
      return;
    }
    wola::write_csv(os, rows);
  });
}

int run_sweep(const Options& o) {
  wola::SweepSpec spec;
  spec.base.N = o.n;
  spec.base.D = o.d;
  spec.base.L = o.rir_len;
  spec.base.t60 = o.t60;
  spec.base.ebr_db = o.ebr_db;
  spec.base.sigma_u = o.sigma_u;
  spec.base.frames = o.frames;
  spec.base.fs = o.fs;
  spec.base.seed = o.seed;
  spec.base.warmup_fraction = o.warmup;
  for (const std::string& w : split_list(o.window))
    spec.windows.push_back(wola::parse_window(w));
  for (const std::string& s : split_list(o.synthesis))
    spec.syntheses.push_back(wola::parse_synthesis(s));
  for (const std::string& m : split_list(o.method))
    spec.methods.push_back(wola::parse_method(m));
  spec.taps = split_ints(o.taps);
  spec.cross_terms = split_ints(o.cross_terms);
  spec.num_seeds = o.seeds;
  const std::vector<wola::SweepRow> rows = wola::sweep(spec);
  return with_output(o.out, [&](std::ostream& os) {
    if (o.format == "json")
      wola::write_json(os, rows);
    else
      wola::write_csv(os, rows);
  });
}

int run_complexity(const Options& o) {
  struct Row {
    wola::Method m;
    int T, R;
    wola::ComplexityReport rep;
  };
  std::vector<Row> rows;
  for (const std::string& mname : split_list(o.method)) {
    const wola::Method m = wola::parse_method(mname);
    for (int T : split_ints(o.taps)) {
      std::vector<int> rlist{0};
      if (m == wola::Method::kPtwola) {
        rlist.clear();
        for (int R : split_ints(o.cross_terms))
          if (R >= 0 && 2 * R + 1 <= T) rlist.push_back(R);
      }
      for (int R : rlist)
        rows.push_back({m, T, R, wola::closed_form_flops(m, o.n, T, R)});
    }
  }
  return with_output(o.out, [&](std::ostream& os) {
    if (o.format == "json") {
      ordered_json arr = ordered_json::array();
      for (const Row& r : rows) {
        ordered_json j;
        j["method"] = wola::method_name(r.m);
        j["N"] = o.n;
        j["T"] = r.T;
        j["R"] = r.R;
        j["real_mults"] = r.rep.real_mults;
        j["real_adds"] = r.rep.real_adds;
        arr.push_back(std::move(j));
      }
      os << arr.dump(2) << '\n';
      return;
    }
    os << "method,N,T,R,real_mults,real_adds\n";
    for (const Row& r : rows)
      os << wola::method_name(r.m) << ',' << o.n << ',' << r.T << ',' << r.R
         << ',' << r.rep.real_mults << ',' << r.rep.real_adds << '\n';
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized WOLA subband system identification lab"};
  app.require_subcommand(1);
  Options o;
  CLI::App* design =
      app.add_subcommand("design", "Design an analysis/synthesis window pair");
  CLI::App* verify = app.add_subcommand(
      "verify-pr", "Check perfect reconstruction of a designed pair");
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Closed-form steady-state ERLE analysis over a tap grid");
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run one adaptive echo-cancellation scenario");
  CLI::App* sw = app.add_subcommand(
      "sweep", "Scenario grid; one output row per cell per seed");
  CLI::App* cx = app.add_subcommand(
      "complexity", "Closed-form per-frame real multiply/add counts");
  for (CLI::App* s : {design, verify, analyze, simulate, sw, cx})
    add_common(s, o);
  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  try {
    apply_config(sub, o);
    if (sub == design) return run_design(o);
    if (sub == verify) return run_verify_pr(o);
    if (sub == analyze) return run_analyze(o);
    if (sub == simulate) return run_simulate(o);
    if (sub == sw) return run_sweep(o);
    return run_complexity(o);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
}
