#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "wola/fft.hpp"

namespace wola {

enum class WindowKind { kRect, kCosine, kRootHann, kRaisedRoot };

struct WindowSpec {
  WindowKind kind = WindowKind::kRootHann;
  // Raised-root parameters: sqrt(rho - eta*cos(2 pi n / N)).
  double rho = 1.0;
  double eta = 1.0;
};

std::string window_name(const WindowSpec& w);
// Parses "rect", "cosine", "root-hann"/"root_hann" or "raised:RHO:ETA".
WindowSpec parse_window(const std::string& s);

// Length-N analysis prototype h0.
VecXd make_window(const WindowSpec& spec, int N);

// Exact cosine-series projection of a length-N window (N even):
//   h0(n) = sum_{r=0}^{N/2} gamma(r) cos(2 pi r n / N).
// gamma(r) is the real-DFT projection, not a series expansion.
struct CosineSeries {
  VecXd gamma;  // size N/2 + 1
  // Smallest R such that |gamma(r)| <= tol for all r > R.
  int effective_order(double tol = 1e-12) const;
};
CosineSeries cosine_series(const VecXd& h0);

// PR constraint system on the synthesis prototype f0 (real-split rows):
//   N*psi_m(N-1) = delta_{m0},  m = 0..D-1.
struct PrSystem {
  MatXd A;   // 2D x N
  VecXd b;   // 2D
};
PrSystem pr_constraints(const VecXd& h0, int D);

// Minimum-norm synthesis prototype subject to PR.
VecXd design_min_norm(const VecXd& h0, int D);

// Minimum-distortion synthesis: minimizes the expected single-tap
// end-to-end error (distortion + aliasing) under an exponential
// reverberation-decay weight, subject to PR. t60_design is the nominal
// decay horizon of the weight, a design constant independent of the
// simulated room.
VecXd design_min_distortion(const VecXd& h0, int D, double t60_design = 0.10,
                            double fs = 16000.0);

struct PrReport {
  int tau = 0;                    // reconstruction delay, N-1
  double max_distortion_dev = 0;  // max |T(z) - z^-tau| coefficient deviation
  double max_alias = 0;           // max |A_m(z)| coefficient magnitude
  bool pass(double threshold = 1e-10) const {
    return max_distortion_dev < threshold && max_alias < threshold;
  }
};
PrReport verify_pr(const VecXd& h0, const VecXd& f0, int D);

struct DesignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wola
