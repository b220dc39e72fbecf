#pragma once

#include "wola/fft.hpp"

#include <vector>

namespace wola {

struct RlsStep {
  cd estimate;  // a-priori output c . reg before this update
  cd error;     // desired - estimate
};

// Bank of independent complex RLS adapters, one per non-redundant subband.
class RlsBank {
 public:
  RlsBank(int num_bands, int num_taps, double lambda = 0.999,
          double p0 = 100.0);

  // A-priori estimate c_k . reg (plain dot product, no conjugation), then
  // coefficient and inverse-correlation update.
  RlsStep update(int k, const VecXcd& reg, cd desired);

  // A-priori estimate without adapting (for frozen-filter evaluation).
  cd predict(int k, const VecXcd& reg) const;

  const VecXcd& coeffs(int k) const { return c_[k]; }
  VecXcd& coeffs(int k) { return c_[k]; }
  // Hermitian inverse-correlation state (materialized from the maintained
  // triangle).
  MatXcd inverse_correlation(int k) const;
  int num_bands() const { return static_cast<int>(c_.size()); }
  int num_taps() const { return taps_; }

 private:
  int taps_;
  double lambda_;
  std::vector<VecXcd> c_;
  std::vector<MatXcd> P_;  // only lower triangle maintained
};

}  // namespace wola
