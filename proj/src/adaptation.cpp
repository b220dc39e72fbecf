#include "wola/adaptation.hpp"

#include <stdexcept>

namespace wola {

RlsBank::RlsBank(int num_bands, int num_taps, double lambda, double p0)
    : taps_(num_taps), lambda_(lambda) {
  if (num_bands < 1 || num_taps < 1)
    throw std::invalid_argument("need at least one band and one tap");
  if (!(lambda > 0.0) || lambda > 1.0)
    throw std::invalid_argument("forgetting factor must be in (0, 1]");
  if (!(p0 > 0.0)) throw std::invalid_argument("p0 must be positive");
  c_.assign(num_bands, VecXcd::Zero(num_taps));
  P_.assign(num_bands, MatXcd::Identity(num_taps, num_taps) * p0);
}

cd RlsBank::predict(int k, const VecXcd& reg) const {
  return (c_[k].transpose() * reg).value();  // plain dot, no conjugation
}

MatXcd RlsBank::inverse_correlation(int k) const {
  return P_[k].selfadjointView<Eigen::Lower>();
}

RlsStep RlsBank::update(int k, const VecXcd& reg, cd desired) {
  if (reg.size() != taps_) throw std::invalid_argument("regressor size");
  const cd yk = predict(k, reg);
  const cd e = desired - yk;

  VecXcd u = reg.conjugate();
  MatXcd& P = P_[k];
  VecXcd v = P.selfadjointView<Eigen::Lower>() * u;
  const double s = lambda_ + u.dot(v).real();  // dot() conjugates u, as needed
  c_[k] += v * (e / s);
  P.selfadjointView<Eigen::Lower>().rankUpdate(v, -1.0 / s);
  P.triangularView<Eigen::Lower>() *= 1.0 / lambda_;
  // Rounding in the rank update leaves a small imaginary residue on the
  // diagonal; the 1/lambda rescale would grow it exponentially since nothing
  // else damps the anti-Hermitian component. Keep the diagonal exactly real.
  P.diagonal().imag().setZero();
  return {yk, e};
}

}  // namespace wola
