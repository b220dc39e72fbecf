#include "wola/complexity.hpp"

#include <bit>
#include <stdexcept>

namespace wola {

Method parse_method(const std::string& s) {
  if (s == "gwola") return Method::kGwola;
  if (s == "ptwola") return Method::kPtwola;
  if (s == "conventional") return Method::kConventional;
  throw std::invalid_argument("unknown method: " + s);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kGwola:
      return "gwola";
    case Method::kPtwola:
      return "ptwola";
    case Method::kConventional:
      return "conventional";
  }
  return "?";
}

namespace {
long long log2_exact(int N) {
  if (N < 2 || std::popcount(static_cast<unsigned>(N)) != 1)
    throw std::invalid_argument("N must be a power of two >= 2");
  return std::countr_zero(static_cast<unsigned>(N));
}
}  // namespace

ComplexityReport closed_form_flops(Method m, int N, int T, int R) {
  const long long lg = log2_exact(N);
  const long long n = N;
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  ComplexityReport rep;
  switch (m) {
    case Method::kGwola:
      rep.real_mults = T * n * (2 * lg + 3);
      rep.real_adds = T * n * (3 * lg + 2) - n;
      break;
    case Method::kPtwola: {
      if (R < 0 || T < 2 * R + 1)
        throw std::invalid_argument("ptwola requires 0 <= 2R+1 <= T");
      rep.real_mults = 2 * n * lg + n * (2 * R + T + 1);
      rep.real_adds = 3 * n * lg + (T - 2 * R - 1) + n * (2 * R + T);
      break;
    }
    case Method::kConventional:
      // One analysis transform per frame; past frame spectra are reused.
      rep.real_mults = 2 * n * lg + n + 2 * n * T;
      rep.real_adds = 3 * n * lg + n * (2 * T - 1);
      break;
  }
  return rep;
}

void FlopCounter::add_fft(int N) {
  const long long lg = log2_exact(N);
  m_ += 2LL * N * lg;
  a_ += 3LL * N * lg;
}

void FlopCounter::add_window(int N) { m_ += N; }

void FlopCounter::add_products_cc(long long bins, long long terms) {
  m_ += 4 * bins * terms;
  a_ += 2 * bins * terms;
}

void FlopCounter::add_products_cr(long long bins, long long terms) {
  m_ += 2 * bins * terms;
}

void FlopCounter::add_accumulate(long long bins, long long terms) {
  if (terms > 1) a_ += 2 * bins * (terms - 1);
}

void FlopCounter::add_real_adds(long long n) { a_ += n; }

}  // namespace wola
