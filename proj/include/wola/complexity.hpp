#pragma once

#include <cstdint>
#include <string>

namespace wola {

enum class Method { kGwola, kPtwola, kConventional };

Method parse_method(const std::string& s);
std::string method_name(Method m);

struct ComplexityReport {
  long long real_mults = 0;
  long long real_adds = 0;
};

// Per-frame operation counts of the regressor transform + subband filtering
// stages (synthesis windowing and overlap-add excluded). Cost model: a
// radix-2 real-signal FFT of size N is 2N*log2(N) mults and 3N*log2(N)
// adds; windowing is N mults; a complex*complex product is 4 mults + 2
// adds, complex*real is 2 mults; accumulating S products costs 2(S-1) adds
// per bin; a real signal has N/2 distinct complex bins per frame (the two
// real bins at DC and Nyquist count as one pair).
ComplexityReport closed_form_flops(Method m, int N, int T, int R = 0);

// Runtime accumulator over the same cost model; engines report each stage
// as it executes.
class FlopCounter {
 public:
  void add_fft(int N);
  void add_window(int N);
  void add_products_cc(long long bins, long long terms);
  void add_products_cr(long long bins, long long terms);
  void add_accumulate(long long bins, long long terms);
  void add_real_adds(long long n);
  void reset() { m_ = a_ = 0; }
  long long mults() const { return m_; }
  long long adds() const { return a_; }

 private:
  long long m_ = 0;
  long long a_ = 0;
};

}  // namespace wola
