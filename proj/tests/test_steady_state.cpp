#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "wola/prototype_design.hpp"
#include "wola/steady_state.hpp"

using namespace wola;

namespace {

constexpr double kPi = 3.14159265358979323846;

cd phase(double turns) { return std::polar(1.0, 2.0 * kPi * turns); }

VecXd randn_vec(long n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  VecXd v(n);
  for (long i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

// Independent normal-equations solve of the per-subband steady-state
// system: columns are phase-rotated shifts of h0, the target is the
// h0-convolved, bin-demodulated response.
VecXcd subband_ls_oracle(const VecXd& h0, int T, const VecXd& w, int k) {
  const int N = static_cast<int>(h0.size());
  MatXcd A = MatXcd::Zero(2 * N - 1, T);
  for (int t = 0; t < T; ++t)
    for (int n = t; n < t + N; ++n)
      A(n, t) = h0(n - t) * phase(-double(k) * t / N);
  VecXcd b = VecXcd::Zero(2 * N - 1);
  for (int j = 0; j < N; ++j)
    for (int n = j; n < j + N; ++n)
      b(n) += h0(n - j) * w(j) * phase(-double(k) * j / N);
  return (A.adjoint() * A).ldlt().solve(A.adjoint() * b);
}

}  // namespace

TEST_CASE("Z0 with a full tap set is the identity") {
  VecXd h0 = make_window({WindowKind::kRootHann}, 8);
  MatXd Z = compute_Z0(h0, 8);
  CHECK((Z - MatXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Z0 always carries a leading identity block") {
  for (int N : {16, 1024}) {
    for (const char* name : {"rect", "cosine", "root-hann"}) {
      VecXd h0 = make_window(parse_window(name), N);
      for (int T : {1, 4, 15}) {
        CAPTURE(N);
        CAPTURE(name);
        CAPTURE(T);
        MatXd Z = compute_Z0(h0, T);
        REQUIRE(Z.rows() == T);
        REQUIRE(Z.cols() == N);
        CHECK((Z.leftCols(T) - MatXd::Identity(T, T)).cwiseAbs().maxCoeff() <
              1e-10);
      }
    }
  }
}

TEST_CASE("rect Z0 at two taps matches hand values") {
  VecXd h0 = make_window({WindowKind::kRect}, 8);
  MatXd Z = compute_Z0(h0, 2);
  CHECK(std::abs(Z(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(Z(1, 1) - 1.0) < 1e-12);
  CHECK(std::abs(Z(0, 1)) < 1e-12);
  CHECK(std::abs(Z(1, 0)) < 1e-12);
}

TEST_CASE("subband LS with a unit response gives unit taps") {
  const int N = 16;
  VecXd h0 = make_window({WindowKind::kRootHann}, N);
  VecXd w = VecXd::Zero(N);
  w(0) = 1.0;
  for (int k = 0; k <= N / 2; ++k) {
    VecXcd c = solve_subband_ls(h0, 1, w, k);
    CHECK(std::abs(c(0) - cd(1, 0)) < 1e-10);
  }
}

TEST_CASE("subband LS with full taps reproduces the response exactly") {
  const int N = 8, T = 8;
  std::mt19937_64 rng(17);
  VecXd h0 = make_window({WindowKind::kCosine}, N);
  VecXd w = randn_vec(N, rng);
  for (int k : {0, 1, 3, 4}) {
    VecXcd c = solve_subband_ls(h0, T, w, k);
    // Rebuild the system and confirm a zero residual (consistency).
    MatXcd A = MatXcd::Zero(2 * N - 1, T);
    for (int t = 0; t < T; ++t)
      for (int n = t; n < t + N; ++n)
        A(n, t) = h0(n - t) * phase(-double(k) * t / N);
    VecXcd b = VecXcd::Zero(2 * N - 1);
    for (int j = 0; j < N; ++j)
      for (int n = j; n < j + N; ++n)
        b(n) += h0(n - j) * w(j) * phase(-double(k) * j / N);
    CHECK((A * c - b).norm() < 1e-9 * b.norm());
  }
}

TEST_CASE("subband LS matches the normal-equations oracle") {
  const int N = 16, T = 4;
  std::mt19937_64 rng(19);
  VecXd h0 = make_window({WindowKind::kRootHann}, N);
  VecXd w = randn_vec(N, rng);
  for (int k = 0; k <= N / 2; ++k) {
    VecXcd ref = subband_ls_oracle(h0, T, w, k);
    VecXcd got = solve_subband_ls(h0, T, w, k);
    CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("closed-form images match the per-subband LS route") {
  std::mt19937_64 rng(23);
  for (int N : {16, 64}) {
    const int T = N == 16 ? 3 : 5;
    VecXd h0 = make_window({WindowKind::kRootHann}, N);
    VecXd w = randn_vec(N, rng);
    MatXcd viaZ = steady_images(h0, T, w);
    MatXcd c(N, T);
    for (int k = 0; k < N; ++k)
      c.row(k) = solve_subband_ls(h0, T, w, k).transpose();
    MatXcd viaLs = images_from_filters(c);
    CHECK((viaZ - viaLs).cwiseAbs().maxCoeff() /
              viaZ.cwiseAbs().maxCoeff() <
          1e-9);
  }
}

TEST_CASE("responses inside the tap span collapse to single spikes") {
  const int N = 16, T = 4;
  std::mt19937_64 rng(29);
  VecXd h0 = make_window({WindowKind::kCosine}, N);
  VecXd w = VecXd::Zero(N);
  w.head(T) = randn_vec(T, rng);
  MatXcd ct = steady_images(h0, T, w);
  for (int l = 0; l < T; ++l) {
    CHECK(std::abs(ct(l, N - 1) - cd(N * w(l), 0)) < 1e-9);
    for (int n = 0; n < N - 1; ++n) CHECK(std::abs(ct(l, n)) < 1e-9);
  }
}

TEST_CASE("image support stays within the residual span") {
  const int N = 64, T = 7, L = 23;
  std::mt19937_64 rng(31);
  VecXd h0 = make_window({WindowKind::kRect}, N);
  VecXd w = VecXd::Zero(N);
  w.head(L) = randn_vec(L, rng);
  MatXcd ct = steady_images(h0, T, w);
  const double thresh = 1e-10 * ct.cwiseAbs().maxCoeff();
  for (int l = 0; l < T; ++l) {
    int support = 0;
    for (int n = 0; n < N; ++n)
      if (std::abs(ct(l, n)) > thresh) ++support;
    CHECK(support <= L - T + 1);
  }
}

TEST_CASE("Z0 columns beyond the response support never matter") {
  const int N = 16, T = 3, L = 6;
  std::mt19937_64 rng(37);
  VecXd h0 = make_window({WindowKind::kRootHann}, N);
  VecXd w = VecXd::Zero(N);
  w.head(L) = randn_vec(L, rng);
  MatXd Z = compute_Z0(h0, T);
  MatXd Zcut = Z;
  Zcut.rightCols(N - L).setZero();
  MatXcd ct = steady_images(h0, T, w);
  for (int l = 0; l < T; ++l)
    for (int n = 0; n < N; ++n) {
      const int idx = (n + l + 1) % N;
      CHECK(std::abs(ct(l, n) - cd(N * Zcut(l, idx) * w(idx), 0)) < 1e-12);
    }
}

TEST_CASE("analytical ERLE of a trivially modelable response is huge") {
  const int N = 16, D = 8;
  VecXd h0 = make_window({WindowKind::kRootHann}, N);
  VecXd f0 = design_min_norm(h0, D);
  VecXd w = VecXd::Zero(N);
  w(0) = 1.0;
  ErleBreakdown b = analytical_erle(h0, f0, D, 1, w);
  CHECK(b.erle_db > 250.0);
}

TEST_CASE("analytical ERLE agrees with the characterize route") {
  const int N = 16, D = 8, T = 3;
  std::mt19937_64 rng(41);
  VecXd h0 = make_window({WindowKind::kCosine}, N);
  VecXd f0 = design_min_norm(h0, D);
  VecXd w = randn_vec(N, rng);
  ErleBreakdown direct = analytical_erle(h0, f0, D, T, w);

  MatXcd c(N, T);
  for (int k = 0; k < N; ++k)
    c.row(k) = solve_subband_ls(h0, T, w, k).transpose();
  LptvResponse r = characterize(h0, f0, D, c);
  double dist = 0;
  for (long n = 0; n < r.t_hat.size(); ++n) {
    double target = (n >= N - 1 && n <= 2 * N - 2) ? w(n - (N - 1)) : 0.0;
    dist += std::norm(r.t_hat(n) - cd(target, 0));
  }
  double alias = r.a_hat.cwiseAbs2().sum();
  double erle = 10.0 * std::log10(w.squaredNorm() / (dist + alias));

  CHECK(direct.distortion == doctest::Approx(dist).epsilon(1e-9));
  CHECK(direct.alias == doctest::Approx(alias).epsilon(1e-9));
  CHECK(std::abs(direct.erle_db - erle) < 1e-9);
}

TEST_CASE("analytical ERLE never degrades with more taps") {
  const int N = 1024, D = 512;
  std::mt19937_64 rng(1234);
  VecXd h0 = make_window({WindowKind::kRootHann}, N);
  VecXd f0 = design_min_norm(h0, D);
  VecXd w = polack_rir(512, 16000, 0.07, rng);
  Kernels ker = compute_kernels(h0, f0, D);
  double prev = -1e9;
  for (int T = 1; T <= 103; T += 2) {
    double e = analytical_erle(h0, f0, D, T, w, &ker).erle_db;
    CHECK(e >= prev - 1e-6);
    prev = e;
  }
}

TEST_CASE("min-distortion synthesis dominates min-norm analytically") {
  const int N = 1024, D = 512;
  std::mt19937_64 rng(99);
  VecXd w = polack_rir(512, 16000, 0.07, rng);
  for (const char* name : {"rect", "cosine", "root-hann"}) {
    CAPTURE(name);
    VecXd h0 = make_window(parse_window(name), N);
    VecXd fmn = design_min_norm(h0, D);
    VecXd fmd = design_min_distortion(h0, D);
    Kernels kmn = compute_kernels(h0, fmn, D);
    Kernels kmd = compute_kernels(h0, fmd, D);
    for (int T : {1, 11, 31, 61, 101}) {
      double emn = analytical_erle(h0, fmn, D, T, w, &kmn).erle_db;
      double emd = analytical_erle(h0, fmd, D, T, w, &kmd).erle_db;
      CHECK(emd >= emn - 1e-6);
    }
  }
}

TEST_CASE("room responses are deterministic and correctly scaled") {
  std::mt19937_64 a(7), b(7);
  VecXd w1 = polack_rir(256, 16000, 0.07, a);
  VecXd w2 = polack_rir(256, 16000, 0.07, b);
  CHECK((w1 - w2).cwiseAbs().maxCoeff() == 0.0);

  // Enormous decay horizon: the envelope is flat and the draw matches the
  // plain Gaussian stream.
  std::mt19937_64 c(9), d(9);
  VecXd w3 = polack_rir(64, 16000, 1e9, c);
  std::normal_distribution<double> nd;
  for (int n = 0; n < 64; ++n) CHECK(std::abs(w3(n) - nd(d)) < 1e-9);

  // Undoing the envelope leaves unit-variance samples.
  const double kappa = 3.0 * std::log(10.0) / (0.07 * 16000.0);
  double acc = 0;
  long cnt = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    std::mt19937_64 rng(seed);
    VecXd w = polack_rir(512, 16000, 0.07, rng);
    for (int n = 0; n < 512; ++n) {
      double v = w(n) * std::exp(kappa * n);
      acc += v * v;
      ++cnt;
    }
  }
  double var = acc / cnt;
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / cnt));
}
