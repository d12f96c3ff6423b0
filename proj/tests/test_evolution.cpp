#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "spinchain/chain_model.hpp"
#include "spinchain/evolution.hpp"

using namespace spinchain;

namespace {

ChainSpec xy(int n, double a) { return {n, ChainModel::XYEndModulated, a}; }

double closed_form_p5(double a, double t) {
  const double c = std::cos(a * t);
  const double num = c * a * a + 2.0 * c - a * a * std::cos(t * std::sqrt(a * a + 2.0)) - 2.0;
  const double den = a * a + 2.0;
  return 0.25 * num * num / (den * den);
}

}  // namespace

TEST_CASE("decompose reconstructs the block") {
  auto blk = k_excitation_block(xy(8, 0.45), 2);
  auto sd = decompose(blk);
  Eigen::MatrixXd recon = sd.eigenvectors *
                          sd.eigenvalues.asDiagonal() *
                          sd.eigenvectors.transpose();
  CHECK((recon - blk.matrix).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::MatrixXd gram = sd.eigenvectors.transpose() * sd.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("2x2 block eigenvalues") {
  auto sd = decompose(k_excitation_block(xy(2, 0.7), 1));
  CHECK(sd.eigenvalues(0) == doctest::Approx(-0.7));
  CHECK(sd.eigenvalues(1) == doctest::Approx(0.7));
}

TEST_CASE("amplitude at t=0 is the identity") {
  auto sd = decompose(k_excitation_block(xy(6, 0.3), 2));
  for (std::size_t i = 0; i < sd.basis.dim(); ++i) {
    CHECK(std::abs(amplitude(sd, i, i, 0.0) - 1.0) < 1e-12);
    if (i > 0) CHECK(std::abs(amplitude(sd, 0, i, 0.0)) < 1e-12);
  }
}

TEST_CASE("N=2 Rabi closed form") {
  const double a = 0.37;
  auto sd = decompose(k_excitation_block(xy(2, a), 1));
  for (double t : {0.1, 1.0, 4.5}) {
    const double p = std::norm(amplitude(sd, 0, 1, t));
    CHECK(p == doctest::Approx(std::sin(a * t) * std::sin(a * t)).epsilon(1e-12));
  }
  const double t_perfect = std::numbers::pi / (2.0 * a);
  CHECK(std::norm(amplitude(sd, 0, 1, t_perfect)) == doctest::Approx(1.0));
}

TEST_CASE("N=5 transfer probability matches the closed form") {
  for (double a = 0.1; a < 0.95; a += 0.1) {
    auto sd = decompose(k_excitation_block(xy(5, a), 1));
    double worst = 0.0;
    for (double t = 0.0; t <= 50.0; t += 0.7) {
      const double p = std::norm(amplitude(sd, 0, 4, t));
      worst = std::max(worst, std::abs(p - closed_form_p5(a, t)));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("propagate is consistent with amplitude and unitary") {
  auto sd = decompose(k_excitation_block(xy(9, 0.52), 1));
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(9);
  e1(0) = 1.0;
  const double t = 13.7;
  Eigen::VectorXcd psi = propagate(sd, e1, t);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
  for (int n = 0; n < 9; ++n)
    CHECK(std::abs(psi(n) - amplitude(sd, 0, n, t)) < 1e-12);
  // group property
  Eigen::VectorXcd two_step = propagate(sd, propagate(sd, e1, 5.1), 8.6);
  CHECK((two_step - psi).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("unitarity and mirror symmetry over random specs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ua(0.05, 1.0), ut(0.0, 300.0);
  std::uniform_int_distribution<int> un(3, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const int N = un(rng);
    auto sd = decompose(k_excitation_block(xy(N, ua(rng)), 1));
    const double t = ut(rng);
    double total = 0.0;
    for (int n = 0; n < N; ++n) total += std::norm(amplitude(sd, 0, n, t));
    CHECK(std::abs(total - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(amplitude(sd, 0, N - 1, t)) -
                   std::abs(amplitude(sd, N - 1, 0, t))) < 1e-12);
    // mirror: |f_{n,1}| = |f_{N+1-n,N}| for clean chains
    for (int n : {1, N / 2 + 1, N}) {
      CHECK(std::abs(std::abs(amplitude(sd, 0, n - 1, t)) -
                     std::abs(amplitude(sd, N - 1, N - n, t))) < 1e-10);
    }
  }
}

TEST_CASE("time reversal conjugates the amplitude") {
  auto sd = decompose(k_excitation_block(xy(7, 0.61), 1));
  const Complex f = amplitude(sd, 1, 5, -4.2);
  CHECK(std::abs(f - std::conj(amplitude(sd, 5, 1, 4.2))) < 1e-12);
}

TEST_CASE("particle-hole amplitude identity") {
  for (int N : {4, 5, 6}) {
    ChainSpec spec = xy(N, 0.44);
    auto sd1 = decompose(k_excitation_block(spec, 1));
    auto sdc = decompose(k_excitation_block(spec, N - 1));
    const std::uint64_t full = (std::uint64_t{1} << N) - 1;
    const double t = 9.3;
    for (int n = 0; n < N; ++n) {
      for (int m = 0; m < N; ++m) {
        const Complex f = amplitude(sd1, m, n, t);
        const std::size_t cm =
            sdc.basis.index_of(full ^ sd1.basis.state(m));
        const std::size_t cn =
            sdc.basis.index_of(full ^ sd1.basis.state(n));
        const Complex fc = amplitude(sdc, cm, cn, t);
        CHECK(std::abs(std::abs(f) - std::abs(fc)) < 1e-10);
      }
    }
  }
}

TEST_CASE("oracle matches sector evolution, XY N=6 k=2") {
  ChainSpec spec = xy(6, 0.4);
  auto blk = k_excitation_block(spec, 2);
  auto sd = decompose(blk);
  const double t = 7.0;
  const std::vector<int> init{1, 4};
  const std::uint64_t mask = mask_of_sites(init);
  Eigen::VectorXcd full = full_hilbert_oracle(spec, mask, t);

  Eigen::VectorXcd start = Eigen::VectorXcd::Zero(blk.basis.dim());
  start(blk.basis.index_of(mask)) = 1.0;
  Eigen::VectorXcd sector = propagate(sd, start, t);

  double leak = 0.0;
  for (Eigen::Index i = 0; i < full.size(); ++i) {
    if (std::popcount(static_cast<std::uint64_t>(i)) == 2) continue;
    leak = std::max(leak, std::abs(full(i)));
  }
  CHECK(leak < 1e-12);
  for (std::size_t i = 0; i < blk.basis.dim(); ++i)
    CHECK(std::abs(full(static_cast<Eigen::Index>(blk.basis.state(i))) -
                   sector(i)) < 1e-8);
}

TEST_CASE("oracle matches Heisenberg k=1 evolution") {
  ChainSpec spec{4, ChainModel::HeisenbergUniform};
  auto sd = decompose(k_excitation_block(spec, 1));
  const double t = 3.1;
  Eigen::VectorXcd full = full_hilbert_oracle(spec, 1, t);
  for (std::size_t i = 0; i < sd.basis.dim(); ++i)
    CHECK(std::abs(full(static_cast<Eigen::Index>(sd.basis.state(i))) -
                   amplitude(sd, 0, i, t)) < 1e-8);
}

TEST_CASE("oracle rejects N > 10") {
  CHECK_THROWS_AS(full_hilbert_oracle(xy(11, 0.5), 1, 1.0),
                  std::invalid_argument);
}

TEST_CASE("spectral cache returns identical data per key") {
  SpectralCache cache;
  ChainSpec spec = xy(12, 0.33);
  auto a = cache.get(spec, 1);
  auto b = cache.get(spec, 1);
  CHECK(a.get() == b.get());
  spec.bond_disorder.assign(11, 0.001);
  auto c = cache.get(spec, 1);
  CHECK(a.get() != c.get());
}
