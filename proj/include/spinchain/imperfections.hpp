#ifndef SPINCHAIN_IMPERFECTIONS_HPP
#define SPINCHAIN_IMPERFECTIONS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spinchain/chain_model.hpp"

namespace spinchain {

// Uniform [-delta, delta] vector, bit-identical for a given seed.
std::vector<double> sample_disorder(double delta, int n_bonds,
                                    std::uint64_t seed);

// The two N=30 disorder samples used for the coupling-fluctuation figures.
// which = 0 or 1; 29 entries each.
std::vector<double> disorder_fixture(int which);

struct DisorderEnsemble {
  double delta_bound = 0.0;
  int n_samples = 0;
  std::uint64_t seed = 0;
  // One (delta_chain1, delta_chain2) pair per sample.
  std::vector<std::pair<std::vector<double>, std::vector<double>>> samples;

  static DisorderEnsemble generate(double delta, int n_bonds, int n_samples,
                                   std::uint64_t seed);
};

struct DisorderPoint {
  double a;
  double p_ave;
  double stderr_;
  int n_empty;  // samples with no intersection, counted as P = 0
  std::vector<double> per_sample;
};

std::vector<DisorderPoint> disorder_average_success(
    int n_sites, std::span<const double> a_grid, const DisorderEnsemble& ens,
    double t_max, int n_threads = 0);

struct SingleExcitationNoise {
  double x = 0.0;  // excitation probability
  int m = 2;       // site of the stray excitation, 2..N
  bool allow_large_x = false;  // lift the x <= 0.1 guard
};

struct InitNoiseResult {
  double p_success = 0.0;
  double p0 = 0.0;  // clean term |f_{N,1}|^2
  double p1 = 0.0;  // two-excitation term
  std::vector<double> higher_terms;  // collective exact: T_j per order j
};

InitNoiseResult single_excitation_success(const ChainSpec& spec,
                                          const SingleExcitationNoise& noise,
                                          double t);

struct AveragePoint {
  double a;
  double p_ave;
  double t_opt;
};

// P_ave(a) = max_t [(1-x)^2 p0(t) + x^2 mean_m p1(m, t)], t on an integer
// grid up to t_max.
std::vector<AveragePoint> average_single_excitation_success(
    int n_sites, std::span<const double> a_grid, double x, double t_max = 1000,
    int n_threads = 0);

// Every order of the collective-excitation success probability; N <= 12.
InitNoiseResult collective_success_exact(const ChainSpec& spec, double x,
                                         double t);

// First two orders only; valid for x <= 0.1.
InitNoiseResult collective_success_truncated(const ChainSpec& spec, double x,
                                             double t);

}  // namespace spinchain

#endif
