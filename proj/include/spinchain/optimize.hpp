#ifndef SPINCHAIN_OPTIMIZE_HPP
#define SPINCHAIN_OPTIMIZE_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinchain/chain_model.hpp"

namespace spinchain {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
  std::size_t count() const;
  double at(std::size_t i) const { return lo + static_cast<double>(i) * step; }
  void validate() const;
};

struct SweepResult {
  double t1 = 0.0;
  double t2 = 0.0;
  double max_value = 0.0;
  bool has_surface = false;
  Eigen::MatrixXd surface;  // rows t1, cols t2
};

// Joint two-measurement success over a (t1, t2) grid. Ties break toward
// the smallest t1, then the smallest t2.
SweepResult sweep_surface(const ChainSpec& spec, const Range& t1,
                          const Range& t2, bool keep_surface = false,
                          int n_threads = 0);

struct PmaxPoint {
  int n_sites;
  double t1, t2, p;
};

std::vector<PmaxPoint> pmax_vs_n(std::span<const int> n_values, double a,
                                 const Range& t1, const Range& t2,
                                 int n_threads = 0);

struct PmaxRow {
  double a;
  double t1, t2, p;
};

std::vector<PmaxRow> pmax_vs_a(int n_sites, std::span<const double> a_grid,
                               const Range& t1, const Range& t2,
                               int n_threads = 0);

}  // namespace spinchain

#endif
