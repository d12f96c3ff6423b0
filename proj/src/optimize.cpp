#include "spinchain/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <vector>

#include "spinchain/evolution.hpp"
#include "spinchain/parallel.hpp"

namespace spinchain {

std::size_t Range::count() const {
  if (!(step > 0.0) || hi < lo) return 0;
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

void Range::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("Range: step must be > 0");
  if (hi < lo) throw std::invalid_argument("Range: hi < lo");
}

namespace {

// f_{N,1} and f_{N,N} from the single-excitation block, memoized per time.
// Sweep grids revisit the same t1 + t2 sums constantly.
class EndAmplitudeTable {
 public:
  explicit EndAmplitudeTable(const ChainSpec& spec)
      : sd_(decompose(k_excitation_block(spec, 1))) {
    const int N = spec.n_sites;
    w_n1_ = sd_.eigenvectors.row(N - 1).cwiseProduct(sd_.eigenvectors.row(0));
    w_nn_ =
        sd_.eigenvectors.row(N - 1).cwiseProduct(sd_.eigenvectors.row(N - 1));
  }

  Complex f_n1(double t) {
    auto it = cache_n1_.find(t);
    if (it != cache_n1_.end()) return it->second;
    const Complex v = eval(w_n1_, t);
    cache_n1_.emplace(t, v);
    return v;
  }

  Complex f_nn(double t) {
    auto it = cache_nn_.find(t);
    if (it != cache_nn_.end()) return it->second;
    const Complex v = eval(w_nn_, t);
    cache_nn_.emplace(t, v);
    return v;
  }

  double joint(double t1, double t2) {
    const Complex f1 = f_n1(t1);
    return std::norm(f1) + std::norm(f_n1(t1 + t2) - f_nn(t2) * f1);
  }

 private:
  Complex eval(const Eigen::VectorXd& w, double t) const {
    Complex acc{0.0, 0.0};
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      const double ph = -sd_.eigenvalues(j) * t;
      acc += w(j) * Complex{std::cos(ph), std::sin(ph)};
    }
    return acc;
  }

  SpectralData sd_;
  Eigen::VectorXd w_n1_, w_nn_;
  std::unordered_map<double, Complex> cache_n1_, cache_nn_;
};

struct RowBest {
  double value = -1.0;
  std::size_t j = 0;
};

}  // namespace

SweepResult sweep_surface(const ChainSpec& spec, const Range& t1,
                          const Range& t2, bool keep_surface, int n_threads) {
  spec.validate();
  t1.validate();
  t2.validate();
  const std::size_t n1 = t1.count(), n2 = t2.count();
  if (n1 == 0 || n2 == 0)
    throw std::invalid_argument("sweep_surface: empty grid");

  SweepResult result;
  result.has_surface = keep_surface;
  if (keep_surface) result.surface.resize(n1, n2);

  std::vector<RowBest> row_best(n1);

  if (n_threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n_threads = hw ? static_cast<int>(hw) : 1;
  }
  const std::size_t n_workers = std::min<std::size_t>(n_threads, n1);
  auto run_rows = [&](std::size_t begin, std::size_t stride) {
    EndAmplitudeTable table(spec);
    for (std::size_t i = begin; i < n1; i += stride) {
      const double a = t1.at(i);
      RowBest best;
      for (std::size_t j = 0; j < n2; ++j) {
        const double b = t2.at(j);
        const double v = table.joint(a, b);
        if (keep_surface) result.surface(i, j) = v;
        if (v > best.value) {
          best.value = v;
          best.j = j;
        }
      }
      row_best[i] = best;
    }
  };
  if (n_workers <= 1) {
    run_rows(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w)
      pool.emplace_back(run_rows, w, n_workers);
    for (auto& th : pool) th.join();
  }

  // First-hit tie-breaking: lowest t1, then lowest t2.
  std::size_t bi = 0;
  for (std::size_t i = 1; i < n1; ++i)
    if (row_best[i].value > row_best[bi].value) bi = i;
  result.t1 = t1.at(bi);
  result.t2 = t2.at(row_best[bi].j);
  result.max_value = row_best[bi].value;
  return result;
}

std::vector<PmaxPoint> pmax_vs_n(std::span<const int> n_values, double a,
                                 const Range& t1, const Range& t2,
                                 int n_threads) {
  std::vector<PmaxPoint> out(n_values.size());
  parallel_for(n_values.size(), n_threads, [&](std::size_t i) {
    ChainSpec spec{n_values[i], ChainModel::XYEndModulated, a};
    const SweepResult r = sweep_surface(spec, t1, t2, false, 1);
    out[i] = {n_values[i], r.t1, r.t2, r.max_value};
  });
  return out;
}

std::vector<PmaxRow> pmax_vs_a(int n_sites, std::span<const double> a_grid,
                               const Range& t1, const Range& t2,
                               int n_threads) {
  std::vector<PmaxRow> out(a_grid.size());
  parallel_for(a_grid.size(), n_threads, [&](std::size_t i) {
    ChainSpec spec{n_sites, ChainModel::XYEndModulated, a_grid[i]};
    const SweepResult r = sweep_surface(spec, t1, t2, false, 1);
    out[i] = {a_grid[i], r.t1, r.t2, r.max_value};
  });
  return out;
}

}  // namespace spinchain
