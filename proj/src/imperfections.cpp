#include "spinchain/imperfections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spinchain/evolution.hpp"
#include "spinchain/parallel.hpp"
#include "spinchain/protocol.hpp"

namespace spinchain {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Explicit 53-bit mapping so ensembles are bit-identical across platforms.
double uniform01(std::uint64_t r) {
  return static_cast<double>(r >> 11) * 0x1.0p-53;
}

class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : state_(splitmix64(seed)) {}
  double next_symmetric(double bound) {
    state_ = splitmix64(state_);
    return bound * (2.0 * uniform01(state_) - 1.0);
  }

 private:
  std::uint64_t state_;
};

const std::vector<double> kDisorderSample1 = {
    0.0091,  0.0031,  0.0048,  -0.0031, 0.0077,  -0.0031, -0.0088, 0.0044,
    0.0092,  -0.0069, -0.0017, -0.0081, -0.0010, 0.0074,  -0.0022, -0.0049,
    -0.0029, 0.0049,  0.0030,  0.0088,  0.0067,  -0.0006, 0.0026,  -0.0088,
    0.0008,  -0.0009, 0.0073,  0.0071,  -0.0006};

const std::vector<double> kDisorderSample2 = {
    0.0057,  0.0031,  -0.0100, -0.0074, -0.0001, -0.0092, -0.0055, -0.0034,
    0.0080,  -0.0037, -0.0050, -0.0013, 0.0068,  -0.0063, 0.0002,  -0.0010,
    -0.0035, -0.0024, 0.0077,  0.0052,  0.0077,  -0.0009, 0.0060,  -0.0073,
    -0.0087, -0.0025, -0.0025, -0.0003, 0.0094};

}  // namespace

std::vector<double> sample_disorder(double delta, int n_bonds,
                                    std::uint64_t seed) {
  if (delta < 0.0)
    throw std::invalid_argument("sample_disorder: delta must be >= 0");
  if (n_bonds < 0)
    throw std::invalid_argument("sample_disorder: n_bonds must be >= 0");
  std::vector<double> out(n_bonds, 0.0);
  if (delta == 0.0) return out;
  UniformStream rng(seed);
  for (double& v : out) v = rng.next_symmetric(delta);
  return out;
}

std::vector<double> disorder_fixture(int which) {
  if (which == 0) return kDisorderSample1;
  if (which == 1) return kDisorderSample2;
  throw std::invalid_argument("disorder_fixture: which must be 0 or 1");
}

DisorderEnsemble DisorderEnsemble::generate(double delta, int n_bonds,
                                            int n_samples, std::uint64_t seed) {
  if (n_samples < 1)
    throw std::invalid_argument("DisorderEnsemble: n_samples must be >= 1");
  DisorderEnsemble ens;
  ens.delta_bound = delta;
  ens.n_samples = n_samples;
  ens.seed = seed;
  ens.samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    // Independent streams per sample index, stable under any parallel order.
    const std::uint64_t s1 = splitmix64(seed + 2 * static_cast<std::uint64_t>(i));
    const std::uint64_t s2 =
        splitmix64(seed + 2 * static_cast<std::uint64_t>(i) + 1);
    ens.samples.emplace_back(sample_disorder(delta, n_bonds, s1),
                             sample_disorder(delta, n_bonds, s2));
  }
  return ens;
}

std::vector<DisorderPoint> disorder_average_success(
    int n_sites, std::span<const double> a_grid, const DisorderEnsemble& ens,
    double t_max, int n_threads) {
  if (ens.samples.empty())
    throw std::invalid_argument("disorder_average_success: empty ensemble");

  std::vector<DisorderPoint> out(a_grid.size());
  const std::size_t ns = ens.samples.size();
  std::vector<double> flat(a_grid.size() * ns, 0.0);
  std::vector<int> empty_flags(a_grid.size() * ns, 0);

  parallel_for(a_grid.size() * ns, n_threads, [&](std::size_t idx) {
    const std::size_t ia = idx / ns;
    const std::size_t is = idx % ns;
    ChainSpec c1{n_sites, ChainModel::XYEndModulated, a_grid[ia], 1.0, 0.0,
                 ens.samples[is].first, std::max(ens.delta_bound, 0.01)};
    ChainSpec c2 = c1;
    c2.bond_disorder = ens.samples[is].second;
    const BestIntersection best = best_intersection_success(c1, c2, t_max);
    if (best.found) {
      flat[idx] = best.success;
    } else {
      empty_flags[idx] = 1;
    }
  });

  for (std::size_t ia = 0; ia < a_grid.size(); ++ia) {
    DisorderPoint& p = out[ia];
    p.a = a_grid[ia];
    p.per_sample.assign(flat.begin() + ia * ns, flat.begin() + (ia + 1) * ns);
    p.n_empty = std::accumulate(empty_flags.begin() + ia * ns,
                                empty_flags.begin() + (ia + 1) * ns, 0);
    const double mean =
        std::accumulate(p.per_sample.begin(), p.per_sample.end(), 0.0) / ns;
    p.p_ave = mean;
    double var = 0.0;
    for (double v : p.per_sample) var += (v - mean) * (v - mean);
    p.stderr_ = ns > 1 ? std::sqrt(var / (ns - 1) / ns) : 0.0;
  }
  return out;
}

namespace {

// Shared machinery for the stray-excitation sums |f'_{n,m}|^2 |f'^{nN}_{1m}|^2.
struct TwoSectorData {
  SpectralData sd1;
  SpectralData sd2;
  int n_sites;
  // Row/column pickers in the two-excitation block.
  std::vector<std::size_t> idx_1m;  // {1, m} for m = 2..N
  std::vector<std::size_t> idx_nN;  // {n, N} for n = 1..N-1

  explicit TwoSectorData(const ChainSpec& spec)
      : sd1(decompose(k_excitation_block(spec, 1))),
        sd2(decompose(k_excitation_block(spec, 2))),
        n_sites(spec.n_sites) {
    const int N = n_sites;
    for (int m = 2; m <= N; ++m) {
      const std::vector<int> s{1, m};
      idx_1m.push_back(sd2.basis.index_of_sites(s));
    }
    for (int n = 1; n <= N - 1; ++n) {
      const std::vector<int> s{n, N};
      idx_nN.push_back(sd2.basis.index_of_sites(s));
    }
  }
};

Eigen::MatrixXcd sector_propagator(const SpectralData& sd, double t) {
  const Eigen::Index d = sd.eigenvalues.size();
  Eigen::VectorXcd phase(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double ph = -sd.eigenvalues(j) * t;
    phase(j) = Complex{std::cos(ph), std::sin(ph)};
  }
  return (sd.eigenvectors.cast<Complex>() * phase.asDiagonal()) *
         sd.eigenvectors.transpose().cast<Complex>();
}

// P1 for every m = 2..N at one time, plus p0.
struct ProfileAtT {
  double p0;
  Eigen::VectorXd p1;  // index m-2
};

ProfileAtT stray_profile(const TwoSectorData& d, double t) {
  const int N = d.n_sites;
  const Eigen::MatrixXcd u1 = sector_propagator(d.sd1, t);

  // Two-excitation amplitudes {1,m} -> {n,N} as an (N-1) x (N-1) matrix.
  const Eigen::Index d2 = d.sd2.eigenvalues.size();
  Eigen::MatrixXcd rows(N - 1, d2), cols(d2, N - 1);
  for (int n = 0; n < N - 1; ++n)
    rows.row(n) = d.sd2.eigenvectors.row(d.idx_nN[n]).cast<Complex>();
  for (int m = 0; m < N - 1; ++m)
    cols.col(m) = d.sd2.eigenvectors.row(d.idx_1m[m]).transpose().cast<Complex>();
  for (Eigen::Index j = 0; j < d2; ++j) {
    const double ph = -d.sd2.eigenvalues(j) * t;
    rows.col(j) *= Complex{std::cos(ph), std::sin(ph)};
  }
  const Eigen::MatrixXcd amp2 = rows * cols;  // (n, m)

  ProfileAtT out;
  out.p0 = std::norm(u1(N - 1, 0));
  out.p1.resize(N - 1);
  for (int m = 2; m <= N; ++m) {
    double acc = 0.0;
    for (int n = 1; n <= N - 1; ++n)
      acc += std::norm(u1(n - 1, m - 1)) * std::norm(amp2(n - 1, m - 2));
    out.p1(m - 2) = acc;
  }
  return out;
}

}  // namespace

InitNoiseResult single_excitation_success(const ChainSpec& spec,
                                          const SingleExcitationNoise& noise,
                                          double t) {
  spec.validate();
  const int N = spec.n_sites;
  if (noise.m < 2 || noise.m > N)
    throw std::invalid_argument(
        "single_excitation_success: m must be in 2..N (site 1 is overwritten "
        "by encoding)");
  if (noise.x < 0.0 || noise.x > 1.0)
    throw std::invalid_argument("single_excitation_success: x must be in [0,1]");
  if (!noise.allow_large_x && noise.x > 0.1)
    throw std::invalid_argument(
        "single_excitation_success: x > 0.1; set allow_large_x to override");

  TwoSectorData data(spec);
  const ProfileAtT prof = stray_profile(data, t);
  InitNoiseResult r;
  r.p0 = prof.p0;
  r.p1 = prof.p1(noise.m - 2);
  r.p_success = (1.0 - noise.x) * (1.0 - noise.x) * r.p0 +
                noise.x * noise.x * r.p1;
  return r;
}

std::vector<AveragePoint> average_single_excitation_success(
    int n_sites, std::span<const double> a_grid, double x, double t_max,
    int n_threads) {
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument(
        "average_single_excitation_success: x must be in [0,1]");
  std::vector<AveragePoint> out(a_grid.size());
  parallel_for(a_grid.size(), n_threads, [&](std::size_t ia) {
    ChainSpec spec{n_sites, ChainModel::XYEndModulated, a_grid[ia]};
    TwoSectorData data(spec);
    double best = -1.0, best_t = 0.0;
    for (double t = 1.0; t <= t_max + 0.5; t += 1.0) {
      const ProfileAtT prof = stray_profile(data, t);
      const double val =
          (1.0 - x) * (1.0 - x) * prof.p0 + x * x * prof.p1.mean();
      if (val > best) {
        best = val;
        best_t = t;
      }
    }
    out[ia] = {a_grid[ia], best, best_t};
  });
  return out;
}

InitNoiseResult collective_success_exact(const ChainSpec& spec, double x,
                                         double t) {
  spec.validate();
  const int N = spec.n_sites;
  if (N > 12)
    throw std::invalid_argument(
        "collective_success_exact: N <= 12 required; use the truncated form");
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("collective_success_exact: x must be in [0,1]");

  // Propagators for every excitation sector.
  std::vector<ExcitationBasis> bases;
  std::vector<Eigen::MatrixXcd> props;
  bases.reserve(N + 1);
  props.reserve(N + 1);
  for (int k = 0; k <= N; ++k) {
    HamiltonianBlock blk = k_excitation_block(spec, k, std::size_t{1} << 13);
    SpectralData sd = decompose(blk);
    props.push_back(sector_propagator(sd, t));
    bases.push_back(std::move(sd.basis));
  }

  const std::uint64_t site1 = 1;
  const std::uint64_t siteN = std::uint64_t{1} << (N - 1);

  InitNoiseResult result;
  result.higher_terms.assign(N, 0.0);

  // Order j: chain 1 holds j stray excitations (sites 2..N), chain 2 holds
  // them plus the encoded one at site 1. Perfect transfer keeps the two
  // rails' residual patterns identical while the encoded excitation reaches
  // site N.
  for (int j = 0; j <= N - 1; ++j) {
    double term = 0.0;
    const auto& basis_j = bases[j];
    const auto& basis_j1 = bases[j + 1];
    for (std::size_t si = 0; si < basis_j.dim(); ++si) {
      const std::uint64_t s = basis_j.state(si);
      if (s & site1) continue;  // stray excitations live on sites 2..N
      const std::size_t s_in = basis_j1.index_of(s | site1);
      for (std::size_t ri = 0; ri < basis_j.dim(); ++ri) {
        const std::uint64_t rmask = basis_j.state(ri);
        if (rmask & siteN) continue;  // rail 1 must leave site N empty
        const double a1 = std::norm(props[j](ri, si));
        const double a2 =
            std::norm(props[j + 1](basis_j1.index_of(rmask | siteN), s_in));
        term += a1 * a2;
      }
    }
    result.higher_terms[j] = term;
    result.p_success += std::pow(x * x, j) *
                        std::pow((1.0 - x) * (1.0 - x), N - 1 - j) * term;
  }
  result.p0 = result.higher_terms[0];
  result.p1 = N >= 2 ? result.higher_terms[1] : 0.0;
  return result;
}

InitNoiseResult collective_success_truncated(const ChainSpec& spec, double x,
                                             double t) {
  spec.validate();
  const int N = spec.n_sites;
  if (x < 0.0)
    throw std::invalid_argument("collective_success_truncated: x must be >= 0");
  if (x > 0.1)
    throw std::invalid_argument(
        "collective_success_truncated: x > 0.1 is outside the truncation's "
        "validity range; use collective_success_exact");

  TwoSectorData data(spec);
  const ProfileAtT prof = stray_profile(data, t);
  InitNoiseResult r;
  r.p0 = prof.p0;
  r.p1 = prof.p1.sum();  // summed over the stray site m = 2..N
  r.p_success = std::pow(1.0 - x, 2 * (N - 1)) * r.p0 +
                x * x * std::pow(1.0 - x, 2 * (N - 2)) * r.p1;
  return r;
}

}  // namespace spinchain
