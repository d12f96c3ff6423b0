#include "spinchain/chain_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spinchain {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

void ChainSpec::validate() const {
  if (n_sites < 2) throw std::invalid_argument("ChainSpec: n_sites must be >= 2");
  if (bulk_coupling <= 0.0)
    throw std::invalid_argument("ChainSpec: bulk_coupling must be positive");
  if (model == ChainModel::XYEndModulated) {
    if (!(end_coupling > 0.0 && end_coupling <= 1.0))
      throw std::invalid_argument("ChainSpec: end_coupling must be in (0, 1]");
  }
  if (!bond_disorder.empty()) {
    if (static_cast<int>(bond_disorder.size()) != n_sites - 1)
      throw std::invalid_argument("ChainSpec: bond_disorder needs N-1 entries");
    for (double d : bond_disorder) {
      if (std::abs(d) > delta_bound)
        throw std::invalid_argument(
            "ChainSpec: disorder entry exceeds delta bound " +
            std::to_string(delta_bound));
    }
  }
}

std::vector<double> build_couplings(const ChainSpec& spec) {
  spec.validate();
  const int nb = spec.n_sites - 1;
  std::vector<double> bonds(nb, spec.bulk_coupling);
  if (spec.model == ChainModel::XYEndModulated) {
    bonds.front() = spec.end_coupling * spec.bulk_coupling;
    bonds.back() = spec.end_coupling * spec.bulk_coupling;
  }
  for (int i = 0; i < nb; ++i) {
    if (!spec.bond_disorder.empty()) bonds[i] *= 1.0 + spec.bond_disorder[i];
    if (bonds[i] <= 0.0)
      throw std::invalid_argument("build_couplings: non-positive bond");
  }
  return bonds;
}

ExcitationBasis ExcitationBasis::make(int n_sites, int k, std::size_t cap) {
  if (n_sites < 1)
    throw std::invalid_argument("ExcitationBasis: n_sites out of range");
  if (k < 0 || k > n_sites)
    throw std::invalid_argument("ExcitationBasis: k out of range");
  const double dim = binomial(n_sites, k);
  if (dim > static_cast<double>(cap))
    throw std::invalid_argument("ExcitationBasis: dimension exceeds cap");

  ExcitationBasis b;
  b.n_sites_ = n_sites;
  b.k_ = k;
  b.dim_ = static_cast<std::size_t>(dim);
  if (n_sites > 63) {
    // No mask representation; only the trivial sectors make sense here.
    if (k > 1)
      throw std::invalid_argument(
          "ExcitationBasis: k >= 2 needs the mask representation (N <= 63)");
    return b;
  }
  b.states_.reserve(static_cast<std::size_t>(dim));

  // Lexicographic enumeration of k-subsets of {1..N}.
  std::vector<int> comb(k);
  for (int i = 0; i < k; ++i) comb[i] = i + 1;
  while (true) {
    std::uint64_t mask = 0;
    for (int s : comb) mask |= std::uint64_t{1} << (s - 1);
    b.index_.emplace(mask, b.states_.size());
    b.states_.push_back(mask);
    if (k == 0) break;
    int i = k - 1;
    while (i >= 0 && comb[i] == n_sites - (k - 1 - i)) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
  }
  return b;
}

std::size_t ExcitationBasis::index_of(std::uint64_t mask) const {
  auto it = index_.find(mask);
  if (it == index_.end())
    throw std::invalid_argument("ExcitationBasis: unknown basis state");
  return it->second;
}

std::size_t ExcitationBasis::index_of_sites(std::span<const int> sites) const {
  return index_of(mask_of_sites(sites));
}

std::vector<int> ExcitationBasis::sites(std::size_t i) const {
  if (states_.empty() && k_ == 1) {
    if (i >= dim_) throw std::out_of_range("ExcitationBasis: index");
    return {static_cast<int>(i) + 1};
  }
  std::uint64_t mask = states_.at(i);
  std::vector<int> out;
  while (mask) {
    int b = std::countr_zero(mask);
    out.push_back(b + 1);
    mask &= mask - 1;
  }
  return out;
}

std::uint64_t mask_of_sites(std::span<const int> sites) {
  std::uint64_t mask = 0;
  for (int s : sites) {
    if (s < 1 || s > 63) throw std::invalid_argument("site index out of range");
    mask |= std::uint64_t{1} << (s - 1);
  }
  return mask;
}

HamiltonianBlock k_excitation_block(const ChainSpec& spec, int k,
                                    std::size_t cap) {
  spec.validate();
  const int N = spec.n_sites;
  const auto bonds = build_couplings(spec);
  ExcitationBasis basis = ExcitationBasis::make(N, k, cap);
  const std::size_t dim = basis.dim();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);

  const bool heis = spec.model == ChainModel::HeisenbergUniform;
  const double hop_scale = heis ? -2.0 : 1.0;

  if (k == 1) {
    // Tridiagonal sector; built directly so it works past the 63-site mask
    // limit. Index i means the excitation sits on site i+1.
    double zz_all = 0.0;
    if (heis)
      for (int b = 0; b < N - 1; ++b) zz_all -= bonds[b];
    for (int i = 0; i < N; ++i) {
      if (i + 1 < N) {
        H(i, i + 1) = hop_scale * bonds[i];
        H(i + 1, i) = hop_scale * bonds[i];
      }
      double diag = 2.0 * spec.larmor;
      if (heis) {
        // Bonds touching the occupied site flip sign.
        diag = zz_all + 2.0 * spec.larmor;
        if (i > 0) diag += 2.0 * bonds[i - 1];
        if (i + 1 < N) diag += 2.0 * bonds[i];
      }
      H(i, i) = diag;
    }
    return {std::move(basis), std::move(H)};
  }

  for (std::size_t i = 0; i < dim; ++i) {
    const std::uint64_t s = basis.state(i);
    // Hopping: move one excitation across a bond to an adjacent empty site.
    for (int b = 0; b < N - 1; ++b) {
      const std::uint64_t lo = std::uint64_t{1} << b;
      const std::uint64_t hi = std::uint64_t{1} << (b + 1);
      const bool occ_lo = s & lo, occ_hi = s & hi;
      if (occ_lo != occ_hi) {
        const std::uint64_t s2 = s ^ lo ^ hi;
        H(basis.index_of(s2), i) = hop_scale * bonds[b];
      }
    }
    // Diagonal: Larmor term 2 k omega; Heisenberg adds the zz bond sum.
    double diag = 2.0 * k * spec.larmor;
    if (heis) {
      for (int b = 0; b < N - 1; ++b) {
        const bool occ_lo = s & (std::uint64_t{1} << b);
        const bool occ_hi = s & (std::uint64_t{1} << (b + 1));
        diag += -bonds[b] * (occ_lo == occ_hi ? 1.0 : -1.0);
      }
    }
    H(i, i) = diag;
  }
  return {std::move(basis), std::move(H)};
}

namespace {

// Pole-free forms of the two secular branches:
//   mu=+1: cos(k) cos(h) - r sin(k) sin(h) = 0
//   mu=-1: cos(k) sin(h) + r sin(k) cos(h) = 0,  h = (N-1) k / 2.
double secular_fn(int n_sites, double r, int mu, double k) {
  const double h = 0.5 * (n_sites - 1) * k;
  if (mu > 0) return std::cos(k) * std::cos(h) - r * std::sin(k) * std::sin(h);
  return std::cos(k) * std::sin(h) + r * std::sin(k) * std::cos(h);
}

}  // namespace

std::vector<SecularRoot> secular_roots(int n_sites, double a) {
  if (n_sites < 3) throw std::invalid_argument("secular_roots: N >= 3 required");
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("secular_roots: a must be in (0, 1)");
  const double r = a * a / (2.0 - a * a);
  const double pi = std::numbers::pi;
  const int grid = 200 * n_sites;

  std::vector<SecularRoot> roots;
  for (int mu : {+1, -1}) {
    double prev_k = pi * 1e-12;
    double prev_v = secular_fn(n_sites, r, mu, prev_k);
    for (int i = 1; i <= grid; ++i) {
      const double k = pi * (static_cast<double>(i) / (grid + 1) + 1e-12);
      const double v = secular_fn(n_sites, r, mu, k);
      if (prev_v == 0.0) {
        roots.push_back({prev_k, mu});
      } else if (prev_v * v < 0.0) {
        double lo = prev_k, hi = k, flo = prev_v;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = secular_fn(n_sites, r, mu, mid);
          if (flo * fm <= 0.0) {
            hi = mid;
          } else {
            lo = mid;
            flo = fm;
          }
          if (hi - lo < 1e-15) break;
        }
        roots.push_back({0.5 * (lo + hi), mu});
      }
      prev_k = k;
      prev_v = v;
    }
  }
  if (static_cast<int>(roots.size()) != n_sites)
    throw std::runtime_error(
        "secular_roots: found " + std::to_string(roots.size()) +
        " roots, expected " + std::to_string(n_sites));
  std::sort(roots.begin(), roots.end(),
            [](const SecularRoot& x, const SecularRoot& y) { return x.k < y.k; });
  return roots;
}

Eigen::VectorXd analytic_eigenvector(int n_sites, double a, double k, int mu) {
  if (mu != 1 && mu != -1)
    throw std::invalid_argument("analytic_eigenvector: mu must be +-1");
  const double r = a * a / (2.0 - a * a);
  if (std::abs(secular_fn(n_sites, r, mu, k)) > 1e-7)
    throw std::invalid_argument("analytic_eigenvector: (k, mu) is not a root");

  const int N = n_sites;
  const double c2 = (N - 1) * (2.0 * (1.0 - a * a) * std::cos(k) * std::cos(k) +
                               0.5 * a * a * a * a) +
                    2.0 * a * a - a * a * a * a;
  const double c = std::sqrt(c2);
  Eigen::VectorXd v(N);
  v(0) = a / c * std::sin(k);
  for (int i = 2; i < N; ++i)
    v(i - 1) = (std::sin(i * k) + (1.0 - a * a) * std::sin((i - 2) * k)) / c;
  v(N - 1) = mu * a / c * std::sin(k);
  v.normalize();
  return v;
}

}  // namespace spinchain
