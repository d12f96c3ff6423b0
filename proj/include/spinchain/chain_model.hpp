#ifndef SPINCHAIN_CHAIN_MODEL_HPP
#define SPINCHAIN_CHAIN_MODEL_HPP

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace spinchain {

enum class ChainModel { XYEndModulated, HeisenbergUniform };

// One spin chain: length, model, end coupling a, bulk coupling J, Larmor
// frequency omega and per-bond relative disorder. Immutable by convention
// once validated.
struct ChainSpec {
  int n_sites = 2;
  ChainModel model = ChainModel::XYEndModulated;
  double end_coupling = 1.0;   // a, in units of J
  double bulk_coupling = 1.0;  // J
  double larmor = 0.0;         // omega
  std::vector<double> bond_disorder;  // N-1 entries, empty means all zero
  double delta_bound = 0.01;   // max |delta_n| accepted

  // Throws std::invalid_argument on any violated invariant.
  void validate() const;

  bool operator==(const ChainSpec&) const = default;
};

// Effective bond strengths, bond i (0-based) connecting sites i+1 and i+2,
// end modulation and (1+delta) factors already applied.
std::vector<double> build_couplings(const ChainSpec& spec);

// Ordered basis of k-excitation states: k-subsets of {1..N} in lexicographic
// order of their sorted site lists, stored as bit masks (site n <-> bit n-1).
// Masks need N <= 63; beyond that only k <= 1 is supported and the mask
// accessors are unavailable (index i simply means site i+1).
class ExcitationBasis {
 public:
  static ExcitationBasis make(int n_sites, int k, std::size_t cap = 100000);

  int n_sites() const { return n_sites_; }
  int k() const { return k_; }
  std::size_t dim() const { return dim_; }
  std::uint64_t state(std::size_t i) const { return states_.at(i); }
  const std::vector<std::uint64_t>& states() const { return states_; }

  // Index of a basis state; throws std::invalid_argument if unknown.
  std::size_t index_of(std::uint64_t mask) const;
  // Convenience: 1-based site list -> index.
  std::size_t index_of_sites(std::span<const int> sites) const;

  // 1-based sites of state i, ascending.
  std::vector<int> sites(std::size_t i) const;

 private:
  int n_sites_ = 0;
  int k_ = 0;
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> states_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

std::uint64_t mask_of_sites(std::span<const int> sites);

struct HamiltonianBlock {
  ExcitationBasis basis;
  Eigen::MatrixXd matrix;  // real symmetric, dim = C(N, k)
};

// Hamiltonian restricted to the k-excitation sector.
HamiltonianBlock k_excitation_block(const ChainSpec& spec, int k,
                                    std::size_t cap = 100000);

struct SecularRoot {
  double k;  // in (0, pi); eigenvalue is 2 cos(k) in units of J
  int mu;    // +1 symmetric, -1 antisymmetric
};

// All N solutions of mu cot(k) cot^mu((N-1)k/2) = a^2/(2-a^2).
// Throws std::runtime_error if the expected root count is not reached.
std::vector<SecularRoot> secular_roots(int n_sites, double a);

// Closed-form unit-norm eigenvector for a secular root; rejects non-roots.
Eigen::VectorXd analytic_eigenvector(int n_sites, double a, double k, int mu);

}  // namespace spinchain

#endif
