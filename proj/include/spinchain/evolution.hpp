#ifndef SPINCHAIN_EVOLUTION_HPP
#define SPINCHAIN_EVOLUTION_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

#include "spinchain/chain_model.hpp"

namespace spinchain {

using Complex = std::complex<double>;

// Spectral decomposition of one Hamiltonian block.
struct SpectralData {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // columns = eigenvectors
  ExcitationBasis basis;
};

SpectralData decompose(const HamiltonianBlock& block);

// <to| exp(-i H t) |from>, both indices into the block basis.
Complex amplitude(const SpectralData& sd, std::size_t from, std::size_t to,
                  double t);

// Time derivative d/dt of amplitude(); used for slope-matched measurement
// times.
Complex amplitude_derivative(const SpectralData& sd, std::size_t from,
                             std::size_t to, double t);

// exp(-i H t) applied to a state vector over the block basis.
Eigen::VectorXcd propagate(const SpectralData& sd, const Eigen::VectorXcd& state,
                           double t);

// Full 2^N propagator check: builds the whole Hamiltonian by Kronecker
// products of 2x2 Pauli matrices and evolves exactly. N <= 10.
Eigen::VectorXcd full_hilbert_oracle(const ChainSpec& spec,
                                     std::uint64_t initial_mask, double t);

// Memoized (spec, k) -> SpectralData. Thread safe; shared_ptr results stay
// valid independent of the cache.
class SpectralCache {
 public:
  std::shared_ptr<const SpectralData> get(const ChainSpec& spec, int k);

 private:
  struct Key {
    ChainSpec spec;
    int k;
    bool operator<(const Key& o) const;
  };
  std::mutex mu_;
  std::map<Key, std::shared_ptr<const SpectralData>> cache_;
};

}  // namespace spinchain

#endif
