#include "spinchain/evolution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace spinchain {

SpectralData decompose(const HamiltonianBlock& block) {
  const auto& H = block.matrix;
  if (H.rows() != H.cols())
    throw std::invalid_argument("decompose: matrix not square");
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("decompose: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("decompose: eigensolver failed on block N=" +
                             std::to_string(block.basis.n_sites()) +
                             " k=" + std::to_string(block.basis.k()));
  return {es.eigenvalues(), es.eigenvectors(), block.basis};
}

Complex amplitude(const SpectralData& sd, std::size_t from, std::size_t to,
                  double t) {
  const auto dim = static_cast<std::size_t>(sd.eigenvalues.size());
  if (from >= dim || to >= dim)
    throw std::invalid_argument("amplitude: basis index out of range");
  Complex acc{0.0, 0.0};
  for (Eigen::Index j = 0; j < sd.eigenvalues.size(); ++j) {
    const double w = sd.eigenvectors(to, j) * sd.eigenvectors(from, j);
    const double ph = -sd.eigenvalues(j) * t;
    acc += w * Complex{std::cos(ph), std::sin(ph)};
  }
  return acc;
}

Complex amplitude_derivative(const SpectralData& sd, std::size_t from,
                             std::size_t to, double t) {
  Complex acc{0.0, 0.0};
  for (Eigen::Index j = 0; j < sd.eigenvalues.size(); ++j) {
    const double w = sd.eigenvectors(to, j) * sd.eigenvectors(from, j);
    const double lam = sd.eigenvalues(j);
    const double ph = -lam * t;
    acc += w * Complex{0.0, -lam} * Complex{std::cos(ph), std::sin(ph)};
  }
  return acc;
}

Eigen::VectorXcd propagate(const SpectralData& sd, const Eigen::VectorXcd& state,
                           double t) {
  if (state.size() != sd.eigenvalues.size())
    throw std::invalid_argument("propagate: state dimension mismatch");
  Eigen::VectorXcd coeff = sd.eigenvectors.transpose() * state;
  for (Eigen::Index j = 0; j < coeff.size(); ++j) {
    const double ph = -sd.eigenvalues(j) * t;
    coeff(j) *= Complex{std::cos(ph), std::sin(ph)};
  }
  return sd.eigenvectors * coeff;
}

namespace {

using Mat2 = Eigen::Matrix2cd;

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  Eigen::MatrixXcd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

// Operator acting as `op` on the given 1-based sites and identity elsewhere.
// Site n maps to bit n-1 of the basis index, so site 1 is the innermost
// tensor factor.
Eigen::MatrixXcd site_operator(int n_sites,
                               const std::vector<std::pair<int, Mat2>>& ops) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
  for (int site = n_sites; site >= 1; --site) {
    Mat2 local = Mat2::Identity();
    for (const auto& [s, m] : ops)
      if (s == site) local = m;
    acc = kron(acc, local);
  }
  return acc;
}

}  // namespace

Eigen::VectorXcd full_hilbert_oracle(const ChainSpec& spec,
                                     std::uint64_t initial_mask, double t) {
  spec.validate();
  const int N = spec.n_sites;
  if (N > 10)
    throw std::invalid_argument("full_hilbert_oracle: N <= 10 required");
  if (initial_mask >> N)
    throw std::invalid_argument("full_hilbert_oracle: bad initial state");

  Mat2 sx, sy, sz, up_proj;
  sx << 0, 1, 1, 0;
  sy << 0, Complex{0, -1}, Complex{0, 1}, 0;
  // Basis convention: row/col 1 of the local space is the excited state,
  // matching bit value 1 in the basis index.
  sz << -1, 0, 0, 1;
  up_proj << 0, 0, 0, 1;

  const auto bonds = build_couplings(spec);
  const Eigen::Index dim = Eigen::Index{1} << N;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);

  for (int b = 0; b < N - 1; ++b) {
    const int s1 = b + 1, s2 = b + 2;
    const Eigen::MatrixXcd xx = site_operator(N, {{s1, sx}, {s2, sx}});
    const Eigen::MatrixXcd yy = site_operator(N, {{s1, sy}, {s2, sy}});
    if (spec.model == ChainModel::XYEndModulated) {
      H += 0.5 * bonds[b] * (xx + yy);
    } else {
      const Eigen::MatrixXcd zz = site_operator(N, {{s1, sz}, {s2, sz}});
      H += -bonds[b] * (xx + yy + zz);
    }
  }
  // Larmor term as 2 omega per excitation, the same zero of energy the
  // sector blocks use.
  for (int s = 1; s <= N; ++s)
    H += 2.0 * spec.larmor * site_operator(N, {{s, up_proj}});

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("full_hilbert_oracle: eigensolver failed");

  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
  psi0(static_cast<Eigen::Index>(initial_mask)) = 1.0;
  Eigen::VectorXcd coeff = es.eigenvectors().adjoint() * psi0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double ph = -es.eigenvalues()(j) * t;
    coeff(j) *= Complex{std::cos(ph), std::sin(ph)};
  }
  return es.eigenvectors() * coeff;
}

bool SpectralCache::Key::operator<(const Key& o) const {
  auto tie = [](const ChainSpec& s, int kk) {
    return std::make_tuple(s.n_sites, static_cast<int>(s.model), s.end_coupling,
                           s.bulk_coupling, s.larmor, s.delta_bound, kk);
  };
  if (tie(spec, k) != tie(o.spec, o.k)) return tie(spec, k) < tie(o.spec, o.k);
  return spec.bond_disorder < o.spec.bond_disorder;
}

std::shared_ptr<const SpectralData> SpectralCache::get(const ChainSpec& spec,
                                                       int k) {
  Key key{spec, k};
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto sd = std::make_shared<SpectralData>(decompose(k_excitation_block(spec, k)));
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, _] = cache_.emplace(std::move(key), std::move(sd));
  return it->second;
}

}  // namespace spinchain
