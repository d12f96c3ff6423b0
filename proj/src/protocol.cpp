#include "spinchain/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace spinchain {

namespace {

constexpr double kBiasTol = 1e-6;

struct EndAmplitudes {
  SpectralData sd;
  // Spectral weights for f_{N,1} and f_{N,N} in the k=1 sector.
  Eigen::VectorXd w_n1;
  Eigen::VectorXd w_nn;

  explicit EndAmplitudes(const ChainSpec& spec)
      : sd(decompose(k_excitation_block(spec, 1))) {
    const int N = spec.n_sites;
    w_n1 = sd.eigenvectors.row(N - 1).cwiseProduct(sd.eigenvectors.row(0));
    w_nn = sd.eigenvectors.row(N - 1).cwiseProduct(sd.eigenvectors.row(N - 1));
  }

  Complex f_n1(double t) const { return eval(w_n1, t); }
  Complex f_nn(double t) const { return eval(w_nn, t); }

  Complex eval(const Eigen::VectorXd& w, double t) const {
    Complex acc{0.0, 0.0};
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      const double ph = -sd.eigenvalues(j) * t;
      acc += w(j) * Complex{std::cos(ph), std::sin(ph)};
    }
    return acc;
  }

  Complex df_n1(double t) const {
    Complex acc{0.0, 0.0};
    for (Eigen::Index j = 0; j < w_n1.size(); ++j) {
      const double lam = sd.eigenvalues(j);
      const double ph = -lam * t;
      acc += w_n1(j) * Complex{0.0, -lam} * Complex{std::cos(ph), std::sin(ph)};
    }
    return acc;
  }
};

double abs_slope(const EndAmplitudes& ea, double t) {
  const Complex f = ea.f_n1(t);
  const double mod = std::abs(f);
  if (mod < 1e-300) return 0.0;
  return (std::conj(f) * ea.df_n1(t)).real() / mod;
}

}  // namespace

void InputState::validate() const {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
    throw std::invalid_argument("InputState: |alpha|^2 + |beta|^2 must be 1");
}

void DualRailChannel::validate() const {
  chain1.validate();
  chain2.validate();
  if (chain1.n_sites != chain2.n_sites)
    throw std::invalid_argument("DualRailChannel: chain lengths differ");
  if (chain1.model != chain2.model)
    throw std::invalid_argument("DualRailChannel: chain models differ");
}

void MeasurementSchedule::validate(bool allow_long) const {
  if (times.empty())
    throw std::invalid_argument("MeasurementSchedule: at least one time");
  for (double t : times)
    if (!(t > 0.0))
      throw std::invalid_argument("MeasurementSchedule: times must be positive");
  if (!allow_long && times.size() > 2)
    throw std::invalid_argument(
        "MeasurementSchedule: more than two measurements; pass allow_long to "
        "study the original scheme");
}

double joint_success_two(const ChainSpec& spec, double t1, double t2) {
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw std::invalid_argument("joint_success_two: times must be positive");
  EndAmplitudes ea(spec);
  const Complex f1 = ea.f_n1(t1);
  const Complex f12 = ea.f_n1(t1 + t2);
  const Complex fnn = ea.f_nn(t2);
  return std::norm(f1) + std::norm(f12 - fnn * f1);
}

ProtocolOutcome conclusive_simulate(const DualRailChannel& channel,
                                    const MeasurementSchedule& schedule,
                                    const InputState& input,
                                    bool allow_long_schedule) {
  channel.validate();
  schedule.validate(allow_long_schedule);
  input.validate();

  const int N = channel.chain1.n_sites;
  const bool identical = channel.identical();

  SpectralData sd1 = decompose(k_excitation_block(channel.chain1, 1));
  SpectralData sd2 =
      identical ? sd1 : decompose(k_excitation_block(channel.chain2, 1));

  // Unnormalized conditional amplitudes per rail; encoding puts the single
  // excitation at site 1 of each rail.
  Eigen::VectorXcd psi1 = Eigen::VectorXcd::Zero(N);
  Eigen::VectorXcd psi2 = Eigen::VectorXcd::Zero(N);
  psi1(0) = 1.0;
  psi2(0) = 1.0;

  ProtocolOutcome out;
  double failed_mass = 1.0;
  Complex phase{1.0, 0.0};

  for (double interval : schedule.times) {
    psi1 = propagate(sd1, psi1, interval);
    psi2 = identical ? psi1 : propagate(sd2, psi2, interval);

    const double m1 = std::abs(psi1(N - 1));
    const double m2 = std::abs(psi2(N - 1));
    if (!identical && std::abs(m1 - m2) > kBiasTol)
      throw std::runtime_error(
          "conclusive_simulate: site-N moduli differ at a scheduled "
          "measurement (biased outcome); measure at intersection times");

    const double step_joint = 0.5 * (m1 * m1 + m2 * m2);
    out.step_success.push_back(failed_mass > 0.0 ? step_joint / failed_mass
                                                 : 0.0);
    out.joint_success += step_joint;
    if (m1 > 0.0 && m2 > 0.0) phase = (psi1(N - 1) / psi2(N - 1));
    if (std::abs(phase) > 0.0) phase /= std::abs(phase);

    // Outcome "0" projects out the site-N component of each rail.
    psi1(N - 1) = 0.0;
    if (identical)
      psi2 = psi1;
    else
      psi2(N - 1) = 0.0;
    failed_mass = 1.0 - out.joint_success;
  }

  out.residual_amplitudes = psi1;
  out.phase_correction = phase;
  return out;
}

IntersectionResult intersection_times(const ChainSpec& chain1,
                                      const ChainSpec& chain2, double t_max,
                                      double grid_step) {
  chain1.validate();
  chain2.validate();
  if (chain1.n_sites != chain2.n_sites)
    throw std::invalid_argument("intersection_times: chain lengths differ");
  if (!(t_max > 0.0) || !(grid_step > 0.0))
    throw std::invalid_argument("intersection_times: bad t_max or grid step");

  IntersectionResult result;
  if (chain1 == chain2) {
    result.identical_chains = true;
    return result;
  }

  EndAmplitudes ea1(chain1), ea2(chain2);
  auto gap = [&](double t) { return std::abs(ea1.f_n1(t)) - std::abs(ea2.f_n1(t)); };

  double prev_t = grid_step;
  double prev_g = gap(prev_t);
  for (double t = 2.0 * grid_step; t <= t_max + 0.5 * grid_step;
       t += grid_step) {
    const double g = gap(t);
    if (prev_g == 0.0 || prev_g * g < 0.0) {
      double lo = prev_t, hi = t, glo = prev_g;
      while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        const double gm = gap(mid);
        if (glo * gm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          glo = gm;
        }
      }
      const double tau = 0.5 * (lo + hi);
      const double mod =
          0.5 * (std::abs(ea1.f_n1(tau)) + std::abs(ea2.f_n1(tau)));
      const double sg = std::abs(abs_slope(ea1, tau) - abs_slope(ea2, tau));
      result.crossings.push_back({tau, mod, sg});
    }
    prev_t = t;
    prev_g = g;
  }
  return result;
}

BestIntersection best_intersection_success(const ChainSpec& chain1,
                                           const ChainSpec& chain2,
                                           double t_max, double grid_step) {
  BestIntersection best;
  const IntersectionResult xs =
      intersection_times(chain1, chain2, t_max, grid_step);

  if (xs.identical_chains) {
    // Degenerate case: every time intersects; maximize |f| on the grid.
    EndAmplitudes ea(chain1);
    for (double t = grid_step; t <= t_max + 0.5 * grid_step; t += grid_step) {
      const double p = std::norm(ea.f_n1(t));
      if (p > best.success) {
        best.found = true;
        best.success = p;
        best.tau = t;
      }
    }
    best.phase = {1.0, 0.0};
    return best;
  }

  if (xs.crossings.empty()) return best;

  EndAmplitudes ea1(chain1), ea2(chain2);
  for (const auto& c : xs.crossings) {
    const double p = c.modulus * c.modulus;
    if (p > best.success) {
      best.found = true;
      best.success = p;
      best.tau = c.tau;
    }
  }
  const Complex f1 = ea1.f_n1(best.tau);
  const Complex f2 = ea2.f_n1(best.tau);
  best.phase = f1 / f2;
  best.phase /= std::abs(best.phase);
  return best;
}

Eigen::Vector2cd decoded_state(const DualRailChannel& channel, double tau,
                               const InputState& input, bool apply_phase) {
  channel.validate();
  input.validate();
  EndAmplitudes ea1(channel.chain1);
  const Complex f1 = ea1.f_n1(tau);
  const Complex f2 =
      channel.identical() ? f1 : EndAmplitudes(channel.chain2).f_n1(tau);

  // Success branch after the receiver CNOT: alpha rides the rail-2
  // amplitude, beta the rail-1 amplitude.
  Eigen::Vector2cd q;
  q(0) = input.alpha * f2;
  q(1) = input.beta * f1;
  if (apply_phase) {
    Complex phase = f1 / f2;
    phase /= std::abs(phase);
    q(1) *= std::conj(phase);
  }
  const double n = q.norm();
  if (n < 1e-300)
    throw std::runtime_error("decoded_state: vanishing success amplitude");
  return q / n;
}

}  // namespace spinchain
