#ifndef SPINCHAIN_PROTOCOL_HPP
#define SPINCHAIN_PROTOCOL_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "spinchain/chain_model.hpp"
#include "spinchain/evolution.hpp"

namespace spinchain {

// Transferred qubit alpha|0> + beta|1>.
struct InputState {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};
  void validate() const;  // |alpha|^2 + |beta|^2 = 1
};

struct DualRailChannel {
  ChainSpec chain1;
  ChainSpec chain2;
  void validate() const;  // same length, same model
  bool identical() const { return chain1 == chain2; }
};

// t[0] counted from encoding, t[j] (j >= 1) intervals between consecutive
// measurements.
struct MeasurementSchedule {
  std::vector<double> times;
  // The improved protocol caps the schedule at two measurements; pass
  // allow_long = true to study the original many-measurement scheme.
  void validate(bool allow_long = false) const;
};

struct ProtocolOutcome {
  std::vector<double> step_success;      // conditional per measurement
  double joint_success = 0.0;
  Eigen::VectorXcd residual_amplitudes;  // unnormalized, |.|^2 = 1 - joint
  Complex phase_correction{1.0, 0.0};    // unit scalar, last measurement
};

// Closed form for two measurements on identical chains:
//   |f(t1)|^2 + |f(t1+t2) - f_NN(t2) f(t1)|^2.
double joint_success_two(const ChainSpec& spec, double t1, double t2);

// Conditional-projection simulation of the conclusive protocol. Unequal
// rails are refused (bias error) when the site-N moduli differ at a
// scheduled measurement.
ProtocolOutcome conclusive_simulate(const DualRailChannel& channel,
                                    const MeasurementSchedule& schedule,
                                    const InputState& input,
                                    bool allow_long_schedule = false);

struct Intersection {
  double tau;
  double modulus;    // common |f| at the crossing
  double slope_gap;  // |d|f1|/dt - d|f2|/dt| at tau
};

struct IntersectionResult {
  bool identical_chains = false;  // degenerate case: every time intersects
  std::vector<Intersection> crossings;
};

// All crossings of |f1_{N,1}| and |f2_{N,1}| up to t_max, bracketed on a
// grid and bisected to 1e-8.
IntersectionResult intersection_times(const ChainSpec& chain1,
                                      const ChainSpec& chain2, double t_max,
                                      double grid_step = 0.05);

struct BestIntersection {
  bool found = false;
  double tau = 0.0;
  double success = 0.0;           // |f(tau)|^2
  Complex phase{1.0, 0.0};        // f1(tau)/f2(tau), unit modulus
};

BestIntersection best_intersection_success(const ChainSpec& chain1,
                                           const ChainSpec& chain2,
                                           double t_max,
                                           double grid_step = 0.05);

// Receiver-side qubit after a successful measurement at time tau,
// normalized, with the phase correction applied when requested.
Eigen::Vector2cd decoded_state(const DualRailChannel& channel, double tau,
                               const InputState& input, bool apply_phase);

}  // namespace spinchain

#endif
