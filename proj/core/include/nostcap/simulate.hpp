#pragma once

#include <cstdint>
#include <vector>

#include "nostcap/types.hpp"

namespace nostcap {

struct SimConfig {
  long long steps = 0;
  std::uint64_t seed = 0;
  int initial_output = 0;
  std::vector<double> initial_state_dist;  // empty = uniform over S
  long long burn_in = -1;                  // negative = steps / 10
};

struct SimReport {
  std::vector<double> empirical_pi;      // distribution of outputs
  double empirical_rate_bits = 0.0;      // plug-in estimate of I(A;Y|Y')
  Table3<long long> counts;              // [y'][a][y], sums to steps - burn_in

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

// Runs the closed loop: per step, draw s' ~ Q(s'|y_prev) (initial state
// distribution on the first step), a ~ policy(.|y_prev), transmit x = a and
// draw y ~ Q(.|x,s'). Draw order per step is fixed as (s', a, y) and the
// seed fully determines the trajectory.
SimReport simulate_policy(const NostChannel& c, const Policy& policy,
                          const SimConfig& cfg);

// CSI mode: the policy is over strategy letters and x = strategies[a].map[s'].
SimReport simulate_policy(const NostChannel& c, const Policy& policy,
                          const StrategySet& strategies, const SimConfig& cfg);

}  // namespace nostcap
