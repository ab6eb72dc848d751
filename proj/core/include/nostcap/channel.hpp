#pragma once

#include <vector>

#include "nostcap/types.hpp"

namespace nostcap {

// Checks alphabet sizes, table dimensions, nonnegativity, finiteness and
// row sums. An empty report means the channel is valid.
ValidationReport validate_channel(const NostChannel& c);

// Averages the channel over the state given the previous output:
// kernel[y'][x][y] = sum_s' Q(s'|y') Q(y|x,s').
// Throws InvalidChannelError if the channel fails validation.
AveragedChannel average_channel(const NostChannel& c);

// All |X|^|S| maps s' -> x, ordered lexicographically by
// (map[0], map[1], ...). Throws StrategyOverflowError past the cap.
StrategySet enumerate_strategies(const Alphabets& a);

// Strategy channel Q_f(y|u,y') = sum_s' Q(s'|y') Q(y|f(u,s'),s').
// `strategies` must index inputs of c; in_size of the result is the number
// of strategies supplied (callers may restrict to a subset).
AveragedChannel build_strategy_channel(const NostChannel& c,
                                       const StrategySet& strategies);

// A channel is connected if some output is reachable (in zero or more
// steps) from every initial output through the support graph of the
// averaged kernel, where y' -> y is an edge iff max_a kernel[y'][a][y] > 0.
Connectivity check_connectivity(const AveragedChannel& av);

// Binary channel whose output law is the Z/S pair with parameter alpha
// (x = s' passes through clean) and whose state evolution is the Z map
// with parameter eta (y = 0 forces s = 0; y = 1 keeps s = 1 w.p. 1-eta).
// eta = 0 recovers the state-is-output channel.
NostChannel make_noisy_post(double alpha, double eta);

// Channel whose state is drawn from q_s independently of the output, so
// the averaged kernel is identical for every y'. q_y is indexed [s'][x][y].
NostChannel make_iid_state_channel(const std::vector<double>& q_s,
                                   const Table3<double>& q_y);

// Rescales every probability row to sum to one. Loaders never do this
// silently; it backs the explicit --normalize escape hatch. Rows summing
// to <= 0 are left untouched (validation will still flag them).
NostChannel normalized_rows(const NostChannel& c);

}  // namespace nostcap
