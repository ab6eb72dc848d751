#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nostcap/table.hpp"

namespace nostcap {

// Probability rows must sum to one within this tolerance.
inline constexpr double kRowSumTol = 1e-12;

// Stationary distributions must satisfy ||pi P - pi||_inf within this.
inline constexpr double kStationaryResidualTol = 1e-10;

// Hard cap on |X|^|S| for strategy enumeration.
inline constexpr long long kMaxStrategies = 1LL << 20;

// Policy entries above this count toward the reported per-row support size.
inline constexpr double kSupportThreshold = 1e-6;

// Input, output and state alphabet sizes.
struct Alphabets {
  int x_size = 0;
  int y_size = 0;
  int s_size = 0;

  friend bool operator==(const Alphabets&, const Alphabets&) = default;
};

// Raw channel law: output kernel Q(y|x,s') and state evolution Q(s|y).
// Immutable by convention after construction; all operations are pure.
struct NostChannel {
  Alphabets alphabets;
  Table3<double> q_y_given_x_sprime;  // [s'][x][y]
  Table2<double> q_s_given_y;         // [y][s]

  friend bool operator==(const NostChannel&, const NostChannel&) = default;
};

// Output-conditioned kernel Q(y|a,y'). The letter `a` ranges over channel
// inputs for the plain setting and over strategy letters for the CSI setting.
struct AveragedChannel {
  int in_size = 0;
  int y_size = 0;
  Table3<double> kernel;  // [y'][a][y]

  friend bool operator==(const AveragedChannel&, const AveragedChannel&) = default;
};

// Deterministic map from state to input, used as one CSI input letter.
struct Strategy {
  std::vector<int> map;  // map[s'] = x

  friend bool operator==(const Strategy&, const Strategy&) = default;
};
using StrategySet = std::vector<Strategy>;

enum class ViolationKind { Dimension, RowSum, Negative, NonFinite };

struct Violation {
  ViolationKind kind = ViolationKind::Dimension;
  std::string where;   // e.g. "q_y_given_x_sprime[1][0]"
  double value = 0.0;  // offending entry or row sum
};
using ValidationReport = std::vector<Violation>;

std::string to_string(const Violation& v);

// One-step output chain P(y|y').
struct OutputKernel {
  Table2<double> p;  // [y'][y]
};

struct StationaryDist {
  std::vector<double> pi;
};

// Joint distribution P(y',a) — the optimization variable of the solvers.
struct JointDist {
  Table2<double> p;  // [y'][a]

  friend bool operator==(const JointDist&, const JointDist&) = default;
};

// Conditional distribution P(a|y'), one stochastic row per y'.
struct Policy {
  Table2<double> p;  // [y'][a]

  friend bool operator==(const Policy&, const Policy&) = default;
};

struct Connectivity {
  bool connected = false;
  std::optional<int> witness_output;
};

}  // namespace nostcap
