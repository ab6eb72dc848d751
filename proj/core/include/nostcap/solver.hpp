#pragma once

#include <cstdint>
#include <vector>

#include "nostcap/types.hpp"

namespace nostcap {

enum class Setting { FB, FB_CSI };

struct SolverConfig {
  double tolerance = 1e-9;      // optimality-gap target
  long max_iterations = 100000;
  double lp_tolerance = 1e-11;  // simplex pivot/feasibility tolerance
  std::uint64_t seed = 0;       // reserved for randomized restarts
};

struct CapacityResult {
  Setting setting = Setting::FB;
  double value_bits = 0.0;
  JointDist joint;
  Policy policy;
  StationaryDist pi;
  double gap = 0.0;                   // final linearized optimality gap
  double stationarity_residual = 0.0; // max_y |P_Y'(y) - P_Y(y)| of the joint
  long iterations = 0;
  bool converged = false;             // false iff the iteration limit was hit
  std::vector<int> support_sizes;     // FB_CSI: per-y' support of P(u|y')
  long long cardinality_bound_l = -1; // FB_CSI: the bound L, else -1
};

// Optional solver restriction: coordinates with mask[y'][a] == 0 are pinned
// to zero. Used to re-solve on reduced strategy supports (cardinality-bound
// checks); not needed for the capacity value itself.
using SupportMask = Table2<std::uint8_t>;

// Maximizes I(A;Y|Y') over joints P(y',a) satisfying the stationarity
// balance constraints, by conditional gradient with an exact dense-LP
// linear-minimization oracle and exact line search; away steps are enabled
// after 1000 plain iterations. Initialized at joint_from_policy(uniform),
// mixed 50/50 with an interior point of the polytope when some marginal
// component falls below 1e-6. Throws NotConnectedError when the kernel's
// support graph is not connected. Hitting max_iterations is reported via
// converged=false on the best-so-far result, never silently.
CapacityResult solve_averaged(const AveragedChannel& av, Setting setting,
                              const SolverConfig& cfg = {},
                              const SupportMask* mask = nullptr);

// Feedback capacity without encoder CSI: the concave program on the
// averaged channel Q(y|x,y').
CapacityResult solve_cfb(const NostChannel& c, const SolverConfig& cfg = {});

// Feedback capacity with causal encoder CSI: the same program on the
// strategy channel built from all |X|^|S| strategies. Solving once over the
// full strategy set dominates every L-subset, so no subset enumeration is
// needed for the value; per-y' support sizes are reported for comparison
// against the cardinality bound L.
CapacityResult solve_cfb_csi(const NostChannel& c, const SolverConfig& cfg = {});

// L = min{ |X|^|S|, (|X|-1)|S||Y|+1, (|Y|-1)|Y|+1 }.
long long cardinality_bound(const Alphabets& a);

enum class CertificateStatus { NoGainCertified, NoCertificateFound };

struct CsiCertificate {
  CertificateStatus status = CertificateStatus::NoCertificateFound;
  std::optional<Policy> p2_policy;  // over X; present when certified
  double max_kernel_mismatch = 0.0; // max_y |P2(y|y') - P1(y|y')| over pi>0 rows
};

// Sufficient condition for CSI giving no gain: for every y' with
// pi(y') > 1e-10, find p(x) >= 0, sum p = 1 with sum_x p(x) Q(y|x,y')
// matching the CSI-optimal P1(y|y') (LP per row; certified when the worst
// row mismatch is <= 1e-8). The condition is sufficient only: absence of a
// certificate does not prove a gap. csi_result must come from a full
// strategy-set solve.
CsiCertificate csi_gain_certificate(const NostChannel& c,
                                    const CapacityResult& csi_result,
                                    const SolverConfig& cfg = {});

// Kernel-match threshold for certification, from the CsiCertificate contract.
inline constexpr double kCertKernelTol = 1e-8;

// Closed-form objective for the noisy-POST channel at alpha = 0.5, as a
// function of a = P(X=1|Y'=0), b = P(X=0|Y'=1) and the state-noise eta.
// Throws DegenerateDenominatorError at a + b + eta = 0.
double noisy_post_objective(double a, double b, double eta);

// Exhaustive lower-bound oracle: enumerates stationary policies on a
// uniform grid of the row simplices, computes I(A;Y|Y') exactly for each
// (skipping policies without a unique stationary distribution) and returns
// the maximum. Guard: (1/step + 1)^(y_size*(in_size-1)) must be <= 1e8,
// else GridTooLargeError.
double grid_oracle(const AveragedChannel& av, double step);

}  // namespace nostcap
