#pragma once

#include <utility>
#include <vector>

#include "nostcap/types.hpp"

namespace nostcap {

// P(y|y') = sum_a policy(a|y') kernel[y'][a][y].
OutputKernel induced_output_kernel(const Policy& policy,
                                   const AveragedChannel& av);

// Solves pi P = pi, sum pi = 1 by a direct linear solve on the
// (|Y|+1)-equation system, with a least-squares fallback. Uniqueness is
// established first by checking that the support graph of the kernel has a
// single closed communication class; otherwise NonUniqueStationaryError.
StationaryDist stationary_distribution(const OutputKernel& k);

// I(A;Y|Y') in bits of the joint P(y',a,y) = joint[y'][a] kernel[y'][a][y],
// with 0 log 0 = 0 and the conditional P(y|y') taken from the joint's
// implied policy on the support of the y' marginal.
double conditional_mutual_information(const JointDist& joint,
                                      const AveragedChannel& av);

// Splits a joint into its conditional rows and y' marginal. Rows with zero
// marginal become uniform so that every Policy is total (fixed convention).
std::pair<Policy, std::vector<double>> policy_from_joint(const JointDist& joint);

// joint[y'][a] = pi(y') policy(a|y') with pi the stationary distribution of
// the induced output kernel. The result satisfies the stationarity balance
// constraints up to the solve tolerance. Propagates NonUniqueStationaryError.
JointDist joint_from_policy(const Policy& policy, const AveragedChannel& av);

}  // namespace nostcap
