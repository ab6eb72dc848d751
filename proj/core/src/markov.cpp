#include "nostcap/markov.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "nostcap/entropy.hpp"
#include "nostcap/errors.hpp"

namespace nostcap {

namespace {

// Tolerance used when sanity-checking computed (not user-supplied) rows.
constexpr double kComputedRowTol = 1e-9;

void require_stochastic_rows(const Table2<double>& p, const char* what) {
  for (int i = 0; i < p.dim0(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < p.dim1(); ++j) {
      const double v = p(i, j);
      if (!(v >= -kComputedRowTol) || !std::isfinite(v))
        throw Error(std::string(what) + ": negative or non-finite entry in row " +
                    std::to_string(i));
      sum += v;
    }
    if (!(std::abs(sum - 1.0) <= kComputedRowTol))
      throw Error(std::string(what) + ": row " + std::to_string(i) +
                  " sums to " + std::to_string(sum));
  }
}

// Number of closed communication classes of the support graph of p.
int closed_class_count(const Table2<double>& p) {
  const int n = p.dim0();
  Table2<std::uint8_t> reach(n, n, 0);
  for (int i = 0; i < n; ++i) {
    reach(i, i) = 1;
    for (int j = 0; j < n; ++j)
      if (p(i, j) > 0.0) reach(i, j) = 1;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (reach(i, k))
        for (int j = 0; j < n; ++j)
          if (reach(k, j)) reach(i, j) = 1;

  std::vector<std::uint8_t> counted(n, 0);
  int classes = 0;
  for (int i = 0; i < n; ++i) {
    if (counted[i]) continue;
    bool closed = true;
    for (int k = 0; k < n; ++k)
      if (reach(i, k) && !reach(k, i)) {
        closed = false;
        break;
      }
    if (!closed) continue;
    ++classes;
    for (int j = 0; j < n; ++j)
      if (reach(i, j) && reach(j, i)) counted[j] = 1;
  }
  return classes;
}

double stationarity_residual(const Table2<double>& p,
                             const std::vector<double>& pi) {
  double r = 0.0;
  for (int y = 0; y < p.dim1(); ++y) {
    double in = 0.0;
    for (int yp = 0; yp < p.dim0(); ++yp) in += pi[yp] * p(yp, y);
    r = std::max(r, std::abs(in - pi[y]));
  }
  return r;
}

}  // namespace

OutputKernel induced_output_kernel(const Policy& policy,
                                   const AveragedChannel& av) {
  if (policy.p.dim0() != av.y_size || policy.p.dim1() != av.in_size)
    throw Error("induced_output_kernel: policy is " +
                std::to_string(policy.p.dim0()) + "x" +
                std::to_string(policy.p.dim1()) + ", channel expects " +
                std::to_string(av.y_size) + "x" + std::to_string(av.in_size));
  OutputKernel k;
  k.p = Table2<double>(av.y_size, av.y_size, 0.0);
  for (int yp = 0; yp < av.y_size; ++yp)
    for (int a = 0; a < av.in_size; ++a) {
      const double w = policy.p(yp, a);
      if (w == 0.0) continue;
      for (int y = 0; y < av.y_size; ++y)
        k.p(yp, y) += w * av.kernel(yp, a, y);
    }
  return k;
}

StationaryDist stationary_distribution(const OutputKernel& k) {
  const int n = k.p.dim0();
  if (n < 1 || k.p.dim1() != n)
    throw Error("stationary_distribution: kernel must be square");
  require_stochastic_rows(k.p, "stationary_distribution");
  if (closed_class_count(k.p) != 1)
    throw NonUniqueStationaryError(
        "output chain has multiple closed communication classes");
  if (n == 1) return {{1.0}};

  // Full system: (P^T - I) pi = 0 plus the normalization row.
  Eigen::MatrixXd full(n + 1, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      full(i, j) = k.p(j, i) - (i == j ? 1.0 : 0.0);
  for (int j = 0; j < n; ++j) full(n, j) = 1.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;

  // Direct solve on the square system (drop one balance equation), then
  // verify against the full system; fall back to least squares if needed.
  Eigen::MatrixXd sq(n, n);
  sq.topRows(n - 1) = full.topRows(n - 1);
  sq.row(n - 1) = full.row(n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd pi = sq.partialPivLu().solve(b);
  double residual = (full * pi - rhs).cwiseAbs().maxCoeff();
  if (!pi.allFinite() || residual > 1e-11 || pi.minCoeff() < -1e-10) {
    pi = full.colPivHouseholderQr().solve(rhs);
    residual = (full * pi - rhs).cwiseAbs().maxCoeff();
  }
  if (!pi.allFinite() || residual > kStationaryResidualTol)
    throw Error("stationary_distribution: solve residual " +
                std::to_string(residual) + " exceeds tolerance");

  StationaryDist out;
  out.pi.resize(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    out.pi[i] = pi(i) < 0.0 ? 0.0 : pi(i);
    sum += out.pi[i];
  }
  for (double& v : out.pi) v /= sum;
  if (stationarity_residual(k.p, out.pi) > kStationaryResidualTol)
    throw Error("stationary_distribution: residual invariant violated");
  return out;
}

double conditional_mutual_information(const JointDist& joint,
                                      const AveragedChannel& av) {
  const auto& J = joint.p;
  if (J.dim0() != av.y_size || J.dim1() != av.in_size)
    throw Error("conditional_mutual_information: joint is " +
                std::to_string(J.dim0()) + "x" + std::to_string(J.dim1()) +
                ", channel expects " + std::to_string(av.y_size) + "x" +
                std::to_string(av.in_size));
  double total = 0.0;
  for (const double v : J.data()) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error("conditional_mutual_information: joint has a negative or "
                  "non-finite entry");
    total += v;
  }
  if (std::abs(total - 1.0) > kRowSumTol)
    throw Error("conditional_mutual_information: joint sums to " +
                std::to_string(total));

  double bits = 0.0;
  std::vector<double> t(av.y_size);
  for (int yp = 0; yp < av.y_size; ++yp) {
    double m = 0.0;
    for (int a = 0; a < av.in_size; ++a) m += J(yp, a);
    if (m <= 0.0) continue;
    for (int y = 0; y < av.y_size; ++y) {
      double s = 0.0;
      for (int a = 0; a < av.in_size; ++a) s += J(yp, a) * av.kernel(yp, a, y);
      t[y] = s;
    }
    for (int a = 0; a < av.in_size; ++a) {
      const double w = J(yp, a);
      if (w <= 0.0) continue;
      for (int y = 0; y < av.y_size; ++y) {
        const double q = av.kernel(yp, a, y);
        // t[y] >= w*q > 0 whenever this term is live, so the log is finite
        if (q > 0.0) bits += w * q * std::log2(q * m / t[y]);
      }
    }
  }
  // clamp away rounding noise; genuine negatives would signal a bug upstream
  if (bits < 0.0 && bits > -1e-9) bits = 0.0;
  return bits;
}

std::pair<Policy, std::vector<double>> policy_from_joint(const JointDist& joint) {
  const auto& J = joint.p;
  const int ny = J.dim0();
  const int na = J.dim1();
  Policy pol;
  pol.p = Table2<double>(ny, na, 0.0);
  std::vector<double> marginal(ny, 0.0);
  for (int yp = 0; yp < ny; ++yp) {
    double m = 0.0;
    for (int a = 0; a < na; ++a) m += J(yp, a);
    marginal[yp] = m;
    if (m > 0.0) {
      for (int a = 0; a < na; ++a) pol.p(yp, a) = J(yp, a) / m;
    } else {
      // zero-marginal rows become uniform so that every Policy is total
      for (int a = 0; a < na; ++a) pol.p(yp, a) = 1.0 / na;
    }
  }
  return {std::move(pol), std::move(marginal)};
}

JointDist joint_from_policy(const Policy& policy, const AveragedChannel& av) {
  require_stochastic_rows(policy.p, "joint_from_policy");
  const OutputKernel k = induced_output_kernel(policy, av);
  const StationaryDist st = stationary_distribution(k);
  JointDist joint;
  joint.p = Table2<double>(av.y_size, av.in_size, 0.0);
  for (int yp = 0; yp < av.y_size; ++yp)
    for (int a = 0; a < av.in_size; ++a)
      joint.p(yp, a) = st.pi[yp] * policy.p(yp, a);
  return joint;
}

}  // namespace nostcap
