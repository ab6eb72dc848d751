#include "nostcap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "nostcap/channel.hpp"
#include "nostcap/entropy.hpp"
#include "nostcap/errors.hpp"
#include "nostcap/markov.hpp"
#include "simplex.hpp"

namespace nostcap {

namespace {

constexpr double kCoordFloor = 1e-300;  // line-search floor for coordinates
constexpr long kAwayStart = 1000;       // plain iterations before away steps
constexpr double kInteriorTrigger = 1e-6;

using detail::LpResult;
using detail::LpStatus;
using detail::solve_lp;

// Objective I(A;Y|Y') over joints J[y'][a], with gradient
// grad[y'][a] = D( K[y'][a][.] || P(.|y') ) in bits. Workspaces are kept
// across iterations; all log arguments are floored to stay finite near the
// simplex boundary (the objective itself is bounded, only the gradient
// diverges there).
class Objective {
 public:
  explicit Objective(const AveragedChannel& av)
      : av_(av), ny_(av.y_size), na_(av.in_size), m_(ny_), t_(ny_ * ny_) {}

  double value(const std::vector<double>& j) {
    marginals(j);
    double bits = 0.0;
    for (int yp = 0; yp < ny_; ++yp) {
      const double m = m_[yp];
      if (m <= 0.0) continue;
      for (int a = 0; a < na_; ++a) {
        const double w = j[idx(yp, a)];
        if (w <= 0.0) continue;
        for (int y = 0; y < ny_; ++y) {
          const double q = av_.kernel(yp, a, y);
          if (q > 0.0) bits += w * q * std::log2(q * m / t_[yp * ny_ + y]);
        }
      }
    }
    return bits < 0.0 ? 0.0 : bits;
  }

  void gradient(const std::vector<double>& j, std::vector<double>& g) {
    marginals(j);
    g.assign(j.size(), 0.0);
    for (int yp = 0; yp < ny_; ++yp) {
      const double m = m_[yp];
      for (int a = 0; a < na_; ++a) {
        double d = 0.0;
        for (int y = 0; y < ny_; ++y) {
          const double q = av_.kernel(yp, a, y);
          if (q <= 0.0) continue;
          // P(y|y') via the implied policy; uniform convention on m = 0 rows
          const double p = m > 0.0
                               ? t_[yp * ny_ + y] / m
                               : uniform_row_prob(yp, y);
          d += q * std::log2(q / std::max(p, kCoordFloor));
        }
        g[idx(yp, a)] = d;
      }
    }
  }

  // d/dt I(J + t D) evaluated at the given point.
  double dir_derivative(const std::vector<double>& j,
                        const std::vector<double>& d) {
    marginals(j);
    double out = 0.0;
    for (int yp = 0; yp < ny_; ++yp) {
      const double m = m_[yp];
      for (int a = 0; a < na_; ++a) {
        const double dv = d[idx(yp, a)];
        if (dv == 0.0) continue;
        double grad = 0.0;
        for (int y = 0; y < ny_; ++y) {
          const double q = av_.kernel(yp, a, y);
          if (q <= 0.0) continue;
          const double p = m > 0.0 ? t_[yp * ny_ + y] / m
                                   : uniform_row_prob(yp, y);
          grad += q * std::log2(q / std::max(p, kCoordFloor));
        }
        out += dv * grad;
      }
    }
    return out;
  }

  int idx(int yp, int a) const { return yp * na_ + a; }

 private:
  void marginals(const std::vector<double>& j) {
    for (int yp = 0; yp < ny_; ++yp) {
      double m = 0.0;
      for (int a = 0; a < na_; ++a) m += j[idx(yp, a)];
      m_[yp] = m;
      for (int y = 0; y < ny_; ++y) {
        double s = 0.0;
        for (int a = 0; a < na_; ++a) s += j[idx(yp, a)] * av_.kernel(yp, a, y);
        t_[yp * ny_ + y] = s;
      }
    }
  }

  double uniform_row_prob(int yp, int y) const {
    double s = 0.0;
    for (int a = 0; a < na_; ++a) s += av_.kernel(yp, a, y);
    return s / na_;
  }

  const AveragedChannel& av_;
  int ny_;
  int na_;
  std::vector<double> m_;
  std::vector<double> t_;
};

// The feasible polytope in LP form over the (optionally masked) coordinate
// list: stationarity balance rows plus the total-mass row.
class FeasibleSet {
 public:
  FeasibleSet(const AveragedChannel& av, const SupportMask* mask)
      : av_(av), ny_(av.y_size), na_(av.in_size) {
    if (mask) {
      if (mask->dim0() != ny_ || mask->dim1() != na_)
        throw Error("solve_averaged: support mask has wrong dimensions");
      for (int yp = 0; yp < ny_; ++yp) {
        bool any = false;
        for (int a = 0; a < na_; ++a)
          if ((*mask)(yp, a)) {
            cols_.push_back(yp * na_ + a);
            any = true;
          }
        if (!any)
          throw Error("solve_averaged: support mask row " + std::to_string(yp) +
                      " is empty");
      }
    } else {
      cols_.resize(static_cast<std::size_t>(ny_) * na_);
      for (std::size_t i = 0; i < cols_.size(); ++i) cols_[i] = static_cast<int>(i);
    }

    const int n = static_cast<int>(cols_.size());
    a_ = Table2<double>(ny_ + 1, n, 0.0);
    b_.assign(ny_ + 1, 0.0);
    for (int col = 0; col < n; ++col) {
      const int yp = cols_[col] / na_;
      const int a = cols_[col] % na_;
      for (int yt = 0; yt < ny_; ++yt)
        a_(yt, col) = (yp == yt ? 1.0 : 0.0) - av_.kernel(yp, a, yt);
      a_(ny_, col) = 1.0;
    }
    b_[ny_] = 1.0;
  }

  int num_cols() const { return static_cast<int>(cols_.size()); }
  const std::vector<int>& cols() const { return cols_; }

  // argmax_{v in polytope} <g, v>
  std::vector<double> lmo(const std::vector<double>& g, double eps) const {
    std::vector<double> c(cols_.size());
    for (std::size_t i = 0; i < cols_.size(); ++i) c[i] = -g[cols_[i]];
    const LpResult r = solve_lp(a_, b_, c, eps);
    if (r.status != LpStatus::Optimal)
      throw Error("solve_averaged: linear subproblem infeasible");
    return embed(r.x);
  }

  // Feasible point maximizing the smallest coordinate (over the mask).
  // Returns the point and the attained minimum t*.
  std::pair<std::vector<double>, double> max_min_point(double eps) const {
    const int n = num_cols();
    Table2<double> A(ny_ + 1 + n, 2 * n + 1, 0.0);
    std::vector<double> b(ny_ + 1 + n, 0.0);
    for (int i = 0; i <= ny_; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = a_(i, j);
      b[i] = b_[i];
    }
    for (int i = 0; i < n; ++i) {
      A(ny_ + 1 + i, i) = 1.0;          // J_i
      A(ny_ + 1 + i, n + i) = -1.0;     // - w_i
      A(ny_ + 1 + i, 2 * n) = -1.0;     // - t
    }
    std::vector<double> c(2 * n + 1, 0.0);
    c[2 * n] = -1.0;
    const LpResult r = solve_lp(A, b, c, eps);
    if (r.status != LpStatus::Optimal)
      throw Error("solve_averaged: interior-point LP failed");
    std::vector<double> x(r.x.begin(), r.x.begin() + n);
    return {embed(x), r.x[2 * n]};
  }

  // Feasible point maximizing the marginal mass of one y' row.
  std::vector<double> max_row_mass_point(int yp, double eps) const {
    std::vector<double> c(cols_.size(), 0.0);
    for (std::size_t i = 0; i < cols_.size(); ++i)
      if (cols_[i] / na_ == yp) c[i] = -1.0;
    const LpResult r = solve_lp(a_, b_, c, eps);
    if (r.status != LpStatus::Optimal)
      throw Error("solve_averaged: row-mass LP failed");
    return embed(r.x);
  }

  std::vector<double> embed(const std::vector<double>& x) const {
    std::vector<double> full(static_cast<std::size_t>(ny_) * na_, 0.0);
    for (std::size_t i = 0; i < cols_.size(); ++i) full[cols_[i]] = x[i];
    return full;
  }

 private:
  const AveragedChannel& av_;
  int ny_;
  int na_;
  std::vector<int> cols_;
  Table2<double> a_;  // (ny+1) x cols constraint matrix
  std::vector<double> b_;
};

double max_balance_residual(const std::vector<double>& j,
                            const AveragedChannel& av) {
  double r = 0.0;
  for (int yt = 0; yt < av.y_size; ++yt) {
    double lhs = 0.0;
    for (int a = 0; a < av.in_size; ++a) lhs += j[yt * av.in_size + a];
    double rhs = 0.0;
    for (int yp = 0; yp < av.y_size; ++yp)
      for (int a = 0; a < av.in_size; ++a)
        rhs += j[yp * av.in_size + a] * av.kernel(yp, a, yt);
    r = std::max(r, std::abs(lhs - rhs));
  }
  return r;
}

// Largest step along d keeping every coordinate above its floor.
double coordinate_cap(const std::vector<double>& j, const std::vector<double>& d,
                      double cap) {
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (d[i] >= 0.0) continue;
    const double floor_i = std::min(kCoordFloor, 0.5 * j[i]);
    const double limit = (j[i] - floor_i) / (-d[i]);
    cap = std::min(cap, limit);
  }
  return std::max(cap, 0.0);
}

// Exact line search for the concave 1-D slice t -> I(J + tD) on [0, cap]:
// bisection on the (decreasing) directional derivative.
double line_search(Objective& obj, const std::vector<double>& j,
                   const std::vector<double>& d, double cap) {
  std::vector<double> probe(j.size());
  auto slope = [&](double t) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      probe[i] = j[i] + t * d[i];
      if (probe[i] < 0.0) probe[i] = 0.0;
    }
    return obj.dir_derivative(probe, d);
  };
  if (slope(cap) >= 0.0) return cap;
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 80 && hi - lo > 1e-18; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Policy uniform_policy_on(const SupportMask* mask, int ny, int na) {
  Policy pol;
  pol.p = Table2<double>(ny, na, 0.0);
  for (int yp = 0; yp < ny; ++yp) {
    int allowed = 0;
    for (int a = 0; a < na; ++a)
      if (!mask || (*mask)(yp, a)) ++allowed;
    for (int a = 0; a < na; ++a)
      if (!mask || (*mask)(yp, a)) pol.p(yp, a) = 1.0 / allowed;
  }
  return pol;
}

std::vector<double> initial_point(const AveragedChannel& av,
                                  const FeasibleSet& fs, const SupportMask* mask,
                                  double lp_eps) {
  std::vector<double> j0;
  bool have_j0 = false;
  try {
    const JointDist jd = joint_from_policy(uniform_policy_on(mask, av.y_size, av.in_size), av);
    j0 = jd.p.data();
    have_j0 = true;
  } catch (const NonUniqueStationaryError&) {
    // masked uniform policy may lose irreducibility; fall through to the LP
  }
  if (!have_j0) {
    auto [point, t] = fs.max_min_point(lp_eps);
    return point;
  }

  double min_mass = std::numeric_limits<double>::infinity();
  std::vector<double> mass(av.y_size, 0.0);
  for (int yp = 0; yp < av.y_size; ++yp) {
    for (int a = 0; a < av.in_size; ++a) mass[yp] += j0[yp * av.in_size + a];
    min_mass = std::min(min_mass, mass[yp]);
  }
  if (min_mass >= kInteriorTrigger) return j0;

  // Mix 50/50 with an interior point so every populatable row carries mass.
  auto [center, tstar] = fs.max_min_point(lp_eps);
  if (tstar <= 10.0 * lp_eps) {
    // No strictly positive feasible point; pull in per-row max-mass points.
    std::vector<double> acc = j0;
    int parts = 1;
    for (int yp = 0; yp < av.y_size; ++yp) {
      if (mass[yp] >= kInteriorTrigger) continue;
      std::vector<double> bp = fs.max_row_mass_point(yp, lp_eps);
      double row_mass = 0.0;
      for (int a = 0; a < av.in_size; ++a) row_mass += bp[yp * av.in_size + a];
      if (row_mass <= 1e-9) continue;  // row is dead polytope-wide
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += bp[i];
      ++parts;
    }
    center = std::move(acc);
    for (double& v : center) v /= parts;
    std::vector<double> mixed(j0.size());
    for (std::size_t i = 0; i < j0.size(); ++i) mixed[i] = 0.5 * (j0[i] + center[i]);
    return mixed;
  }
  std::vector<double> mixed(j0.size());
  for (std::size_t i = 0; i < j0.size(); ++i) mixed[i] = 0.5 * (j0[i] + center[i]);
  return mixed;
}

struct AtomSet {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;

  int find(const std::vector<double>& v) const {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i] == v) return static_cast<int>(i);
    return -1;
  }

  void prune() {
    double sum = 0.0;
    std::size_t out = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (weights[i] > 1e-16) {
        if (out != i) {
          points[out] = std::move(points[i]);
          weights[out] = weights[i];
        }
        ++out;
      }
    }
    points.resize(out);
    weights.resize(out);
    for (double w : weights) sum += w;
    if (sum > 0.0)
      for (double& w : weights) w /= sum;
  }
};

}  // namespace

CapacityResult solve_averaged(const AveragedChannel& av, Setting setting,
                              const SolverConfig& cfg, const SupportMask* mask) {
  if (av.y_size < 1 || av.in_size < 1 ||
      av.kernel.dim0() != av.y_size || av.kernel.dim1() != av.in_size ||
      av.kernel.dim2() != av.y_size)
    throw Error("solve_averaged: malformed averaged channel");
  if (!(cfg.tolerance > 0.0))
    throw Error("solve_averaged: tolerance must be positive");
  const Connectivity conn = check_connectivity(av);
  if (!conn.connected)
    throw NotConnectedError(
        "channel is not connected: no output is reachable from every "
        "initial output");

  Objective obj(av);
  FeasibleSet fs(av, mask);

  std::vector<double> j = initial_point(av, fs, mask, cfg.lp_tolerance);
  AtomSet atoms;
  atoms.points.push_back(j);
  atoms.weights.push_back(1.0);

  std::vector<double> grad;
  std::vector<double> dir(j.size());
  double gap = std::numeric_limits<double>::infinity();
  long it = 0;
  bool converged = false;

  for (; it < cfg.max_iterations; ++it) {
    obj.gradient(j, grad);
    const std::vector<double> v = fs.lmo(grad, cfg.lp_tolerance);

    double fw_gain = 0.0;
    for (std::size_t i = 0; i < j.size(); ++i) fw_gain += grad[i] * (v[i] - j[i]);
    gap = fw_gain;
    if (gap <= cfg.tolerance) {
      converged = true;
      break;
    }

    // Away direction: move off the worst active atom.
    int away_idx = -1;
    double away_gain = -std::numeric_limits<double>::infinity();
    if (it >= kAwayStart && atoms.points.size() > 1) {
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < atoms.points.size(); ++k) {
        double s = 0.0;
        const auto& p = atoms.points[k];
        for (std::size_t i = 0; i < p.size(); ++i) s += grad[i] * p[i];
        if (s < worst) {
          worst = s;
          away_idx = static_cast<int>(k);
        }
      }
      if (away_idx >= 0) {
        away_gain = 0.0;
        const auto& u = atoms.points[away_idx];
        for (std::size_t i = 0; i < j.size(); ++i)
          away_gain += grad[i] * (j[i] - u[i]);
      }
    }

    bool stepped = false;
    if (away_idx >= 0 && away_gain > fw_gain && atoms.weights[away_idx] < 1.0) {
      const auto& u = atoms.points[away_idx];
      for (std::size_t i = 0; i < j.size(); ++i) dir[i] = j[i] - u[i];
      const double alpha = atoms.weights[away_idx];
      const double cap = coordinate_cap(j, dir, alpha / (1.0 - alpha));
      const double t = cap > 0.0 ? line_search(obj, j, dir, cap) : 0.0;
      if (t > 0.0) {
        for (std::size_t i = 0; i < j.size(); ++i) {
          j[i] += t * dir[i];
          if (j[i] < 0.0) j[i] = 0.0;
        }
        for (double& w : atoms.weights) w *= 1.0 + t;
        atoms.weights[away_idx] -= t;
        stepped = true;
      } else {
        // blocked away step: the atom no longer matches the tracked
        // iterate (coordinate decay), so retire it and take a plain step
        atoms.weights[away_idx] = 0.0;
      }
      atoms.prune();
    }
    if (!stepped) {
      for (std::size_t i = 0; i < j.size(); ++i) dir[i] = v[i] - j[i];
      const double cap = coordinate_cap(j, dir, 1.0);
      const double t = cap > 0.0 ? line_search(obj, j, dir, cap) : 0.0;
      if (t <= 0.0) continue;
      for (std::size_t i = 0; i < j.size(); ++i) {
        j[i] += t * dir[i];
        if (j[i] < 0.0) j[i] = 0.0;
      }
      for (double& w : atoms.weights) w *= 1.0 - t;
      const int k = atoms.find(v);
      if (k >= 0)
        atoms.weights[k] += t;
      else {
        atoms.points.push_back(v);
        atoms.weights.push_back(t);
      }
      atoms.prune();
    }
  }

  // Normalize exactly and package the result.
  double total = 0.0;
  for (double x : j) total += x;
  if (total > 0.0)
    for (double& x : j) x /= total;

  CapacityResult res;
  res.setting = setting;
  res.joint.p = Table2<double>(av.y_size, av.in_size, 0.0);
  res.joint.p.data() = j;
  res.value_bits = conditional_mutual_information(res.joint, av);
  auto [policy, marginal] = policy_from_joint(res.joint);
  res.policy = std::move(policy);
  double msum = 0.0;
  for (double m : marginal) msum += m;
  res.pi.pi = std::move(marginal);
  if (msum > 0.0)
    for (double& m : res.pi.pi) m /= msum;
  res.gap = gap;
  res.stationarity_residual = max_balance_residual(j, av);
  res.iterations = it;
  res.converged = converged;
  if (setting == Setting::FB_CSI) {
    res.support_sizes.resize(av.y_size, 0);
    for (int yp = 0; yp < av.y_size; ++yp)
      for (int a = 0; a < av.in_size; ++a)
        if (res.policy.p(yp, a) > kSupportThreshold) ++res.support_sizes[yp];
  }
  return res;
}

CapacityResult solve_cfb(const NostChannel& c, const SolverConfig& cfg) {
  return solve_averaged(average_channel(c), Setting::FB, cfg);
}

CapacityResult solve_cfb_csi(const NostChannel& c, const SolverConfig& cfg) {
  const StrategySet strategies = enumerate_strategies(c.alphabets);
  // Connectivity is a property of the underlying channel; the strategy
  // channel's support contains the constant maps, so checking the plain
  // averaged kernel suffices.
  const AveragedChannel avx = average_channel(c);
  if (!check_connectivity(avx).connected)
    throw NotConnectedError(
        "channel is not connected: no output is reachable from every "
        "initial output");
  const AveragedChannel avu = build_strategy_channel(c, strategies);
  CapacityResult res = solve_averaged(avu, Setting::FB_CSI, cfg);
  res.cardinality_bound_l = cardinality_bound(c.alphabets);
  return res;
}

long long cardinality_bound(const Alphabets& a) {
  const long long by_input = 1LL * (a.x_size - 1) * a.s_size * a.y_size + 1;
  const long long by_output = 1LL * (a.y_size - 1) * a.y_size + 1;
  long long bound = std::min(by_input, by_output);
  long long pow_xs = 1;
  for (int i = 0; i < a.s_size; ++i) {
    pow_xs *= a.x_size;
    if (pow_xs >= bound) return bound;  // |X|^|S| can only grow
  }
  return pow_xs;
}

CsiCertificate csi_gain_certificate(const NostChannel& c,
                                    const CapacityResult& csi_result,
                                    const SolverConfig& cfg) {
  const StrategySet strategies = enumerate_strategies(c.alphabets);
  const AveragedChannel avu = build_strategy_channel(c, strategies);
  const AveragedChannel avx = average_channel(c);
  if (csi_result.joint.p.dim0() != avu.y_size ||
      csi_result.joint.p.dim1() != avu.in_size)
    throw Error("csi_gain_certificate: result does not match the full "
                "strategy set of this channel");

  auto [p1_policy, marginal] = policy_from_joint(csi_result.joint);
  const OutputKernel p1_kernel = induced_output_kernel(p1_policy, avu);

  const int ny = avx.y_size;
  const int nx = avx.in_size;
  CsiCertificate cert;
  Policy p2;
  p2.p = Table2<double>(ny, nx, 1.0 / nx);
  double worst = 0.0;

  for (int yp = 0; yp < ny; ++yp) {
    if (marginal[yp] <= 1e-10) continue;  // off-support rows never enter I
    // Find p on the X simplex with sum_x p(x) Q(y|x,y') closest to
    // P1(y|y') in L1, via slack variables d+ and d-.
    Table2<double> A(ny + 1, nx + 2 * ny, 0.0);
    std::vector<double> b(ny + 1, 0.0);
    std::vector<double> cost(nx + 2 * ny, 0.0);
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) A(y, x) = avx.kernel(yp, x, y);
      A(y, nx + y) = 1.0;
      A(y, nx + ny + y) = -1.0;
      b[y] = p1_kernel.p(yp, y);
      cost[nx + y] = 1.0;
      cost[nx + ny + y] = 1.0;
    }
    for (int x = 0; x < nx; ++x) A(ny, x) = 1.0;
    b[ny] = 1.0;

    const LpResult lp = solve_lp(A, b, cost, cfg.lp_tolerance);
    if (lp.status != LpStatus::Optimal)
      throw Error("csi_gain_certificate: row LP failed");
    for (int x = 0; x < nx; ++x) p2.p(yp, x) = lp.x[x];
    double row_sum = 0.0;
    for (int x = 0; x < nx; ++x) row_sum += p2.p(yp, x);
    if (row_sum > 0.0)
      for (int x = 0; x < nx; ++x) p2.p(yp, x) /= row_sum;

    for (int y = 0; y < ny; ++y) {
      double induced = 0.0;
      for (int x = 0; x < nx; ++x) induced += p2.p(yp, x) * avx.kernel(yp, x, y);
      worst = std::max(worst, std::abs(induced - p1_kernel.p(yp, y)));
    }
  }

  cert.max_kernel_mismatch = worst;
  if (worst <= kCertKernelTol) {
    cert.status = CertificateStatus::NoGainCertified;
    cert.p2_policy = std::move(p2);
  } else {
    cert.status = CertificateStatus::NoCertificateFound;
    cert.p2_policy = std::nullopt;
  }
  return cert;
}

double noisy_post_objective(double a, double b, double eta) {
  if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0) ||
      !(eta >= 0.0 && eta <= 1.0))
    throw Error("noisy_post_objective: arguments must lie in [0,1]");
  const double den = a + b + eta;
  if (den == 0.0)
    throw DegenerateDenominatorError("noisy_post_objective: a + b + eta = 0");
  const double w0 = (b + eta) / den;
  const double w1 = a / den;
  return w0 * (binary_entropy_bits(a / 2.0) - a) +
         w1 * (binary_entropy_bits((b + eta) / 2.0) -
               b * binary_entropy_bits((1.0 - eta) / 2.0) -
               (1.0 - b) * binary_entropy_bits(eta / 2.0));
}

double grid_oracle(const AveragedChannel& av, double step) {
  if (!(step > 0.0 && step <= 1.0)) throw Error("grid_oracle: bad step");
  const double levels = 1.0 / step + 1.0;
  const double budget =
      static_cast<double>(av.y_size) * (av.in_size - 1) * std::log(levels);
  if (budget > std::log(1e8))
    throw GridTooLargeError("grid_oracle: (1/step+1)^(y*(in-1)) exceeds 1e8");

  const int k = std::max(1, static_cast<int>(std::lround(1.0 / step)));
  // All pmfs with entries on the grid {0, 1/k, ..., 1} for one policy row.
  std::vector<std::vector<double>> rows;
  std::vector<int> levels_buf(av.in_size, 0);
  auto emit = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == av.in_size - 1) {
      levels_buf[pos] = remaining;
      std::vector<double> row(av.in_size);
      for (int i = 0; i < av.in_size; ++i)
        row[i] = static_cast<double>(levels_buf[i]) / k;
      rows.push_back(std::move(row));
      return;
    }
    for (int l = 0; l <= remaining; ++l) {
      levels_buf[pos] = l;
      self(self, pos + 1, remaining - l);
    }
  };
  emit(emit, 0, k);

  double best = -1.0;
  std::vector<std::size_t> pick(av.y_size, 0);
  Policy pol;
  pol.p = Table2<double>(av.y_size, av.in_size, 0.0);
  bool done = false;
  bool any = false;
  while (!done) {
    for (int yp = 0; yp < av.y_size; ++yp)
      for (int a = 0; a < av.in_size; ++a)
        pol.p(yp, a) = rows[pick[yp]][a];
    try {
      const JointDist joint = joint_from_policy(pol, av);
      best = std::max(best, conditional_mutual_information(joint, av));
      any = true;
    } catch (const NonUniqueStationaryError&) {
      // degenerate policy; not a stationary candidate
    }
    done = true;
    for (int yp = 0; yp < av.y_size; ++yp) {
      if (++pick[yp] < rows.size()) {
        done = false;
        break;
      }
      pick[yp] = 0;
    }
  }
  if (!any)
    throw Error("grid_oracle: no grid policy admits a unique stationary "
                "distribution");
  return best;
}

}  // namespace nostcap
