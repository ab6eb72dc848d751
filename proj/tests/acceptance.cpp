// Acceptance suite: end-to-end checks of the capacity programs against
// known values, closed forms, independent oracles and Monte Carlo, printed
// one pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "nostcap/channel.hpp"
#include "nostcap/errors.hpp"
#include "nostcap/io.hpp"
#include "nostcap/markov.hpp"
#include "nostcap/simulate.hpp"
#include "nostcap/solver.hpp"
#include "oracle_ba.hpp"
#include "test_util.hpp"

using namespace nostcap;

namespace {

constexpr double kPostCapacity = 0.3219280948873623;  // -log2(0.8)

struct Check {
  bool pass = true;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double balance_residual(const JointDist& joint, const AveragedChannel& av) {
  double worst = 0.0;
  for (int yt = 0; yt < av.y_size; ++yt) {
    double lhs = 0.0;
    for (int a = 0; a < av.in_size; ++a) lhs += joint.p(yt, a);
    double rhs = 0.0;
    for (int yp = 0; yp < av.y_size; ++yp)
      for (int a = 0; a < av.in_size; ++a)
        rhs += joint.p(yp, a) * av.kernel(yp, a, yt);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Shared across criteria: the eta grid solves of criterion 2 are reused by
// criteria 6 (balance) and 9 (simulation targets).
struct EtaPoint {
  double eta;
  CapacityResult fb;
  CapacityResult csi;
};

// 1. Known endpoints with optimizers, under 5 s each.
Check criterion1() {
  Check c;
  for (const auto& [eta, b_opt] : std::vector<std::pair<double, double>>{
           {0.0, 0.4}, {1.0, 0.4 + 0.2 * 1.0}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const CapacityResult r = solve_cfb(make_noisy_post(0.5, eta));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    c.expect(std::abs(r.value_bits - kPostCapacity) <= 1e-5,
             "value(eta=" + fmt(eta) + ")=" + fmt(r.value_bits));
    c.expect(std::abs(r.policy.p(0, 1) - 0.4) <= 1e-3,
             "a(eta=" + fmt(eta) + ")=" + fmt(r.policy.p(0, 1)));
    c.expect(std::abs(r.policy.p(1, 0) - b_opt) <= 1e-3,
             "b(eta=" + fmt(eta) + ")=" + fmt(r.policy.p(1, 0)));
    c.expect(secs < 5.0, "runtime " + fmt(secs) + "s");
  }
  return c;
}

// 2. CSI equality and certification across the eta grid, under 2 min.
Check criterion2(std::vector<EtaPoint>& grid) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k <= 10; ++k) {
    const double eta = k / 10.0;
    const NostChannel chan = make_noisy_post(0.5, eta);
    EtaPoint point;
    point.eta = eta;
    point.fb = solve_cfb(chan);
    point.csi = solve_cfb_csi(chan);
    c.expect(std::abs(point.csi.value_bits - point.fb.value_bits) <= 1e-5,
             "gap(eta=" + fmt(eta) + ")=" +
                 fmt(point.csi.value_bits - point.fb.value_bits));
    const CsiCertificate cert = csi_gain_certificate(chan, point.csi);
    c.expect(cert.status == CertificateStatus::NoGainCertified,
             "no certificate at eta=" + fmt(eta));
    c.expect(cert.max_kernel_mismatch <= 1e-8,
             "mismatch(eta=" + fmt(eta) + ")=" + fmt(cert.max_kernel_mismatch));
    grid.push_back(std::move(point));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 120.0, "runtime " + fmt(secs) + "s");
  return c;
}

// 3. Closed-form consistency on a 0.001 grid of (a, b).
Check criterion3(const std::vector<EtaPoint>& grid) {
  Check c;
  for (const EtaPoint& point : grid) {
    double best = 0.0;
    for (int i = 0; i <= 1000; ++i)
      for (int k = 0; k <= 1000; ++k) {
        const double a = i / 1000.0;
        const double b = k / 1000.0;
        if (a + b + point.eta == 0.0) continue;
        best = std::max(best, noisy_post_objective(a, b, point.eta));
      }
    c.expect(std::abs(point.fb.value_bits - best) <= 1e-4,
             "eta=" + fmt(point.eta) + " diff=" +
                 fmt(point.fb.value_bits - best));
  }
  return c;
}

// 4. iid-state reduction to the DMC capacity, both settings.
Check criterion4() {
  Check c;
  std::mt19937_64 rng(202406);
  for (int trial = 0; trial < 20; ++trial) {
    const Alphabets a{2 + static_cast<int>(rng() % 2),
                      2 + static_cast<int>(rng() % 2),
                      2 + static_cast<int>(rng() % 2)};
    const NostChannel base = testutil::random_channel(rng, a);
    const NostChannel iid = make_iid_state_channel(
        testutil::simplex_row(rng, a.s_size), base.q_y_given_x_sprime);

    const AveragedChannel avx = average_channel(iid);
    Table2<double> w(a.x_size, a.y_size);
    for (int x = 0; x < a.x_size; ++x)
      for (int y = 0; y < a.y_size; ++y) w(x, y) = avx.kernel(0, x, y);
    const double dfb = std::abs(solve_cfb(iid).value_bits -
                                testutil::ba_capacity_bits(w));
    c.expect(dfb <= 1e-6, "trial " + std::to_string(trial) + " fb diff=" + fmt(dfb));

    const AveragedChannel avu =
        build_strategy_channel(iid, enumerate_strategies(a));
    Table2<double> wu(avu.in_size, a.y_size);
    for (int u = 0; u < avu.in_size; ++u)
      for (int y = 0; y < a.y_size; ++y) wu(u, y) = avu.kernel(0, u, y);
    const double dcsi = std::abs(solve_cfb_csi(iid).value_bits -
                                 testutil::ba_capacity_bits(wu));
    c.expect(dcsi <= 1e-6,
             "trial " + std::to_string(trial) + " csi diff=" + fmt(dcsi));
  }
  return c;
}

// 5. Grid-oracle agreement on random connected channels, under 10 min.
Check criterion5(std::vector<std::pair<JointDist, AveragedChannel>>& joints) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const NostChannel chan = testutil::random_connected_channel(rng, {2, 2, 2});
    const AveragedChannel av = average_channel(chan);
    const CapacityResult fb = solve_cfb(chan);
    const double oracle = grid_oracle(av, 0.005);
    c.expect(std::abs(fb.value_bits - oracle) <= 1e-3,
             "trial " + std::to_string(trial) + " fb=" + fmt(fb.value_bits) +
                 " oracle=" + fmt(oracle));
    const CapacityResult csi = solve_cfb_csi(chan);
    c.expect(csi.value_bits >= fb.value_bits - 1e-9,
             "trial " + std::to_string(trial) + " csi below fb");
    joints.emplace_back(fb.joint, av);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 600.0, "runtime " + fmt(secs) + "s");
  return c;
}

// 6. Balance constraints on every returned joint; midpoint concavity.
Check criterion6(const std::vector<EtaPoint>& grid,
                 const std::vector<std::pair<JointDist, AveragedChannel>>& joints) {
  Check c;
  for (const EtaPoint& point : grid) {
    const NostChannel chan = make_noisy_post(0.5, point.eta);
    const double rfb = balance_residual(point.fb.joint, average_channel(chan));
    const double rcsi = balance_residual(
        point.csi.joint,
        build_strategy_channel(chan, enumerate_strategies(chan.alphabets)));
    c.expect(rfb <= 1e-9, "fb residual " + fmt(rfb));
    c.expect(rcsi <= 1e-9, "csi residual " + fmt(rcsi));
  }
  for (const auto& [joint, av] : joints)
    c.expect(balance_residual(joint, av) <= 1e-9, "random-channel residual");

  const AveragedChannel av = average_channel(make_noisy_post(0.5, 0.5));
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 1000; ++trial) {
    const JointDist j1 = testutil::random_feasible_joint(rng, av);
    const JointDist j2 = testutil::random_feasible_joint(rng, av);
    const double lambda = testutil::u01(rng);
    JointDist mix;
    mix.p = Table2<double>(av.y_size, av.in_size, 0.0);
    for (int yp = 0; yp < av.y_size; ++yp)
      for (int a = 0; a < av.in_size; ++a)
        mix.p(yp, a) = lambda * j1.p(yp, a) + (1.0 - lambda) * j2.p(yp, a);
    const double lhs = conditional_mutual_information(mix, av);
    const double rhs = lambda * conditional_mutual_information(j1, av) +
                       (1.0 - lambda) * conditional_mutual_information(j2, av);
    if (lhs < rhs - 1e-10) {
      c.expect(false, "concavity violated by " + fmt(rhs - lhs));
      break;
    }
  }
  return c;
}

// 7. Cardinality bound L = 3 for binary alphabets, realized by reduction.
Check criterion7() {
  Check c;
  c.expect(cardinality_bound({2, 2, 2}) == 3, "L != 3");
  for (double eta : {0.25, 0.5, 0.75}) {
    const NostChannel chan = make_noisy_post(0.5, eta);
    const CapacityResult full = solve_cfb_csi(chan);
    SupportMask mask(2, 4, 0);
    for (int yp = 0; yp < 2; ++yp) {
      std::vector<int> order{0, 1, 2, 3};
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return full.policy.p(yp, a) > full.policy.p(yp, b);
      });
      for (int k = 0; k < 3; ++k) mask(yp, order[k]) = 1;
    }
    const AveragedChannel avu =
        build_strategy_channel(chan, enumerate_strategies(chan.alphabets));
    const CapacityResult reduced =
        solve_averaged(avu, Setting::FB_CSI, {}, &mask);
    c.expect(full.value_bits - reduced.value_bits <= 1e-6,
             "eta=" + fmt(eta) + " loss=" +
                 fmt(full.value_bits - reduced.value_bits));
  }
  return c;
}

// 8. Midpoint convexity of the capacity-vs-eta curve on a 0.05 grid.
Check criterion8() {
  Check c;
  std::vector<double> values;
  for (int k = 0; k <= 20; ++k)
    values.push_back(solve_cfb(make_noisy_post(0.5, k / 20.0)).value_bits);
  for (int i = 0; i <= 20; ++i)
    for (int j = i; j <= 20; ++j) {
      if ((i + j) % 2 != 0) continue;
      const double mid = values[(i + j) / 2];
      const double avg = 0.5 * (values[i] + values[j]);
      if (mid > avg + 1e-6) {
        c.expect(false, "violated at (" + std::to_string(i) + "," +
                            std::to_string(j) + ") by " + fmt(mid - avg));
        return c;
      }
    }
  return c;
}

// 9. Simulation convergence on the eta grid; byte-identical under a seed.
Check criterion9(const std::vector<EtaPoint>& grid) {
  Check c;
  for (const EtaPoint& point : grid) {
    const NostChannel chan = make_noisy_post(0.5, point.eta);
    SimConfig cfg;
    cfg.steps = 1000000;
    cfg.seed = 7;
    const SimReport rep = simulate_policy(chan, point.fb.policy, cfg);
    c.expect(std::abs(rep.empirical_rate_bits - point.fb.value_bits) <= 0.01,
             "rate(eta=" + fmt(point.eta) + ") off by " +
                 fmt(rep.empirical_rate_bits - point.fb.value_bits));
    for (int y = 0; y < 2; ++y)
      c.expect(std::abs(rep.empirical_pi[y] - point.fb.pi.pi[y]) <= 0.01,
               "pi(eta=" + fmt(point.eta) + ")");
  }
  // determinism: identical serialized reports under the same seed
  const NostChannel chan = make_noisy_post(0.5, 0.5);
  SimConfig cfg;
  cfg.steps = 200000;
  cfg.seed = 1234;
  const SimReport r1 = simulate_policy(chan, grid[5].fb.policy, cfg);
  const SimReport r2 = simulate_policy(chan, grid[5].fb.policy, cfg);
  c.expect(sim_report_to_json(r1) == sim_report_to_json(r2),
           "reports differ under a fixed seed");
  return c;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Check result;
    double seconds;
  };
  std::vector<Entry> entries;
  std::vector<EtaPoint> grid;
  std::vector<std::pair<JointDist, AveragedChannel>> joints;

  const auto timed = [&](int id, const char* name, auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Check result;
    try {
      result = fn();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    entries.push_back({id, name, std::move(result), secs});
  };

  timed(1, "POST endpoint values and optimizers", [] { return criterion1(); });
  timed(2, "CSI equality and certification on the eta grid",
        [&] { return criterion2(grid); });
  timed(3, "closed-form consistency on the (a,b) grid",
        [&] { return criterion3(grid); });
  timed(4, "iid-state reduction to Blahut-Arimoto", [] { return criterion4(); });
  timed(5, "grid-oracle agreement on random channels",
        [&] { return criterion5(joints); });
  timed(6, "stationarity balance and midpoint concavity",
        [&] { return criterion6(grid, joints); });
  timed(7, "cardinality bound and support reduction", [] { return criterion7(); });
  timed(8, "eta-convexity of the capacity curve", [] { return criterion8(); });
  timed(9, "simulation convergence and determinism",
        [&] { return criterion9(grid); });

  int failures = 0;
  for (const Entry& e : entries) {
    if (e.result.pass) {
      std::printf("PASS  criterion %d: %s (%.2fs)\n", e.id, e.name, e.seconds);
    } else {
      ++failures;
      std::printf("FAIL  criterion %d: %s (%.2fs) -- %s\n", e.id, e.name,
                  e.seconds, e.result.detail.c_str());
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failures,
              entries.size());
  return failures == 0 ? 0 : 1;
}
