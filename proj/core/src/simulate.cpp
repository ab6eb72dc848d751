#include "nostcap/simulate.hpp"

#include <cmath>
#include <random>
#include <string>

#include "nostcap/channel.hpp"
#include "nostcap/errors.hpp"

namespace nostcap {

namespace {

// Uniform double in [0,1) from the raw 64-bit stream; mt19937_64 plus this
// mapping is specified bit-for-bit by the standard, so trajectories are
// reproducible across platforms.
double u01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw over a pmf row; rounding leftovers land on the last
// positive-probability category.
int sample_row(const double* p, int n, double u) {
  double cum = 0.0;
  int last_positive = 0;
  for (int i = 0; i < n; ++i) {
    if (p[i] > 0.0) last_positive = i;
    cum += p[i];
    if (u < cum) return i;
  }
  return last_positive;
}

SimReport run(const NostChannel& c, const Policy& policy,
              const StrategySet* strategies, const SimConfig& cfg) {
  ValidationReport report = validate_channel(c);
  if (!report.empty()) {
    const std::string msg = "simulate_policy: " + to_string(report.front());
    throw InvalidChannelError(msg, std::move(report));
  }
  const auto& a = c.alphabets;
  const int n_letters = strategies ? static_cast<int>(strategies->size()) : a.x_size;
  if (policy.p.dim0() != a.y_size || policy.p.dim1() != n_letters)
    throw Error("simulate_policy: policy is " + std::to_string(policy.p.dim0()) +
                "x" + std::to_string(policy.p.dim1()) + ", expected " +
                std::to_string(a.y_size) + "x" + std::to_string(n_letters));
  if (strategies) {
    for (const auto& st : *strategies) {
      if (static_cast<int>(st.map.size()) != a.s_size)
        throw Error("simulate_policy: strategy length mismatch");
      for (int s = 0; s < a.s_size; ++s)
        if (st.map[s] < 0 || st.map[s] >= a.x_size)
          throw Error("simulate_policy: strategy maps outside X");
    }
  }
  for (int yp = 0; yp < a.y_size; ++yp) {
    double sum = 0.0;
    for (int i = 0; i < n_letters; ++i) {
      if (policy.p(yp, i) < 0.0 || !std::isfinite(policy.p(yp, i)))
        throw Error("simulate_policy: policy row " + std::to_string(yp) +
                    " has a bad entry");
      sum += policy.p(yp, i);
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw Error("simulate_policy: policy row " + std::to_string(yp) +
                  " sums to " + std::to_string(sum));
  }
  if (cfg.steps < 1) throw Error("simulate_policy: steps must be positive");
  if (cfg.initial_output < 0 || cfg.initial_output >= a.y_size)
    throw Error("simulate_policy: initial output outside Y");
  std::vector<double> s0 = cfg.initial_state_dist;
  if (s0.empty()) s0.assign(a.s_size, 1.0 / a.s_size);
  if (static_cast<int>(s0.size()) != a.s_size)
    throw Error("simulate_policy: initial state distribution has wrong length");
  double s0_sum = 0.0;
  for (double v : s0) {
    if (v < 0.0 || !std::isfinite(v))
      throw Error("simulate_policy: bad initial state distribution");
    s0_sum += v;
  }
  if (std::abs(s0_sum - 1.0) > 1e-9)
    throw Error("simulate_policy: initial state distribution sums to " +
                std::to_string(s0_sum));
  const long long burn_in = cfg.burn_in < 0 ? cfg.steps / 10 : cfg.burn_in;
  if (burn_in >= cfg.steps)
    throw Error("simulate_policy: burn_in must be smaller than steps");

  SimReport rep;
  rep.counts = Table3<long long>(a.y_size, n_letters, a.y_size, 0);
  std::mt19937_64 rng(cfg.seed);
  int y_prev = cfg.initial_output;

  for (long long i = 1; i <= cfg.steps; ++i) {
    // fixed draw order per step: s', a, y
    const int sp = i == 1 ? sample_row(s0.data(), a.s_size, u01(rng))
                          : sample_row(&c.q_s_given_y(y_prev, 0), a.s_size, u01(rng));
    const int letter = sample_row(&policy.p(y_prev, 0), n_letters, u01(rng));
    const int x = strategies ? (*strategies)[letter].map[sp] : letter;
    const int y = sample_row(&c.q_y_given_x_sprime(sp, x, 0), a.y_size, u01(rng));
    if (i > burn_in) rep.counts(y_prev, letter, y) += 1;
    y_prev = y;
  }

  const double n = static_cast<double>(cfg.steps - burn_in);
  rep.empirical_pi.assign(a.y_size, 0.0);
  for (int yp = 0; yp < a.y_size; ++yp)
    for (int l = 0; l < n_letters; ++l)
      for (int y = 0; y < a.y_size; ++y)
        rep.empirical_pi[y] += static_cast<double>(rep.counts(yp, l, y)) / n;

  // Plug-in estimate of I(A;Y|Y') from the count table.
  double bits = 0.0;
  for (int yp = 0; yp < a.y_size; ++yp) {
    long long c_yp = 0;
    std::vector<long long> c_ypy(a.y_size, 0);
    std::vector<long long> c_ypl(n_letters, 0);
    for (int l = 0; l < n_letters; ++l)
      for (int y = 0; y < a.y_size; ++y) {
        const long long v = rep.counts(yp, l, y);
        c_yp += v;
        c_ypy[y] += v;
        c_ypl[l] += v;
      }
    if (c_yp == 0) continue;
    for (int l = 0; l < n_letters; ++l)
      for (int y = 0; y < a.y_size; ++y) {
        const long long v = rep.counts(yp, l, y);
        if (v == 0) continue;
        bits += static_cast<double>(v) / n *
                std::log2(static_cast<double>(v) * static_cast<double>(c_yp) /
                          (static_cast<double>(c_ypl[l]) *
                           static_cast<double>(c_ypy[y])));
      }
  }
  rep.empirical_rate_bits = bits < 0.0 ? 0.0 : bits;
  return rep;
}

}  // namespace

SimReport simulate_policy(const NostChannel& c, const Policy& policy,
                          const SimConfig& cfg) {
  return run(c, policy, nullptr, cfg);
}

SimReport simulate_policy(const NostChannel& c, const Policy& policy,
                          const StrategySet& strategies, const SimConfig& cfg) {
  return run(c, policy, &strategies, cfg);
}

}  // namespace nostcap
