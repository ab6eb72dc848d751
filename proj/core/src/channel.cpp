#include "nostcap/channel.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "nostcap/errors.hpp"

namespace nostcap {

namespace {

std::string fmt_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string idx(const char* name, int i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}

std::string idx(const char* name, int i, int j) {
  return idx(name, i) + "[" + std::to_string(j) + "]";
}

[[noreturn]] void throw_invalid(const char* context, ValidationReport report) {
  std::string msg = std::string(context) + ": " + to_string(report.front());
  if (report.size() > 1)
    msg += " (+" + std::to_string(report.size() - 1) + " more)";
  throw InvalidChannelError(msg, std::move(report));
}

// Flags non-finite and negative entries of one probability row and checks
// its sum against 1 within kRowSumTol.
void check_row(const double* row, int n, const std::string& where,
               ValidationReport& report) {
  double sum = 0.0;
  bool finite = true;
  for (int i = 0; i < n; ++i) {
    const double v = row[i];
    if (!std::isfinite(v)) {
      report.push_back({ViolationKind::NonFinite,
                        where + "[" + std::to_string(i) + "]", v});
      finite = false;
      continue;
    }
    if (v < 0.0) {
      report.push_back({ViolationKind::Negative,
                        where + "[" + std::to_string(i) + "]", v});
    }
    sum += v;
  }
  if (finite && !(std::abs(sum - 1.0) <= kRowSumTol)) {
    report.push_back({ViolationKind::RowSum, where, sum});
  }
}

}  // namespace

std::string to_string(const Violation& v) {
  switch (v.kind) {
    case ViolationKind::Dimension:
      return v.where + ": dimension mismatch (got " + fmt_value(v.value) + ")";
    case ViolationKind::RowSum:
      return v.where + ": row sums to " + fmt_value(v.value) +
             ", expected 1 within 1e-12";
    case ViolationKind::Negative:
      return v.where + ": negative entry " + fmt_value(v.value);
    case ViolationKind::NonFinite:
      return v.where + ": non-finite entry";
  }
  return v.where + ": unknown violation";
}

ValidationReport validate_channel(const NostChannel& c) {
  ValidationReport report;
  const auto& a = c.alphabets;
  if (a.x_size < 1) report.push_back({ViolationKind::Dimension, "alphabets.x_size", double(a.x_size)});
  if (a.y_size < 1) report.push_back({ViolationKind::Dimension, "alphabets.y_size", double(a.y_size)});
  if (a.s_size < 1) report.push_back({ViolationKind::Dimension, "alphabets.s_size", double(a.s_size)});
  if (!report.empty()) return report;

  const auto& qy = c.q_y_given_x_sprime;
  if (qy.dim0() != a.s_size || qy.dim1() != a.x_size || qy.dim2() != a.y_size) {
    report.push_back({ViolationKind::Dimension, "q_y_given_x_sprime",
                      double(qy.dim0()) * 1e6 + double(qy.dim1()) * 1e3 + qy.dim2()});
  }
  const auto& qs = c.q_s_given_y;
  if (qs.dim0() != a.y_size || qs.dim1() != a.s_size) {
    report.push_back({ViolationKind::Dimension, "q_s_given_y",
                      double(qs.dim0()) * 1e3 + qs.dim1()});
  }
  if (!report.empty()) return report;

  for (int s = 0; s < a.s_size; ++s)
    for (int x = 0; x < a.x_size; ++x)
      check_row(&qy(s, x, 0), a.y_size, idx("q_y_given_x_sprime", s, x), report);
  for (int y = 0; y < a.y_size; ++y)
    check_row(&qs(y, 0), a.s_size, idx("q_s_given_y", y), report);
  return report;
}

AveragedChannel average_channel(const NostChannel& c) {
  ValidationReport report = validate_channel(c);
  if (!report.empty()) throw_invalid("invalid channel", std::move(report));
  const auto& a = c.alphabets;
  AveragedChannel av;
  av.in_size = a.x_size;
  av.y_size = a.y_size;
  av.kernel = Table3<double>(a.y_size, a.x_size, a.y_size, 0.0);
  for (int yp = 0; yp < a.y_size; ++yp)
    for (int x = 0; x < a.x_size; ++x)
      for (int y = 0; y < a.y_size; ++y) {
        double sum = 0.0;
        for (int s = 0; s < a.s_size; ++s)
          sum += c.q_s_given_y(yp, s) * c.q_y_given_x_sprime(s, x, y);
        av.kernel(yp, x, y) = sum;
      }
  return av;
}

StrategySet enumerate_strategies(const Alphabets& a) {
  if (a.x_size < 1 || a.s_size < 1) {
    throw Error("enumerate_strategies: alphabet sizes must be >= 1");
  }
  long long count = 1;
  for (int i = 0; i < a.s_size; ++i) {
    count *= a.x_size;
    if (count > kMaxStrategies) {
      throw StrategyOverflowError(
          "strategy set size |X|^|S| = " + std::to_string(a.x_size) + "^" +
          std::to_string(a.s_size) + " exceeds the cap of 2^20");
    }
  }
  StrategySet out;
  out.reserve(static_cast<std::size_t>(count));
  Strategy cur;
  cur.map.assign(a.s_size, 0);
  for (long long i = 0; i < count; ++i) {
    out.push_back(cur);
    // lexicographic odometer: last position varies fastest
    for (int pos = a.s_size - 1; pos >= 0; --pos) {
      if (++cur.map[pos] < a.x_size) break;
      cur.map[pos] = 0;
    }
  }
  return out;
}

AveragedChannel build_strategy_channel(const NostChannel& c,
                                       const StrategySet& strategies) {
  ValidationReport report = validate_channel(c);
  if (!report.empty()) throw_invalid("invalid channel", std::move(report));
  const auto& a = c.alphabets;
  if (strategies.empty()) throw Error("build_strategy_channel: empty strategy set");
  for (std::size_t u = 0; u < strategies.size(); ++u) {
    const auto& m = strategies[u].map;
    if (static_cast<int>(m.size()) != a.s_size)
      throw Error("build_strategy_channel: strategy " + std::to_string(u) +
                  " has length " + std::to_string(m.size()) + ", expected |S| = " +
                  std::to_string(a.s_size));
    for (int s = 0; s < a.s_size; ++s)
      if (m[s] < 0 || m[s] >= a.x_size)
        throw Error("build_strategy_channel: strategy " + std::to_string(u) +
                    " maps state " + std::to_string(s) + " outside X");
  }

  AveragedChannel av;
  av.in_size = static_cast<int>(strategies.size());
  av.y_size = a.y_size;
  av.kernel = Table3<double>(a.y_size, av.in_size, a.y_size, 0.0);
  for (int yp = 0; yp < a.y_size; ++yp)
    for (int u = 0; u < av.in_size; ++u)
      for (int y = 0; y < a.y_size; ++y) {
        double sum = 0.0;
        for (int s = 0; s < a.s_size; ++s)
          sum += c.q_s_given_y(yp, s) *
                 c.q_y_given_x_sprime(s, strategies[u].map[s], y);
        av.kernel(yp, u, y) = sum;
      }
  return av;
}

Connectivity check_connectivity(const AveragedChannel& av) {
  const int n = av.y_size;
  // reach(i,j): j reachable from i in >= 0 steps through the support graph
  Table2<std::uint8_t> reach(n, n, 0);
  for (int yp = 0; yp < n; ++yp) {
    reach(yp, yp) = 1;
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < av.in_size; ++x)
        if (av.kernel(yp, x, y) > 0.0) {
          reach(yp, y) = 1;
          break;
        }
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (reach(i, k))
        for (int j = 0; j < n; ++j)
          if (reach(k, j)) reach(i, j) = 1;

  for (int y = 0; y < n; ++y) {
    bool from_all = true;
    for (int y0 = 0; y0 < n; ++y0)
      if (!reach(y0, y)) {
        from_all = false;
        break;
      }
    if (from_all) return {true, y};
  }
  return {false, std::nullopt};
}

NostChannel make_noisy_post(double alpha, double eta) {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(eta >= 0.0 && eta <= 1.0)) {
    throw Error("make_noisy_post: alpha and eta must lie in [0,1]");
  }
  NostChannel c;
  c.alphabets = {2, 2, 2};
  c.q_y_given_x_sprime = Table3<double>(2, 2, 2, 0.0);
  // s' = 0, Z topology: x = 0 passes clean; x = 1 lands on 0 w.p. alpha.
  c.q_y_given_x_sprime(0, 0, 0) = 1.0;
  c.q_y_given_x_sprime(0, 1, 0) = alpha;
  c.q_y_given_x_sprime(0, 1, 1) = 1.0 - alpha;
  // s' = 1, S topology: x = 1 passes clean; x = 0 lands on 1 w.p. alpha.
  c.q_y_given_x_sprime(1, 1, 1) = 1.0;
  c.q_y_given_x_sprime(1, 0, 1) = alpha;
  c.q_y_given_x_sprime(1, 0, 0) = 1.0 - alpha;
  // Z state evolution: the next state equals the output w.p. 1 for y = 0
  // and w.p. 1 - eta for y = 1.
  c.q_s_given_y = Table2<double>(2, 2, 0.0);
  c.q_s_given_y(0, 0) = 1.0;
  c.q_s_given_y(1, 0) = eta;
  c.q_s_given_y(1, 1) = 1.0 - eta;
  return c;
}

NostChannel make_iid_state_channel(const std::vector<double>& q_s,
                                   const Table3<double>& q_y) {
  NostChannel c;
  c.alphabets = {q_y.dim1(), q_y.dim2(), q_y.dim0()};
  c.q_y_given_x_sprime = q_y;
  c.q_s_given_y = Table2<double>(c.alphabets.y_size, c.alphabets.s_size, 0.0);
  if (static_cast<int>(q_s.size()) != c.alphabets.s_size) {
    throw InvalidChannelError(
        "make_iid_state_channel: q_s has length " + std::to_string(q_s.size()) +
            ", expected " + std::to_string(c.alphabets.s_size),
        {{ViolationKind::Dimension, "q_s", double(q_s.size())}});
  }
  for (int y = 0; y < c.alphabets.y_size; ++y)
    for (int s = 0; s < c.alphabets.s_size; ++s) c.q_s_given_y(y, s) = q_s[s];
  ValidationReport report = validate_channel(c);
  if (!report.empty()) throw_invalid("make_iid_state_channel", std::move(report));
  return c;
}

NostChannel normalized_rows(const NostChannel& c) {
  NostChannel out = c;
  auto& qy = out.q_y_given_x_sprime;
  for (int s = 0; s < qy.dim0(); ++s)
    for (int x = 0; x < qy.dim1(); ++x) {
      double sum = 0.0;
      for (int y = 0; y < qy.dim2(); ++y) sum += qy(s, x, y);
      if (sum > 0.0 && std::isfinite(sum))
        for (int y = 0; y < qy.dim2(); ++y) qy(s, x, y) /= sum;
    }
  auto& qs = out.q_s_given_y;
  for (int y = 0; y < qs.dim0(); ++y) {
    double sum = 0.0;
    for (int s = 0; s < qs.dim1(); ++s) sum += qs(y, s);
    if (sum > 0.0 && std::isfinite(sum))
      for (int s = 0; s < qs.dim1(); ++s) qs(y, s) /= sum;
  }
  return out;
}

}  // namespace nostcap
