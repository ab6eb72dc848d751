#include "nostcap/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nostcap/errors.hpp"

namespace nostcap {

namespace {

using json = nlohmann::json;

// 1-based line number of a byte offset, for parse-error reporting.
std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

json parse_or_throw(std::string_view text, std::string_view origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << origin << ":" << line_of(text, e.byte) << ": " << e.what();
    throw IoError(msg.str());
  }
}

[[noreturn]] void fail(std::string_view origin, const std::string& path,
                       const std::string& what) {
  throw IoError(std::string(origin) + ": " + path + ": " + what);
}

double number_at(const json& j, std::string_view origin, const std::string& path) {
  if (!j.is_number()) fail(origin, path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(origin, path, "non-finite number");
  return v;
}

int int_at(const json& obj, const char* key, std::string_view origin) {
  if (!obj.contains(key)) fail(origin, key, "missing required key");
  const json& j = obj.at(key);
  if (!j.is_number_integer()) fail(origin, key, "expected an integer");
  return j.get<int>();
}

Table2<double> table2_at(const json& j, const char* key, int d0, int d1,
                         std::string_view origin) {
  if (!j.is_array() || static_cast<int>(j.size()) != d0)
    fail(origin, key,
         "expected array of length " + std::to_string(d0) + ", got " +
             (j.is_array() ? std::to_string(j.size()) : "non-array"));
  Table2<double> t(d0, d1, 0.0);
  for (int i = 0; i < d0; ++i) {
    const json& row = j[i];
    const std::string path = std::string(key) + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != d1)
      fail(origin, path,
           "expected array of length " + std::to_string(d1) + ", got " +
               (row.is_array() ? std::to_string(row.size()) : "non-array"));
    for (int k = 0; k < d1; ++k)
      t(i, k) = number_at(row[k], origin, path + "[" + std::to_string(k) + "]");
  }
  return t;
}

Table3<double> table3_at(const json& j, const char* key, int d0, int d1, int d2,
                         std::string_view origin) {
  if (!j.is_array() || static_cast<int>(j.size()) != d0)
    fail(origin, key,
         "expected array of length " + std::to_string(d0) + ", got " +
             (j.is_array() ? std::to_string(j.size()) : "non-array"));
  Table3<double> t(d0, d1, d2, 0.0);
  for (int i = 0; i < d0; ++i) {
    const std::string path_i = std::string(key) + "[" + std::to_string(i) + "]";
    const json& mid = j[i];
    if (!mid.is_array() || static_cast<int>(mid.size()) != d1)
      fail(origin, path_i,
           "expected array of length " + std::to_string(d1) + ", got " +
               (mid.is_array() ? std::to_string(mid.size()) : "non-array"));
    for (int k = 0; k < d1; ++k) {
      const std::string path_k = path_i + "[" + std::to_string(k) + "]";
      const json& row = mid[k];
      if (!row.is_array() || static_cast<int>(row.size()) != d2)
        fail(origin, path_k,
             "expected array of length " + std::to_string(d2) + ", got " +
                 (row.is_array() ? std::to_string(row.size()) : "non-array"));
      for (int l = 0; l < d2; ++l)
        t(i, k, l) =
            number_at(row[l], origin, path_k + "[" + std::to_string(l) + "]");
    }
  }
  return t;
}

json table2_to_json(const Table2<double>& t) {
  json out = json::array();
  for (int i = 0; i < t.dim0(); ++i) {
    json row = json::array();
    for (int j = 0; j < t.dim1(); ++j) row.push_back(t(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

const char* to_string(Setting s) {
  return s == Setting::FB ? "fb" : "fb-csi";
}

NostChannel parse_channel_json(std::string_view text, std::string_view origin) {
  const json j = parse_or_throw(text, origin);
  if (!j.is_object()) fail(origin, "$", "expected a JSON object");
  NostChannel c;
  c.alphabets.x_size = int_at(j, "x_size", origin);
  c.alphabets.y_size = int_at(j, "y_size", origin);
  c.alphabets.s_size = int_at(j, "s_size", origin);
  if (c.alphabets.x_size < 1 || c.alphabets.y_size < 1 || c.alphabets.s_size < 1)
    fail(origin, "x_size/y_size/s_size", "alphabet sizes must be >= 1");
  if (!j.contains("q_y_given_x_sprime"))
    fail(origin, "q_y_given_x_sprime", "missing required key");
  if (!j.contains("q_s_given_y")) fail(origin, "q_s_given_y", "missing required key");
  c.q_y_given_x_sprime =
      table3_at(j.at("q_y_given_x_sprime"), "q_y_given_x_sprime",
                c.alphabets.s_size, c.alphabets.x_size, c.alphabets.y_size, origin);
  c.q_s_given_y = table2_at(j.at("q_s_given_y"), "q_s_given_y",
                            c.alphabets.y_size, c.alphabets.s_size, origin);
  return c;
}

NostChannel load_channel(const std::string& path) {
  return parse_channel_json(read_text_file(path), path);
}

std::string channel_to_json(const NostChannel& c) {
  json j;
  j["x_size"] = c.alphabets.x_size;
  j["y_size"] = c.alphabets.y_size;
  j["s_size"] = c.alphabets.s_size;
  json qy = json::array();
  for (int s = 0; s < c.alphabets.s_size; ++s) {
    json mid = json::array();
    for (int x = 0; x < c.alphabets.x_size; ++x) {
      json row = json::array();
      for (int y = 0; y < c.alphabets.y_size; ++y)
        row.push_back(c.q_y_given_x_sprime(s, x, y));
      mid.push_back(std::move(row));
    }
    qy.push_back(std::move(mid));
  }
  j["q_y_given_x_sprime"] = std::move(qy);
  j["q_s_given_y"] = table2_to_json(c.q_s_given_y);
  return j.dump(2) + "\n";
}

Policy parse_policy_json(std::string_view text, std::string_view origin) {
  const json j = parse_or_throw(text, origin);
  const json* arr = nullptr;
  if (j.is_array()) {
    arr = &j;
  } else if (j.is_object() && j.contains("p")) {
    arr = &j.at("p");
  } else {
    fail(origin, "$", "expected a 2-D array or an object with key \"p\"");
  }
  if (!arr->is_array() || arr->empty() || !(*arr)[0].is_array() ||
      (*arr)[0].empty())
    fail(origin, "p", "expected a non-empty 2-D array");
  const int d0 = static_cast<int>(arr->size());
  const int d1 = static_cast<int>((*arr)[0].size());
  return Policy{table2_at(*arr, "p", d0, d1, origin)};
}

Policy load_policy(const std::string& path) {
  return parse_policy_json(read_text_file(path), path);
}

std::string policy_to_json(const Policy& p) {
  json j;
  j["p"] = table2_to_json(p.p);
  return j.dump(2) + "\n";
}

std::string capacity_result_to_json(const CapacityResult& r) {
  json j;
  j["setting"] = to_string(r.setting);
  j["value_bits"] = r.value_bits;
  j["policy"] = table2_to_json(r.policy.p);
  j["pi"] = r.pi.pi;
  j["gap"] = r.gap;
  j["stationarity_residual"] = r.stationarity_residual;
  j["iterations"] = r.iterations;
  if (r.setting == Setting::FB_CSI) {
    j["support_sizes"] = r.support_sizes;
    j["cardinality_bound_L"] = r.cardinality_bound_l;
  }
  return j.dump(2) + "\n";
}

std::string csi_certificate_to_json(const CsiCertificate& cert) {
  json j;
  j["status"] = cert.status == CertificateStatus::NoGainCertified
                    ? "no_gain_certified"
                    : "no_certificate_found";
  j["max_kernel_mismatch"] = cert.max_kernel_mismatch;
  if (cert.p2_policy)
    j["p2_policy"] = table2_to_json(cert.p2_policy->p);
  else
    j["p2_policy"] = nullptr;
  return j.dump(2) + "\n";
}

std::string sim_report_to_json(const SimReport& r) {
  json j;
  j["empirical_pi"] = r.empirical_pi;
  j["empirical_rate_bits"] = r.empirical_rate_bits;
  json counts = json::array();
  for (int yp = 0; yp < r.counts.dim0(); ++yp) {
    json mid = json::array();
    for (int a = 0; a < r.counts.dim1(); ++a) {
      json row = json::array();
      for (int y = 0; y < r.counts.dim2(); ++y) row.push_back(r.counts(yp, a, y));
      mid.push_back(std::move(row));
    }
    counts.push_back(std::move(mid));
  }
  j["counts"] = std::move(counts);
  return j.dump(2) + "\n";
}

std::string sim_counts_to_csv(const SimReport& r) {
  std::ostringstream out;
  out << "y_prev,a,y,count\n";
  for (int yp = 0; yp < r.counts.dim0(); ++yp)
    for (int a = 0; a < r.counts.dim1(); ++a)
      for (int y = 0; y < r.counts.dim2(); ++y)
        out << yp << "," << a << "," << y << "," << r.counts(yp, a, y) << "\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(path + ": read failure");
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError(path + ": write failure");
}

}  // namespace nostcap
