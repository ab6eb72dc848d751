#pragma once

#include <string>
#include <string_view>

#include "nostcap/simulate.hpp"
#include "nostcap/solver.hpp"
#include "nostcap/types.hpp"

namespace nostcap {

// Channel file format (JSON object):
//   x_size, y_size, s_size        integers
//   q_y_given_x_sprime            3-D array [s'][x][y]
//   q_s_given_y                   2-D array [y][s]
// The reader rejects NaN/Inf and wrong dimensions; parse errors carry
// file:line positions and structural errors carry the exact field path.
// Probabilistic validity (row sums, signs) is validate_channel's job.
NostChannel parse_channel_json(std::string_view text,
                               std::string_view origin = "<string>");
NostChannel load_channel(const std::string& path);
std::string channel_to_json(const NostChannel& c);

// Policy files: either a bare 2-D array or an object {"p": [[...], ...]}.
Policy parse_policy_json(std::string_view text,
                         std::string_view origin = "<string>");
Policy load_policy(const std::string& path);
std::string policy_to_json(const Policy& p);

// Result serialization: keys setting, value_bits, policy, pi, gap,
// stationarity_residual, iterations, plus support_sizes and
// cardinality_bound_L for the CSI setting.
std::string capacity_result_to_json(const CapacityResult& r);

std::string csi_certificate_to_json(const CsiCertificate& cert);

std::string sim_report_to_json(const SimReport& r);
// Counts as CSV with columns y_prev,a,y,count.
std::string sim_counts_to_csv(const SimReport& r);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

const char* to_string(Setting s);

}  // namespace nostcap
