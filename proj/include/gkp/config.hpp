#pragma once

#include <string>
#include <vector>

namespace gkp {

/// Effective run settings for the CLI and the sweep runner. Numeric fields are
/// validated before any computation; `given` preserves every user-supplied
/// assignment verbatim (config file first, then flag overrides) so output
/// headers can echo exactly what was asked for. p_max = 0 means "auto"
/// (4 sqrt(pi)); upsilon entries are decimal values in (0, 1) or "<x>dB"
/// tokens resolved against the grid-state no-error value at that squeezing.
struct RunConfig {
  unsigned precision_bits = 256;
  unsigned workers = 1;
  int n_lo = 7;
  int n_hi = 40;
  double p_max = 0.0;
  double p_step = 0.05;
  double xi_lo = 0.3;
  double xi_hi = 1.5;
  double rd_lo = 0.0;
  double rd_hi = 3.0;
  double eps_lo = 0.01;
  double eps_hi = 0.30;
  unsigned eps_count = 30;
  std::vector<std::string> upsilon = {"10dB"};
  std::string out_dir = "out";
  std::string cache_dir;
  std::string format = "csv";

  std::vector<std::string> given;
};

/// key=value per line, '#' starts a comment, blank lines skipped. Unknown keys
/// or unparseable values throw DomainError naming the offending line.
RunConfig load_config(const std::string& path);

/// Sets one field from its textual form and records the assignment.
void apply_setting(RunConfig& cfg, const std::string& key,
                   const std::string& value);

/// Throws DomainError on any out-of-range or inconsistent setting.
void validate(const RunConfig& cfg);

/// Full effective rendering, one key=value line per field, sufficient to
/// reproduce the run bit-for-bit at the same code version.
std::vector<std::string> render(const RunConfig& cfg);

}  // namespace gkp
