#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "choquard/reduced.hpp"

namespace choquard {

// Run configuration shared by all CLI commands.  Flags override file values.
struct RunConfig {
  int N = 5;
  double mu = 4.0;
  int k = 8;
  std::string potential_json =
      R"({"family":"gaussian_bump","a":0.1,"b":1.0,"r0":1.0,"w":0.2})";
  double L0 = 0.5;
  double L1 = 5.0;
  double tol = 1e-7;
  std::int64_t budget = 10'000'000;
  std::uint64_t seed = 1;
  std::string out_path;     // empty: stdout
  double r0 = 0.0;          // 0: derive from the potential profile
  double delta = 0.0;       // 0: 0.1 * r0
  double theta = 0.05;
  double eta = 0.01;
  double alpha_scale = 1.0; // sensitivity knob for the kernel suite

  static RunConfig from_json_file(const std::string& path);
  void apply_json(const std::string& text);
};

// Version tag emitted as the first CSV line / JSON "schema" field.
inline constexpr const char* kSchemaTag = "choquard-bubbles v1";

// Commands; each writes to the stream and returns the process exit code
// (0 pass, 1 verification failure).  Config errors, I/O errors and unmet
// hypotheses are reported by exception and mapped in run_cli.
int cmd_constants(const RunConfig& config, std::ostream& out);
int cmd_scan(const RunConfig& config, int r_steps, int lambda_steps,
             std::ostream& out);
int cmd_critical_point(const RunConfig& config, CriticalCase which,
                       std::ostream& out);
int cmd_verify(const RunConfig& config, const std::string& suite,
               std::ostream& out);

// Full command-line entry point (argument parsing, output file handling,
// exit-code mapping: 0 pass, 1 verification failure, 2 config error,
// 3 I/O error, 4 hypothesis not met).
int run_cli(int argc, const char* const* argv);

}  // namespace choquard
