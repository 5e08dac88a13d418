#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraceig/geometry.hpp"

namespace fraceig::cli {

/// Bad input detected before or during dispatch; maps to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;

/// Resolved options of one invocation. Field names match the flags.
struct RunConfig {
  std::string subcommand;

  std::string domain = "interval";  // interval | box | mask
  double L = 1.0;
  double Lx = 1.0;
  double Ly = 1.0;
  std::string mask;
  int n = 64;

  double s = 0.5;
  double p = 2.0;
  double alpha = 0.5;
  int k = 1;

  std::string kernel = "none";  // none | constant | periodic
  double kernel_value = 1.0;
  double kernel_mean = 2.0;
  double kernel_amplitude = 1.0;
  int kernel_frequency = 1;

  std::string s_values = "0.6:0.95:8";
  std::string p_values = "8,16,24,32,40";
  std::string frequencies = "1,2,4,8,16";
  bool refinement = true;

  std::size_t max_iter = 50000;
  double tol = 1e-9;
  int lbfgs_memory = 8;
  int restarts = 0;
  std::uint64_t seed = 0;
  std::string initial_guess;

  std::string function;
  std::string eigenfunction_out;

  int kconst_dim = 1;
  double kconst_p = 2.0;

  /// Report destination: a path prefix (PREFIX.csv / PREFIX.json), "-" for
  /// standard output, empty for no report.
  std::string output;
  std::string format = "both";  // csv | json | both
};

/// Entry point; args excludes the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// "lo:hi:count" (inclusive, linear) or "a,b,c".
std::vector<double> parse_list(const std::string& text);

/// %.17g, with ".0" appended to integral values.
std::string format_real(double value);

/// One real per line, interior nodes in row-major order.
GridFunction load_function_file(const std::filesystem::path& path, const DomainPtr& domain);
void write_function_file(const std::filesystem::path& path, const GridFunction& u);

}  // namespace fraceig::cli
