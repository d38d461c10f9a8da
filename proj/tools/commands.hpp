#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace solidangle::cli {

struct RunConfig {
  std::string command;
  std::string curve;
  std::string point;
  double level = 0.25;
  int grid = 64;
  double tol = -1.0;  // < 0: the command's default
  std::string out;
  std::string format = "obj";
  int workers = 1;
  std::uint64_t seed = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDomain = 2;

// Parses argv (CLI11) and runs the command. Never throws: library errors map
// to exit codes 1 (configuration) and 2 (domain / numerical).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Executes an already parsed configuration; throws library errors.
int execute(const RunConfig& cfg, std::ostream& out);

// Points for oracle-compare: cycles through the generic, in-plane (x3 = 0),
// r = 1 and axis (r = 0) strata, rejecting points closer than 0.05 to the
// circle or farther than 5 from the origin.
std::vector<std::array<double, 3>> oracle_sample(std::uint64_t seed, int count);

}  // namespace solidangle::cli
