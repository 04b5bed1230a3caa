#pragma once

// Command-line front end: transform, interpolate, coords, channel, validate
// and reduce-net over JSON curve/net files.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ribaucour/lorentz.hpp"

namespace ribaucour::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitGeometry = 2;

struct JobConfig {
  std::string command;
  std::string input;
  std::string input2;
  std::string output;
  std::string report;
  std::string sphere;   // inline JSON or a path
  std::string sphere2;  // second sphere of `coords`
  std::vector<std::string> initials;
  std::string aux;
  std::string normal;
  std::string order = "both";
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  int arc_samples = 9;
  bool flip = false;
};

/// Executes a job. Returns 0 on success, 2 on geometric failure and 1 on
/// I/O or schema errors; diagnostics go to `err`, stdout output to `out`.
int run(const JobConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a JobConfig and runs it.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ribaucour::cli
