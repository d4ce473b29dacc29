#pragma once

#include "cloudcomp/cloudmask.hpp"
#include "cloudcomp/compositor.hpp"
#include "cloudcomp/histo.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cloudcomp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2 };

/// Options gathered from the command line for one subcommand.
struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::string input;
  std::string output;
  std::string method = "hybrid";
  std::string bracket = "150:255";
  bool adaptive = false;
  bool hybrid_mode = false;
  InflectionParams inflection;
  unsigned inflection_start = 150;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;

  // Subcommand-specific extras.
  int fill = 0;
  std::string band = "red";
  double scale = 1.0;
  bool stats = false;
  std::string base_path;
  std::string clouds_path;
  std::string shadows_path;
};

/// Runs the tool with `args` (args[0] is the program name). Data goes to
/// files or `out`; diagnostics and usage text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cloudcomp::cli
