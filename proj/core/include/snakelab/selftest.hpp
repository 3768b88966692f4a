#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace snakelab {

struct SelftestArtifact {
  std::string name;  ///< relative file name
  std::string contents;
};

struct SelftestResult {
  bool ok = false;
  std::string report;  ///< contents of report.txt: one ok/FAIL line per check
  std::vector<SelftestArtifact> artifacts;
};

/// Deterministic end-to-end property suite over every module. The same seed
/// yields byte-identical report and artifacts; nothing here reads clocks,
/// paths, or the environment.
SelftestResult run_selftest(std::uint64_t seed);

}  // namespace snakelab
