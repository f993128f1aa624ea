#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "emx/params.hpp"

namespace emx {

struct TrajectoryMeta {
  std::string family;            // model family tag, e.g. "continuous"
  std::uint64_t fingerprint = 0; // fingerprint of the producing MarketParams
};

/// A fixed-step run: states[i].t == states[0].t + i * dt.
struct Trajectory {
  double dt = 0.0;
  std::vector<MarketState> states;
  TrajectoryMeta meta;
};

/// Writes the trajectory as CSV with header t,S_1..S_m,D_1..D_n,E,lambda and
/// every value printed with 17 significant digits, enough to round-trip a
/// double exactly.
void write_csv(const Trajectory& traj, std::ostream& os);
void write_csv(const Trajectory& traj, const std::filesystem::path& path);

}  // namespace emx
