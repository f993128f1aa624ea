#include "emx/trajectory.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace emx {
namespace {

void append_value(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

}  // namespace

void write_csv(const Trajectory& traj, std::ostream& os) {
  if (traj.states.empty()) throw std::invalid_argument("cannot write an empty trajectory");
  const Index m = traj.states.front().S.size();
  const Index n = traj.states.front().D.size();

  std::string header = "t";
  for (Index i = 0; i < m; ++i) header += ",S_" + std::to_string(i + 1);
  for (Index j = 0; j < n; ++j) header += ",D_" + std::to_string(j + 1);
  header += ",E,lambda\n";
  os << header;

  std::string line;
  for (const MarketState& s : traj.states) {
    line.clear();
    append_value(line, s.t);
    for (Index i = 0; i < m; ++i) {
      line += ',';
      append_value(line, s.S[i]);
    }
    for (Index j = 0; j < n; ++j) {
      line += ',';
      append_value(line, s.D[j]);
    }
    line += ',';
    append_value(line, s.E);
    line += ',';
    append_value(line, s.lambda);
    line += '\n';
    os << line;
  }
}

void write_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(traj, out);
}

}  // namespace emx
