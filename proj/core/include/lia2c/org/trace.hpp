#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "lia2c/org/org.hpp"

namespace lia2c::org {

/// Streams one JSON object per tick:
/// {"tick", "level", "actions", "rewards", "roster_size"}.
class TraceWriter {
 public:
  explicit TraceWriter(const std::string& path);

  void write(int tick, const OrgState& state_before, const JointAction& actions,
             const std::vector<double>& rewards);
  bool good() const { return out_.good(); }

 private:
  std::ofstream out_;
};

std::string trace_line(int tick, const OrgState& state_before, const JointAction& actions,
                       const std::vector<double>& rewards);

}  // namespace lia2c::org
