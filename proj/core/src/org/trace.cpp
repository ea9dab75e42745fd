#include "lia2c/org/trace.hpp"

#include <stdexcept>

#include "json.hpp"

namespace lia2c::org {

std::string trace_line(int tick, const OrgState& state_before, const JointAction& actions,
                       const std::vector<double>& rewards) {
  nlohmann::json j;
  j["tick"] = tick;
  j["level"] = std::string(level_name(state_before.level));
  auto& names = j["actions"] = nlohmann::json::array();
  for (Action a : actions) names.push_back(std::string(action_name(a)));
  j["rewards"] = rewards;
  j["roster_size"] = state_before.roster.size();
  return j.dump();
}

TraceWriter::TraceWriter(const std::string& path) : out_(path, std::ios::app) {
  if (!out_) throw std::runtime_error("cannot open trace file " + path);
}

void TraceWriter::write(int tick, const OrgState& state_before, const JointAction& actions,
                        const std::vector<double>& rewards) {
  out_ << trace_line(tick, state_before, actions, rewards) << '\n';
  out_.flush();
}

}  // namespace lia2c::org
