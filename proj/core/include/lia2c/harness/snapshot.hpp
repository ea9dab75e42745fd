#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lia2c/nn/mlp.hpp"
#include "lia2c/org/org.hpp"

namespace lia2c::harness {

/// Actor-only policies; critics and encoder-decoders are not kept.
///
/// File layout (little-endian): magic "LIA2CSNP", u32 version (1), u32 open
/// flag, u32 entry count, then per entry i32 id, u32 role (0 employee,
/// 1 manager) followed by one parameter container.
struct PolicySnapshot {
  struct Entry {
    int id = 0;
    org::Role role = org::Role::kEmployee;
    nn::Mlp actor;
  };

  bool open_mode = false;
  std::vector<Entry> entries;

  const Entry* find(int id) const;
  /// First entry with the given role, or nullptr.
  const Entry* first_with_role(org::Role role) const;
  std::uint64_t hash() const;
};

void write_snapshot(std::ostream& out, const PolicySnapshot& s);
PolicySnapshot read_snapshot(std::istream& in);
void save_snapshot(const std::string& path, const PolicySnapshot& s);
PolicySnapshot load_snapshot(const std::string& path);

}  // namespace lia2c::harness
