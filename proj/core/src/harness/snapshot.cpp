#include "lia2c/harness/snapshot.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "lia2c/nn/serialize.hpp"

namespace lia2c::harness {
namespace {

constexpr std::array<char, 8> kMagic = {'L', 'I', 'A', '2', 'C', 'S', 'N', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw std::runtime_error("truncated snapshot");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

const PolicySnapshot::Entry* PolicySnapshot::find(int id) const {
  for (const auto& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const PolicySnapshot::Entry* PolicySnapshot::first_with_role(org::Role role) const {
  for (const auto& e : entries) {
    if (e.role == role) return &e;
  }
  return nullptr;
}

std::uint64_t PolicySnapshot::hash() const {
  std::uint64_t h = open_mode ? 0x9e3779b97f4a7c15ULL : 0;
  for (const auto& e : entries) {
    h = h * 1099511628211ULL ^ static_cast<std::uint64_t>(e.id);
    h = h * 1099511628211ULL ^ static_cast<std::uint64_t>(e.role);
    h = h * 1099511628211ULL ^ nn::parameter_hash(e.actor.parameters());
  }
  return h;
}

void write_snapshot(std::ostream& out, const PolicySnapshot& s) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kVersion);
  put_u32(out, s.open_mode ? 1 : 0);
  put_u32(out, static_cast<std::uint32_t>(s.entries.size()));
  for (const auto& e : s.entries) {
    put_u32(out, static_cast<std::uint32_t>(e.id));
    put_u32(out, e.role == org::Role::kManager ? 1 : 0);
    nn::write_parameters(out, e.actor);
  }
}

PolicySnapshot read_snapshot(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("not a policy snapshot (bad magic)");
  }
  if (get_u32(in) != kVersion) throw std::runtime_error("unsupported snapshot version");
  PolicySnapshot s;
  s.open_mode = get_u32(in) != 0;
  const std::uint32_t n = get_u32(in);
  for (std::uint32_t i = 0; i < n; ++i) {
    PolicySnapshot::Entry e;
    e.id = static_cast<int>(get_u32(in));
    e.role = get_u32(in) == 1 ? org::Role::kManager : org::Role::kEmployee;
    e.actor = nn::read_parameters(in);
    s.entries.push_back(std::move(e));
  }
  return s;
}

void save_snapshot(const std::string& path, const PolicySnapshot& s) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write snapshot " + path);
  write_snapshot(out, s);
  if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

PolicySnapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot " + path);
  return read_snapshot(in);
}

}  // namespace lia2c::harness
