#include "lia2c/nn/serialize.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "lia2c/error.hpp"

namespace lia2c::nn {
namespace {

constexpr std::array<char, 8> kMagic = {'L', 'I', 'A', '2', 'C', 'M', 'L', 'P'};
constexpr std::uint32_t kVersion = 1;

template <typename UInt>
void put_le(std::ostream& out, UInt value) {
  std::array<char, sizeof(UInt)> bytes{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename UInt>
UInt get_le(std::istream& in) {
  std::array<unsigned char, sizeof(UInt)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw std::runtime_error("truncated parameter container");
  }
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    value |= static_cast<UInt>(bytes[i]) << (8 * i);
  }
  return value;
}

}  // namespace

void write_parameters(std::ostream& out, const Mlp& net) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(net.activation()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(net.head()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(net.layer_sizes().size()));
  for (std::size_t s : net.layer_sizes()) put_le<std::uint64_t>(out, s);
  put_le<std::uint64_t>(out, net.parameters().size());
  for (double p : net.parameters()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(p));
}

Mlp read_parameters(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("not a parameter container (bad magic)");
  }
  if (get_le<std::uint32_t>(in) != kVersion) {
    throw std::runtime_error("unsupported parameter container version");
  }
  const auto activation = get_le<std::uint32_t>(in);
  const auto head = get_le<std::uint32_t>(in);
  if (activation > 1 || head > 1) throw std::runtime_error("unknown activation or head id");
  const auto n_sizes = get_le<std::uint32_t>(in);
  if (n_sizes < 2 || n_sizes > 64) throw std::runtime_error("implausible layer count");
  std::vector<std::size_t> sizes(n_sizes);
  for (auto& s : sizes) s = static_cast<std::size_t>(get_le<std::uint64_t>(in));
  Mlp net(sizes, static_cast<Activation>(activation), static_cast<Head>(head));
  const auto count = get_le<std::uint64_t>(in);
  if (count != net.parameters().size()) {
    throw DimensionError("parameter count does not match layer sizes");
  }
  std::vector<double> params(count);
  for (auto& p : params) p = std::bit_cast<double>(get_le<std::uint64_t>(in));
  net.set_parameters(params);
  return net;
}

void write_parameters_csv(std::ostream& out, const Mlp& net) {
  out << "layer,kind,row,col,value\n";
  const auto& sizes = net.layer_sizes();
  const auto params = net.parameters();
  std::size_t offset = 0;
  char buf[64];
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    for (std::size_t r = 0; r < sizes[l + 1]; ++r) {
      for (std::size_t c = 0; c < sizes[l]; ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g", params[offset + r * sizes[l] + c]);
        out << l << ",weight," << r << ',' << c << ',' << buf << '\n';
      }
    }
    offset += sizes[l] * sizes[l + 1];
    for (std::size_t r = 0; r < sizes[l + 1]; ++r) {
      std::snprintf(buf, sizeof(buf), "%.17g", params[offset + r]);
      out << l << ",bias," << r << ",0," << buf << '\n';
    }
    offset += sizes[l + 1];
  }
}

}  // namespace lia2c::nn
