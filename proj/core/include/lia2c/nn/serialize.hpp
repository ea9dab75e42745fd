#pragma once

#include <iosfwd>

#include "lia2c/nn/mlp.hpp"

namespace lia2c::nn {

// Binary parameter container, all integers and floats little-endian:
//
//   char[8]  magic "LIA2CMLP"
//   u32      format version (1)
//   u32      activation id (0 tanh, 1 relu)
//   u32      head id (0 linear, 1 softmax)
//   u32      number of layer sizes L
//   u64[L]   layer sizes, input first
//   u64      parameter count P
//   f64[P]   parameters in Mlp layout
void write_parameters(std::ostream& out, const Mlp& net);
Mlp read_parameters(std::istream& in);

/// One row per parameter: layer, kind (weight|bias), row, col, value.
void write_parameters_csv(std::ostream& out, const Mlp& net);

}  // namespace lia2c::nn
