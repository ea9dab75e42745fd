#pragma once

#include <cstddef>

#include "lia2c/population/types.hpp"

namespace lia2c::pop {

/// Estimates true action counts from counts corrupted by uniform per-agent
/// misreporting at rate delta.
///
/// Inverts E[w] = (1 - delta - delta/(A-1)) C + delta N/(A-1), clamps
/// negative entries to zero, rescales to N and rounds by largest remainder
/// (ties to the lower action index). Throws RectificationUndefinedError when
/// delta >= (A-1)/A.
Configuration rectify_observation(const PrivateObservation& obs, std::size_t action_count);

/// Rounds nonnegative reals to integers summing to `total`.
std::vector<int> largest_remainder_round(const std::vector<double>& values, int total);

}  // namespace lia2c::pop
