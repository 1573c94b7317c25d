#pragma once

#include <cstdint>
#include <string_view>

namespace nakm {

/// Seed for one named stage of a run: splitmix64 of the master seed mixed
/// with the FNV-1a hash of the stage name. Stage names are free-form, e.g.
/// "gmm/rep=3" or "missingness/rep=3".
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace nakm
