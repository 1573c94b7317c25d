#pragma once

#include <cstddef>
#include <span>

namespace nakm {

/// Plain Rand index: fraction of object pairs on which the two labelings
/// agree (both together or both apart). Label values are arbitrary.
/// Fewer than two objects gives 1.
double rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

}  // namespace nakm
