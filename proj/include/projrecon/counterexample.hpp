#pragma once

#include <cstdint>

#include "projrecon/measure.hpp"
#include "projrecon/projection.hpp"

namespace projrecon {

/// Alternate vertices of a regular 2n-gon and the n bisector lines that
/// cannot tell them apart.
struct PolygonInstance {
  std::uint32_t n;
  DiscreteMeasure Z;  // angles (2l+1) pi / n, l = 1..n
  DiscreteMeasure Y;  // Z rotated by pi / n
  ProjectionStack stack;
};

/// Throws InvalidOrder for n < 3.
PolygonInstance polygon_counterexample(std::uint32_t n);

}  // namespace projrecon
