#pragma once

#include <optional>

#include "gqe/geometry.hpp"

namespace gqe {

// Explicit isomorphism search between two generalized quadrangles of the same
// order.  Seeds a 3x3 corner of a grid plus one exterior point and propagates
// by incidence; sound (result is fully verified) and complete whenever the
// target automorphism group is transitive on such frames, which holds for the
// classical quadrangles this is used with.
std::optional<Morphism> find_isomorphism(const Geometry& a, const Geometry& b);

}  // namespace gqe
