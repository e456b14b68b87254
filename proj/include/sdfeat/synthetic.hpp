#pragma once

#include <cstddef>
#include <cstdint>

#include "sdfeat/dataset.hpp"

namespace sdfeat {

/// Two classes with equal mean brightness and small noise: "left_bright"
/// (left half 200, right half 50) and "right_bright" (mirrored). Views are
/// numbered on a 5-degree angle grid.
Dataset make_two_class_halves(std::size_t views_per_class, std::size_t size, std::uint64_t seed);

/// `classes` random textured objects on a black background, each rendered at
/// 72 view angles (0..355 step 5) by rotating the object in the image plane.
Dataset make_rotating_objects(std::size_t classes, std::size_t size, std::uint64_t seed);

}  // namespace sdfeat
