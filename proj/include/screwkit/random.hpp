#pragma once

#include <cstdint>
#include <random>

#include "screwkit/screw_core.hpp"

namespace screwkit {

using Rng = std::mt19937_64;

/// Independent stream for a (seed, a, b) triple; used for per-trial and
/// per-episode seeding so results do not depend on evaluation order.
Rng make_rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0);

Vec3 random_unit_vector(Rng& rng);
Vec3 gaussian_vec3(Rng& rng, double sigma);
Rotation random_rotation(Rng& rng);

/// Rotation about `axis` (need not be unit) by `angle` radians.
Rotation rotation_about(const Vec3& axis, double angle);

}  // namespace screwkit
