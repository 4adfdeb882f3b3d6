#include "screwkit/random.hpp"

#include <cmath>

namespace screwkit {

Rng make_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

Vec3 gaussian_vec3(Rng& rng, double sigma) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double x = n(rng);
  const double y = n(rng);
  const double z = n(rng);
  return sigma * Vec3(x, y, z);
}

Vec3 random_unit_vector(Rng& rng) {
  for (;;) {
    const Vec3 v = gaussian_vec3(rng, 1.0);
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

Rotation random_rotation(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

Rotation rotation_about(const Vec3& axis, double angle) {
  return exp_so3(axis.normalized() * angle);
}

}  // namespace screwkit
