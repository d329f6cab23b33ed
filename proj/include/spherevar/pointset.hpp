#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spherevar {

// Flat row-major container for n points in R^{d+1}.
class PointSet {
 public:
  explicit PointSet(int ambient_dim, int n = 0)
      : ambient_dim_(ambient_dim), coords_(static_cast<std::size_t>(n) * ambient_dim) {
    if (ambient_dim < 1) throw std::domain_error("PointSet: ambient_dim < 1");
  }

  int ambient_dim() const { return ambient_dim_; }
  int size() const { return static_cast<int>(coords_.size()) / ambient_dim_; }

  std::span<const double> point(int i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * ambient_dim_,
            static_cast<std::size_t>(ambient_dim_)};
  }
  std::span<double> mutable_point(int i) {
    return {coords_.data() + static_cast<std::size_t>(i) * ambient_dim_,
            static_cast<std::size_t>(ambient_dim_)};
  }
  const std::vector<double>& coords() const { return coords_; }

 private:
  int ambient_dim_;
  std::vector<double> coords_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Geodesic angle between two unit vectors, inner product clamped to [-1,1].
inline double geodesic_angle(std::span<const double> a, std::span<const double> b) {
  double c = dot(a, b);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c);
}

enum class Family { iid, spherical, harmonic, jittered };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Tagged description of one of the four point processes.
//   iid:       d, n
//   spherical: n (d = 2 always)
//   harmonic:  d, L (samples Z(d+1, L) points)
//   jittered:  n cells of the equal-area partition of S^2 (d = 2)
struct ProcessSpec {
  Family family = Family::iid;
  int d = 2;
  int n = 0;
  int L = 0;

  // Number of points every sample of this process contains.
  int point_count() const;
  bool rotation_invariant() const { return family != Family::jittered; }
  void validate() const;
};

struct PointSample {
  ProcessSpec process;
  std::uint64_t seed = 0;
  int replicate = 0;
  PointSet points{3};
};

}  // namespace spherevar
