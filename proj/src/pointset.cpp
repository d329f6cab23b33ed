#include "spherevar/pointset.hpp"

#include "spherevar/specfun.hpp"

namespace spherevar {

std::string family_name(Family f) {
  switch (f) {
    case Family::iid: return "iid";
    case Family::spherical: return "spherical";
    case Family::harmonic: return "harmonic";
    case Family::jittered: return "jittered";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "iid") return Family::iid;
  if (name == "spherical") return Family::spherical;
  if (name == "harmonic") return Family::harmonic;
  if (name == "jittered") return Family::jittered;
  throw std::domain_error("unknown process family: " + name);
}

int ProcessSpec::point_count() const {
  if (family == Family::harmonic) {
    const std::int64_t n_l = dim_z(d + 1, L);
    if (n_l > 1 << 24) throw std::domain_error("harmonic ensemble too large");
    return static_cast<int>(n_l);
  }
  return n;
}

void ProcessSpec::validate() const {
  switch (family) {
    case Family::iid:
      if (d < 2) throw std::domain_error("iid: require d >= 2");
      if (n < 1) throw std::domain_error("iid: require n >= 1");
      break;
    case Family::spherical:
      if (d != 2) throw std::domain_error("spherical ensemble is defined on S^2 only");
      if (n < 1) throw std::domain_error("spherical: require n >= 1");
      break;
    case Family::harmonic:
      if (d < 2) throw std::domain_error("harmonic: require d >= 2");
      if (L < 0) throw std::domain_error("harmonic: require L >= 0");
      break;
    case Family::jittered:
      if (d != 2) throw std::domain_error("jittered sampling is built on S^2 only");
      if (n < 1) throw std::domain_error("jittered: require n >= 1");
      break;
  }
}

}  // namespace spherevar
