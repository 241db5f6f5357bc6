#include "earac/bloch.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace earac {

BlochVector::BlochVector(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (!std::isfinite(norm) || norm == 0.0) throw std::invalid_argument("Bloch vector must be finite and nonzero");
    v_ = {x / norm, y / norm, z / norm};
}

BlochVector BlochVector::operator-() const { return BlochVector(Raw{}, -v_[0], -v_[1], -v_[2]); }

std::ostream& operator<<(std::ostream& os, const BlochVector& v) {
    return os << '(' << v.x() << ", " << v.y() << ", " << v.z() << ')';
}

}  // namespace earac
