#pragma once

#include <cmath>

namespace spdc {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    /// Unit vector from polar angle (from +z) and azimuth (from +x).
    static Vec3 from_angles(double polar, double azimuth) {
        const double s = std::sin(polar);
        return {s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar)};
    }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

/// Acute angle between two unit vectors, i.e. the angle to an undirected axis.
inline double angle_to_axis(const Vec3& direction, const Vec3& axis) {
    const double c = std::fabs(direction.dot(axis));
    return std::acos(c > 1.0 ? 1.0 : c);
}

} // namespace spdc
