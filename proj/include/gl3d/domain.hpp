#pragma once

// Analytic domain descriptors. Every operation that needs distance to the
// domain boundary goes through these; "box" means the axis-aligned box
// spanned by the lattice, "ball" a Euclidean ball with given center/radius.

#include <algorithm>
#include <stdexcept>
#include <string>

#include "gl3d/geom.hpp"

namespace gl3d {

enum class DomainKind : uint8_t { Box = 0, Ball = 1 };

struct Domain {
    DomainKind kind = DomainKind::Box;
    Vec3 lo{0, 0, 0};        // box corners
    Vec3 hi{1, 1, 1};
    Vec3 center{0.5, 0.5, 0.5};  // ball
    double radius = 0.5;

    static Domain box(const Vec3& lo, const Vec3& hi) {
        Domain d;
        d.kind = DomainKind::Box;
        d.lo = lo;
        d.hi = hi;
        return d;
    }
    static Domain ball(const Vec3& c, double r) {
        Domain d;
        d.kind = DomainKind::Ball;
        d.center = c;
        d.radius = r;
        return d;
    }

    bool contains(const Vec3& p) const {
        if (kind == DomainKind::Box) {
            return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y &&
                   p.z >= lo.z && p.z <= hi.z;
        }
        return dist(p, center) <= radius;
    }

    // Distance to the boundary for interior points; negative outside.
    double boundary_distance(const Vec3& p) const {
        if (kind == DomainKind::Ball) return radius - dist(p, center);
        double dx = std::min(p.x - lo.x, hi.x - p.x);
        double dy = std::min(p.y - lo.y, hi.y - p.y);
        double dz = std::min(p.z - lo.z, hi.z - p.z);
        return std::min({dx, dy, dz});
    }

    Vec3 nearest_boundary_point(const Vec3& p) const {
        if (kind == DomainKind::Ball) {
            Vec3 u = (p - center).normalized();
            if (u.norm2() == 0) u = {1, 0, 0};
            return center + u * radius;
        }
        // Nearest face of the box.
        double best = p.x - lo.x;
        int face = 0;
        auto upd = [&](double d, int f) {
            if (d < best) { best = d; face = f; }
        };
        upd(hi.x - p.x, 1);
        upd(p.y - lo.y, 2);
        upd(hi.y - p.y, 3);
        upd(p.z - lo.z, 4);
        upd(hi.z - p.z, 5);
        Vec3 q = p;
        switch (face) {
            case 0: q.x = lo.x; break;
            case 1: q.x = hi.x; break;
            case 2: q.y = lo.y; break;
            case 3: q.y = hi.y; break;
            case 4: q.z = lo.z; break;
            default: q.z = hi.z; break;
        }
        return q;
    }

    double volume() const {
        if (kind == DomainKind::Ball) return 4.0 / 3.0 * M_PI * radius * radius * radius;
        return (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z);
    }

    std::string to_string() const {
        if (kind == DomainKind::Ball)
            return "ball(" + std::to_string(center.x) + "," + std::to_string(center.y) +
                   "," + std::to_string(center.z) + ";" + std::to_string(radius) + ")";
        return "box";
    }
};

// Pseudometric letting connections exit through the boundary:
// min(|x-y|, d(x, bdry) + d(y, bdry)).
inline double boundary_pseudometric(const Domain& dom, const Vec3& a, const Vec3& b) {
    double euclid = dist(a, b);
    double via = dom.boundary_distance(a) + dom.boundary_distance(b);
    return std::min(euclid, via);
}

}  // namespace gl3d
