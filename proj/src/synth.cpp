#include "gl3d/synth.hpp"

#include <cmath>

namespace gl3d {

SynthKind synth_kind_from_string(const std::string& s) {
    if (s == "uniform") return SynthKind::Uniform;
    if (s == "straight_line") return SynthKind::StraightLine;
    if (s == "ring") return SynthKind::Ring;
    if (s == "helix") return SynthKind::Helix;
    if (s == "dipole_pair") return SynthKind::DipolePair;
    throw FieldError("synth: unknown kind " + s);
}

std::string to_string(SynthKind k) {
    switch (k) {
        case SynthKind::Uniform: return "uniform";
        case SynthKind::StraightLine: return "straight_line";
        case SynthKind::Ring: return "ring";
        case SynthKind::Helix: return "helix";
        case SynthKind::DipolePair: return "dipole_pair";
    }
    return "?";
}

namespace {

double core_profile(double r, double eps) { return std::tanh(r / eps); }

// Transverse 2D vortex factor at offset (dx, dy), degree +-1.
cplx vortex2d(double dx, double dy, double eps, int degree) {
    double r = std::hypot(dx, dy);
    double th = (r == 0) ? 0.0 : std::atan2(dy, dx);
    double mod = core_profile(r, eps);
    return std::polar(mod, degree * th);
}

void check_margin(bool ok, const std::string& what) {
    if (!ok) throw GeometryOutOfBounds(what);
}

// Clip a polyline to the domain; splits are not needed for our fixtures
// (filaments leave the domain at most at their two ends).
Polyline clip_to_domain(const Polyline& pl, const Domain& dom) {
    Polyline out;
    out.multiplicity = pl.multiplicity;
    for (size_t i = 0; i < pl.points.size(); ++i) {
        const Vec3& p = pl.points[i];
        if (dom.contains(p)) {
            if (out.points.empty() && i > 0) {
                // entering: add crossing point by bisection
                Vec3 a = pl.points[i - 1], b = p;
                for (int it = 0; it < 50; ++it) {
                    Vec3 m = (a + b) * 0.5;
                    (dom.contains(m) ? b : a) = m;
                }
                out.points.push_back(b);
            }
            out.points.push_back(p);
        } else if (!out.points.empty()) {
            Vec3 a = pl.points[i - 1], b = p;
            for (int it = 0; it < 50; ++it) {
                Vec3 m = (a + b) * 0.5;
                (dom.contains(m) ? a : b) = m;
            }
            out.points.push_back(a);
            break;
        }
    }
    return out;
}

}  // namespace

SynthResult synth_field(const SynthParams& p, std::array<int, 3> dims, double h, double eps) {
    SynthResult res;
    res.field = LatticeField3(dims, h, Vec3{0, 0, 0});
    LatticeField3& f = res.field;
    Vec3 lo = f.box_lo(), hi = f.box_hi();
    Vec3 boxCenter = (lo + hi) * 0.5;
    if (p.ball_domain) {
        f.domain = Domain::ball(boxCenter, p.ball_radius);
        f.set_mask_from_domain();
        check_margin(p.ball_radius <= 0.5 * std::min({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z}),
                     "ball domain exceeds lattice box");
    }

    const int ax = p.axis;
    const int a1 = (ax + 1) % 3, a2 = (ax + 2) % 3;
    double margin = 5 * eps;

    auto axis_span = [&](int axis) { return hi[axis] - lo[axis]; };

    // Phase factor per world point.
    auto factor = [&](const Vec3& x) -> cplx {
        switch (p.kind) {
            case SynthKind::Uniform:
                return cplx(1, 0);
            case SynthKind::StraightLine:
                return vortex2d(x[a1] - p.center[a1], x[a2] - p.center[a2], eps, +1);
            case SynthKind::DipolePair: {
                double s = p.dipole_separation / 2;
                cplx f1 = vortex2d(x[a1] - (p.center[a1] - s), x[a2] - p.center[a2], eps, +1);
                cplx f2 = vortex2d(x[a1] - (p.center[a1] + s), x[a2] - p.center[a2], eps, -1);
                return f1 * f2;
            }
            case SynthKind::Helix: {
                double t = (x[ax] - lo[ax]) / p.helix_pitch * 2.0 * M_PI;
                double cx = p.center[a1] + p.helix_radius * std::cos(t);
                double cy = p.center[a2] + p.helix_radius * std::sin(t);
                return vortex2d(x[a1] - cx, x[a2] - cy, eps, +1);
            }
            case SynthKind::Ring: {
                // torus coordinates about the ring in the plane x[ax]=center[ax]
                double rho = std::hypot(x[a1] - p.center[a1], x[a2] - p.center[a2]);
                double dr = rho - p.ring_radius;
                double dz = x[ax] - p.center[ax];
                return vortex2d(dr, dz, eps, +1);
            }
        }
        return cplx(1, 0);
    };

    // Geometry checks: transverse clearance from the box sides.
    switch (p.kind) {
        case SynthKind::Uniform:
            break;
        case SynthKind::StraightLine:
            check_margin(p.center[a1] - lo[a1] >= margin && hi[a1] - p.center[a1] >= margin &&
                             p.center[a2] - lo[a2] >= margin && hi[a2] - p.center[a2] >= margin,
                         "line too close to box side");
            break;
        case SynthKind::DipolePair:
            check_margin(p.center[a1] - p.dipole_separation / 2 - lo[a1] >= margin &&
                             hi[a1] - p.center[a1] - p.dipole_separation / 2 >= margin,
                         "dipole too close to box side");
            break;
        case SynthKind::Helix:
            check_margin(p.center[a1] - p.helix_radius - lo[a1] >= margin &&
                             hi[a1] - p.center[a1] - p.helix_radius >= margin &&
                             p.center[a2] - p.helix_radius - lo[a2] >= margin &&
                             hi[a2] - p.center[a2] - p.helix_radius >= margin,
                         "helix too close to box side");
            break;
        case SynthKind::Ring:
            check_margin(p.center[a1] - p.ring_radius - lo[a1] >= margin &&
                             hi[a1] - p.center[a1] - p.ring_radius >= margin &&
                             p.center[a2] - p.ring_radius - lo[a2] >= margin &&
                             hi[a2] - p.center[a2] - p.ring_radius >= margin &&
                             p.center[ax] - lo[ax] >= margin && hi[ax] - p.center[ax] >= margin,
                         "ring too close to box side");
            break;
    }

    for (int iz = 0; iz < dims[2]; ++iz)
        for (int iy = 0; iy < dims[1]; ++iy)
            for (int ix = 0; ix < dims[0]; ++ix)
                f.u[f.idx(ix, iy, iz)] = factor(f.node_pos(ix, iy, iz));

    if (p.constant_A.norm2() > 0) {
        f.enable_A();
        for (auto& a : f.A) a = {p.constant_A.x, p.constant_A.y, p.constant_A.z};
    }

    // Ground truth filaments.
    auto sample_axis_curve = [&](auto&& posAt) {
        Polyline pl;
        int n = 4 * std::max({dims[0], dims[1], dims[2]});
        for (int i = 0; i <= n; ++i) {
            double t = lo[ax] + axis_span(ax) * double(i) / n;
            pl.points.push_back(posAt(t));
        }
        return pl;
    };
    switch (p.kind) {
        case SynthKind::Uniform:
            break;
        case SynthKind::StraightLine: {
            res.truth.push_back(sample_axis_curve([&](double t) {
                Vec3 q;
                q[ax] = t;
                q[a1] = p.center[a1];
                q[a2] = p.center[a2];
                return q;
            }));
            break;
        }
        case SynthKind::DipolePair: {
            for (int sgn : {-1, +1}) {
                Polyline pl = sample_axis_curve([&](double t) {
                    Vec3 q;
                    q[ax] = t;
                    q[a1] = p.center[a1] + sgn * p.dipole_separation / 2;
                    q[a2] = p.center[a2];
                    return q;
                });
                pl.multiplicity = sgn;
                res.truth.push_back(pl);
            }
            break;
        }
        case SynthKind::Helix: {
            res.truth.push_back(sample_axis_curve([&](double t) {
                double ang = (t - lo[ax]) / p.helix_pitch * 2.0 * M_PI;
                Vec3 q;
                q[ax] = t;
                q[a1] = p.center[a1] + p.helix_radius * std::cos(ang);
                q[a2] = p.center[a2] + p.helix_radius * std::sin(ang);
                return q;
            }));
            break;
        }
        case SynthKind::Ring: {
            Polyline pl;
            int n = 512;
            for (int i = 0; i <= n; ++i) {
                double t = 2.0 * M_PI * i / n;
                Vec3 q;
                q[ax] = p.center[ax];
                q[a1] = p.center[a1] + p.ring_radius * std::cos(t);
                q[a2] = p.center[a2] + p.ring_radius * std::sin(t);
                pl.points.push_back(q);
            }
            res.truth.push_back(pl);
            break;
        }
    }
    if (p.ball_domain) {
        std::vector<Polyline> clipped;
        for (const auto& pl : res.truth) {
            Polyline c = clip_to_domain(pl, f.domain);
            if (c.points.size() >= 2) clipped.push_back(c);
        }
        res.truth = clipped;
    }
    return res;
}

}  // namespace gl3d
