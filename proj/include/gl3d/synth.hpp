#pragma once

// Synthetic vortex configurations with ground-truth filament polylines.
// Core profile is tanh(r/eps); phases of the requested filaments multiply.

#include <string>
#include <vector>

#include "gl3d/field.hpp"

namespace gl3d {

struct GeometryOutOfBounds : FieldError {
    GeometryOutOfBounds(const std::string& what) : FieldError("synth: " + what) {}
};

enum class SynthKind { Uniform, StraightLine, Ring, Helix, DipolePair };

SynthKind synth_kind_from_string(const std::string& s);
std::string to_string(SynthKind k);

struct Polyline {
    std::vector<Vec3> points;
    int multiplicity = 1;
    double length() const {
        double L = 0;
        for (size_t i = 1; i < points.size(); ++i) L += dist(points[i - 1], points[i]);
        return L;
    }
};

struct SynthParams {
    SynthKind kind = SynthKind::Uniform;
    // straight_line / helix / dipole: filament runs along `axis` through
    // `center` (helix winds around it, dipole offsets by +-separation/2).
    int axis = 2;
    Vec3 center{0.5, 0.5, 0.5};
    double ring_radius = 0.3;
    double helix_radius = 0.15;
    double helix_pitch = 1.0;
    double dipole_separation = 0.3;
    Vec3 constant_A{0, 0, 0};
    bool ball_domain = false;   // else the lattice box
    double ball_radius = 0.45;  // centered at the box center
};

struct SynthResult {
    LatticeField3 field;
    std::vector<Polyline> truth;  // clipped to the domain
};

SynthResult synth_field(const SynthParams& p, std::array<int, 3> dims, double h, double eps);

}  // namespace gl3d
