#pragma once

// Complex order parameter u (and optional gauge potential A) sampled on a
// regular 3D lattice, plus the GLF3 binary file format.
//
// Storage is x-fastest: index = ix + nx*(iy + ny*iz).

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gl3d/domain.hpp"
#include "gl3d/geom.hpp"

namespace gl3d {

using cplx = std::complex<double>;

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LatticeField3 {
    std::array<int, 3> dims{2, 2, 2};
    double h = 1.0;
    Vec3 origin{0, 0, 0};
    std::vector<cplx> u;
    std::vector<std::array<double, 3>> A;  // empty when no gauge field
    std::vector<uint8_t> mask;             // empty means all nodes in the domain
    Domain domain;

    LatticeField3() = default;
    LatticeField3(std::array<int, 3> d, double h_, Vec3 orig) : dims(d), h(h_), origin(orig) {
        if (dims[0] < 2 || dims[1] < 2 || dims[2] < 2) throw FieldError("dims must be >= 2 per axis");
        if (h <= 0) throw FieldError("spacing must be positive");
        u.assign(size(), cplx(1.0, 0.0));
        domain = Domain::box(origin, node_pos(dims[0] - 1, dims[1] - 1, dims[2] - 1));
    }

    size_t size() const { return size_t(dims[0]) * dims[1] * dims[2]; }
    size_t idx(int ix, int iy, int iz) const {
        return size_t(ix) + size_t(dims[0]) * (size_t(iy) + size_t(dims[1]) * size_t(iz));
    }
    Vec3 node_pos(int ix, int iy, int iz) const {
        return {origin.x + ix * h, origin.y + iy * h, origin.z + iz * h};
    }
    Vec3 box_lo() const { return origin; }
    Vec3 box_hi() const { return node_pos(dims[0] - 1, dims[1] - 1, dims[2] - 1); }

    bool has_A() const { return !A.empty(); }
    bool has_mask() const { return !mask.empty(); }
    bool in_domain(int ix, int iy, int iz) const {
        if (mask.empty()) return true;
        return mask[idx(ix, iy, iz)] != 0;
    }

    void enable_A() {
        if (A.empty()) A.assign(size(), {0.0, 0.0, 0.0});
    }
    void set_mask_from_domain() {
        mask.assign(size(), 0);
        for (int iz = 0; iz < dims[2]; ++iz)
            for (int iy = 0; iy < dims[1]; ++iy)
                for (int ix = 0; ix < dims[0]; ++ix)
                    mask[idx(ix, iy, iz)] = domain.contains(node_pos(ix, iy, iz)) ? 1 : 0;
    }

    // Trilinear interpolation of u (component-wise) at a world point.
    // Points outside the lattice box are clamped.
    cplx interp_u(const Vec3& p) const;
    double interp_abs_u(const Vec3& p) const;  // interpolates |u| samples
    std::array<double, 3> interp_A(const Vec3& p) const;
};

// GLF3 binary format (little-endian):
//   'G','L','F','3', u32 version=1, u32 dims[3], f64 spacing, f64 origin[3],
//   u8 has_A, u8 has_mask, complex64 u[] (x fastest), then 3xf32 A[] if
//   present, then u8 mask[] if present.
void write_glf3(const LatticeField3& f, const std::string& path);
LatticeField3 read_glf3(const std::string& path);

}  // namespace gl3d
