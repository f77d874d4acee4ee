#include "gl3d/field.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace gl3d {

namespace {

struct TrilinearCell {
    int ix, iy, iz;
    double fx, fy, fz;
};

TrilinearCell locate(const LatticeField3& f, const Vec3& p) {
    auto clamp01 = [](double t) { return t < 0 ? 0.0 : (t > 1 ? 1.0 : t); };
    double gx = (p.x - f.origin.x) / f.h;
    double gy = (p.y - f.origin.y) / f.h;
    double gz = (p.z - f.origin.z) / f.h;
    int ix = std::clamp(int(std::floor(gx)), 0, f.dims[0] - 2);
    int iy = std::clamp(int(std::floor(gy)), 0, f.dims[1] - 2);
    int iz = std::clamp(int(std::floor(gz)), 0, f.dims[2] - 2);
    return {ix, iy, iz, clamp01(gx - ix), clamp01(gy - iy), clamp01(gz - iz)};
}

template <typename Get>
auto trilinear(const LatticeField3& f, const Vec3& p, Get get) -> decltype(get(size_t(0))) {
    TrilinearCell c = locate(f, p);
    auto v000 = get(f.idx(c.ix, c.iy, c.iz));
    auto v100 = get(f.idx(c.ix + 1, c.iy, c.iz));
    auto v010 = get(f.idx(c.ix, c.iy + 1, c.iz));
    auto v110 = get(f.idx(c.ix + 1, c.iy + 1, c.iz));
    auto v001 = get(f.idx(c.ix, c.iy, c.iz + 1));
    auto v101 = get(f.idx(c.ix + 1, c.iy, c.iz + 1));
    auto v011 = get(f.idx(c.ix, c.iy + 1, c.iz + 1));
    auto v111 = get(f.idx(c.ix + 1, c.iy + 1, c.iz + 1));
    auto lerp = [](auto a, auto b, double t) { return a * (1.0 - t) + b * t; };
    auto v00 = lerp(v000, v100, c.fx);
    auto v10 = lerp(v010, v110, c.fx);
    auto v01 = lerp(v001, v101, c.fx);
    auto v11 = lerp(v011, v111, c.fx);
    auto v0 = lerp(v00, v10, c.fy);
    auto v1 = lerp(v01, v11, c.fy);
    return lerp(v0, v1, c.fz);
}

}  // namespace

cplx LatticeField3::interp_u(const Vec3& p) const {
    return trilinear(*this, p, [&](size_t i) { return u[i]; });
}

double LatticeField3::interp_abs_u(const Vec3& p) const {
    return trilinear(*this, p, [&](size_t i) { return std::abs(u[i]); });
}

std::array<double, 3> LatticeField3::interp_A(const Vec3& p) const {
    if (A.empty()) return {0, 0, 0};
    std::array<double, 3> out;
    for (int k = 0; k < 3; ++k)
        out[k] = trilinear(*this, p, [&](size_t i) { return A[i][k]; });
    return out;
}

namespace {

template <typename T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T take(std::ifstream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw FieldError("GLF3: truncated file");
    return v;
}

}  // namespace

void write_glf3(const LatticeField3& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FieldError("GLF3: cannot open for writing: " + path);
    os.write("GLF3", 4);
    put<uint32_t>(os, 1u);
    for (int k = 0; k < 3; ++k) put<uint32_t>(os, uint32_t(f.dims[k]));
    put<double>(os, f.h);
    put<double>(os, f.origin.x);
    put<double>(os, f.origin.y);
    put<double>(os, f.origin.z);
    put<uint8_t>(os, f.has_A() ? 1 : 0);
    put<uint8_t>(os, f.has_mask() ? 1 : 0);
    for (const cplx& c : f.u) {
        put<float>(os, float(c.real()));
        put<float>(os, float(c.imag()));
    }
    if (f.has_A())
        for (const auto& a : f.A)
            for (int k = 0; k < 3; ++k) put<float>(os, float(a[k]));
    if (f.has_mask()) os.write(reinterpret_cast<const char*>(f.mask.data()), f.mask.size());
    if (!os) throw FieldError("GLF3: write failed: " + path);
}

LatticeField3 read_glf3(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FieldError("GLF3: cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "GLF3", 4) != 0) throw FieldError("GLF3: bad magic");
    uint32_t version = take<uint32_t>(is);
    if (version != 1) throw FieldError("GLF3: unknown version " + std::to_string(version));
    std::array<int, 3> dims;
    for (int k = 0; k < 3; ++k) {
        dims[k] = int(take<uint32_t>(is));
        if (dims[k] < 2) throw FieldError("GLF3: dims must be >= 2");
    }
    double h = take<double>(is);
    Vec3 origin{take<double>(is), take<double>(is), take<double>(is)};
    uint8_t hasA = take<uint8_t>(is);
    uint8_t hasMask = take<uint8_t>(is);
    LatticeField3 f(dims, h, origin);
    for (cplx& c : f.u) {
        float re = take<float>(is);
        float im = take<float>(is);
        c = cplx(re, im);
    }
    if (hasA) {
        f.A.resize(f.size());
        for (auto& a : f.A)
            for (int k = 0; k < 3; ++k) a[k] = take<float>(is);
    }
    if (hasMask) {
        f.mask.resize(f.size());
        is.read(reinterpret_cast<char*>(f.mask.data()), f.mask.size());
        if (!is) throw FieldError("GLF3: truncated mask");
    }
    return f;
}

}  // namespace gl3d
