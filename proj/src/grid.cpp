#include "gl3d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace gl3d {

namespace {

std::vector<Mat3> rotation_set(bool enable) {
    std::vector<Mat3> out;
    out.push_back(Mat3::identity());
    if (!enable) return out;
    out.push_back(Mat3{{0, 1, 0, 0, 0, 1, 1, 0, 0}});   // cyclic x<-y<-z
    out.push_back(Mat3{{0, 0, 1, 1, 0, 0, 0, 1, 0}});   // cyclic x<-z<-y
    out.push_back(Mat3{{0, 1, 0, 1, 0, 0, 0, 0, -1}});  // swap x,y with z flipped
    return out;
}

// Cubes fully inside the domain (all 8 corners; both supported domains are
// convex so corner containment implies cube containment).
std::vector<std::array<int, 3>> kept_cubes_for(const LatticeField3& f, const Vec3& b,
                                               const Mat3& R, double delta) {
    std::vector<std::array<int, 3>> kept;
    Vec3 lo = f.box_lo(), hi = f.box_hi();
    // integer range: transform the 8 box corners into grid coordinates
    double gmin[3] = {1e300, 1e300, 1e300}, gmax[3] = {-1e300, -1e300, -1e300};
    for (int c = 0; c < 8; ++c) {
        Vec3 w{(c & 1) ? hi.x : lo.x, (c & 2) ? hi.y : lo.y, (c & 4) ? hi.z : lo.z};
        Vec3 g = R.applyT(w - b) / delta;
        for (int d = 0; d < 3; ++d) {
            gmin[d] = std::min(gmin[d], g[d]);
            gmax[d] = std::max(gmax[d], g[d]);
        }
    }
    const Domain& dom = f.domain;
    for (int i = int(std::floor(gmin[0])) - 1; i <= int(std::ceil(gmax[0])); ++i)
        for (int j = int(std::floor(gmin[1])) - 1; j <= int(std::ceil(gmax[1])); ++j)
            for (int k = int(std::floor(gmin[2])) - 1; k <= int(std::ceil(gmax[2])); ++k) {
                bool inside = true;
                for (int c = 0; c < 8 && inside; ++c) {
                    Vec3 g{double(i + ((c >> 0) & 1)), double(j + ((c >> 1) & 1)),
                           double(k + ((c >> 2) & 1))};
                    Vec3 w = b + R.apply(g * delta);
                    if (!dom.contains(w)) inside = false;
                }
                if (inside) kept.push_back({i, j, k});
            }
    return kept;
}

}  // namespace

FaceList enumerate_faces(const GridSpec& g) {
    FaceList out;
    std::unordered_set<uint64_t> seen;
    for (const auto& c : g.kept_cubes) {
        for (int axis = 0; axis < 3; ++axis) {
            for (int side = 0; side < 2; ++side) {
                GridFace f;
                f.axis = axis;
                f.base = c;
                f.base[axis] += side;
                uint64_t k = GridSpec::key(f.base[0], f.base[1], f.base[2]) * 3 + axis;
                if (!seen.insert(k).second) continue;
                std::array<int, 3> below = f.base;
                below[axis] -= 1;
                bool hasAbove = g.is_kept(f.base[0], f.base[1], f.base[2]);
                bool hasBelow = g.is_kept(below[0], below[1], below[2]);
                out.faces.push_back(f);
                out.interior.push_back(hasAbove && hasBelow ? 1 : 0);
            }
        }
    }
    return out;
}

std::vector<GridEdge> enumerate_edges(const GridSpec& g) {
    std::vector<GridEdge> out;
    std::unordered_set<uint64_t> seen;
    for (const auto& c : g.kept_cubes)
        for (int axis = 0; axis < 3; ++axis) {
            int a = (axis + 1) % 3, b = (axis + 2) % 3;
            for (int da = 0; da < 2; ++da)
                for (int db = 0; db < 2; ++db) {
                    GridEdge e;
                    e.axis = axis;
                    e.vertex = c;
                    e.vertex[a] += da;
                    e.vertex[b] += db;
                    uint64_t k = GridSpec::key(e.vertex[0], e.vertex[1], e.vertex[2]) * 3 + axis;
                    if (seen.insert(k).second) out.push_back(e);
                }
        }
    return out;
}

namespace {

double interp_density(const LatticeField3& f, const std::vector<double>& density, const Vec3& p) {
    // trilinear on the node density samples
    auto clamp01 = [](double t) { return t < 0 ? 0.0 : (t > 1 ? 1.0 : t); };
    double gx = (p.x - f.origin.x) / f.h;
    double gy = (p.y - f.origin.y) / f.h;
    double gz = (p.z - f.origin.z) / f.h;
    int ix = std::clamp(int(std::floor(gx)), 0, f.dims[0] - 2);
    int iy = std::clamp(int(std::floor(gy)), 0, f.dims[1] - 2);
    int iz = std::clamp(int(std::floor(gz)), 0, f.dims[2] - 2);
    double fx = clamp01(gx - ix), fy = clamp01(gy - iy), fz = clamp01(gz - iz);
    auto at = [&](int dx, int dy, int dz) { return density[f.idx(ix + dx, iy + dy, iz + dz)]; };
    double v00 = at(0, 0, 0) * (1 - fx) + at(1, 0, 0) * fx;
    double v10 = at(0, 1, 0) * (1 - fx) + at(1, 1, 0) * fx;
    double v01 = at(0, 0, 1) * (1 - fx) + at(1, 0, 1) * fx;
    double v11 = at(0, 1, 1) * (1 - fx) + at(1, 1, 1) * fx;
    double v0 = v00 * (1 - fy) + v10 * fy;
    double v1 = v01 * (1 - fy) + v11 * fy;
    return v0 * (1 - fz) + v1 * fz;
}

int samples_per_edge(const LatticeField3& f, double delta, double eps, int oversample) {
    // pitch min(h, delta/16) resolves cores of width eps >= h; below that the
    // interpolated modulus dip lives at scale ~h/3 and needs finer sampling
    double pitch = std::min(f.h, delta / 16.0);
    if (eps < f.h) pitch = std::min(pitch, f.h / 3.0);
    return std::max(16, int(std::ceil(delta / pitch))) * oversample;
}

}  // namespace

SkeletonEnergies skeleton_energies(const LatticeField3& f, const std::vector<double>& density,
                                   const GridSpec& g, double eps, int oversample) {
    SkeletonEnergies out;
    int n = samples_per_edge(f, g.delta, eps, oversample);
    double step = g.delta / n;

    for (const GridEdge& e : enumerate_edges(g)) {
        double acc = 0.0;
        for (int s = 0; s <= n; ++s) {
            Vec3 gpt{double(e.vertex[0]), double(e.vertex[1]), double(e.vertex[2])};
            gpt[e.axis] += double(s) / n;
            Vec3 w = g.grid_to_world(gpt);
            double d = interp_density(f, density, w);
            double wgt = (s == 0 || s == n) ? 0.5 : 1.0;
            acc += wgt * d;
            // complex interpolation, matching what face detection sees
            out.min_modulus_on_edges = std::min(out.min_modulus_on_edges, std::abs(f.interp_u(w)));
        }
        out.e1 += acc * step;
    }

    FaceList fl = enumerate_faces(g);
    for (const GridFace& face : fl.faces) {
        int a = (face.axis + 1) % 3, b = (face.axis + 2) % 3;
        double acc = 0.0;
        for (int s = 0; s <= n; ++s)
            for (int t = 0; t <= n; ++t) {
                Vec3 gpt{double(face.base[0]), double(face.base[1]), double(face.base[2])};
                gpt[a] += double(s) / n;
                gpt[b] += double(t) / n;
                Vec3 w = g.grid_to_world(gpt);
                double wgt = ((s == 0 || s == n) ? 0.5 : 1.0) * ((t == 0 || t == n) ? 0.5 : 1.0);
                acc += wgt * interp_density(f, density, w);
            }
        out.e2 += acc * step * step;
    }
    return out;
}

namespace {

// cheap rejection: minimum interpolated modulus over the edge samples, with
// early exit once the threshold is crossed
double edge_min_modulus(const LatticeField3& f, const GridSpec& g, double eps, double threshold) {
    int n = samples_per_edge(f, g.delta, eps, 1);
    double minMod = 1e300;
    for (const GridEdge& e : enumerate_edges(g)) {
        for (int s = 0; s <= n; ++s) {
            Vec3 gpt{double(e.vertex[0]), double(e.vertex[1]), double(e.vertex[2])};
            gpt[e.axis] += double(s) / n;
            double m = std::abs(f.interp_u(g.grid_to_world(gpt)));
            minMod = std::min(minMod, m);
            if (minMod <= threshold) return minMod;
        }
    }
    return minMod;
}

}  // namespace

GridSpec choose_grid(const LatticeField3& f, double eps, const GridSearchParams& p) {
    EnergyReport rep = energy(f, eps, all_nodes());
    double F = rep.F_eps;
    std::vector<double> density = energy_density(f, eps);
    auto rots = rotation_set(p.rotations);

    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    double bestMod = -1.0;
    Vec3 anchor = f.box_lo();

    for (int trial = 0; trial < p.trials; ++trial) {
        const Mat3& R = rots[trial % rots.size()];
        Vec3 off{uni(rng) * p.delta, uni(rng) * p.delta, uni(rng) * p.delta};
        GridSpec g;
        g.b = anchor + R.apply(off);
        g.R = R;
        g.delta = p.delta;
        g.kept_cubes = kept_cubes_for(f, g.b, R, p.delta);
        g.finalize();
        if (g.kept_cubes.empty()) continue;
        double minMod = edge_min_modulus(f, g, eps, p.modulus_threshold);
        bestMod = std::max(bestMod, minMod);
        if (minMod <= p.modulus_threshold) continue;
        SkeletonEnergies se = skeleton_energies(f, density, g, eps, 1);
        bool ok = se.min_modulus_on_edges > p.modulus_threshold &&
                  se.e1 <= p.C_grid / (p.delta * p.delta) * F && se.e2 <= p.C_grid / p.delta * F;
        if (ok) {
            g.implied_gamma = 1.0 - 4.0 * std::log(p.delta) / std::log(eps);
            return g;
        }
    }
    std::ostringstream os;
    os << "choose_grid: no admissible grid in " << p.trials << " trials (best min modulus "
       << bestMod << ", F " << F << ")";
    throw GridNotFound(os.str());
}

bool verify_grid(const LatticeField3& f, double eps, const GridSpec& g,
                 const GridSearchParams& p, int oversample) {
    EnergyReport rep = energy(f, eps, all_nodes());
    std::vector<double> density = energy_density(f, eps);
    SkeletonEnergies se = skeleton_energies(f, density, g, eps, oversample);
    return se.min_modulus_on_edges > p.modulus_threshold &&
           se.e1 <= p.C_grid / (p.delta * p.delta) * rep.F_eps &&
           se.e2 <= p.C_grid / p.delta * rep.F_eps;
}

}  // namespace gl3d
