#pragma once

// Growth-and-merge ball construction on planar faces, isotropic and for a
// constant diagonal metric (ellipses after rescaling). Produces disjoint
// balls with integer degrees and an accumulated energy lower bound.

#include <vector>

#include "gl3d/face.hpp"

namespace gl3d {

struct BoundaryCollision : std::runtime_error {
    BoundaryCollision() : std::runtime_error("balls: charged ball left the admissible region") {}
};

struct Ball2 {
    Vec2 center;  // face coordinates (s,t)
    double radius = 0.0;
    int degree = 0;
    double accumulated = 0.0;  // lower bound carried by this ball
};

struct MergeEvent {
    Vec2 center_a, center_b;
    double r_a, r_b;
    int deg_a, deg_b;
    double pre_merge_bound_a, pre_merge_bound_b;
};

struct BallFamily {
    std::vector<Ball2> balls;
    double total_radius = 0.0;
    double lower_bound = 0.0;
    std::vector<MergeEvent> merges;
    // kernel parameters
    double eps = 0.0;
    double C0 = 2.0;
    double M_eps = 0.0;  // measured face energy, reported alongside
};

// Two-branch growth kernel: linear slope 1/(C0*eps) up to t1 = pi*C0*eps,
// then pi*log(t/eps) + B with B chosen so the branches join C^1. Satisfies:
// Lambda(t)/t nonincreasing, sup_t Lambda(t)/t = 1/(C0*eps), and
// |Lambda(t) - pi log(t/eps)| bounded by a constant depending only on C0.
double ball_kernel(double t, double eps, double C0 = 2.0);
double ball_kernel_log_deviation(double C0 = 2.0);  // sup_t |Lambda - pi log(t/eps)|

struct BallGrowthParams {
    double C0 = 2.0;
    double growth_factor = 1.05;
    double radius_cap_fraction = 0.25;  // cap at this fraction of the face diameter
};

// Seeds one ball per nonzero-degree component (radius = diameter + 2 pitch),
// grows multiplicatively in lockstep, merges overlaps into the smallest
// enclosing disk, accumulates annulus lower bounds, stops once the total
// radius reaches final_radius.
BallFamily grow_balls(const FaceField& face, double eps, double final_radius,
                      const BallGrowthParams& params = {});

struct FaceMetric {
    double g_tt = 1.0;
    double g_ww = 1.0;
};

// Rescales coordinates by (sqrt(g_tt), sqrt(g_ww)), runs the isotropic
// construction there, and maps the balls back (ellipses in face coordinates;
// the returned radii live in rescaled coordinates).
BallFamily grow_balls_metric(const FaceField& face, double eps, const FaceMetric& metric,
                             double final_radius, const BallGrowthParams& params = {});

// Weighted slice energy matching the rescaled-coordinates free energy:
// int [ (|d_s u|^2 / g_tt + |d_t u|^2 / g_ww)/2 + (1-|u|^2)^2/(4 eps^2) ]
//     * sqrt(g_tt g_ww) ds dt.
double weighted_slice_energy(const FaceField& face, double eps, const FaceMetric& metric);

}  // namespace gl3d
