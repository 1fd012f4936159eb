#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bmlab/numerics.hpp"

namespace bmlab {

// Constant curvature -a^2 in dimension d.
struct ConstantCurvature {
    int d = 3;
    double a = 1.0;
};

// Rotationally symmetric surface (d = 2): metric dr^2 + f(r)^2 dtheta^2 with
// the warp f delivered as a grid and interpolated by a cubic spline, so that
// configurations stay serializable and runs reproducible. Construction
// validates f(0) = 0, f'(0) = 1 and the declared curvature pinching
// a^2 <= f''/f <= b^2 by finite differences on the grid.
class RotSym {
  public:
    RotSym(std::vector<double> r, std::vector<double> f, double pinch_a, double pinch_b,
           double r_max);

    static RotSym from_file(const std::string& path, double pinch_a, double pinch_b,
                            double r_max = 1e3);

    double warp(double r) const;        // f(r)
    double warp_deriv(double r) const;  // f'(r)
    double r_max() const { return r_max_; }
    double pinch_a() const { return pinch_a_; }
    double pinch_b() const { return pinch_b_; }

    // Reported diagnostic for the smoothness of the curvature profile:
    // max |third difference of f| / f over interior grid nodes.
    double curvature_gradient_diagnostic() const;

  private:
    CubicSpline spline_;
    std::vector<double> grid_r_, grid_f_;
    double pinch_a_, pinch_b_, r_max_;
};

using ModelSpec = std::variant<ConstantCurvature, RotSym>;

int model_dim(const ModelSpec& m);

// Point in the polar coordinates centered at the model's reference point:
// radius plus a unit direction in the fiber (an angle for d = 2).
struct PolarPoint {
    double r = 0.0;
    std::vector<double> dir; // unit vector, size d
};

// A(r): area density of the geodesic sphere of radius r, i.e.
// (sinh(ar)/a)^{d-1} in constant curvature and f(r) for RotSym.
double volume_density(const ModelSpec& m, double r);
double log_volume_density(const ModelSpec& m, double r);

// Radial part of the Laplacian: (d-1) a coth(ar), or f'(r)/f(r) for RotSym.
// Singular at r = 0; callers handle the pole with their own floor scheme.
double radial_drift(const ModelSpec& m, double r);

// Time-change rate of the spherical component: 1/s(r)^2 with s = sinh(ar)/a,
// or 1/f(r)^2 for RotSym.
double angular_rate(const ModelSpec& m, double r);

// Geodesic distance on a RotSym surface via the surface-of-revolution
// reduction: root-find the conserved angular momentum c so the angular
// advance matches, then integrate arclength. Relative accuracy ~1e-6.
double rotsym_distance(const RotSym& m, const PolarPoint& p, const PolarPoint& q);

// Distance between polar points in constant curvature (law of cosines).
double polar_distance(const ConstantCurvature& m, const PolarPoint& p, const PolarPoint& q);

double polar_distance(const ModelSpec& m, const PolarPoint& p, const PolarPoint& q);

} // namespace bmlab
