#pragma once

#include <complex>
#include <span>
#include <vector>

#include "bmlab/numerics.hpp"

namespace bmlab {

// Hyperboloid model of the d-dimensional space of constant curvature -a^2:
// the upper sheet { <x,x>_M = -1/a^2, x0 > 0 } of ambient R^{d+1} with the
// Minkowski form <u,v>_M = -u0 v0 + sum_{i>=1} ui vi. Distances and horocycle
// data are log/rational expressions in the form, so nothing trigonometric
// degrades at large separation.

double minkowski_dot(std::span<const double> u, std::span<const double> v);

struct HPoint {
    std::vector<double> coords; // ambient, coords[0] > 0
    double curvature_a = 1.0;

    int dim() const { return static_cast<int>(coords.size()) - 1; }

    // o = (1/a, 0, ..., 0), the sheet's basepoint.
    static HPoint origin(int d, double a);

    // Rescales onto the sheet (exact up to one division and sqrt); throws if
    // the vector is not timelike future-pointing.
    static HPoint project(std::vector<double> ambient, double a);

    void check_invariants(double tol = 1e-10) const;
};

struct HTangent {
    HPoint base;
    std::vector<double> vec;

    void check_invariants(double tol = 1e-10) const; // tangency + unit norm
};

// Point of the boundary at infinity: a future-null ambient direction,
// normalized so direction[0] == 1. The normalization makes the Busemann
// closed form a plain log of Minkowski products.
struct BoundaryPoint {
    std::vector<double> direction;

    void check_invariants(double tol = 1e-10) const;

    // Boundary point hit by the geodesic ray from x with initial direction v.
    static BoundaryPoint from_ray(const HPoint& x, const HTangent& v);
};

double distance(const HPoint& x, const HPoint& y);

// Geodesic with unit speed: cosh(at) x + sinh(at)/a v, reprojected.
HPoint exp_map(const HPoint& x, const HTangent& v, double t);

// Initial direction of the geodesic from x to y (unit). Throws at y == x.
HTangent log_map(const HPoint& x, const HPoint& y);

// Unit-norm copy of v after projecting out any component along base.
HTangent make_unit_tangent(const HPoint& base, std::vector<double> ambient_vec);

// b(y, x, xi) = (1/a) log(<y,xi>_M / <x,xi>_M): the limit of
// d(y,z) - d(x,z) as z -> xi. Decreases along the ray from x toward xi;
// b(x, x, xi) = 0; cocycle b(z,x,xi) = b(z,y,xi) + b(y,x,xi).
double busemann(const HPoint& y, const HPoint& x, const BoundaryPoint& xi);

// Gromov product with the factor 1/2, so that
// (xi|eta)_x - (xi|eta)_y = b(x,y,xi)/2 + b(x,y,eta)/2 holds exactly.
double gromov_product(const BoundaryPoint& xi, const BoundaryPoint& eta, const HPoint& x);

// exp(-tau (xi|eta)_x); returns 0 for xi == eta (limit value).
double visual_distance(const BoundaryPoint& xi, const BoundaryPoint& eta, const HPoint& x,
                       double tau);

// Upper half-plane chart of the d=2, a=1 sheet. Im z > 0 required.
HPoint halfplane_to_hyperboloid(std::complex<double> z);
std::complex<double> hyperboloid_to_halfplane(const HPoint& p);

// Boundary R union {infinity} of the half-plane, as null directions.
BoundaryPoint halfplane_boundary(double u);
BoundaryPoint halfplane_boundary_infinity();

double halfplane_distance(std::complex<double> z, std::complex<double> w);

} // namespace bmlab
