#pragma once

#include <span>
#include <vector>

#include "bmlab/geometry.hpp"
#include "bmlab/models.hpp"

namespace bmlab {

// Closed-form heat kernels and Green functions of the constant-curvature
// models, normalized for the generator convention used throughout: the heat
// equation is dp/dt = (Laplace-Beltrami) p, with no factor 1/2. Supported in
// d = 2 (integral form) and d = 3 (elementary form); other dimensions have no
// closed form here. General curvature -a^2 is routed through the exact
// scaling p_a(t, r) = a^d p_1(a^2 t, a r), so there is a single formula path.

// Invariants of the constant-curvature model relevant to the experiments:
// drift ell = (d-1)a, entropy h = (d-1)^2 a^2, spectral bottom
// lambda0 = h/4, volume entropy h_top = (d-1)a, radial fluctuation
// sigma_ell_sq = 2, and sigma_kappa_sq = 2h (the asymptotically harmonic
// equality case, which constant curvature realizes).
struct ModelConstants {
    double ell = 0.0;
    double h = 0.0;
    double lambda0 = 0.0;
    double h_top = 0.0;
    double sigma_ell_sq = 0.0;
    double sigma_kappa_sq = 0.0;
};

ModelConstants model_constants(const ConstantCurvature& m);

// p(t, r): heat kernel density against Riemannian volume at distance r.
double heat_kernel(const ConstantCurvature& m, double t, double r);
double heat_kernel_log(const ConstantCurvature& m, double t, double r);

// G(r) = integral of p(t, r) over t. Positive, decreasing, pole at r = 0.
double green_function(const ConstantCurvature& m, double r);
double green_log(const ConstantCurvature& m, double r);

// k(x, y, xi) = exp(-(d-1) a b(y, x, xi)): the boundary normalization of
// Green-function ratios G(y, z)/G(x, z) as z -> xi.
double martin_kernel(const ConstantCurvature& m, const HPoint& x, const HPoint& y,
                     const BoundaryPoint& xi);

// Density of d(x, omega_t) on (0, inf): p(t, r) * omega_{d-1} * A(r).
double radial_density(const ConstantCurvature& m, double t, double r);

// CDF of the radial law at each element of a sorted, increasing list of radii
// (accumulated segment-by-segment so the whole batch costs one sweep).
std::vector<double> radial_cdf_sorted(const ConstantCurvature& m, double t,
                                      std::span<const double> sorted_r);

// Scan of the two-sided comparison p_{-b^2}(t,r) <= p_{-a^2}(t,r) for a < b.
struct ComparisonReport {
    double max_violation = 0.0; // most positive p_b - p_a seen (<= 0 means all hold)
    int violations = 0;
    int points = 0;
};
ComparisonReport comparison_check(double a, double b, int d, std::span<const double> t_grid,
                                  std::span<const double> r_grid);

// Fits the smallest constant C for which
// p(t,r) <= C (r^2/t)^{1+d/2} exp(-r^2/(4t) - lambda0 t) holds on the grid
// (t > 1), and reports the large-t slope of the log-ratio at fixed r.
struct GaussianBoundReport {
    double c_fit = 0.0;
    double log_ratio_slope = 0.0; // d/dt log(kernel/bound shape), fixed r
    double max_ratio_diagonal = 0.0; // restricted to the r^2 ~ t regime
};
GaussianBoundReport gaussian_bound_diagnostic(const ConstantCurvature& m,
                                              std::span<const double> t_grid,
                                              std::span<const double> r_grid);

} // namespace bmlab
