#include "bmlab/heat_kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace bmlab {

namespace {

constexpr double pi = std::numbers::pi;

double log_sinh(double x) {
    if (x > 20.0) return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
    return std::log(std::sinh(x));
}

void require_supported(const ConstantCurvature& m) {
    if (m.d != 2 && m.d != 3)
        throw invalid_parameter("heat kernel: closed forms cover d in {2, 3}, got d = " +
                                std::to_string(m.d));
    if (!(m.a > 0.0)) throw invalid_parameter("heat kernel: curvature a must be positive");
}

// Unit-curvature H^3 kernel: (4 pi t)^{-3/2} (r / sinh r) exp(-t - r^2/(4t)).
double log_kernel3(double t, double r) {
    double log_rsinh; // log(r / sinh r), -> 0 as r -> 0
    if (r < 1e-6) {
        log_rsinh = -r * r / 6.0;
    } else if (r > 20.0) {
        log_rsinh = std::log(2.0 * r) - r - std::log1p(-std::exp(-2.0 * r));
    } else {
        log_rsinh = std::log(r / std::sinh(r));
    }
    return -1.5 * std::log(4.0 * pi * t) + log_rsinh - t - r * r / (4.0 * t);
}

// Unit-curvature H^2 kernel by the integral formula
//   p(t, r) = sqrt(2) (2 pi)^{-3/2} t^{-3/2} e^{-t/4}
//             * int_r^inf s e^{-s^2/(4t)} / sqrt(cosh s - cosh r) ds,
// with the endpoint 1/sqrt singularity removed by s = r + u^2 and the
// difference of coshes evaluated through the half-angle product.
double mckean_integral(double t, double r) {
    auto integrand = [&](double u) {
        const double s = r + u * u;
        const double gap = 2.0 * std::sinh(0.5 * (s + r)) * std::sinh(0.5 * u * u);
        if (!(gap > 0.0)) return 0.0;
        return 2.0 * u * s * std::exp(-s * s / (4.0 * t)) / std::sqrt(gap);
    };
    // Truncate where e^{-s^2/4t} is ~e^{-55} below the endpoint scale.
    const double s_max = std::sqrt(r * r + 220.0 * t) + 1.0;
    const double u_max = std::sqrt(s_max - r);
    return integrate(integrand, 0.0, u_max, 1e-300, 1e-11, 20000);
}

double log_kernel2(double t, double r) {
    const double integral = mckean_integral(t, r);
    if (!(integral > 0.0)) return -std::numeric_limits<double>::infinity();
    return 0.5 * std::log(2.0) - 1.5 * std::log(2.0 * pi) - 1.5 * std::log(t) - t / 4.0 +
           std::log(integral);
}

double log_kernel_unit(int d, double t, double r) {
    return d == 3 ? log_kernel3(t, r) : log_kernel2(t, r);
}

} // namespace

ModelConstants model_constants(const ConstantCurvature& m) {
    if (m.d < 2 || !(m.a > 0.0))
        throw invalid_parameter("model_constants: need d >= 2 and a > 0");
    ModelConstants c;
    const double da = (m.d - 1) * m.a;
    c.ell = da;
    c.h = da * da;
    c.lambda0 = da * da / 4.0;
    c.h_top = da;
    c.sigma_ell_sq = 2.0;
    c.sigma_kappa_sq = 2.0 * c.h;
    return c;
}

double heat_kernel_log(const ConstantCurvature& m, double t, double r) {
    require_supported(m);
    if (!(t > 0.0)) throw invalid_parameter("heat_kernel: t must be positive");
    if (r < 0.0) throw invalid_parameter("heat_kernel: r must be >= 0");
    // p_a(t, r) = a^d p_1(a^2 t, a r)
    return m.d * std::log(m.a) + log_kernel_unit(m.d, m.a * m.a * t, m.a * r);
}

double heat_kernel(const ConstantCurvature& m, double t, double r) {
    return std::exp(heat_kernel_log(m, t, r));
}

double green_log(const ConstantCurvature& m, double r) {
    require_supported(m);
    if (!(r > 0.0)) throw numeric_error("green_function: pole at r = 0");
    const double x = m.a * r;
    double unit; // log G_1 at distance x
    if (m.d == 3) {
        // G(r) = e^{-r} / (4 pi sinh r)
        unit = -2.0 * x - std::log(2.0 * pi) - std::log1p(-std::exp(-2.0 * x));
    } else {
        // G(r) = (1/2pi) log coth(r/2); the log factor is ~2 e^{-r} at
        // large r, evaluated through expm1 to keep it from rounding to 0.
        const double e = std::exp(-x);
        double logcoth;
        if (x > 1e-3) {
            logcoth = std::log1p(e) - std::log1p(-e);
        } else {
            logcoth = std::log(1.0 / std::tanh(x / 2.0));
        }
        unit = std::log(logcoth) - std::log(2.0 * pi);
    }
    // G_a(r) = a^{d-2} G_1(a r)
    return (m.d - 2) * std::log(m.a) + unit;
}

double green_function(const ConstantCurvature& m, double r) {
    return std::exp(green_log(m, r));
}

double martin_kernel(const ConstantCurvature& m, const HPoint& x, const HPoint& y,
                     const BoundaryPoint& xi) {
    const double h_top = (m.d - 1) * m.a;
    return std::exp(-h_top * busemann(y, x, xi));
}

double radial_density(const ConstantCurvature& m, double t, double r) {
    if (r == 0.0) return 0.0;
    const double sphere = (m.d == 3) ? 4.0 * pi : 2.0 * pi;
    const double log_area = (m.d - 1) * (log_sinh(m.a * r) - std::log(m.a));
    const double v = heat_kernel_log(m, t, r) + log_area;
    if (v < -700.0) return 0.0;
    return sphere * std::exp(v);
}

std::vector<double> radial_cdf_sorted(const ConstantCurvature& m, double t,
                                      std::span<const double> sorted_r) {
    std::vector<double> cdf(sorted_r.size());
    double acc = 0.0, prev = 0.0;
    auto dens = [&](double r) { return radial_density(m, t, r); };
    for (std::size_t i = 0; i < sorted_r.size(); ++i) {
        const double r = sorted_r[i];
        if (r < prev)
            throw invalid_parameter("radial_cdf_sorted: radii must be sorted increasing");
        if (r > prev) acc += integrate(dens, prev, r, 1e-14, 1e-9);
        cdf[i] = std::min(acc, 1.0);
        prev = r;
    }
    return cdf;
}

ComparisonReport comparison_check(double a, double b, int d, std::span<const double> t_grid,
                                  std::span<const double> r_grid) {
    if (!(a <= b)) throw invalid_parameter("comparison_check: need a <= b");
    ComparisonReport rep;
    const ConstantCurvature ma{d, a}, mb{d, b};
    for (double t : t_grid) {
        for (double r : r_grid) {
            const double pa = heat_kernel(ma, t, r);
            const double pb = heat_kernel(mb, t, r);
            ++rep.points;
            const double gap = pb - pa;
            if (gap > rep.max_violation) rep.max_violation = gap;
            if (gap > 1e-8 * std::max(pa, pb)) ++rep.violations;
        }
    }
    return rep;
}

GaussianBoundReport gaussian_bound_diagnostic(const ConstantCurvature& m,
                                              std::span<const double> t_grid,
                                              std::span<const double> r_grid) {
    const double lambda0 = model_constants(m).lambda0;
    GaussianBoundReport rep;
    std::vector<double> slope_t, slope_logratio;
    const double r_fixed = r_grid.empty() ? 1.0 : r_grid[r_grid.size() / 2];
    for (double t : t_grid) {
        if (!(t > 1.0)) throw invalid_parameter("gaussian_bound_diagnostic: grid needs t > 1");
        for (double r : r_grid) {
            const double log_shape =
                (1.0 + m.d / 2.0) * std::log(r * r / t) - r * r / (4.0 * t) - lambda0 * t;
            const double log_ratio = heat_kernel_log(m, t, r) - log_shape;
            const double ratio = std::exp(log_ratio);
            rep.c_fit = std::max(rep.c_fit, ratio);
            if (std::abs(r * r - t) < 0.5 * t)
                rep.max_ratio_diagonal = std::max(rep.max_ratio_diagonal, ratio);
            if (r == r_fixed) {
                slope_t.push_back(t);
                slope_logratio.push_back(log_ratio);
            }
        }
    }
    if (slope_t.size() >= 2) rep.log_ratio_slope = fit_line(slope_t, slope_logratio).slope;
    return rep;
}

} // namespace bmlab
