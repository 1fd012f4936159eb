#include "bmlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bmlab {

namespace {

// log(sinh(x)) without overflow for large x.
double log_sinh(double x) {
    if (x <= 0.0) throw invalid_parameter("log_sinh: x must be positive");
    if (x > 20.0) return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
    return std::log(std::sinh(x));
}

} // namespace

RotSym::RotSym(std::vector<double> r, std::vector<double> f, double pinch_a, double pinch_b,
               double r_max)
    : spline_(r, f), grid_r_(std::move(r)), grid_f_(std::move(f)), pinch_a_(pinch_a),
      pinch_b_(pinch_b) {
    if (!(pinch_a > 0.0) || !(pinch_b > pinch_a))
        throw invalid_parameter("RotSym: need 0 < a < b for the pinching bounds");
    if (std::abs(grid_r_.front()) > 1e-12 || std::abs(grid_f_.front()) > 1e-12)
        throw invalid_parameter("RotSym: warp grid must start at r = 0 with f(0) = 0");
    r_max_ = std::min(r_max, grid_r_.back());
    if (!(r_max_ > 0.0)) throw invalid_parameter("RotSym: empty radial range");

    const double fp0 = (grid_f_[1] - grid_f_[0]) / (grid_r_[1] - grid_r_[0]);
    if (std::abs(fp0 - 1.0) > 1e-3)
        throw invalid_parameter("RotSym: f'(0) = " + std::to_string(fp0) + ", expected 1");

    // Pinching a^2 <= f''/f <= b^2, second differences on the grid. The
    // ratio is skipped right at the pole where it is 0/0.
    const double eps = 1e-4;
    for (std::size_t i = 1; i + 1 < grid_r_.size(); ++i) {
        if (grid_r_[i] > r_max_) break;
        if (!(grid_f_[i] > 0.0))
            throw invalid_parameter("RotSym: f must be positive on (0, r_max]");
        const double h0 = grid_r_[i] - grid_r_[i - 1];
        const double h1 = grid_r_[i + 1] - grid_r_[i];
        const double fpp = 2.0 *
                           (grid_f_[i - 1] * h1 - grid_f_[i] * (h0 + h1) + grid_f_[i + 1] * h0) /
                           (h0 * h1 * (h0 + h1));
        const double k = fpp / grid_f_[i];
        if (k < pinch_a_ * pinch_a_ - eps || k > pinch_b_ * pinch_b_ + eps)
            throw invalid_parameter("RotSym: pinching violated at r = " +
                                    std::to_string(grid_r_[i]) + ", f''/f = " +
                                    std::to_string(k));
    }
}

RotSym RotSym::from_file(const std::string& path, double pinch_a, double pinch_b,
                         double r_max) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("RotSym: cannot open warp grid file " + path);
    std::vector<double> r, f;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double rv, fv;
        if (ls >> rv >> fv) {
            if (!r.empty() && rv <= r.back())
                throw invalid_parameter("RotSym: grid radii not strictly increasing in " + path);
            r.push_back(rv);
            f.push_back(fv);
        }
    }
    return RotSym(std::move(r), std::move(f), pinch_a, pinch_b, r_max);
}

double RotSym::warp(double r) const {
    if (r < 0.0 || r > r_max_)
        throw invalid_parameter("RotSym: radius " + std::to_string(r) + " outside [0, " +
                                std::to_string(r_max_) + "]");
    return spline_(r);
}

double RotSym::warp_deriv(double r) const {
    if (r < 0.0 || r > r_max_)
        throw invalid_parameter("RotSym: radius " + std::to_string(r) + " outside [0, " +
                                std::to_string(r_max_) + "]");
    return spline_.deriv(r);
}

double RotSym::curvature_gradient_diagnostic() const {
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < grid_r_.size(); ++i) {
        if (grid_r_[i + 1] > r_max_) break;
        const double h0 = grid_r_[i] - grid_r_[i - 1];
        const double h1 = grid_r_[i + 1] - grid_r_[i];
        auto fpp = [&](std::size_t j) {
            return 2.0 *
                   (grid_f_[j - 1] * h1 - grid_f_[j] * (h0 + h1) + grid_f_[j + 1] * h0) /
                   (h0 * h1 * (h0 + h1));
        };
        const double k0 = fpp(i) / grid_f_[i];
        const double k1 = fpp(i + 1) / grid_f_[i + 1];
        worst = std::max(worst, std::abs(k1 - k0) / h1);
    }
    return worst;
}

int model_dim(const ModelSpec& m) {
    if (const auto* cc = std::get_if<ConstantCurvature>(&m)) return cc->d;
    return 2;
}

double volume_density(const ModelSpec& m, double r) {
    if (r < 0.0) throw invalid_parameter("volume_density: r must be >= 0");
    if (const auto* cc = std::get_if<ConstantCurvature>(&m)) {
        if (r == 0.0) return 0.0;
        return std::pow(std::sinh(cc->a * r) / cc->a, cc->d - 1);
    }
    return std::get<RotSym>(m).warp(r);
}

double log_volume_density(const ModelSpec& m, double r) {
    if (!(r > 0.0)) throw invalid_parameter("log_volume_density: r must be positive");
    if (const auto* cc = std::get_if<ConstantCurvature>(&m))
        return (cc->d - 1) * (log_sinh(cc->a * r) - std::log(cc->a));
    return std::log(std::get<RotSym>(m).warp(r));
}

double radial_drift(const ModelSpec& m, double r) {
    if (!(r > 0.0)) throw numeric_error("radial_drift: singular at r = 0");
    if (const auto* cc = std::get_if<ConstantCurvature>(&m))
        return (cc->d - 1) * cc->a / std::tanh(cc->a * r);
    const auto& rs = std::get<RotSym>(m);
    return rs.warp_deriv(r) / rs.warp(r);
}

double angular_rate(const ModelSpec& m, double r) {
    if (!(r > 0.0)) throw numeric_error("angular_rate: singular at r = 0");
    if (const auto* cc = std::get_if<ConstantCurvature>(&m)) {
        const double x = cc->a * r;
        if (x > 350.0) return 0.0; // 1/sinh^2 underflows
        const double s = std::sinh(x) / cc->a;
        return 1.0 / (s * s);
    }
    const double f = std::get<RotSym>(m).warp(r);
    return 1.0 / (f * f);
}

namespace {

double angle_between(const std::vector<double>& u, const std::vector<double>& v) {
    double diff2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) diff2 += (u[i] - v[i]) * (u[i] - v[i]);
    const double half = 0.5 * std::sqrt(diff2);
    return 2.0 * std::asin(std::min(1.0, half));
}

// One leg of the surface-of-revolution integrals from the turning/lower
// radius up to R, with the endpoint 1/sqrt singularity removed by r = lo + u^2.
// kind 0: angular advance, kind 1: arclength.
double clairaut_leg(const RotSym& m, double c, double lo, double R, int kind) {
    if (R <= lo) return 0.0;
    auto integrand = [&](double u) {
        const double r = lo + u * u;
        const double f = m.warp(std::min(r, m.r_max()));
        const double s2 = (f - c) * (f + c);
        if (s2 <= 0.0) return 0.0; // grazing the turning point
        const double root = std::sqrt(s2);
        const double base = (kind == 0) ? c / (f * root) : f / root;
        return 2.0 * u * base;
    };
    return integrate(integrand, 0.0, std::sqrt(R - lo), 1e-14, 1e-10);
}

} // namespace

double rotsym_distance(const RotSym& m, const PolarPoint& p, const PolarPoint& q) {
    if (p.r > m.r_max() || q.r > m.r_max())
        throw invalid_parameter("rotsym_distance: point outside r_max");
    const double dth = angle_between(p.dir, q.dir);
    const double r_lo = std::min(p.r, q.r);
    const double r_hi = std::max(p.r, q.r);
    if (dth < 1e-14) return r_hi - r_lo;
    if (r_lo < 1e-14) return r_hi;

    const double through_pole = p.r + q.r;
    const double f_lo = m.warp(r_lo);

    // Angular advance as a function of the Clairaut constant; continuous and
    // monotone, split into the r-monotone branch (c < f(r_lo)) and the branch
    // with a turning radius r_min(c) < r_lo.
    auto theta_marginal = [&](double c) { return clairaut_leg(m, c, r_lo, r_hi, 0); };
    const double c_edge = f_lo * (1.0 - 1e-12);
    const double theta_star = theta_marginal(c_edge);

    double c = 0.0;
    bool turning = false;
    if (dth <= theta_star) {
        c = brent_root([&](double cc) { return theta_marginal(cc) - dth; }, 0.0, c_edge,
                       1e-12 * f_lo);
    } else {
        turning = true;
        auto theta_turning = [&](double cc) {
            const double r_min =
                brent_root([&](double r) { return m.warp(r) - cc; }, 0.0, r_lo, 1e-14);
            return clairaut_leg(m, cc, r_min, p.r, 0) + clairaut_leg(m, cc, r_min, q.r, 0) -
                   dth;
        };
        // Bracket: advance -> theta_star - dth < 0 at c_edge, -> pi - dth > 0
        // as c -> 0. Walk the lower end down until the sign flips.
        double lo_c = f_lo * 1e-3;
        int guard = 0;
        while (theta_turning(lo_c) < 0.0) {
            lo_c *= 0.25;
            if (++guard > 40) return through_pole; // numerically a polar path
        }
        c = brent_root(theta_turning, lo_c, c_edge, 1e-12 * f_lo);
    }

    double length;
    if (turning) {
        const double r_min =
            brent_root([&](double r) { return m.warp(r) - c; }, 0.0, r_lo, 1e-14);
        length = clairaut_leg(m, c, r_min, p.r, 1) + clairaut_leg(m, c, r_min, q.r, 1);
    } else {
        length = clairaut_leg(m, c, r_lo, r_hi, 1);
    }
    return std::min(length, through_pole);
}

double polar_distance(const ConstantCurvature& m, const PolarPoint& p, const PolarPoint& q) {
    const double A = m.a * p.r, B = m.a * q.r;
    double g = 0.0; // 1 - cos(angle), from the chord length
    for (std::size_t i = 0; i < p.dir.size(); ++i)
        g += (p.dir[i] - q.dir[i]) * (p.dir[i] - q.dir[i]);
    g *= 0.5;
    if (A + B < 30.0) {
        const double z = std::cosh(A - B) + std::sinh(A) * std::sinh(B) * g;
        return stable_acosh(z) / m.a;
    }
    // log-scale law of cosines for separations where cosh overflows
    const double w = 0.5 * (std::exp(-2.0 * A) + std::exp(-2.0 * B)) +
                     0.25 * g * (1.0 - std::exp(-2.0 * A)) * (1.0 - std::exp(-2.0 * B));
    if (w <= 0.0) return std::abs(p.r - q.r);
    const double logz = A + B + std::log(w);
    if (logz > 30.0) return (logz + std::log(2.0)) / m.a;
    return stable_acosh(std::exp(logz)) / m.a;
}

double polar_distance(const ModelSpec& m, const PolarPoint& p, const PolarPoint& q) {
    if (const auto* cc = std::get_if<ConstantCurvature>(&m)) return polar_distance(*cc, p, q);
    return rotsym_distance(std::get<RotSym>(m), p, q);
}

} // namespace bmlab
