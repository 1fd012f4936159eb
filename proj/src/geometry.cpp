#include "bmlab/geometry.hpp"

#include <cmath>
#include <string>

namespace bmlab {

namespace {

void require_same_space(const HPoint& x, const HPoint& y) {
    if (x.coords.size() != y.coords.size())
        throw invalid_parameter("points live in different ambient dimensions");
    if (x.curvature_a != y.curvature_a)
        throw invalid_parameter("mismatched curvature parameters: a=" +
                                std::to_string(x.curvature_a) + " vs " +
                                std::to_string(y.curvature_a));
}

} // namespace

double minkowski_dot(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 1; i < u.size(); ++i) s += u[i] * v[i];
    return s - u[0] * v[0];
}

HPoint HPoint::origin(int d, double a) {
    HPoint p;
    p.coords.assign(static_cast<std::size_t>(d) + 1, 0.0);
    p.coords[0] = 1.0 / a;
    p.curvature_a = a;
    return p;
}

HPoint HPoint::project(std::vector<double> ambient, double a) {
    const double q = -minkowski_dot(ambient, ambient);
    if (!(q > 0.0) || !(ambient[0] > 0.0))
        throw invalid_parameter("HPoint::project: vector not future timelike");
    const double scale = 1.0 / (a * std::sqrt(q));
    for (double& c : ambient) c *= scale;
    HPoint p;
    p.coords = std::move(ambient);
    p.curvature_a = a;
    return p;
}

void HPoint::check_invariants(double tol) const {
    const double a = curvature_a;
    if (!(a > 0.0)) throw invalid_parameter("HPoint: curvature_a must be positive");
    const double q = minkowski_dot(coords, coords);
    const double target = -1.0 / (a * a);
    if (std::abs(q - target) > tol * std::abs(target))
        throw invalid_parameter("HPoint: off the sheet, <x,x> = " + std::to_string(q));
    if (!(coords[0] > 0.0)) throw invalid_parameter("HPoint: not on the upper sheet");
}

void HTangent::check_invariants(double tol) const {
    base.check_invariants(tol);
    const double t = minkowski_dot(base.coords, vec);
    if (std::abs(t) > tol)
        throw invalid_parameter("HTangent: not tangent, <x,v> = " + std::to_string(t));
    const double n = minkowski_dot(vec, vec);
    if (std::abs(n - 1.0) > tol)
        throw invalid_parameter("HTangent: not unit, <v,v> = " + std::to_string(n));
}

void BoundaryPoint::check_invariants(double tol) const {
    if (direction[0] != 1.0)
        throw invalid_parameter("BoundaryPoint: direction[0] must be exactly 1");
    const double q = minkowski_dot(direction, direction);
    if (std::abs(q) > tol)
        throw invalid_parameter("BoundaryPoint: not null, <xi,xi> = " + std::to_string(q));
}

BoundaryPoint BoundaryPoint::from_ray(const HPoint& x, const HTangent& v) {
    const double a = x.curvature_a;
    std::vector<double> dir(x.coords.size());
    for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = a * x.coords[i] + v.vec[i];
    const double scale = 1.0 / dir[0];
    for (double& c : dir) c *= scale;
    dir[0] = 1.0;
    BoundaryPoint xi;
    xi.direction = std::move(dir);
    return xi;
}

double distance(const HPoint& x, const HPoint& y) {
    require_same_space(x, y);
    const double a = x.curvature_a;
    const double z = -a * a * minkowski_dot(x.coords, y.coords);
    return stable_acosh(z) / a;
}

HPoint exp_map(const HPoint& x, const HTangent& v, double t) {
    const double a = x.curvature_a;
    const double nv = minkowski_dot(v.vec, v.vec);
    if (std::abs(nv - 1.0) > 1e-8)
        throw invalid_parameter("exp_map: direction not unit, <v,v> = " + std::to_string(nv));
    const double ch = std::cosh(a * t);
    const double sh = std::sinh(a * t) / a;
    std::vector<double> out(x.coords.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ch * x.coords[i] + sh * v.vec[i];
    return HPoint::project(std::move(out), a);
}

HTangent log_map(const HPoint& x, const HPoint& y) {
    require_same_space(x, y);
    const double a = x.curvature_a;
    const double t = distance(x, y);
    if (t == 0.0) throw invalid_parameter("log_map: coincident points");
    // y = cosh(at) x + sinh(at)/a v  =>  v = (y - cosh(at) x) a / sinh(at)
    const double ch = std::cosh(a * t);
    const double scale = a / std::sinh(a * t);
    HTangent v;
    v.base = x;
    v.vec.resize(x.coords.size());
    for (std::size_t i = 0; i < v.vec.size(); ++i)
        v.vec[i] = (y.coords[i] - ch * x.coords[i]) * scale;
    return v;
}

HTangent make_unit_tangent(const HPoint& base, std::vector<double> ambient_vec) {
    const double a = base.curvature_a;
    // Project out the component along base: u + a^2 <u,x> x is Minkowski
    // orthogonal to x on the sheet.
    const double comp = minkowski_dot(ambient_vec, base.coords) * a * a;
    for (std::size_t i = 0; i < ambient_vec.size(); ++i)
        ambient_vec[i] += comp * base.coords[i];
    const double n = minkowski_dot(ambient_vec, ambient_vec);
    if (!(n > 0.0))
        throw invalid_parameter("make_unit_tangent: degenerate direction");
    const double scale = 1.0 / std::sqrt(n);
    for (double& c : ambient_vec) c *= scale;
    HTangent v;
    v.base = base;
    v.vec = std::move(ambient_vec);
    return v;
}

double busemann(const HPoint& y, const HPoint& x, const BoundaryPoint& xi) {
    require_same_space(x, y);
    const double a = x.curvature_a;
    const double num = minkowski_dot(y.coords, xi.direction);
    const double den = minkowski_dot(x.coords, xi.direction);
    // Both products are negative (future timelike against future null).
    return std::log(num / den) / a;
}

double gromov_product(const BoundaryPoint& xi, const BoundaryPoint& eta, const HPoint& x) {
    const double a = x.curvature_a;
    const double pe = minkowski_dot(xi.direction, eta.direction); // <= 0, 0 iff xi == eta
    if (pe >= 0.0)
        throw invalid_parameter("gromov_product: coincident boundary points");
    const double px = minkowski_dot(x.coords, xi.direction);
    const double qx = minkowski_dot(x.coords, eta.direction);
    return 0.5 / a * std::log(2.0 * a * a * px * qx / (-pe));
}

double visual_distance(const BoundaryPoint& xi, const BoundaryPoint& eta, const HPoint& x,
                       double tau) {
    const double pe = minkowski_dot(xi.direction, eta.direction);
    if (pe >= 0.0) return 0.0; // limit value at xi == eta
    return std::exp(-tau * gromov_product(xi, eta, x));
}

HPoint halfplane_to_hyperboloid(std::complex<double> z) {
    const double x = z.real(), y = z.imag();
    if (!(y > 0.0))
        throw invalid_parameter("halfplane chart: Im z = " + std::to_string(y) + " <= 0");
    const double q = x * x + y * y;
    HPoint p;
    p.curvature_a = 1.0;
    p.coords = {(q + 1.0) / (2.0 * y), (q - 1.0) / (2.0 * y), x / y};
    return p;
}

std::complex<double> hyperboloid_to_halfplane(const HPoint& p) {
    if (p.dim() != 2 || p.curvature_a != 1.0)
        throw invalid_parameter("halfplane chart: defined for d=2, a=1 only");
    const double denom = p.coords[0] - p.coords[1];
    return {p.coords[2] / denom, 1.0 / denom};
}

BoundaryPoint halfplane_boundary(double u) {
    BoundaryPoint xi;
    const double q = u * u + 1.0;
    xi.direction = {1.0, (u * u - 1.0) / q, 2.0 * u / q};
    return xi;
}

BoundaryPoint halfplane_boundary_infinity() {
    BoundaryPoint xi;
    xi.direction = {1.0, 1.0, 0.0};
    return xi;
}

double halfplane_distance(std::complex<double> z, std::complex<double> w) {
    const double yz = z.imag(), yw = w.imag();
    if (!(yz > 0.0) || !(yw > 0.0))
        throw invalid_parameter("halfplane_distance: points must have Im > 0");
    return stable_acosh(1.0 + std::norm(z - w) / (2.0 * yz * yw));
}

} // namespace bmlab
