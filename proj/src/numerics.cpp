#include "bmlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace bmlab {

double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n <= 16) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

MeanVar mean_var(std::span<const double> xs) {
    MeanVar out;
    out.n = xs.size();
    if (out.n == 0) return out;
    out.mean = pairwise_sum(xs) / static_cast<double>(out.n);
    if (out.n < 2) return out;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - out.mean;
        sq[i] = d * d;
    }
    out.var = pairwise_sum(sq) / static_cast<double>(out.n - 1);
    out.std_error = std::sqrt(out.var / static_cast<double>(out.n));
    return out;
}

double stable_acosh(double z) {
    if (z < 1.0) {
        // Tolerate rounding just below the branch point.
        if (z > 1.0 - 1e-9) return 0.0;
        throw numeric_error("stable_acosh: argument " + std::to_string(z) + " < 1");
    }
    const double e = z - 1.0;
    if (e < 1e-4) return std::log1p(e + std::sqrt(e * (2.0 + e)));
    if (z > 1e8) return std::log(2.0) + std::log(z); // acosh(z) = log(2z) - O(1/z^2)
    return std::acosh(z);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1,1]; the embedded 7-point Gauss
// rule uses the even-indexed nodes.
constexpr double kron_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kron_w[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double gauss_w[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Interval {
    double a, b, integral, error;
};

Interval kronrod(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kron_x[i]);
        fv[14 - i] = f(c + h * kron_x[i]);
    }
    fv[7] = f(c);
    double k = kron_w[7] * fv[7];
    double g = gauss_w[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        k += kron_w[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) g += gauss_w[i / 2] * (fv[i] + fv[14 - i]);
    }
    Interval out;
    out.a = a;
    out.b = b;
    out.integral = k * h;
    // |K15 - G7| is a conservative bound for the K15 error; floor at roundoff.
    const double diff = std::abs(k - g) * std::abs(h);
    out.error = std::max(diff, std::abs(out.integral) * 1e-16);
    return out;
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol, int max_intervals) {
    if (a == b) return 0.0;
    std::vector<Interval> segs;
    segs.push_back(kronrod(f, a, b));
    while (static_cast<int>(segs.size()) < max_intervals) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].integral;
            err += segs[i].error;
            if (segs[i].error > segs[worst].error) worst = i;
        }
        if (err <= std::max(abs_tol, rel_tol * std::abs(total))) return total;
        const Interval w = segs[worst];
        const double mid = 0.5 * (w.a + w.b);
        if (mid <= w.a || mid >= w.b) {
            // Interval exhausted at double resolution; accept its estimate.
            segs[worst].error = 0.0;
            continue;
        }
        segs[worst] = kronrod(f, w.a, mid);
        segs.push_back(kronrod(f, mid, w.b));
    }
    throw numeric_error("integrate: interval budget exhausted on [" + std::to_string(a) +
                        ", " + std::to_string(b) + "]");
}

double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol, int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw numeric_error("brent_root: no sign change on bracket [" + std::to_string(a) +
                            ", " + std::to_string(b) + "]");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    throw numeric_error("brent_root: no convergence after " + std::to_string(max_iter) +
                        " iterations");
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n)
        throw invalid_parameter("CubicSpline: need >= 3 matching nodes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw invalid_parameter("CubicSpline: abscissae must be strictly increasing");

    // Thomas solve for natural-boundary second derivatives.
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 2.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double lower = h0 / (h0 + h1);
        upper[i] = h1 / (h0 + h1);
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0) / (h0 + h1);
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

std::size_t CubicSpline::interval(double x) const {
    if (x < x_.front() || x > x_.back())
        throw invalid_parameter("CubicSpline: query " + std::to_string(x) + " outside [" +
                                std::to_string(x_.front()) + ", " + std::to_string(x_.back()) +
                                "]");
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double CubicSpline::operator()(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h;
    const double B = (x - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] +
           ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h;
    const double B = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * B * B - 1.0) * m_[i + 1] - (3.0 * A * A - 1.0) * m_[i]) * h / 6.0;
}

double CubicSpline::deriv2(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h;
    const double B = (x - x_[i]) / h;
    return A * m_[i] + B * m_[i + 1];
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw invalid_parameter("fit_line: need >= 2 matching points");
    const double n = static_cast<double>(x.size());
    const double mx = pairwise_sum(x) / n;
    const double my = pairwise_sum(y) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

} // namespace bmlab
