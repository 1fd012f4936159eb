#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmlab {

// Thrown when an iterative numeric routine fails to converge. Carries enough
// context to identify the failing computation from a log line.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

struct invalid_parameter : std::invalid_argument {
    explicit invalid_parameter(const std::string& what) : std::invalid_argument(what) {}
};

// Deterministic pairwise reduction; result is independent of how callers
// shard the input, as long as element order is preserved.
double pairwise_sum(std::span<const double> xs);

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;       // unbiased sample variance (n-1 denominator)
    double std_error = 0.0; // of the mean
    std::size_t n = 0;
};

MeanVar mean_var(std::span<const double> xs);

// acosh with stable handling of arguments near 1 (log1p form) and a clamp
// for arguments that round just below 1.
double stable_acosh(double z);

// Standard normal CDF, evaluated through erfc. Absolute error is that of the
// libm erfc, well below 1e-15 -- tighter than the 1e-7 the estimators need.
double normal_cdf(double x);

// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b]. Subdivides
// until the accumulated error estimate drops below
// max(abs_tol, rel_tol * |integral|). Throws numeric_error when the interval
// budget is exhausted first.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-11,
                 int max_intervals = 4000);

// Brent root bracket solve on [a, b]; requires f(a), f(b) of opposite sign.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-13, int max_iter = 200);

// Natural cubic spline through (x_i, y_i), x strictly increasing.
// Natural boundary (y'' = 0 at both ends).
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    std::size_t size() const { return x_.size(); }

  private:
    std::size_t interval(double x) const;
    std::vector<double> x_, y_, m_; // m_ = second derivatives at nodes
};

// Least-squares slope/intercept of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

} // namespace bmlab
