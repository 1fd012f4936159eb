#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "bmlab/geometry.hpp"
#include "bmlab/heat_kernel.hpp"
#include "bmlab/models.hpp"
#include "bmlab/rng.hpp"

namespace bmlab {

enum class Scheme { HalfPlaneExact, PolarEM, HyperboloidEM };

const char* scheme_name(Scheme s);

// Everything that determines a path set bit-for-bit, together with the
// master seed: the step budget is n_steps = ceil(T/dt) with the effective
// step T/n_steps, so T is always hit exactly.
struct SimConfig {
    double T = 10.0;
    double dt = 0.01;
    std::uint64_t master_seed = 1;
    int decimation = 10;     // store every k-th step (final always stored)
    double r_start = 0.1;    // polar schemes: start radius off the pole
    double r_floor = 1e-3;   // polar schemes: reflecting barrier
    std::complex<double> z0 = {0.0, 1.0}; // half-plane start

    int n_steps() const;
    double dt_eff() const;
};

// A decimated trajectory. State layout per scheme:
//   HalfPlaneExact: (x, y)            [state_dim = 2]
//   PolarEM:        (r, dir[0..d-1])  [state_dim = d + 1]
//   HyperboloidEM:  ambient[0..d]     [state_dim = d + 1]
struct Path {
    Scheme scheme = Scheme::PolarEM;
    std::uint64_t master_seed = 0;
    std::uint64_t path_id = 0;
    int dim = 2;
    int state_dim = 2;
    std::vector<double> times;
    std::vector<double> states; // times.size() x state_dim, row-major
    bool flagged = false;       // aborted (RotSym r_max exit)

    std::span<const double> state(std::size_t i) const {
        return {states.data() + i * static_cast<std::size_t>(state_dim),
                static_cast<std::size_t>(state_dim)};
    }
    std::span<const double> final_state() const { return state(times.size() - 1); }
};

// --- streaming steppers ------------------------------------------------
//
// obs(step, t, state) fires once with step = 0 at t = 0 and once after every
// update; `state` is a pointer to the live state in the scheme's layout.
// Streaming callers (histograms, online functionals) use these directly; the
// simulate_* wrappers below record decimated Path objects.

namespace detail {

inline void reflect_floor(double& r, double floor) {
    if (r < floor) r = 2.0 * floor - r;
}

} // namespace detail

// d = 2, a = 1. Y is exact in law (geometric Brownian motion with drift);
// X uses the geometric-midpoint rate over each step.
template <class Obs>
void step_halfplane(const SimConfig& cfg, std::uint64_t path_id, Obs&& obs) {
    const int n = cfg.n_steps();
    const double dt = cfg.dt_eff();
    const double sdt = std::sqrt(dt);
    const PathRng rng(cfg.master_seed, path_id);
    double state[2] = {cfg.z0.real(), cfg.z0.imag()};
    double logy = std::log(cfg.z0.imag());
    obs(0, 0.0, state);
    for (int i = 1; i <= n; ++i) {
        const auto [n1, n2] = rng.normal_pair(static_cast<std::uint64_t>(i - 1));
        const double logy_next = logy + std::sqrt(2.0) * sdt * n1 - dt;
        const double y_mid = std::exp(0.5 * (logy + logy_next));
        state[0] += std::sqrt(2.0) * y_mid * sdt * n2;
        logy = logy_next;
        state[1] = std::exp(logy);
        obs(i, i * dt, state);
    }
}

// Polar Euler-Maruyama under the generator convention: radial diffusion
// coefficient sqrt(2), full radial drift (d-1) a coth(ar) (or f'/f), and a
// spherical increment of variance 2 dt / s(r)^2 for the direction.
// Returns false if the path was aborted at r_max (RotSym).
template <class Obs>
bool step_polar(const ModelSpec& m, const SimConfig& cfg, std::uint64_t path_id, Obs&& obs) {
    const int d = model_dim(m);
    const int n = cfg.n_steps();
    const double dt = cfg.dt_eff();
    const double sdt = std::sqrt(dt);
    const PathRng rng(cfg.master_seed, path_id);
    const std::uint64_t pairs_per_step = static_cast<std::uint64_t>(1 + (d + 1) / 2);
    const double r_cap =
        std::holds_alternative<RotSym>(m) ? std::get<RotSym>(m).r_max() : 0.0;

    std::vector<double> state(static_cast<std::size_t>(d) + 1, 0.0);
    state[0] = cfg.r_start;
    state[1] = 1.0; // initial direction: first coordinate axis
    obs(0, 0.0, state.data());

    std::vector<double> g(d);
    for (int i = 1; i <= n; ++i) {
        const std::uint64_t c0 = static_cast<std::uint64_t>(i - 1) * pairs_per_step;
        const double r = state[0];
        const double rate = angular_rate(m, r);

        const auto [n1, n2] = rng.normal_pair(c0);
        double r_next = r + radial_drift(m, r) * dt + std::sqrt(2.0 * dt) * n1;
        detail::reflect_floor(r_next, cfg.r_floor);
        if (r_cap > 0.0 && r_next > r_cap) {
            state[0] = r_next;
            obs(i, i * dt, state.data());
            return false; // aborted: clamping would bias the law
        }

        if (d == 2) {
            const double dth = std::sqrt(2.0 * rate) * sdt * n2;
            const double c = std::cos(dth), s = std::sin(dth);
            const double d0 = state[1], d1 = state[2];
            state[1] = c * d0 - s * d1;
            state[2] = s * d0 + c * d1;
        } else {
            g[0] = n2;
            for (int j = 1; j < d; j += 2) {
                const auto [a1, a2] = rng.normal_pair(c0 + 1 + static_cast<std::uint64_t>(j / 2));
                g[j] = a1;
                if (j + 1 < d) g[j + 1] = a2;
            }
            double dot = 0.0;
            for (int j = 0; j < d; ++j) dot += g[j] * state[1 + j];
            const double step_len = std::sqrt(2.0 * rate) * sdt;
            double norm2 = 0.0;
            for (int j = 0; j < d; ++j) {
                state[1 + j] += step_len * (g[j] - dot * state[1 + j]);
                norm2 += state[1 + j] * state[1 + j];
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (int j = 0; j < d; ++j) state[1 + j] *= inv;
        }
        state[0] = r_next;
        obs(i, i * dt, state.data());
    }
    return true;
}

// Ambient Euler scheme on the hyperboloid sheet: tangent Gaussian step
// (transported from the basepoint frame by a point reflection pair), the
// d a^2 x dt curvature correction, then exact reprojection. Reprojection
// makes the sheet constraint exact; the scheme keeps O(dt) weak error.
template <class Obs>
void step_hyperboloid(const ConstantCurvature& m, const SimConfig& cfg, std::uint64_t path_id,
                      Obs&& obs) {
    const int d = m.d;
    const double a = m.a;
    const int n = cfg.n_steps();
    const double dt = cfg.dt_eff();
    const PathRng rng(cfg.master_seed, path_id);
    const std::uint64_t pairs_per_step = static_cast<std::uint64_t>((d + 1) / 2);

    std::vector<double> x(static_cast<std::size_t>(d) + 1, 0.0);
    x[0] = 1.0 / a;
    obs(0, 0.0, x.data());

    std::vector<double> w(static_cast<std::size_t>(d) + 1), mid(x.size());
    for (int i = 1; i <= n; ++i) {
        const std::uint64_t c0 = static_cast<std::uint64_t>(i - 1) * pairs_per_step;
        w[0] = 0.0;
        for (int j = 0; j < d; j += 2) {
            const auto [a1, a2] = rng.normal_pair(c0 + static_cast<std::uint64_t>(j / 2));
            w[1 + j] = a1;
            if (j + 1 < d) w[1 + j + 1] = a2;
        }
        // Transport w from the basepoint tangent space to x: reflect through
        // the normalized midpoint of (basepoint, x).
        mid[0] = 1.0 + a * x[0];
        for (int j = 1; j <= d; ++j) mid[j] = a * x[j];
        const double mnorm = std::sqrt(2.0 + 2.0 * a * x[0]); // sqrt(-<mid,mid>)
        for (double& c : mid) c /= mnorm;
        const double wm = minkowski_dot(w, mid);
        const double step_len = std::sqrt(2.0 * dt);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double tangent = w[j] + 2.0 * wm * mid[j];
            x[j] += step_len * tangent + d * a * a * x[j] * dt;
        }
        const double q = -minkowski_dot(x, x);
        const double scale = 1.0 / (a * std::sqrt(q));
        for (double& c : x) c *= scale;
        obs(i, i * dt, x.data());
    }
}

// --- recorded paths -----------------------------------------------------

Path simulate_halfplane(const SimConfig& cfg, std::uint64_t path_id);
Path simulate_polar(const ModelSpec& m, const SimConfig& cfg, std::uint64_t path_id);
Path simulate_hyperboloid(const ConstantCurvature& m, const SimConfig& cfg,
                          std::uint64_t path_id);

// d(path start, state i) in the path's model.
double distance_from_start(const ModelSpec& m, const Path& p, std::size_t index);

// Boundary datum of a long path. `coordinate` is X_T for the half-plane
// scheme and the fiber angle for d = 2 polar schemes; `point` is the
// hyperboloid representation when the model provides one.
struct BoundaryEstimate {
    std::optional<BoundaryPoint> point;
    double coordinate = 0.0;
    double T = 0.0;
    double r_T = 0.0;
    bool low_confidence = false; // r_T < 0.8 ell T
};

BoundaryEstimate boundary_limit(const ModelSpec& m, const Path& p);

// Deterministic static partition of [0, n) over `workers` threads;
// fn(path_id) must write only to its own slot.
void parallel_for_paths(std::uint64_t n, int workers,
                        const std::function<void(std::uint64_t)>& fn);

// Binary path dump: header (magic, version, config hash, state_dim), then
// per path: id, flag, count, and (t, state...) records. Off by default in
// the CLI; layout documented in the README.
void dump_paths(std::ostream& out, std::span<const Path> paths, std::uint64_t config_hash);

} // namespace bmlab
