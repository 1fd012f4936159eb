#include "bmlab/sampler.hpp"

#include <cmath>
#include <cstring>
#include <thread>

namespace bmlab {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::HalfPlaneExact: return "halfplane";
        case Scheme::PolarEM: return "polar";
        case Scheme::HyperboloidEM: return "hyperboloid";
    }
    return "?";
}

int SimConfig::n_steps() const {
    if (!(T > 0.0) || !(dt > 0.0)) throw invalid_parameter("SimConfig: need T > 0, dt > 0");
    return static_cast<int>(std::ceil(T / dt - 1e-9));
}

double SimConfig::dt_eff() const { return T / n_steps(); }

namespace {

// Records every k-th step plus the final one.
struct Recorder {
    Path& path;
    int decimation;
    int n_steps;
    int state_dim;

    void operator()(int step, double t, const double* state) {
        if (step % decimation == 0 || step == n_steps) {
            path.times.push_back(t);
            path.states.insert(path.states.end(), state, state + state_dim);
        }
    }
};

Path make_path(Scheme scheme, const SimConfig& cfg, std::uint64_t path_id, int dim,
               int state_dim) {
    Path p;
    p.scheme = scheme;
    p.master_seed = cfg.master_seed;
    p.path_id = path_id;
    p.dim = dim;
    p.state_dim = state_dim;
    p.times.reserve(static_cast<std::size_t>(cfg.n_steps() / cfg.decimation) + 2);
    return p;
}

} // namespace

Path simulate_halfplane(const SimConfig& cfg, std::uint64_t path_id) {
    if (cfg.dt > 0.01 + 1e-12)
        throw invalid_parameter("simulate_halfplane: dt must be <= 0.01");
    if (!(cfg.z0.imag() > 0.0))
        throw invalid_parameter("simulate_halfplane: start must have Im z > 0");
    Path p = make_path(Scheme::HalfPlaneExact, cfg, path_id, 2, 2);
    Recorder rec{p, cfg.decimation, cfg.n_steps(), 2};
    step_halfplane(cfg, path_id, rec);
    return p;
}

Path simulate_polar(const ModelSpec& m, const SimConfig& cfg, std::uint64_t path_id) {
    if (cfg.dt > 0.01 + 1e-12) throw invalid_parameter("simulate_polar: dt must be <= 0.01");
    const int d = model_dim(m);
    Path p = make_path(Scheme::PolarEM, cfg, path_id, d, d + 1);
    Recorder rec{p, cfg.decimation, cfg.n_steps(), d + 1};
    p.flagged = !step_polar(m, cfg, path_id, rec);
    return p;
}

Path simulate_hyperboloid(const ConstantCurvature& m, const SimConfig& cfg,
                          std::uint64_t path_id) {
    if (cfg.dt > 0.005 + 1e-12)
        throw invalid_parameter("simulate_hyperboloid: dt must be <= 0.005");
    Path p = make_path(Scheme::HyperboloidEM, cfg, path_id, m.d, m.d + 1);
    Recorder rec{p, cfg.decimation, cfg.n_steps(), m.d + 1};
    step_hyperboloid(m, cfg, path_id, rec);
    return p;
}

namespace {

PolarPoint polar_from_state(std::span<const double> s) {
    PolarPoint p;
    p.r = s[0];
    p.dir.assign(s.begin() + 1, s.end());
    return p;
}

} // namespace

double distance_from_start(const ModelSpec& m, const Path& p, std::size_t index) {
    const auto s0 = p.state(0);
    const auto si = p.state(index);
    switch (p.scheme) {
        case Scheme::HalfPlaneExact:
            return halfplane_distance({s0[0], s0[1]}, {si[0], si[1]});
        case Scheme::PolarEM:
            return polar_distance(m, polar_from_state(s0), polar_from_state(si));
        case Scheme::HyperboloidEM: {
            const double a = std::get<ConstantCurvature>(m).a;
            const double z = -a * a * minkowski_dot(s0, si);
            return stable_acosh(z) / a;
        }
    }
    throw invalid_parameter("distance_from_start: unknown scheme");
}

BoundaryEstimate boundary_limit(const ModelSpec& m, const Path& p) {
    BoundaryEstimate est;
    est.T = p.times.back();
    est.r_T = distance_from_start(m, p, p.times.size() - 1);

    double ell_ref;
    if (const auto* cc = std::get_if<ConstantCurvature>(&m)) {
        ell_ref = (cc->d - 1) * cc->a;
    } else {
        ell_ref = std::get<RotSym>(m).pinch_a(); // drift lower bound for d = 2
    }
    est.low_confidence = est.r_T < 0.8 * ell_ref * est.T || p.flagged;

    const auto fin = p.final_state();
    switch (p.scheme) {
        case Scheme::HalfPlaneExact:
            est.coordinate = fin[0]; // X_T; Y_T -> 0 along a.e. path
            est.point = halfplane_boundary(fin[0]);
            break;
        case Scheme::PolarEM: {
            if (p.dim == 2) est.coordinate = std::atan2(fin[2], fin[1]);
            if (const auto* cc = std::get_if<ConstantCurvature>(&m)) {
                BoundaryPoint xi;
                xi.direction.assign(fin.begin(), fin.end());
                xi.direction[0] = 1.0; // xi = a o + (0, dir), already normalized
                est.point = std::move(xi);
                (void)cc;
            }
            break;
        }
        case Scheme::HyperboloidEM: {
            const auto& cc = std::get<ConstantCurvature>(m);
            HPoint start{std::vector<double>(p.state(0).begin(), p.state(0).end()), cc.a};
            HPoint end{std::vector<double>(fin.begin(), fin.end()), cc.a};
            const HTangent v = log_map(start, end);
            est.point = BoundaryPoint::from_ray(start, v);
            if (p.dim == 2) est.coordinate = std::atan2(v.vec[2], v.vec[1]);
            break;
        }
    }
    return est;
}

void parallel_for_paths(std::uint64_t n, int workers,
                        const std::function<void(std::uint64_t)>& fn) {
    if (workers <= 1 || n < 2) {
        for (std::uint64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::uint64_t w = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(w);
    pool.reserve(w);
    for (std::uint64_t k = 0; k < w; ++k) {
        pool.emplace_back([&, k] {
            const std::uint64_t lo = n * k / w;
            const std::uint64_t hi = n * (k + 1) / w;
            try {
                for (std::uint64_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void dump_paths(std::ostream& out, std::span<const Path> paths, std::uint64_t config_hash) {
    const char magic[4] = {'B', 'M', 'L', 'B'};
    out.write(magic, 4);
    const std::uint32_t version = 1;
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&config_hash), sizeof config_hash);
    const std::uint64_t count = paths.size();
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    for (const Path& p : paths) {
        out.write(reinterpret_cast<const char*>(&p.path_id), sizeof p.path_id);
        const std::uint32_t sd = static_cast<std::uint32_t>(p.state_dim);
        const std::uint32_t flag = p.flagged ? 1 : 0;
        const std::uint64_t n = p.times.size();
        out.write(reinterpret_cast<const char*>(&sd), sizeof sd);
        out.write(reinterpret_cast<const char*>(&flag), sizeof flag);
        out.write(reinterpret_cast<const char*>(&n), sizeof n);
        for (std::size_t i = 0; i < p.times.size(); ++i) {
            out.write(reinterpret_cast<const char*>(&p.times[i]), sizeof(double));
            const auto s = p.state(i);
            out.write(reinterpret_cast<const char*>(s.data()),
                      static_cast<std::streamsize>(s.size() * sizeof(double)));
        }
    }
}

} // namespace bmlab
