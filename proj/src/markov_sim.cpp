#include "netinfer/markov_sim.hpp"

#include <stdexcept>

#include "netinfer/errors.hpp"
#include "netinfer/rng.hpp"

namespace netinfer {

OccupancyTrace simulate_chains(const TransitionMatrix& p, int k, long T, std::uint64_t seed,
                               const SimulateOptions& opts) {
    if (k < 1) throw ConfigError("simulate_chains: k must be >= 1");
    if (T < 2) throw ConfigError("simulate_chains: T must be >= 2");
    const int n = p.dim();

    std::vector<double> start =
        opts.start_distribution ? *opts.start_distribution : stationary_distribution(p);
    if (static_cast<int>(start.size()) != n)
        throw DimensionMismatch("start distribution length != n");

    std::vector<double> start_cdf(n);
    double acc = 0.0;
    for (int v = 0; v < n; ++v) {
        if (start[v] < 0.0) throw ConfigError("start distribution must be nonnegative");
        acc += start[v];
        start_cdf[v] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-9) throw ConfigError("start distribution must sum to 1");
    for (double& c : start_cdf) c /= acc;

    // Per-row transition CDFs.
    Mat row_cdf(n, n);
    for (int u = 0; u < n; ++u) {
        double s = 0.0;
        for (int v = 0; v < n; ++v) {
            s += p(u, v);
            row_cdf(u, v) = s;
        }
        row_cdf(u, n - 1) = 1.0;
    }

    OccupancyTrace trace;
    trace.k = k;
    trace.n = n;
    trace.T = T;
    trace.counts.assign(static_cast<std::size_t>(T) * n, 0);
    if (opts.keep_trajectories)
        trace.trajectories.emplace(static_cast<std::size_t>(k) * T, 0);

    for (int i = 0; i < k; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));  // one substream per chain
        int state = static_cast<int>(rng.categorical_cdf(start_cdf));
        for (long t = 0; t < T; ++t) {
            if (t > 0) state = static_cast<int>(rng.categorical_cdf(row_cdf.row(state)));
            ++trace.counts[static_cast<std::size_t>(t) * n + state];
            if (trace.trajectories)
                (*trace.trajectories)[static_cast<std::size_t>(i) * T + t] = state;
        }
    }
    return trace;
}

std::pair<TimeSeries, long> to_time_series(const OccupancyTrace& trace) {
    TimeSeries ts(trace.n, trace.T);
    long collisions = 0;
    for (long t = 0; t < trace.T; ++t) {
        auto step = trace.step(t);
        for (int v = 0; v < trace.n; ++v) {
            if (step[v] >= 1) ts.set(v, t, 1);
            if (step[v] >= 2) ++collisions;
        }
    }
    return {std::move(ts), collisions};
}

}  // namespace netinfer
