#pragma once

#include <cstddef>
#include <vector>

#include "qoctl/bloch.hpp"
#include "qoctl/params.hpp"

namespace qoctl {

/// Sampled Bloch trajectory. Sample i belongs to segment k when
/// i <= segment_boundaries[k] (first k for which that holds); the boundary
/// entries are the indices of each segment's final sample.
struct Trajectory {
    std::vector<double> times;
    std::vector<BlochVector> states;
    std::vector<std::size_t> segment_boundaries;

    double total_time() const { return times.empty() ? 0.0 : times.back(); }
};

/// Exact state at time t: the per-segment rotation for the elapsed
/// sub-duration applied to the segment's entry state.
BlochVector state_at(const std::vector<FieldSegment>& seq, const ProblemParams& params, double t);

/// Exact propagation from the north pole, samples_per_segment uniform samples
/// inside every segment (plus the initial point).
Trajectory propagate_exact(const std::vector<FieldSegment>& seq, const ProblemParams& params,
                           int samples_per_segment = 256);

enum class OdeMethod { RK4 };

/// Fixed-step RK4 on the linear Bloch equation with piecewise-constant field.
/// Steps never straddle a segment boundary; the last step of each segment is
/// shortened to land exactly on it. Rejects dt <= 0 or dt longer than the
/// shortest segment.
Trajectory propagate_ode(const std::vector<FieldSegment>& seq, const ProblemParams& params,
                         double dt, OdeMethod method = OdeMethod::RK4);

/// |z| of the exact endpoint.
double terminal_residual(const std::vector<FieldSegment>& seq, const ProblemParams& params);

}  // namespace qoctl
