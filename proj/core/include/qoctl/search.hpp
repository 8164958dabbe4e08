#pragma once

#include <vector>

#include "qoctl/synthesis.hpp"

namespace qoctl {

struct SearchResult {
    double best_duration = 0.0;               // Delta * t_f
    std::vector<FieldSegment> best_schedule;  // physical durations, Delta = 1
    double residual = 0.0;                    // |z| at the endpoint
    long long evaluations = 0;
};

/// Brute-force minimum-duration search over bang-bang schedules
/// On(d0) [Off(e1) On(d1)] [Off(e2) On(d2)] with every duration free
/// (2*n_off + 1 parameters), subject to terminal |z| <= 1e-6. Coarse grid
/// scan (default 40 points per dimension for n_off <= 1, 16 for n_off = 2)
/// followed by deterministic Nelder-Mead refinement of the best seeds.
/// The Off durations are left free on purpose: the pi/Delta Off length must
/// come out of the optimization, not be assumed.
SearchResult brute_force(double r, int n_off, int coarse_grid = 0, int refine_iters = 800);

/// The intuitive baseline: every On pulse after the first is a pi pulse in
/// modified time, Off pulses are pi/Delta, and the first-On duration is set
/// by the requirement to land on the equator. Valid for 0 < r < 1 (a single
/// On pulse serves r >= 1). The report's regime field carries the interval
/// classification of r.
SynthesisReport suboptimal_sequence(double r, double detuning = 1.0);

/// Percentage excess duration of the intuitive baseline over the optimum,
/// 100 (T_sub - T_opt) / T_opt. Rounding-level negatives are clamped to 0.
double deviation(double r);

}  // namespace qoctl
