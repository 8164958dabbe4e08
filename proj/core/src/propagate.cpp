#include "qoctl/propagate.hpp"

#include <cmath>

#include "qoctl/errors.hpp"

namespace qoctl {

namespace {

Rotation elapsed_rotation(const FieldSegment& seg, double elapsed, const ProblemParams& p) {
    FieldSegment part = seg;
    part.duration = elapsed;
    return segment_rotation(part, p);
}

BlochVector derivative(const BlochVector& v, double omega, double delta) {
    // B x v with B = (omega, 0, delta)
    return {-delta * v.y, delta * v.x - omega * v.z, omega * v.y};
}

BlochVector axpy(const BlochVector& v, double h, const BlochVector& d) {
    return {v.x + h * d.x, v.y + h * d.y, v.z + h * d.z};
}

BlochVector rk4_step(const BlochVector& v, double h, double omega, double delta) {
    const BlochVector k1 = derivative(v, omega, delta);
    const BlochVector k2 = derivative(axpy(v, 0.5 * h, k1), omega, delta);
    const BlochVector k3 = derivative(axpy(v, 0.5 * h, k2), omega, delta);
    const BlochVector k4 = derivative(axpy(v, h, k3), omega, delta);
    return {v.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            v.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
            v.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
}

}  // namespace

BlochVector state_at(const std::vector<FieldSegment>& seq, const ProblemParams& params,
                     double t) {
    BlochVector v = north_pole();
    double consumed = 0.0;
    for (const FieldSegment& seg : seq) {
        if (t <= consumed + seg.duration) {
            return apply(elapsed_rotation(seg, t - consumed, params), v);
        }
        v = apply(segment_rotation(seg, params), v);
        consumed += seg.duration;
    }
    return v;
}

Trajectory propagate_exact(const std::vector<FieldSegment>& seq, const ProblemParams& params,
                           int samples_per_segment) {
    if (seq.empty()) throw DomainError("propagate_exact: empty sequence");
    if (samples_per_segment < 1) throw DomainError("propagate_exact: need >= 1 sample");

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(north_pole());

    BlochVector entry = north_pole();
    double t0 = 0.0;
    for (const FieldSegment& seg : seq) {
        for (int i = 1; i <= samples_per_segment; ++i) {
            const double elapsed = seg.duration * i / samples_per_segment;
            traj.times.push_back(t0 + elapsed);
            traj.states.push_back(apply(elapsed_rotation(seg, elapsed, params), entry));
        }
        traj.segment_boundaries.push_back(traj.states.size() - 1);
        entry = traj.states.back();
        t0 += seg.duration;
    }
    return traj;
}

Trajectory propagate_ode(const std::vector<FieldSegment>& seq, const ProblemParams& params,
                         double dt, OdeMethod method) {
    if (seq.empty()) throw DomainError("propagate_ode: empty sequence");
    if (!(dt > 0.0)) throw DomainError("propagate_ode: dt must be positive");
    for (const FieldSegment& seg : seq)
        if (dt > seg.duration)
            throw DomainError("propagate_ode: dt exceeds the shortest segment");
    (void)method;  // RK4 is the only member

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(north_pole());

    BlochVector v = north_pole();
    double t0 = 0.0;
    for (const FieldSegment& seg : seq) {
        const double omega = seg.level == FieldLevel::On ? params.omega_max : 0.0;
        long full = static_cast<long>(std::floor(seg.duration / dt));
        double rem = seg.duration - full * dt;
        if (rem < 1e-12 * dt) {  // boundary coincides with a full step
            rem = 0.0;
        }
        for (long i = 1; i <= full; ++i) {
            v = rk4_step(v, dt, omega, params.detuning);
            traj.times.push_back(t0 + i * dt);
            traj.states.push_back(v);
        }
        if (rem > 0.0) {
            v = rk4_step(v, rem, omega, params.detuning);
            traj.times.push_back(t0 + seg.duration);
            traj.states.push_back(v);
        } else if (full > 0) {
            traj.times.back() = t0 + seg.duration;
        }
        traj.segment_boundaries.push_back(traj.states.size() - 1);
        t0 += seg.duration;
    }
    return traj;
}

double terminal_residual(const std::vector<FieldSegment>& seq, const ProblemParams& params) {
    if (seq.empty()) throw DomainError("terminal_residual: empty sequence");
    return std::abs(apply(sequence_rotation(seq, params), north_pole()).z);
}

}  // namespace qoctl
