#pragma once

#include <complex>
#include <vector>

#include "qoctl/params.hpp"

namespace qoctl {

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    double norm() const;
};

inline BlochVector north_pole() { return {0.0, 0.0, 1.0}; }

/// Probability amplitudes of a pure qubit state, c1 for the up state.
struct Amplitudes {
    std::complex<double> c1;
    std::complex<double> c0;

    double norm() const;
};

/// Axis-angle element of the rotation group acting on Bloch vectors.
/// Invariants: (nx, ny, nz) is unit length, angle lies in [0, 2*pi).
struct Rotation {
    double nx = 0.0;
    double ny = 0.0;
    double nz = 1.0;
    double angle = 0.0;
};

/// Normalizes the axis and wraps the angle into [0, 2*pi), flipping the axis
/// for negative angles. Throws DomainError on a zero axis.
Rotation make_rotation(double nx, double ny, double nz, double angle);

inline Rotation identity_rotation() { return {}; }

/// Shortest equivalent representation, angle in [0, pi].
Rotation canonical(const Rotation& rot);

/// The single rotation equal to applying `first` and then `second`.
/// Composition goes through the quaternion product.
Rotation compose(const Rotation& second, const Rotation& first);

/// Rodrigues rotation of a unit vector.
BlochVector apply(const Rotation& rot, const BlochVector& v);

/// Bloch map (x, y, z) = (2 Re(c1 c0*), -2 Im(c1 c0*), |c1|^2 - |c0|^2).
/// Rejects input whose norm deviates from 1 by more than 1e-9.
BlochVector amplitudes_to_bloch(const Amplitudes& a);

enum class FieldLevel { Off, On };

/// One constant-amplitude piece of the control: Omega = 0 for Off,
/// Omega = omega_max for On, over a positive physical duration.
struct FieldSegment {
    FieldLevel level = FieldLevel::Off;
    double duration = 0.0;   // physical time
    double amplitude = 0.0;  // 0 or omega_max
};

/// Appends a segment, dropping zero-duration ones (limits s -> 0 arise at
/// regime boundaries). Negative durations are rejected.
void append_segment(std::vector<FieldSegment>& seq, FieldLevel level, double duration,
                    const ProblemParams& params);

/// Rotation generated by one segment: angle duration*sqrt(Delta^2 + Omega^2)
/// about (Omega, 0, Delta)/sqrt(Omega^2 + Delta^2); for Off segments a
/// z-rotation by Delta*duration.
Rotation segment_rotation(const FieldSegment& seg, const ProblemParams& params);

/// Composition of all segment rotations in playback order.
Rotation sequence_rotation(const std::vector<FieldSegment>& seq, const ProblemParams& params);

}  // namespace qoctl
