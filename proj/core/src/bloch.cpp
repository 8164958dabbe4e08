#include "qoctl/bloch.hpp"

#include <cmath>

namespace qoctl {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double ProblemParams::on_rate() const {
    return std::sqrt(detuning * detuning + omega_max * omega_max);
}

ProblemParams make_params(double detuning, double omega_max) {
    if (!(detuning > 0.0)) throw DomainError("detuning must be positive");
    if (!(omega_max > 0.0)) throw DomainError("omega_max must be positive");
    return {detuning, omega_max, omega_max / detuning};
}

ProblemParams params_from_ratio(double ratio, double detuning) {
    if (!(ratio > 0.0)) throw DomainError("ratio must be positive");
    return make_params(detuning, ratio * detuning);
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

double Amplitudes::norm() const { return std::sqrt(std::norm(c1) + std::norm(c0)); }

Rotation make_rotation(double nx, double ny, double nz, double angle) {
    const double len = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (!(len > 0.0)) throw DomainError("rotation axis must be nonzero");
    double a = std::fmod(angle, kTwoPi);
    double sign = 1.0;
    if (a < 0.0) {
        a = -a;
        sign = -1.0;
    }
    if (a >= kTwoPi) a = 0.0;  // fmod rounding at the wrap point
    return {sign * nx / len, sign * ny / len, sign * nz / len, a};
}

Rotation canonical(const Rotation& rot) {
    constexpr double kPi = 3.141592653589793238462643383279;
    if (rot.angle <= kPi) return rot;
    return {-rot.nx, -rot.ny, -rot.nz, kTwoPi - rot.angle};
}

Rotation compose(const Rotation& second, const Rotation& first) {
    // Unit quaternions (w, v) with w = cos(angle/2), v = sin(angle/2) * axis.
    const double h1 = 0.5 * first.angle, h2 = 0.5 * second.angle;
    const double w1 = std::cos(h1), s1 = std::sin(h1);
    const double w2 = std::cos(h2), s2 = std::sin(h2);
    const double x1 = s1 * first.nx, y1 = s1 * first.ny, z1 = s1 * first.nz;
    const double x2 = s2 * second.nx, y2 = s2 * second.ny, z2 = s2 * second.nz;

    const double w = w2 * w1 - (x2 * x1 + y2 * y1 + z2 * z1);
    const double x = w2 * x1 + w1 * x2 + (y2 * z1 - z2 * y1);
    const double y = w2 * y1 + w1 * y2 + (z2 * x1 - x2 * z1);
    const double z = w2 * z1 + w1 * z2 + (x2 * y1 - y2 * x1);

    const double s = std::sqrt(x * x + y * y + z * z);
    if (s < 1e-300) return identity_rotation();
    const double angle = 2.0 * std::atan2(s, w);  // in [0, 2*pi]
    if (angle >= kTwoPi || angle <= 0.0) return identity_rotation();
    return {x / s, y / s, z / s, angle};
}

BlochVector apply(const Rotation& rot, const BlochVector& v) {
    const double c = std::cos(rot.angle), s = std::sin(rot.angle);
    const double kx = rot.nx, ky = rot.ny, kz = rot.nz;
    const double dot = kx * v.x + ky * v.y + kz * v.z;
    const double cx = ky * v.z - kz * v.y;
    const double cy = kz * v.x - kx * v.z;
    const double cz = kx * v.y - ky * v.x;
    const double m = (1.0 - c) * dot;
    return {v.x * c + cx * s + kx * m, v.y * c + cy * s + ky * m, v.z * c + cz * s + kz * m};
}

BlochVector amplitudes_to_bloch(const Amplitudes& a) {
    const double n2 = std::norm(a.c1) + std::norm(a.c0);
    if (std::abs(n2 - 1.0) > 1e-9) throw DomainError("amplitudes are not normalized");
    const std::complex<double> cross = a.c1 * std::conj(a.c0);
    return {2.0 * cross.real(), -2.0 * cross.imag(), std::norm(a.c1) - std::norm(a.c0)};
}

void append_segment(std::vector<FieldSegment>& seq, FieldLevel level, double duration,
                    const ProblemParams& params) {
    if (duration < 0.0) throw DomainError("segment duration must be nonnegative");
    if (duration == 0.0) return;
    seq.push_back({level, duration, level == FieldLevel::On ? params.omega_max : 0.0});
}

Rotation segment_rotation(const FieldSegment& seg, const ProblemParams& params) {
    if (!(params.detuning > 0.0) || !(params.omega_max > 0.0))
        throw DomainError("invalid problem parameters");
    if (seg.level == FieldLevel::Off)
        return make_rotation(0.0, 0.0, 1.0, params.detuning * seg.duration);
    const double rate = params.on_rate();
    return make_rotation(params.omega_max / rate, 0.0, params.detuning / rate,
                         seg.duration * rate);
}

Rotation sequence_rotation(const std::vector<FieldSegment>& seq, const ProblemParams& params) {
    Rotation total = identity_rotation();
    for (const FieldSegment& seg : seq) total = compose(segment_rotation(seg, params), total);
    return total;
}

}  // namespace qoctl
