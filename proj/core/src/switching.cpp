#include "qoctl/switching.hpp"

#include <cmath>
#include <limits>

#include "qoctl/errors.hpp"

namespace qoctl {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

BlochVector cross(const BlochVector& a, const BlochVector& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

Rotation inverse(const Rotation& rot) {
    return make_rotation(rot.nx, rot.ny, rot.nz, -rot.angle);
}

// Per-segment geometry shared by the backward integration and the verifier.
struct SegmentFrame {
    Rotation full;    // rotation of the whole segment
    double rate;      // modified-time rate: Delta*sqrt(r^2+1) on On, Delta on Off
    double start;     // physical start time
    double duration;  // physical duration
    bool on;
};

std::vector<SegmentFrame> frames(const SynthesisReport& report) {
    std::vector<SegmentFrame> out;
    out.reserve(report.sequence.size());
    double t = 0.0;
    for (const FieldSegment& seg : report.sequence) {
        const bool on = seg.level == FieldLevel::On;
        out.push_back({segment_rotation(seg, report.params),
                       on ? report.params.on_rate() : report.params.detuning, t, seg.duration,
                       on});
        t += seg.duration;
    }
    return out;
}

Rotation partial_rotation(const SegmentFrame& f, double elapsed, const ProblemParams& p) {
    if (!f.on) return make_rotation(0.0, 0.0, 1.0, p.detuning * elapsed);
    const double rate = p.on_rate();
    return make_rotation(p.omega_max / rate, 0.0, p.detuning / rate, elapsed * rate);
}

// Boundary values of state (forward) and costate (backward from
// transversality); index k is the joint at the start of segment k.
struct BoundaryData {
    std::vector<BlochVector> state;    // size K+1
    std::vector<BlochVector> costate;  // Delta-scaled lambda, size K+1
    double multiplier;
};

BoundaryData boundary_data(const SynthesisReport& report, const std::vector<SegmentFrame>& fr) {
    const std::size_t K = fr.size();
    BoundaryData bd;
    bd.state.resize(K + 1);
    bd.costate.resize(K + 1);
    bd.state[0] = north_pole();
    for (std::size_t k = 0; k < K; ++k) bd.state[k + 1] = apply(fr[k].full, bd.state[k]);

    const double yf = bd.state[K].y;
    if (std::abs(yf) < 1e-12)
        throw DomainError("costate transversality is singular: final state has y = 0, "
                          "H_c(t_f) cannot be zeroed");
    bd.multiplier = -1.0 / (yf * report.params.ratio);
    bd.costate[K] = {0.0, 0.0, bd.multiplier};
    for (std::size_t k = K; k-- > 0;)
        bd.costate[k] = apply(inverse(fr[k].full), bd.costate[k + 1]);
    return bd;
}

}  // namespace

double phi_x_first_on(double t_mod, double s_mod, double r) {
    return ((std::sin(t_mod) / std::sin(s_mod)) * (std::cos(s_mod) + r * r) - std::cos(t_mod) -
            r * r) /
           (r * (r * r + 1.0));
}

double phi_x_off(double t_scaled, double s_mod, double r) {
    return (r * r / std::tan(s_mod) + 1.0 / std::sin(s_mod)) / (r * std::sqrt(r * r + 1.0)) *
           std::sin(t_scaled);
}

double phi_x_on(double t_mod, double s_mod, double r) {
    const double theta =
        std::atan2(r * r * std::sin(s_mod), 1.0 + r * r * std::cos(s_mod));
    return -(r / (r * r + 1.0)) * (1.0 + std::sin(t_mod - theta) / std::sin(theta));
}

double phi_x_single_on(double t_mod, double gamma_mod, double r) {
    return -r / (r * r + 1.0) -
           std::cos(t_mod - 0.5 * gamma_mod) / (r * (r * r + 1.0) * std::cos(0.5 * gamma_mod));
}

CostateTrajectory costate_backward(const SynthesisReport& report, int samples_per_segment) {
    if (samples_per_segment < 1) throw DomainError("costate_backward: need >= 1 sample");
    const auto fr = frames(report);
    if (fr.empty()) throw DomainError("costate_backward: empty sequence");
    const auto bd = boundary_data(report, fr);

    CostateTrajectory out;
    out.multiplier = bd.multiplier;
    out.times.push_back(0.0);
    out.lambdas.push_back({bd.costate[0].x, bd.costate[0].y, bd.costate[0].z});
    for (std::size_t k = 0; k < fr.size(); ++k) {
        for (int i = 1; i <= samples_per_segment; ++i) {
            const double elapsed = fr[k].duration * i / samples_per_segment;
            const BlochVector lam =
                apply(partial_rotation(fr[k], elapsed, report.params), bd.costate[k]);
            out.times.push_back(fr[k].start + elapsed);
            out.lambdas.push_back({lam.x, lam.y, lam.z});
        }
    }
    return out;
}

VerificationReport verify(const SynthesisReport& report, const VerifyTolerances& tol) {
    VerificationReport out;
    const double r = report.params.ratio;
    const bool single = report.regime.n_off == 0;

    std::vector<SegmentFrame> fr = frames(report);
    if (fr.empty()) {
        out.failure = "empty sequence";
        return out;
    }
    BoundaryData bd;
    try {
        bd = boundary_data(report, fr);
    } catch (const DomainError& err) {
        out.failure = err.what();
        return out;
    }

    const std::size_t K = fr.size();
    const double tf = fr.back().start + fr.back().duration;
    const double exclusion = tol.switch_exclusion * tf;
    const double s_mod = report.durations.s;
    const double gamma = report.durations.t_on;  // single-On: total modified angle

    for (std::size_t k = 0; k < K; ++k) {
        for (int i = 0; i < tol.samples_per_segment; ++i) {
            const double elapsed = fr[k].duration * (i + 0.5) / tol.samples_per_segment;
            const Rotation part = partial_rotation(fr[k], elapsed, report.params);
            const BlochVector state = apply(part, bd.state[k]);
            const BlochVector lam = apply(part, bd.costate[k]);
            const BlochVector phi = cross(state, lam);

            const double hc = 1.0 + phi.x * (fr[k].on ? r : 0.0) + phi.z;
            out.max_hc_residual = std::max(out.max_hc_residual, std::abs(hc));

            const double tau = elapsed * fr[k].rate;  // local modified time (an angle)
            double analytic;
            if (k == 0)
                analytic = single ? phi_x_single_on(tau, gamma, r) : phi_x_first_on(tau, s_mod, r);
            else if (!fr[k].on)
                analytic = phi_x_off(tau, s_mod, r);
            else
                analytic = phi_x_on(tau, s_mod, r);
            out.max_phi_gap = std::max(out.max_phi_gap, std::abs(phi.x - analytic));

            // strict sign checks only away from the interior switches
            const double t_global = fr[k].start + elapsed;
            double dist = std::numeric_limits<double>::infinity();
            if (k > 0) dist = std::min(dist, t_global - fr[k].start);
            if (k + 1 < K) dist = std::min(dist, fr[k].start + fr[k].duration - t_global);
            if (dist >= exclusion) {
                const double margin = tol.sign_margin / r;
                const bool ok = fr[k].on ? (phi.x < -margin) : (phi.x > margin);
                if (!ok) ++out.sign_violations;
            }
        }
        if (k + 1 < K) {
            const BlochVector phi = cross(bd.state[k + 1], bd.costate[k + 1]);
            out.switch_time_residuals.push_back(std::abs(phi.x));
        }
    }

    const BlochVector phi0 = cross(bd.state[0], bd.costate[0]);
    const BlochVector phif = cross(bd.state[K], bd.costate[K]);
    out.boundary_residual_start = std::abs(phi0.x + 1.0 / r);
    out.boundary_residual_end = std::abs(phif.x + 1.0 / r);
    out.lambda_z0_residual = std::abs(bd.costate[0].z);

    bool ok = out.sign_violations == 0 && out.max_hc_residual <= tol.hc &&
              out.boundary_residual_start <= tol.boundary &&
              out.boundary_residual_end <= tol.boundary &&
              out.lambda_z0_residual <= tol.lambda_z0 && out.max_phi_gap <= tol.agreement;
    for (double res : out.switch_time_residuals) ok = ok && res <= tol.switch_res;
    out.passed = ok;
    return out;
}

}  // namespace qoctl
