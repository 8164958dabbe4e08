#include "qoctl/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qoctl/errors.hpp"

namespace qoctl {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kSqrt2 = 1.414213562373095048801688724210;
constexpr double kClampTol = 1e-12;

// Inverse-trig arguments sit exactly on +-1 at regime boundaries; arguments
// farther out than kClampTol indicate a genuine domain violation.
double clamp_unit(double x, const char* what) {
    if (x > 1.0) {
        if (x - 1.0 > kClampTol) throw DomainError(std::string(what) + ": argument above 1");
        return 1.0;
    }
    if (x < -1.0) {
        if (-1.0 - x > kClampTol) throw DomainError(std::string(what) + ": argument below -1");
        return -1.0;
    }
    return x;
}

// Residual of the symmetric terminal condition, written as
// 2 |mu_x sin(beta/2)| - sqrt(2) so the beta/2 = 0, pi points stay regular.
double symmetric_residual(double s, double r, int n) {
    const double t_on = interior_on_duration(s, r);
    const double rq = std::sqrt(r * r + 1.0);
    const double cos_ha = std::sin(0.5 * t_on) / rq;                        // cos(alpha/2)
    const double sin_ha = std::sqrt(std::max(0.0, 1.0 - cos_ha * cos_ha));  // >= r/rq > 0
    const double alpha = 2.0 * std::acos(std::clamp(cos_ha, -1.0, 1.0));
    const double hna = 0.5 * n * alpha;
    const double p = r *
                     (4.0 * rq * std::cos(hna) * std::sin(s - 0.5 * t_on) -
                      2.0 * std::sin(hna) * (std::cos(s - t_on) + std::cos(s) - 2.0) / sin_ha) /
                     (4.0 * (r * r + 1.0));
    return 2.0 * std::abs(p) - kSqrt2;
}

double symmetric_total(double s, double t_on, double r, int n) {
    return n * kPi + (2.0 * s + (n - 1) * t_on) / std::sqrt(r * r + 1.0);
}

}  // namespace

double r_max(int n) {
    if (n < 1) throw DomainError("r_max: n must be >= 1");
    if (n == 1) return 1.0;  // tan(pi/4) exactly; keeps the boundary consistent
    return std::tan(kPi / (4.0 * n));
}

double r_min(int n) {
    if (n < 1) throw DomainError("r_min: n must be >= 1");
    return std::sin(kPi / (4.0 * n));
}

Regime classify(double r, double r_floor) {
    if (!(r > 0.0)) throw DomainError("classify: ratio must be positive");
    if (r < r_floor) throw DomainError("classify: ratio below the configured floor");
    if (r >= 1.0) return {RegimeKind::SingleOn, 0};
    int n = 1;
    while (r < r_max(n + 1)) ++n;  // bounded: r >= r_floor
    const RegimeKind kind =
        r >= r_min(n) ? RegimeKind::Complementary : RegimeKind::Symmetric;
    return {kind, n};
}

double single_on_duration(double r) {
    if (r < 1.0) throw DomainError("single_on_duration: requires r >= 1");
    const double arg = clamp_unit(std::sqrt(0.5 * (1.0 + 1.0 / (r * r))), "single_on_duration");
    const double gamma = 2.0 * std::asin(arg);
    return gamma / std::sqrt(r * r + 1.0);
}

double interior_on_duration(double s_mod, double r) {
    return kPi + 2.0 * std::atan2(r * r * std::sin(s_mod), 1.0 + r * r * std::cos(s_mod));
}

DurationSet complementary_durations(double r, int n, Variant variant) {
    if (n < 1) throw DomainError("complementary_durations: n must be >= 1");
    if (!(r > 0.0)) throw DomainError("complementary_durations: ratio must be positive");
    const double rq2 = r * r + 1.0;
    const double c = std::cos(kPi / (4.0 * n));
    const double den = 1.0 / rq2 - c * c;  // zero at r = r_max(n)
    if (!(den > 0.0))
        throw DomainError("complementary_durations: r at or above r_max(n)");
    const double t_on =
        2.0 * kPi - 2.0 * std::asin(clamp_unit(std::sqrt(rq2) * c, "complementary_durations"));

    const double B = r * r * c / std::sqrt(den);
    double disc = B * B + r * r * r * r - 1.0;  // zero at r = r_min(n)
    if (disc < 0.0) {
        if (-disc > kClampTol) throw DomainError("complementary_durations: r below r_min(n)");
        disc = 0.0;
    }
    const double denom = B * B + r * r * r * r;
    const double s_short =
        std::acos(clamp_unit((B * std::sqrt(disc) - r * r) / denom, "complementary_durations"));

    const double s = variant == Variant::ShortFirst ? s_short : t_on - s_short;
    const double total = n * (kPi + t_on / std::sqrt(rq2));
    return {s, t_on, t_on - s, kPi, total};
}

SymmetricSolve solve_symmetric(double r, int n) {
    if (n < 1) throw DomainError("solve_symmetric: n must be >= 1");
    if (!(r > 0.0)) throw DomainError("solve_symmetric: ratio must be positive");

    constexpr int kScanPoints = 4096;
    constexpr double kLo = 1e-6;
    const double hi = 2.0 * kPi - 1e-6;

    std::vector<double> roots;
    bool have_prev = false;
    double prev_s = 0.0, prev_f = 0.0;
    for (int i = 0; i <= kScanPoints; ++i) {
        const double s = kLo + (hi - kLo) * i / kScanPoints;
        if (!(s < interior_on_duration(s, r))) {  // candidate region is s < t_on(s)
            have_prev = false;
            continue;
        }
        const double f = symmetric_residual(s, r, n);
        if (have_prev && (f == 0.0 || prev_f * f < 0.0)) {
            double a = prev_s, b = s, fa = prev_f;
            for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = symmetric_residual(m, r, n);
                if (fa * fm <= 0.0) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        have_prev = true;
        prev_s = s;
        prev_f = f;
    }

    // At r = r_max(n+1) the root degenerates to the endpoint s = t_on = pi,
    // where the residual touches zero without a sign change.
    const double end_res = symmetric_residual(kPi, r, n);
    const bool near_pi =
        std::any_of(roots.begin(), roots.end(), [](double s) { return std::abs(s - kPi) < 1e-6; });
    if (std::abs(end_res) < 1e-10 && !near_pi) roots.push_back(kPi);

    if (roots.empty())
        throw NoRootError("solve_symmetric: no root of the terminal condition; ratio outside "
                          "the validity interval of the n-Off symmetric branch");

    SymmetricSolve out;
    out.roots = roots;
    bool first = true;
    for (double s : roots) {
        const double t_on = interior_on_duration(s, r);
        const double total = symmetric_total(s, t_on, r, n);
        if (first || total < out.durations.total) {
            out.durations = {s, t_on, s, kPi, total};
            first = false;
        }
    }
    return out;
}

DurationSet symmetric_durations(double r, int n) { return solve_symmetric(r, n).durations; }

double symmetric_first_on_n1(double r) {
    if (!(r > 0.0) || r >= 1.0) throw DomainError("symmetric_first_on_n1: requires 0 < r < 1");
    return std::acos(clamp_unit(1.0 - (r + 1.0 / r) / kSqrt2, "symmetric_first_on_n1"));
}

SynthesisReport synthesize(const ProblemParams& params, Variant variant) {
    const double r = params.ratio;
    const Regime regime = classify(r);

    DurationSet d;
    switch (regime.kind) {
        case RegimeKind::SingleOn: {
            const double total = single_on_duration(r);
            const double gamma = total * std::sqrt(r * r + 1.0);
            d = {gamma, gamma, gamma, kPi, total};
            break;
        }
        case RegimeKind::Complementary:
            d = complementary_durations(r, regime.n_off, variant);
            break;
        case RegimeKind::Symmetric:
            d = symmetric_durations(r, regime.n_off);
            break;
    }

    SynthesisReport report;
    report.params = params;
    report.regime = regime;
    report.variant =
        regime.kind == RegimeKind::Complementary ? variant : Variant::ShortFirst;
    report.durations = d;

    const double on_scale = 1.0 / (params.detuning * std::sqrt(r * r + 1.0));
    append_segment(report.sequence, FieldLevel::On, d.s * on_scale, params);
    for (int k = 0; k < regime.n_off; ++k) {
        append_segment(report.sequence, FieldLevel::Off, kPi / params.detuning, params);
        const double on = (k + 1 == regime.n_off) ? d.f : d.t_on;
        append_segment(report.sequence, FieldLevel::On, on * on_scale, params);
    }

    report.total_rotation = canonical(sequence_rotation(report.sequence, params));
    report.final_state = apply(report.total_rotation, north_pole());
    if (std::abs(report.final_state.z) > 1e-9)
        throw std::logic_error("synthesize: terminal condition violated");
    return report;
}

double optimal_duration(double r) { return synthesize(params_from_ratio(r)).durations.total; }

double branch_gap_n1(double r) {
    if (!(r > 0.0) || r > 1.0) throw DomainError("branch_gap_n1: requires 0 < r <= 1");
    return (r + 1.0 / r) / kSqrt2 - std::sqrt(0.5 * (1.0 - r * r)) - 1.0;
}

}  // namespace qoctl
