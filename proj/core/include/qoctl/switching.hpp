#pragma once

#include <string>
#include <vector>

#include "qoctl/synthesis.hpp"

namespace qoctl {

// Switching-function values are the dimensionless Delta * phi_x; modified
// time is used on On segments, Delta * t on Off segments. The control is On
// where phi_x < 0 and Off where phi_x > 0; every switch is a zero of phi_x.

/// First On pulse, boundary values phi_x(0) = -1/r and phi_x(s) = 0.
double phi_x_first_on(double t_mod, double s_mod, double r);

/// Off pulse: a positive sine arch vanishing at Delta*t = 0 and pi, with
/// slope (r^2 cot s + csc s)/(r sqrt(r^2+1)) at the switch.
double phi_x_off(double t_scaled, double s_mod, double r);

/// Subsequent On pulses, vanishing at 0 and at t_on(s) = pi + 2*theta and
/// passing through -1/r at t = s.
double phi_x_on(double t_mod, double s_mod, double r);

/// Single On pulse covering the whole sequence (r > 1): symmetric about the
/// midpoint with phi_x(0) = phi_x(gamma) = -1/r. Degenerates at r = 1.
double phi_x_single_on(double t_mod, double gamma_mod, double r);

/// Adjoint vector of the Maximum Principle, Delta-scaled (dimensionless).
struct CostateVector {
    double lambda_x = 0.0;
    double lambda_y = 0.0;
    double lambda_z = 0.0;
};

struct CostateTrajectory {
    std::vector<double> times;  // physical, ascending, first entry 0
    std::vector<CostateVector> lambdas;
    double multiplier = 0.0;  // v = lambda_z(t_f), fixed by H_c(t_f) = 0
};

/// Integrates the costate backward from (0, 0, v) using the same exact
/// per-segment rotations as the state. Throws DomainError when the final
/// state has y = 0 and the control Hamiltonian cannot be zeroed.
CostateTrajectory costate_backward(const SynthesisReport& report, int samples_per_segment = 256);

struct VerifyTolerances {
    double hc = 1e-9;            // |H_c| everywhere
    double switch_res = 1e-9;    // |phi_x| at interior switches
    double boundary = 1e-9;      // |phi_x(0) + 1/r|, |phi_x(t_f) + 1/r|
    double lambda_z0 = 1e-8;     // |lambda_z(0)|
    double agreement = 1e-8;     // backward vs piecewise-analytic phi_x
    double sign_margin = 1e-9;   // |phi_x| > sign_margin / r away from switches
    double switch_exclusion = 1e-3;  // fraction of t_f excluded around switches
    int samples_per_segment = 1000;
};

struct VerificationReport {
    double max_hc_residual = 0.0;
    int sign_violations = 0;
    std::vector<double> switch_time_residuals;
    double boundary_residual_start = 0.0;
    double boundary_residual_end = 0.0;
    double lambda_z0_residual = 0.0;
    double max_phi_gap = 0.0;  // backward-integrated vs analytic phi_x
    bool passed = false;
    std::string failure;  // set when the certificate could not be formed
};

/// Certifies a synthesized sequence against the Maximum Principle: sign
/// pattern of phi_x per segment, zeros at interior switches, the -1/Omega_0
/// boundary values, H_c = 0 along the trajectory, lambda_z(0) = 0, and
/// agreement of the backward-integrated switching function with the
/// piecewise-analytic one. Never throws; failures land in the report.
VerificationReport verify(const SynthesisReport& report, const VerifyTolerances& tol = {});

}  // namespace qoctl
