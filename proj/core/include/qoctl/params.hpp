#pragma once

#include "qoctl/errors.hpp"

namespace qoctl {

/// Physical inputs of the control problem. The detuning Delta sets the fixed
/// longitudinal field, omega_max the bound of the transverse control, and
/// ratio = omega_max / detuning is the single dimensionless parameter the
/// whole construction depends on.
struct ProblemParams {
    double detuning = 1.0;   // Delta > 0, angular frequency units
    double omega_max = 1.0;  // Omega_0 > 0, same units
    double ratio = 1.0;      // Omega_0 / Delta, cached

    /// sqrt(Delta^2 + Omega_0^2), the modified-time rate of On segments.
    double on_rate() const;
};

ProblemParams make_params(double detuning, double omega_max);

/// Params with the given ratio; default detuning 1 so every emitted time is
/// the dimensionless Delta * t.
ProblemParams params_from_ratio(double ratio, double detuning = 1.0);

}  // namespace qoctl
