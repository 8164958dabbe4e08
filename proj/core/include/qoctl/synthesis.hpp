#pragma once

#include <vector>

#include "qoctl/bloch.hpp"
#include "qoctl/params.hpp"

namespace qoctl {

enum class RegimeKind { SingleOn, Complementary, Symmetric };

/// Family of the optimal solution and its number of Off pulses.
struct Regime {
    RegimeKind kind = RegimeKind::SingleOn;
    int n_off = 0;
};

/// Which of the two equal-duration complementary sequences to build: the one
/// whose first On pulse is the shorter of the pair (canonical) or the longer.
enum class Variant { ShortFirst, LongFirst };

/// Pulse durations in modified time (t * sqrt(Delta^2 + Omega^2) on On
/// segments); t_off and total are Delta-scaled physical times.
struct DurationSet {
    double s = 0.0;      // first On
    double t_on = 0.0;   // interior (full) On
    double f = 0.0;      // final On
    double t_off = 0.0;  // Delta * t per Off pulse, always pi
    double total = 0.0;  // Delta * t_f
};

struct SynthesisReport {
    ProblemParams params;
    Regime regime;
    Variant variant = Variant::ShortFirst;
    DurationSet durations;
    std::vector<FieldSegment> sequence;  // physical time, alternating On/Off
    Rotation total_rotation;             // canonical form, angle in [0, pi]
    BlochVector final_state;             // on the equator, |z| <= 1e-9
};

/// Smallest ratio accepted by classify/synthesize; bounds the interval search
/// (n grows like pi/(4r) as r -> 0).
inline constexpr double kDefaultRatioFloor = 0.02;

/// Largest r for which an n-Off complementary sequence exists: tan(pi/(4n)).
double r_max(int n);

/// Smallest r for which an n-Off complementary sequence exists: sin(pi/(4n)).
double r_min(int n);

/// Optimal family at the given ratio. r >= 1 is a single On pulse; otherwise
/// the unique n with r_max(n+1) <= r < r_max(n) is found and the sequence is
/// complementary for r >= r_min(n), symmetric below (ties at r_min go to
/// complementary, where the two branches coincide).
Regime classify(double r, double r_floor = kDefaultRatioFloor);

/// Delta * t_f of the optimal single On pulse, r >= 1.
double single_on_duration(double r);

/// Duration of a full On pulse as a function of the first-On duration:
/// t_on(s) = pi + 2 atan(r^2 sin s / (1 + r^2 cos s)), modified time.
double interior_on_duration(double s_mod, double r);

/// Closed-form durations of the n-Off complementary sequence,
/// r_min(n) <= r < r_max(n).
DurationSet complementary_durations(double r, int n, Variant variant = Variant::ShortFirst);

struct SymmetricSolve {
    DurationSet durations;      // minimal-total root
    std::vector<double> roots;  // every root of the terminal condition found
};

/// Solves the terminal condition 2|mu_x(s)| sin(beta(s)/2) = sqrt(2) for the
/// first-On duration of the n-Off symmetric sequence. Scans s over
/// (1e-6, 2pi - 1e-6) at 4096 points keeping s < t_on(s), brackets sign
/// changes, refines by bisection to 1e-13 and returns the root of minimal
/// total duration; all roots are reported. Throws NoRootError when nothing
/// brackets (r outside the validity interval).
SymmetricSolve solve_symmetric(double r, int n);

DurationSet symmetric_durations(double r, int n);

/// n = 1 closed form for the symmetric first-On duration:
/// s = acos(1 - (r + 1/r)/sqrt(2)), valid on [r_max(2), 1).
double symmetric_first_on_n1(double r);

/// Full synthesis: classify, solve durations, emit the physical segment list
/// On-Off-On-...-Off-On, compose the total rotation and final state.
SynthesisReport synthesize(const ProblemParams& params, Variant variant = Variant::ShortFirst);

/// Delta * t_f of the optimal sequence at the given ratio (detuning 1).
double optimal_duration(double r);

/// g(r) = (r + 1/r)/sqrt(2) - sqrt((1 - r^2)/2) - 1; nonnegative on
/// [1/sqrt(2), 1) with g(1/sqrt(2)) = 0, which orders the one-Off
/// complementary total below the symmetric one on that interval.
double branch_gap_n1(double r);

}  // namespace qoctl
