#include <cmath>
#include <vector>

#include "doctest.h"

#include "qoctl/errors.hpp"
#include "qoctl/propagate.hpp"
#include "qoctl/synthesis.hpp"

using namespace qoctl;

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

// Expected values below were computed from the closed forms and confirmed by
// independent matrix propagation (endpoint |z| at rounding level) before
// being frozen here.
constexpr double kCompSShort085 = 0.923352685601129;
constexpr double kCompTOn085 = 3.904977456068558;
constexpr double kCompTotal085 = 6.116948512332739;
constexpr double kSymS055 = 2.311161347099019;
constexpr double kSymTotal055 = 7.191745333283214;
constexpr double kSingleOn10 = 0.157295130115526;

double terminal_z(const SynthesisReport& rep) {
    return terminal_residual(rep.sequence, rep.params);
}

}  // namespace

TEST_SUITE("synthesis") {

TEST_CASE("regime interval endpoints") {
    CHECK(r_max(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r_max(2) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));
    CHECK(r_max(3) == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r_min(1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(r_min(2) == doctest::Approx(0.3826834323650898).epsilon(1e-14));
    CHECK(r_min(3) == doctest::Approx(0.25881904510252074).epsilon(1e-14));
    CHECK_THROWS_AS(r_max(0), DomainError);
    CHECK_THROWS_AS(r_min(0), DomainError);
}

TEST_CASE("classify reproduces the optimality pattern") {
    auto is = [](Regime reg, RegimeKind kind, int n) {
        return reg.kind == kind && reg.n_off == n;
    };
    CHECK(is(classify(1.0), RegimeKind::SingleOn, 0));
    CHECK(is(classify(7.3), RegimeKind::SingleOn, 0));
    CHECK(is(classify(0.85), RegimeKind::Complementary, 1));
    CHECK(is(classify(0.55), RegimeKind::Symmetric, 1));
    CHECK(is(classify(0.4), RegimeKind::Complementary, 2));
    CHECK(is(classify(0.35), RegimeKind::Symmetric, 2));
    CHECK(is(classify(0.26), RegimeKind::Complementary, 3));
    CHECK(is(classify(0.2), RegimeKind::Symmetric, 3));

    // ties: r_min(n) belongs to the complementary side, r_max(n+1) to the
    // n-interval
    CHECK(is(classify(r_min(1)), RegimeKind::Complementary, 1));
    CHECK(is(classify(std::nextafter(r_min(1), 0.0)), RegimeKind::Symmetric, 1));
    CHECK(is(classify(r_max(2)), RegimeKind::Symmetric, 1));
    CHECK(is(classify(std::nextafter(r_max(2), 0.0)), RegimeKind::Complementary, 2));

    CHECK_THROWS_AS(classify(0.0), DomainError);
    CHECK_THROWS_AS(classify(-3.0), DomainError);
    CHECK_THROWS_AS(classify(0.01), DomainError);       // below default floor
    CHECK_NOTHROW(classify(0.01, 0.005));               // floor is configurable
}

TEST_CASE("regime partition over the sampled interval") {
    for (int i = 0; i < 400; ++i) {
        const double r = 0.05 + (1.0 - 1e-9 - 0.05) * i / 399.0;
        const Regime reg = classify(r);
        REQUIRE(reg.n_off >= 1);
        CHECK(r_max(reg.n_off + 1) <= r);
        CHECK(r < r_max(reg.n_off));
        if (reg.kind == RegimeKind::Complementary) CHECK(r >= r_min(reg.n_off));
        if (reg.kind == RegimeKind::Symmetric) CHECK(r < r_min(reg.n_off));
    }
}

TEST_CASE("single-On duration") {
    CHECK(std::abs(single_on_duration(1.0) - kPi / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(single_on_duration(10.0) - kSingleOn10) < 1e-12);
    CHECK_THROWS_AS(single_on_duration(0.99), DomainError);

    // large ratio: tends to a pi/2 pulse in modified time
    CHECK(std::abs(single_on_duration(1e4) * 1e4 - kPi / 2.0) < 1e-6);

    // strictly below the Off-pulse bound for r > 1
    for (int i = 0; i < 100; ++i) {
        const double r = 1.0 + 19.0 * (i + 1) / 100.0;
        CHECK(single_on_duration(r) < kPi / std::sqrt(r * r + 1.0));
    }
}

TEST_CASE("complementary closed forms at r = 0.85") {
    const DurationSet d = complementary_durations(0.85, 1);
    CHECK(std::abs(d.s - kCompSShort085) < 1e-12);
    CHECK(std::abs(d.t_on - kCompTOn085) < 1e-12);
    CHECK(std::abs(d.f - (kCompTOn085 - kCompSShort085)) < 1e-12);
    CHECK(std::abs(d.total - kCompTotal085) < 1e-12);
    CHECK(std::abs(d.s + d.f - d.t_on) < 1e-10);
    CHECK(d.s <= 0.5 * d.t_on);  // canonical ShortFirst branch

    const DurationSet dl = complementary_durations(0.85, 1, Variant::LongFirst);
    CHECK(std::abs(dl.s - (kCompTOn085 - kCompSShort085)) < 1e-12);
    CHECK(std::abs(dl.total - d.total) < 1e-15);
    CHECK(std::abs(dl.s + dl.f - dl.t_on) < 1e-10);
}

TEST_CASE("the two first-On branches add up to the interior On duration") {
    // evaluate both signs of the closed form directly and compare their sum
    // with t_on; repeats the library's ShortFirst value on the minus branch
    for (double r : {0.8, 0.85, 0.95}) {
        const int n = 1;
        const double c = std::cos(kPi / (4.0 * n));
        const double B = r * r * c / std::sqrt(1.0 / (r * r + 1.0) - c * c);
        const double disc = std::sqrt(B * B + r * r * r * r - 1.0);
        const double denom = B * B + r * r * r * r;
        const double s_minus = std::acos((B * disc - r * r) / denom);
        const double s_plus = std::acos(-(B * disc + r * r) / denom);
        const DurationSet d = complementary_durations(r, n);
        CHECK(std::abs(s_minus + s_plus - d.t_on) < 1e-10);
        CHECK(std::abs(s_minus - d.s) < 1e-12);
    }
}

TEST_CASE("complementary analytic point at r_min(1)") {
    const double r = 1.0 / std::sqrt(2.0);
    const DurationSet d = complementary_durations(r, 1);
    CHECK(std::abs(d.t_on - 4.0 * kPi / 3.0) < 1e-12);
    // s has a square-root branch point at r_min, so double precision caps the
    // agreement near sqrt(eps) exactly on the boundary
    CHECK(std::abs(d.s - 2.0 * kPi / 3.0) < 1e-7);
    CHECK(std::abs(d.total - (kPi + (4.0 * kPi / 3.0) / std::sqrt(1.5))) < 1e-12);
}

TEST_CASE("complementary degeneration toward r_max(n)") {
    const DurationSet d = complementary_durations(1.0 - 1e-9, 1);
    CHECK(std::abs(d.t_on - kPi) < 1e-3);
    CHECK(d.s < 1e-2);

    CHECK_THROWS_AS(complementary_durations(0.3, 1), DomainError);   // below r_min(1)
    CHECK_THROWS_AS(complementary_durations(0.5, 2), DomainError);   // above r_max(2)
    CHECK_THROWS_AS(complementary_durations(0.85, 0), DomainError);
}

TEST_CASE("interior On duration stays in (pi, 2 pi) on the valid range") {
    for (int i = 1; i <= 50; ++i) {
        const double s = kPi * i / 51.0;
        for (double r : {0.2, 0.5, 0.9}) {
            const double t_on = interior_on_duration(s, r);
            CHECK(t_on > kPi);
            CHECK(t_on < 2.0 * kPi);
            CHECK(s < t_on);
        }
    }
}

TEST_CASE("symmetric solve at r = 0.55 matches the closed form") {
    const SymmetricSolve sol = solve_symmetric(0.55, 1);
    CHECK(std::abs(sol.durations.s - kSymS055) < 1e-12);
    CHECK(std::abs(sol.durations.total - kSymTotal055) < 1e-12);
    CHECK(sol.durations.f == sol.durations.s);
    CHECK(std::abs(sol.durations.s - symmetric_first_on_n1(0.55)) < 1e-12);
}

TEST_CASE("n = 1 closed form matches the generic solver across the interval") {
    // interior of the interval: sub-1e-10 agreement
    for (int i = 0; i < 40; ++i) {
        const double r = r_max(2) + 1e-6 + (1.0 - 2e-6 - r_max(2)) * i / 39.0;
        const double closed = symmetric_first_on_n1(r);
        const double solved = symmetric_durations(r, 1).s;
        CHECK(std::abs(closed - solved) < 1e-10);
    }
    // at the exact endpoint the acos branch point limits agreement to sqrt(eps)
    CHECK(std::abs(symmetric_first_on_n1(r_max(2)) - symmetric_durations(r_max(2), 1).s) <
          1e-7);
}

TEST_CASE("symmetric limits") {
    // upper limit of the interval: s = t_on = pi exactly at r = r_max(n+1)
    for (int n : {1, 2}) {
        const DurationSet d = symmetric_durations(r_max(n + 1), n);
        CHECK(std::abs(d.s - kPi) < 1e-9);
        CHECK(std::abs(d.t_on - kPi) < 1e-9);
    }
    // lower limit for n >= 2: s -> 0, t_on -> pi as r -> r_max(n-1)
    const DurationSet d = symmetric_durations(1.0 - 1e-4, 2);
    CHECK(d.s < 0.05);
    CHECK(std::abs(d.t_on - kPi) < 0.05);

    CHECK_THROWS_AS(solve_symmetric(0.5, 3), NoRootError);   // residual never crosses zero
    CHECK_THROWS_AS(solve_symmetric(0.12, 1), NoRootError);  // outside [r_max(2), 1)
}

TEST_CASE("symmetric terminal condition residual") {
    // recompute the residual from the rotation axis/angle of the composed
    // sequence: 2 |mu_x| sin(beta/2) must equal sqrt(2)
    for (double r : {0.2, 0.35, 0.55, 0.65}) {
        const SynthesisReport rep = synthesize(params_from_ratio(r));
        REQUIRE(rep.regime.kind == RegimeKind::Symmetric);
        const Rotation rot = rep.total_rotation;
        CHECK(std::abs(rot.ny) < 1e-9);
        CHECK(std::abs(2.0 * std::abs(rot.nx) * std::sin(0.5 * rot.angle) - std::sqrt(2.0)) <
              1e-9);
    }
}

TEST_CASE("complementary total rotation geometry") {
    for (double r : {0.26, 0.4, 0.75, 0.85, 0.95}) {
        const SynthesisReport rep = synthesize(params_from_ratio(r));
        REQUIRE(rep.regime.kind == RegimeKind::Complementary);
        CHECK(std::abs(rep.total_rotation.angle - 0.5 * kPi) < 1e-9);
        CHECK(std::abs(rep.total_rotation.nz) < 1e-9);
    }
}

TEST_CASE("synthesize emits the On-Off-...-On structure") {
    const SynthesisReport single = synthesize(params_from_ratio(1.1));
    CHECK(single.sequence.size() == 1);
    CHECK(single.sequence[0].level == FieldLevel::On);

    const SynthesisReport comp = synthesize(params_from_ratio(0.85));
    REQUIRE(comp.sequence.size() == 3);
    CHECK(std::abs(comp.sequence[0].duration - 0.703538715318289) < 1e-12);
    CHECK(std::abs(comp.sequence[1].duration - kPi) < 1e-12);
    CHECK(std::abs(comp.sequence[2].duration - 2.271817143424657) < 1e-12);

    const SynthesisReport sym3 = synthesize(params_from_ratio(0.2));
    REQUIRE(sym3.sequence.size() == 7);
    for (std::size_t i = 0; i < sym3.sequence.size(); ++i) {
        const FieldLevel expect = (i % 2 == 0) ? FieldLevel::On : FieldLevel::Off;
        CHECK(sym3.sequence[i].level == expect);
    }

    // long-first swaps the outer On durations
    const SynthesisReport lf = synthesize(params_from_ratio(0.85), Variant::LongFirst);
    CHECK(std::abs(lf.sequence[0].duration - comp.sequence[2].duration) < 1e-12);
    CHECK(std::abs(lf.sequence[2].duration - comp.sequence[0].duration) < 1e-12);
    CHECK(lf.variant == Variant::LongFirst);
}

TEST_CASE("detuning scaling of physical durations") {
    const SynthesisReport base = synthesize(params_from_ratio(0.85, 1.0));
    const SynthesisReport scaled = synthesize(params_from_ratio(0.85, 4.0));
    REQUIRE(base.sequence.size() == scaled.sequence.size());
    for (std::size_t i = 0; i < base.sequence.size(); ++i)
        CHECK(std::abs(scaled.sequence[i].duration - base.sequence[i].duration / 4.0) < 1e-12);
    CHECK(std::abs(base.durations.total - scaled.durations.total) < 1e-12);
}

TEST_CASE("terminal condition and total closure across regimes") {
    for (int i = 0; i < 120; ++i) {
        const double r = 0.05 * std::pow(20.0 / 0.05, i / 119.0);
        const SynthesisReport rep = synthesize(params_from_ratio(r));
        CHECK(terminal_z(rep) <= 1e-9);
        CHECK(std::abs(rep.final_state.z) <= 1e-9);

        const DurationSet& d = rep.durations;
        const int n = rep.regime.n_off;
        const double closure =
            n * kPi + (d.s + d.f + (n - 1) * d.t_on) / std::sqrt(r * r + 1.0);
        CHECK(std::abs(d.total - closure) < 1e-10);
        CHECK(d.s > 0.0);
        CHECK(d.s <= d.t_on + 1e-12);
        CHECK(d.f > 0.0);
        CHECK(d.f <= d.t_on + 1e-12);
        CHECK(d.t_off == kPi);
        if (n >= 1) {
            CHECK(d.t_on > kPi);
            CHECK(d.t_on < 2.0 * kPi);
        }

        double physical = 0.0;
        for (const FieldSegment& seg : rep.sequence) physical += seg.duration;
        CHECK(std::abs(physical - d.total) < 1e-10);  // detuning = 1
    }
}

TEST_CASE("branch agreement at r_min(n)") {
    for (int n = 1; n <= 5; ++n) {
        const double r = r_min(n);
        const double tc = complementary_durations(r, n).total;
        const SymmetricSolve sol = solve_symmetric(r, n);
        CHECK(std::abs(tc - sol.durations.total) < 1e-8);
        CHECK(std::abs(sol.durations.s - 0.5 * sol.durations.t_on) < 1e-8);
    }
}

TEST_CASE("optimal duration and the n = 1 branch inequality") {
    CHECK(std::abs(optimal_duration(1.0) - kPi / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(optimal_duration(1.0 / std::sqrt(2.0)) - 6.561725534021432) < 1e-8);

    CHECK(std::abs(branch_gap_n1(1.0 / std::sqrt(2.0))) < 1e-12);
    for (int i = 0; i < 200; ++i) {
        const double r = 1.0 / std::sqrt(2.0) + (1.0 - 1.0 / std::sqrt(2.0)) * i / 200.0;
        CHECK(branch_gap_n1(r) >= -1e-12);
    }
    CHECK_THROWS_AS(branch_gap_n1(1.5), DomainError);
}

TEST_CASE("duration is nonincreasing in the ratio") {
    double prev = 1e300;
    for (int i = 0; i < 200; ++i) {
        const double r = 0.05 * std::pow(20.0 / 0.05, i / 199.0);
        const double t = optimal_duration(r);
        CHECK(t <= prev + 1e-9);
        prev = t;
    }
}

}  // TEST_SUITE
