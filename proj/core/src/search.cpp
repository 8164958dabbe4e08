#include "qoctl/search.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qoctl/errors.hpp"
#include "qoctl/propagate.hpp"

namespace qoctl {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kFeasibleResidual = 1e-6;
constexpr double kPenaltyWeight = 1e3;

// Schedule evaluation at Delta = 1: x holds [d0, e1, d1, ...], On pulses at
// even indices. Nonpositive entries contribute nothing. `band` is the
// feasibility slack of the penalty; refinement tightens it toward the
// reporting bound kFeasibleResidual.
struct ScheduleObjective {
    double r;
    int dims;
    double band = kFeasibleResidual;
    long long evaluations = 0;

    std::pair<double, double> measure(const std::vector<double>& x) {
        ++evaluations;
        const double rq = std::sqrt(r * r + 1.0);
        BlochVector v = north_pole();
        double total = 0.0;
        for (int j = 0; j < dims; ++j) {
            const double d = x[j] > 0.0 ? x[j] : 0.0;
            if (d == 0.0) continue;
            total += d;
            const Rotation rot = (j % 2 == 0)
                                     ? make_rotation(r / rq, 0.0, 1.0 / rq, d * rq)
                                     : make_rotation(0.0, 0.0, 1.0, d);
            v = apply(rot, v);
        }
        return {total, std::abs(v.z)};
    }

    double penalized(const std::vector<double>& x) {
        const auto [total, residual] = measure(x);
        return total + kPenaltyWeight * std::max(0.0, residual - band);
    }
};

// Deterministic Nelder-Mead (no randomness, fixed coefficients) on the
// penalized objective; `disp` holds the displacement vectors spanning the
// initial simplex around x0.
std::vector<double> nelder_mead_span(ScheduleObjective& obj, std::vector<double> x0,
                                     const std::vector<std::vector<double>>& disp, int iters) {
    const int n = static_cast<int>(x0.size());
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pts[i + 1][j] += disp[i][j];
    for (int i = 0; i <= n; ++i) fv[i] = obj.penalized(pts[i]);

    std::vector<int> order(n + 1);
    for (int it = 0; it < iters; ++it) {
        for (int i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return fv[a] < fv[b]; });
        const int best = order[0], second_worst = order[n - 1], worst = order[n];
        if (fv[worst] - fv[best] < 1e-14) break;

        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (int j = 0; j < n; ++j) centroid[j] += pts[i][j];
        }
        for (int j = 0; j < n; ++j) centroid[j] /= n;

        auto blend = [&](double coeff) {
            std::vector<double> x(n);
            for (int j = 0; j < n; ++j) x[j] = centroid[j] + coeff * (centroid[j] - pts[worst][j]);
            return x;
        };

        std::vector<double> xr = blend(1.0);
        const double fr = obj.penalized(xr);
        if (fr < fv[best]) {
            std::vector<double> xe = blend(2.0);
            const double fe = obj.penalized(xe);
            if (fe < fr) {
                pts[worst] = std::move(xe);
                fv[worst] = fe;
            } else {
                pts[worst] = std::move(xr);
                fv[worst] = fr;
            }
        } else if (fr < fv[second_worst]) {
            pts[worst] = std::move(xr);
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            std::vector<double> xc = blend(outside ? 0.5 : -0.5);
            const double fc = obj.penalized(xc);
            if (fc < std::min(fr, fv[worst])) {
                pts[worst] = std::move(xc);
                fv[worst] = fc;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (int j = 0; j < n; ++j)
                        pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
                    fv[i] = obj.penalized(pts[i]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    return pts[best];
}

std::vector<double> nelder_mead(ScheduleObjective& obj, std::vector<double> x0,
                                const std::vector<double>& steps, int iters) {
    const int n = static_cast<int>(x0.size());
    std::vector<std::vector<double>> disp(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) disp[i][i] = steps[i];
    return nelder_mead_span(obj, std::move(x0), disp, iters);
}

// Final polish: the minimum lies on the terminal-residual manifold, so align
// the simplex with it (one hair-thin edge along the residual gradient, the
// rest spanning the tangent plane) and let Nelder-Mead slide freely.
std::vector<double> polish_on_manifold(ScheduleObjective& obj, std::vector<double> x,
                                       double tangent_step, int rounds, int iters) {
    const int n = static_cast<int>(x.size());
    for (int round = 0; round < rounds; ++round) {
        std::vector<double> grad(n);
        double norm = 0.0;
        const double h = 1e-7;
        for (int j = 0; j < n; ++j) {
            std::vector<double> xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            grad[j] = (obj.measure(xp).second - obj.measure(xm).second) / (2.0 * h);
            norm += grad[j] * grad[j];
        }
        norm = std::sqrt(norm);
        if (norm < 1e-12) break;
        for (double& g : grad) g /= norm;

        // orthonormal basis seeded by the gradient, completed from the
        // coordinate directions (deterministic Gram-Schmidt)
        std::vector<std::vector<double>> basis{grad};
        for (int j = 0; j < n && static_cast<int>(basis.size()) < n; ++j) {
            std::vector<double> v(n, 0.0);
            v[j] = 1.0;
            for (const auto& b : basis) {
                double dot = 0.0;
                for (int k = 0; k < n; ++k) dot += v[k] * b[k];
                for (int k = 0; k < n; ++k) v[k] -= dot * b[k];
            }
            double len = 0.0;
            for (double c : v) len += c * c;
            len = std::sqrt(len);
            if (len < 1e-8) continue;
            for (double& c : v) c /= len;
            basis.push_back(v);
        }
        if (static_cast<int>(basis.size()) < n) break;

        std::vector<std::vector<double>> disp(n, std::vector<double>(n));
        for (int k = 0; k < n; ++k) {
            const double step = k == 0 ? 2e-6 : tangent_step;
            for (int j = 0; j < n; ++j) disp[k][j] = step * basis[k][j];
        }
        x = nelder_mead_span(obj, x, disp, iters);
        tangent_step *= 0.4;
    }
    return x;
}

}  // namespace

SearchResult brute_force(double r, int n_off, int coarse_grid, int refine_iters) {
    if (!(r > 0.0)) throw DomainError("brute_force: ratio must be positive");
    if (n_off < 0 || n_off > 2)
        throw DomainError("brute_force: n_off must be 0, 1 or 2 (larger searches are out of "
                          "desk scale)");
    const int G = coarse_grid > 0 ? coarse_grid : (n_off <= 1 ? 40 : 16);
    const int dims = 2 * n_off + 1;

    const double rq = std::sqrt(r * r + 1.0);
    std::vector<double> range(dims);
    for (int j = 0; j < dims; ++j) range[j] = (j % 2 == 0) ? 2.0 * kPi / rq : 2.0 * kPi;

    ScheduleObjective obj{r, dims};

    // coarse scan, keeping a pool of candidate seeds by penalized objective
    constexpr std::size_t kPool = 32;
    std::vector<std::pair<double, long long>> pool;  // (penalty, linear index)
    long long cells = 1;
    for (int j = 0; j < dims; ++j) cells *= G;
    std::vector<double> x(dims);
    auto decode = [&](long long cell, std::vector<double>& out_x) {
        long long rem = cell;
        for (int j = 0; j < dims; ++j) {
            out_x[j] = range[j] * static_cast<double>(rem % G + 1) / G;
            rem /= G;
        }
    };
    for (long long cell = 0; cell < cells; ++cell) {
        decode(cell, x);
        const double p = obj.penalized(x);
        if (pool.size() < kPool) {
            pool.emplace_back(p, cell);
            std::sort(pool.begin(), pool.end());
        } else if (p < pool.back().first) {
            pool.back() = {p, cell};
            std::sort(pool.begin(), pool.end());
        }
    }

    // thin the pool so the refinement starts span distinct grid regions
    std::vector<long long> seeds;
    for (const auto& [penalty, cell] : pool) {
        (void)penalty;
        bool distinct = true;
        for (long long kept : seeds) {
            long long a = cell, b = kept;
            bool close = true;
            for (int j = 0; j < dims; ++j) {
                if (std::abs(a % G - b % G) > 2) close = false;
                a /= G;
                b /= G;
            }
            if (close) distinct = false;
        }
        if (distinct) seeds.push_back(cell);
        if (seeds.size() == 8) break;
    }

    std::vector<double> steps(dims);
    for (int j = 0; j < dims; ++j) steps[j] = range[j] / G;

    bool have_best = false;
    SearchResult out;
    std::vector<double> best_x;
    for (long long cell : seeds) {
        decode(cell, x);
        // restarted Nelder-Mead with penalty continuation: wide feasibility
        // bands let the simplex travel along the valley, then the band and
        // the simplex shrink toward the reporting bound; repeated rounds at
        // the final band recover from simplex degeneration on the valley
        std::vector<double> refined = x;
        std::vector<double> round_steps(dims);
        const double scales[] = {1.0, 0.5, 0.25, 0.25, 0.25, 0.12, 0.12, 0.06,
                                 0.03, 0.015, 0.008, 0.004};
        const double bands[] = {1e-3, 1e-4, 1e-5, 1e-6, 1e-6, 1e-6, 1e-6, 1e-6,
                                1e-6, 1e-6, 1e-6, 1e-6};
        for (int round = 0; round < 12; ++round) {
            obj.band = bands[round];
            for (int j = 0; j < dims; ++j) round_steps[j] = steps[j] * scales[round];
            refined = nelder_mead(obj, refined, round_steps, refine_iters);
        }
        obj.band = kFeasibleResidual;
        refined = polish_on_manifold(obj, refined, 0.05, 8, refine_iters);

        const auto [total, residual] = obj.measure(refined);
        if (residual <= kFeasibleResidual && (!have_best || total < out.best_duration)) {
            out.best_duration = total;
            out.residual = residual;
            best_x = refined;
            have_best = true;
        }
    }
    if (!have_best)
        throw InfeasibleError("brute_force: no candidate met the terminal residual bound");

    const ProblemParams params = params_from_ratio(r);
    for (int j = 0; j < dims; ++j) {
        const double d = best_x[j] > 0.0 ? best_x[j] : 0.0;
        append_segment(out.best_schedule, j % 2 == 0 ? FieldLevel::On : FieldLevel::Off, d,
                       params);
    }
    out.evaluations = obj.evaluations;
    return out;
}

SynthesisReport suboptimal_sequence(double r, double detuning) {
    if (!(r > 0.0) || r >= 1.0)
        throw DomainError("suboptimal_sequence: requires 0 < r < 1 (a single On pulse serves "
                          "r >= 1)");
    const ProblemParams params = params_from_ratio(r, detuning);
    const Regime regime = classify(r);
    const int n = regime.n_off;

    const double alpha = 2.0 * std::atan(r);
    const double num = std::cos((n + 1) * alpha) + std::cos(n * alpha);
    const double den = std::cos((n + 1) * alpha) - std::cos(n * alpha);  // < 0 on the interval
    double arg = num / den;
    arg = std::min(1.0, std::max(-1.0, arg));
    const double s = std::acos(arg);

    const double rq = std::sqrt(r * r + 1.0);
    SynthesisReport report;
    report.params = params;
    report.regime = regime;
    report.variant = Variant::ShortFirst;
    report.durations = {s, kPi, kPi, kPi, n * kPi + (s + n * kPi) / rq};

    const double on_scale = 1.0 / (detuning * rq);
    append_segment(report.sequence, FieldLevel::On, s * on_scale, params);
    for (int k = 0; k < n; ++k) {
        append_segment(report.sequence, FieldLevel::Off, kPi / detuning, params);
        append_segment(report.sequence, FieldLevel::On, kPi * on_scale, params);
    }

    report.total_rotation = canonical(sequence_rotation(report.sequence, params));
    report.final_state = apply(report.total_rotation, north_pole());
    if (std::abs(report.final_state.z) > 1e-9)
        throw std::logic_error("suboptimal_sequence: terminal condition violated");
    return report;
}

double deviation(double r) {
    const double t_sub = suboptimal_sequence(r).durations.total;
    const double t_opt = optimal_duration(r);
    double dev = 100.0 * (t_sub - t_opt) / t_opt;
    if (dev < 0.0 && dev > -1e-12) dev = 0.0;
    return dev;
}

}  // namespace qoctl
