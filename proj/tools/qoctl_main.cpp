// qoctl: synthesis, simulation, verification and search for minimum-time
// bang-bang control of a detuned two-level system with one bounded
// transverse field. Emits machine-readable JSON/CSV; identical invocations
// produce byte-identical output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qoctl/errors.hpp"
#include "qoctl/parallel.hpp"
#include "qoctl/propagate.hpp"
#include "qoctl/search.hpp"
#include "qoctl/switching.hpp"
#include "qoctl/synthesis.hpp"

namespace {

using namespace qoctl;

// Fixed 17-significant-digit formatting keeps JSON/CSV reproducible and
// round-trippable; the C locale guarantees '.' decimals.
std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num(long long v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

const char* kind_name(RegimeKind kind) {
    switch (kind) {
        case RegimeKind::SingleOn: return "single_on";
        case RegimeKind::Complementary: return "complementary";
        case RegimeKind::Symmetric: return "symmetric";
    }
    return "?";
}

const char* level_name(FieldLevel level) { return level == FieldLevel::On ? "On" : "Off"; }

const char* variant_name(Variant v) {
    return v == Variant::ShortFirst ? "short_first" : "long_first";
}

std::string segments_json(const std::vector<FieldSegment>& seq) {
    std::string out = "[";
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) out += ", ";
        out += "{\"level\": \"";
        out += level_name(seq[i].level);
        out += "\", \"duration\": " + num(seq[i].duration) + "}";
    }
    return out + "]";
}

std::string report_json(const SynthesisReport& rep, bool suboptimal) {
    std::string out = "{\n";
    out += "  \"regime\": {\"kind\": \"" + std::string(kind_name(rep.regime.kind)) +
           "\", \"n_off\": " + num(rep.regime.n_off) + "},\n";
    out += "  \"ratio\": " + num(rep.params.ratio) + ",\n";
    out += "  \"detuning\": " + num(rep.params.detuning) + ",\n";
    out += "  \"segments\": " + segments_json(rep.sequence) + ",\n";
    double total_physical = 0.0;
    for (const auto& seg : rep.sequence) total_physical += seg.duration;
    out += "  \"total_duration\": " + num(total_physical) + ",\n";
    out += "  \"modified_durations\": {\"s\": " + num(rep.durations.s) +
           ", \"t_on\": " + num(rep.durations.t_on) + ", \"f\": " + num(rep.durations.f) +
           "},\n";
    out += "  \"final_state\": [" + num(rep.final_state.x) + ", " + num(rep.final_state.y) +
           ", " + num(rep.final_state.z) + "],\n";
    if (suboptimal) out += "  \"suboptimal\": true,\n";
    out += "  \"variant\": \"" + std::string(variant_name(rep.variant)) + "\"\n";
    return out + "}\n";
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    file << text;
}

struct SweepRow {
    std::string text;
};

std::string sweep_csv(double r_lo, double r_hi, int steps) {
    if (!(r_lo >= kDefaultRatioFloor) || !(r_lo < r_hi))
        throw DomainError("sweep: grid must satisfy r_floor <= r_lo < r_hi");
    if (steps < 2) throw DomainError("sweep: need at least 2 steps");

    std::vector<SweepRow> rows(steps);
    parallel_for_index(static_cast<std::size_t>(steps), [&](std::size_t i) {
        const double r = r_lo + (r_hi - r_lo) * static_cast<double>(i) / (steps - 1);
        std::string& line = rows[i].text;
        try {
            const SynthesisReport rep = synthesize(params_from_ratio(r));
            double t_sub, dev;
            if (r < 1.0) {
                t_sub = suboptimal_sequence(r).durations.total;
                dev = 100.0 * (t_sub - rep.durations.total) / rep.durations.total;
                if (dev < 0.0 && dev > -1e-12) dev = 0.0;
            } else {  // the intuitive control *is* the single On pulse
                t_sub = rep.durations.total;
                dev = 0.0;
            }
            line = num(r) + "," + kind_name(rep.regime.kind) + "," + num(rep.regime.n_off) +
                   "," + num(rep.durations.total) + "," + num(rep.durations.s) + "," +
                   num(rep.durations.t_on) + "," + num(rep.durations.f) + "," + num(t_sub) +
                   "," + num(dev) + "\n";
        } catch (const std::exception&) {
            line = num(r) + ",error,,,,,,,\n";
        }
    });

    std::string out = "r,regime,n_off,total_duration,s,t_on,f,suboptimal_duration,deviation_pct\n";
    for (const SweepRow& row : rows) out += row.text;
    return out;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,x,y,z,segment_index\n";
    std::size_t seg = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        while (seg < traj.segment_boundaries.size() && i > traj.segment_boundaries[seg]) ++seg;
        out += num(traj.times[i]) + "," + num(traj.states[i].x) + "," + num(traj.states[i].y) +
               "," + num(traj.states[i].z) + "," + num(static_cast<int>(seg)) + "\n";
    }
    return out;
}

std::string verification_json(const VerificationReport& rep, double ratio, double detuning) {
    std::string out = "{\n";
    out += "  \"ratio\": " + num(ratio) + ",\n";
    out += "  \"detuning\": " + num(detuning) + ",\n";
    out += "  \"passed\": " + std::string(rep.passed ? "true" : "false") + ",\n";
    out += "  \"max_hc_residual\": " + num(rep.max_hc_residual) + ",\n";
    out += "  \"sign_violations\": " + num(rep.sign_violations) + ",\n";
    out += "  \"switch_time_residuals\": [";
    for (std::size_t i = 0; i < rep.switch_time_residuals.size(); ++i) {
        if (i) out += ", ";
        out += num(rep.switch_time_residuals[i]);
    }
    out += "],\n";
    out += "  \"boundary_residuals\": {\"start\": " + num(rep.boundary_residual_start) +
           ", \"end\": " + num(rep.boundary_residual_end) + "},\n";
    out += "  \"lambda_z0_residual\": " + num(rep.lambda_z0_residual) + ",\n";
    out += "  \"max_phi_gap\": " + num(rep.max_phi_gap);
    if (!rep.failure.empty()) out += ",\n  \"failure\": \"" + rep.failure + "\"";
    return out + "\n}\n";
}

std::string search_json(const SearchResult& res, double ratio, int n_off,
                        double synthesis_duration) {
    const double gap =
        100.0 * (res.best_duration - synthesis_duration) / synthesis_duration;
    std::string out = "{\n";
    out += "  \"ratio\": " + num(ratio) + ",\n";
    out += "  \"n_off\": " + num(n_off) + ",\n";
    out += "  \"best_duration\": " + num(res.best_duration) + ",\n";
    out += "  \"residual\": " + num(res.residual) + ",\n";
    out += "  \"evaluations\": " + num(res.evaluations) + ",\n";
    out += "  \"schedule\": " + segments_json(res.best_schedule) + ",\n";
    out += "  \"synthesis_duration\": " + num(synthesis_duration) + ",\n";
    out += "  \"gap_pct\": " + num(gap) + "\n";
    return out + "}\n";
}

void check_format(const std::string& format, const char* required, const char* command) {
    if (!format.empty() && format != required)
        throw DomainError(std::string(command) + " emits " + required + " only");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum-time bang-bang pulse synthesis for a detuned qubit"};
    app.require_subcommand(1);

    double ratio = 1.0, detuning = 1.0;
    double r_lo = 0.05, r_hi = 1.0;
    int steps = 500, n_off = 0, samples = 256;
    std::string output, format, variant_flag = "short-first";

    auto add_common = [&](CLI::App* cmd, bool needs_ratio) {
        if (needs_ratio) cmd->add_option("--ratio", ratio, "control bound over detuning")->required();
        cmd->add_option("--detuning", detuning, "detuning (default 1: times are Delta*t)");
        cmd->add_option("--output", output, "write to file instead of stdout");
        cmd->add_option("--format", format, "output format (json or csv)");
    };

    CLI::App* synth = app.add_subcommand("synth", "synthesize the optimal pulse sequence");
    add_common(synth, true);
    synth->add_option("--variant", variant_flag, "short-first or long-first (complementary)");

    CLI::App* simulate = app.add_subcommand("simulate", "trajectory of the optimal sequence");
    add_common(simulate, true);
    simulate->add_option("--samples-per-segment", samples, "trajectory samples per segment");

    CLI::App* verify_cmd = app.add_subcommand("verify", "certify optimality conditions");
    add_common(verify_cmd, true);

    CLI::App* sweep = app.add_subcommand("sweep", "durations and regimes over a ratio grid");
    sweep->add_option("--r-lo", r_lo, "grid lower bound");
    sweep->add_option("--r-hi", r_hi, "grid upper bound");
    sweep->add_option("--steps", steps, "number of grid rows");
    sweep->add_option("--output", output, "write to file instead of stdout");
    sweep->add_option("--format", format, "output format (csv)");

    CLI::App* subopt = app.add_subcommand("suboptimal", "the intuitive pi-train baseline");
    add_common(subopt, true);

    CLI::App* oracle = app.add_subcommand("oracle", "brute-force search vs synthesis");
    add_common(oracle, true);
    oracle->add_option("--n-off", n_off, "number of Off pulses in the searched schedule");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (synth->parsed()) {
            check_format(format, "json", "synth");
            if (variant_flag != "short-first" && variant_flag != "long-first")
                throw DomainError("unknown variant: " + variant_flag);
            const Variant variant =
                variant_flag == "long-first" ? Variant::LongFirst : Variant::ShortFirst;
            const SynthesisReport rep = synthesize(make_params(detuning, ratio * detuning), variant);
            emit(report_json(rep, false), output);
        } else if (simulate->parsed()) {
            check_format(format, "csv", "simulate");
            const SynthesisReport rep = synthesize(make_params(detuning, ratio * detuning));
            emit(trajectory_csv(propagate_exact(rep.sequence, rep.params, samples)), output);
        } else if (verify_cmd->parsed()) {
            check_format(format, "json", "verify");
            const SynthesisReport rep = synthesize(make_params(detuning, ratio * detuning));
            const VerificationReport ver = verify(rep);
            emit(verification_json(ver, ratio, detuning), output);
            return ver.passed ? 0 : 1;
        } else if (sweep->parsed()) {
            check_format(format, "csv", "sweep");
            emit(sweep_csv(r_lo, r_hi, steps), output);
        } else if (subopt->parsed()) {
            check_format(format, "json", "suboptimal");
            const SynthesisReport rep = suboptimal_sequence(ratio, detuning);
            emit(report_json(rep, true), output);
        } else if (oracle->parsed()) {
            check_format(format, "json", "oracle");
            SearchResult res = brute_force(ratio, n_off);
            if (detuning != 1.0)
                for (FieldSegment& seg : res.best_schedule) seg.duration /= detuning;
            const double synth_total = optimal_duration(ratio);
            emit(search_json(res, ratio, n_off, synth_total), output);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
