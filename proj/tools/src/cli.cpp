// Copyright 2026 The eprbec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eprsim/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "eprbec/calibration.hpp"
#include "eprbec/criteria.hpp"
#include "eprbec/errors.hpp"
#include "eprbec/experiment.hpp"
#include "eprbec/io.hpp"
#include "eprbec/pulses.hpp"
#include "eprbec/rng.hpp"

namespace eprsim {

namespace {

using namespace eprbec;

/// Collects everything written by a command so nothing reaches disk before the
/// computation has succeeded.
struct PendingOutput {
    std::string path;
    std::string content;
};

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

/// Writes every pending output (or to `out` when the path is empty) plus a
/// sidecar log next to each file.
void flush(const std::vector<PendingOutput> &outputs, const std::string &command, std::ostream &out) {
    for (const PendingOutput &o : outputs) {
        if (o.path.empty() || o.path == "-") {
            out << o.content;
            continue;
        }
        write_file(o.path, o.content);
        write_file(o.path + ".log", timestamp() + " eprsim " + command + " wrote " + o.path + "\n");
    }
}

RunConfig resolve_config(const std::string &path) {
    std::string chosen = path;
    if (chosen.empty()) {
        if (const char *env = std::getenv(kConfigEnv)) chosen = env;
    }
    return chosen.empty() ? RunConfig{} : load_config(chosen);
}

std::vector<double> parse_list(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const std::string trimmed = cell.substr(0, cell.find_last_not_of(" \t") + 1);
        if (trimmed.empty()) continue;
        // Allow multiples of pi such as "0.5pi" or "pi".
        const auto pos = trimmed.find("pi");
        try {
            if (pos == std::string::npos) {
                out.push_back(std::stod(trimmed));
            } else {
                const std::string factor = trimmed.substr(0, pos);
                out.push_back((factor.empty() || factor == " " ? 1.0 : std::stod(factor)) * kPi);
            }
        } catch (const std::exception &) {
            throw InvalidArgument("cannot parse number '" + trimmed + "'");
        }
    }
    return out;
}

std::string dump(const nlohmann::ordered_json &j) {
    return j.dump(2) + "\n";
}

// simulate ----------------------------------------------------------------

struct SimulateArgs {
    std::string config;
    std::string output;
    std::optional<uint64_t> seed;
    std::optional<int> n_blocks;
    std::optional<int> n_shots;
    std::optional<double> theta;
    std::string engine;
};

int cmd_simulate(const SimulateArgs &a, std::ostream &out) {
    RunConfig config = resolve_config(a.config);
    if (a.seed) config.seed = *a.seed;
    if (a.n_blocks) config.n_blocks = *a.n_blocks;
    if (a.n_shots) config.n_shots = *a.n_shots;
    if (a.theta) config.theta_B = *a.theta;
    if (!a.engine.empty()) config.engine = parse_engine(a.engine);
    config.validate();
    const Dataset data = run_experiment(config);
    std::ostringstream os;
    write_records(os, data);
    flush({{a.output.empty() ? config.output.records : a.output, os.str()}}, "simulate", out);
    return kOk;
}

// analyze -----------------------------------------------------------------

struct AnalyzeArgs {
    std::string records;
    std::string config;
    std::string output;
    std::string csv;
    std::string direction = "A->B";
    std::string calibration;
    bool no_jitter_correction = false;
    bool single_block = false;
    bool force = false;
    int resamples = 200;
    uint64_t bootstrap_seed = 7;
};

int cmd_analyze(const AnalyzeArgs &a, std::ostream &out) {
    const Direction direction = parse_direction(a.direction);
    AnalysisOptions options;
    if (!a.config.empty() || std::getenv(kConfigEnv)) options.schedule = resolve_config(a.config).schedule;
    options.policy.jitter_correction = !a.no_jitter_correction;
    options.single_block = a.single_block;
    options.n_resamples = a.resamples;
    options.bootstrap_seed = a.bootstrap_seed;

    Dataset data = read_records_file(a.records, a.force);
    if (data.records.empty()) throw IncompleteDataset("'" + a.records + "' contains no shot records");
    if (!a.calibration.empty()) {
        std::ifstream in(a.calibration);
        if (!in) throw IoError("cannot open '" + a.calibration + "' for reading");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error &e) {
            throw InvalidArgument("calibration '" + a.calibration + "': invalid JSON (" + e.what() + ")");
        }
        apply_calibration(data.records, calibration_from_json(j));
    }
    const CriteriaReport report = analyze(data.records, options);

    nlohmann::ordered_json j;
    j["direction"] = std::string(to_string(direction));
    j["epr"] = direction == Direction::a_to_b ? report.values.epr_a_to_b : report.values.epr_b_to_a;
    j["epr_error"] = direction == Direction::a_to_b ? report.errors.epr_a_to_b : report.errors.epr_b_to_a;
    j["config_hash"] = data.config_hash;
    j["n_records"] = data.records.size();
    j["report"] = report_to_json(report);

    std::vector<PendingOutput> outputs = {{a.output, dump(j)}};
    if (!a.csv.empty()) {
        std::ostringstream os;
        write_report_csv(os, report);
        outputs.push_back({a.csv, os.str()});
    }
    flush(outputs, "analyze", out);
    return kOk;
}

// sweep-theta ---------------------------------------------------------------

struct SweepArgs {
    std::string config;
    std::string thetas;
    std::string csv;
    std::string svg;
    std::optional<uint64_t> seed;
    std::optional<int> n_blocks;
    bool no_jitter_correction = false;
};

int cmd_sweep(const SweepArgs &a, std::ostream &out) {
    RunConfig config = resolve_config(a.config);
    if (a.seed) config.seed = *a.seed;
    if (a.n_blocks) config.n_blocks = *a.n_blocks;
    std::vector<double> thetas = a.thetas.empty() ? config.thetas : parse_list(a.thetas);
    if (thetas.empty()) thetas = {0.0, 0.25 * kPi, 0.5 * kPi, 0.75 * kPi, kPi};
    config.validate();

    const PreparedState prepared = prepare_state(config);
    AnalysisOptions options;
    options.schedule = config.schedule;
    options.policy.jitter_correction = !a.no_jitter_correction;
    std::vector<SweepRow> rows;
    for (double theta : thetas) {
        RunConfig c = config;
        c.theta_B = theta;
        const Dataset data = run_experiment(c, prepared);
        const CriteriaReport report = analyze(data.records, options);
        rows.push_back({theta, report.values, report.errors});
    }
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    std::vector<PendingOutput> outputs = {{a.csv.empty() ? config.output.csv : a.csv, csv.str()}};
    const std::string svg_path = a.svg.empty() ? config.output.svg : a.svg;
    if (!svg_path.empty()) outputs.push_back({svg_path, sweep_svg(rows)});
    flush(outputs, "sweep-theta", out);
    return kOk;
}

// calibrate -----------------------------------------------------------------

struct CalibrateArgs {
    std::string scan;
    std::string css;
    std::string output;
    double n_nominal = 0.0;
    double detection_sigma = 0.0;
    bool joint = false;
    bool simulate = false;
    double conversion = 1.0;
    std::vector<double> detectivity = {1.0, 1.0, 1.0, 1.0};
    double readout_sigma = 0.0;
    int scan_points = 500;
    int css_shots = 1000;
    uint64_t seed = 1;
};

std::vector<Counts4> read_signals_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_signals_csv(in);
}

int cmd_calibrate(const CalibrateArgs &a, std::ostream &out) {
    if (!(a.n_nominal > 0.0)) throw InvalidArgument("--n-nominal must be positive");
    if (a.simulate) {
        if (a.detectivity.size() != 4) throw InvalidArgument("--detectivity needs four values");
        DetectorModel det;
        det.conversion = a.conversion;
        std::copy(a.detectivity.begin(), a.detectivity.end(), det.detectivity.begin());
        det.readout_sigma = a.readout_sigma;
        const int n = static_cast<int>(std::lround(a.n_nominal));
        std::ostringstream scan, css;
        write_signals_csv(scan, simulate_raw_signals(make_rabi_scan(n, a.scan_points, a.seed), det, a.seed));
        write_signals_csv(
            css, simulate_raw_signals(make_css_shots(n, a.css_shots, a.seed), det, derive_seed(a.seed, stream::calibration, 1)));
        write_file(a.scan, scan.str());
        write_file(a.css, css.str());
    }
    const auto scan = read_signals_file(a.scan);
    const auto css = read_signals_file(a.css);
    const Calibration cal = a.joint ? calibrate_joint(scan, css, a.n_nominal, a.detection_sigma)
                                    : calibrate_sequential(scan, css, a.n_nominal, a.detection_sigma);
    flush({{a.output, dump(calibration_to_json(cal))}}, "calibrate", out);
    return kOk;
}

// pulse-check -----------------------------------------------------------------

struct PulseArgs {
    std::string scheme;
    std::string builtin;
    std::string output;
    double spurious_rabi = 0.0;
};

int cmd_pulse_check(const PulseArgs &a, std::ostream &out) {
    DriveScheme scheme;
    if (!a.builtin.empty()) {
        if (a.builtin == "splitting") {
            scheme = splitting_scheme();
        } else if (a.builtin == "a-rotation") {
            scheme = a_rotation_scheme(a.spurious_rabi > 0.0 ? a.spurious_rabi : 1.0 / (4.0 * 960e-6));
        } else {
            throw InvalidArgument("unknown built-in scheme '" + a.builtin + "' (expected splitting or a-rotation)");
        }
    } else {
        if (a.scheme.empty()) throw InvalidArgument("pulse-check needs a scheme file or --builtin");
        std::ifstream in(a.scheme);
        if (!in) throw IoError("cannot open '" + a.scheme + "' for reading");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error &e) {
            throw InvalidArgument("scheme '" + a.scheme + "': invalid JSON (" + e.what() + ")");
        }
        scheme = scheme_from_json(j);
    }
    std::ostringstream os;
    write_selectivity_csv(os, selectivity_report(scheme));
    flush({{a.output, os.str()}}, "pulse-check", out);
    return kOk;
}

// plot ------------------------------------------------------------------------

struct PlotArgs {
    std::string input;
    std::string output;
};

int cmd_plot(const PlotArgs &a, std::ostream &out) {
    std::ifstream in(a.input);
    if (!in) throw IoError("cannot open '" + a.input + "' for reading");
    const auto rows = read_sweep_csv(in);
    flush({{a.output, sweep_svg(rows)}}, "plot", out);
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Simulator and analysis toolkit for EPR correlations between split spin-squeezed condensates",
                 "eprsim"};
    app.require_subcommand(1);
    std::function<int()> action;

    SimulateArgs sim;
    auto *s = app.add_subcommand("simulate", "Simulate shot records (JSONL)");
    s->add_option("-c,--config", sim.config, "Run configuration JSON (default: $EPRSIM_CONFIG)");
    s->add_option("-o,--output", sim.output, "Record file (default: config output.records or stdout)");
    s->add_option("--seed", sim.seed, "Override the run seed");
    s->add_option("--n-blocks", sim.n_blocks, "Override the number of blocks");
    s->add_option("--n-shots", sim.n_shots, "Override the number of shots");
    s->add_option("--theta", sim.theta, "Rotation of B about x before readout, rad");
    s->add_option("--engine", sim.engine, "exact, gaussian or auto");
    s->callback([&] { action = [&] { return cmd_simulate(sim, out); }; });

    AnalyzeArgs an;
    auto *a = app.add_subcommand("analyze", "Evaluate the criteria on a record file");
    a->add_option("records", an.records, "Record file (JSONL)")->required();
    a->add_option("-c,--config", an.config, "Configuration providing the block schedule");
    a->add_option("-o,--output", an.output, "Report JSON (default: stdout)");
    a->add_option("--csv", an.csv, "Per-block CSV summary");
    a->add_option("--direction", an.direction, "Headline EPR direction: A->B or B->A");
    a->add_option("--calibration", an.calibration, "Calibration JSON converting raw signals to atoms");
    a->add_flag("--no-jitter-correction", an.no_jitter_correction, "Disable the delta_t regression on Sy^B");
    a->add_flag("--single-block", an.single_block, "Report whole-dataset values instead of block averages");
    a->add_flag("--force", an.force, "Accept records from different configurations");
    a->add_option("--resamples", an.resamples, "Bootstrap resamples (>= 100)");
    a->add_option("--bootstrap-seed", an.bootstrap_seed, "Bootstrap seed");
    a->callback([&] { action = [&] { return cmd_analyze(an, out); }; });

    SweepArgs sw;
    auto *w = app.add_subcommand("sweep-theta", "Criteria against the rotation angle of B");
    w->add_option("-c,--config", sw.config, "Run configuration JSON (default: $EPRSIM_CONFIG)");
    w->add_option("--thetas", sw.thetas, "Comma-separated angles in rad; 'pi' multiples allowed");
    w->add_option("--csv", sw.csv, "CSV output (default: config output.csv or stdout)");
    w->add_option("--svg", sw.svg, "SVG plot output");
    w->add_option("--seed", sw.seed, "Override the run seed");
    w->add_option("--n-blocks", sw.n_blocks, "Override the number of blocks");
    w->add_flag("--no-jitter-correction", sw.no_jitter_correction, "Disable the delta_t regression on Sy^B");
    w->callback([&] { action = [&] { return cmd_sweep(sw, out); }; });

    CalibrateArgs ca;
    auto *c = app.add_subcommand("calibrate", "Detectivity and conversion calibration from raw signals");
    c->add_option("--scan", ca.scan, "Rabi scan signals CSV (4 columns)")->required();
    c->add_option("--css", ca.css, "Equal-superposition signals CSV (4 columns)")->required();
    c->add_option("--n-nominal", ca.n_nominal, "Nominal atom number of the CSS shots")->required();
    c->add_option("--detection-sigma", ca.detection_sigma, "Detection noise per state, atoms");
    c->add_option("-o,--output", ca.output, "Calibration JSON (default: stdout)");
    c->add_flag("--joint", ca.joint, "Fit scan and CSS shots in one regression");
    c->add_flag("--simulate", ca.simulate, "First write synthetic signals to --scan and --css");
    c->add_option("--conversion", ca.conversion, "Injected conversion (with --simulate)");
    c->add_option("--detectivity", ca.detectivity, "Injected detectivities (with --simulate)")->expected(4);
    c->add_option("--readout-sigma", ca.readout_sigma, "Injected readout noise, signal units (with --simulate)");
    c->add_option("--scan-points", ca.scan_points, "Scan points (with --simulate)");
    c->add_option("--css-shots", ca.css_shots, "CSS shots (with --simulate)");
    c->add_option("--seed", ca.seed, "Seed (with --simulate)");
    c->callback([&] { action = [&] { return cmd_calibrate(ca, out); }; });

    PulseArgs pu;
    auto *p = app.add_subcommand("pulse-check", "Selectivity table of a drive scheme");
    p->add_option("scheme", pu.scheme, "Drive scheme JSON");
    p->add_option("--builtin", pu.builtin, "splitting or a-rotation");
    p->add_option("--spurious-rabi", pu.spurious_rabi, "Spurious B Rabi frequency for a-rotation, Hz");
    p->add_option("-o,--output", pu.output, "CSV output (default: stdout)");
    p->callback([&] { action = [&] { return cmd_pulse_check(pu, out); }; });

    PlotArgs pl;
    auto *g = app.add_subcommand("plot", "Render a sweep CSV as SVG");
    g->add_option("input", pl.input, "Sweep CSV")->required();
    g->add_option("-o,--output", pl.output, "SVG output (default: stdout)");
    g->callback([&] { action = [&] { return cmd_plot(pl, out); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUserError;
    }

    try {
        return action();
    } catch (const IoError &e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const FormatError &e) {
        err << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const InvalidArgument &e) {
        err << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const SizeLimitError &e) {
        err << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const UndefinedValue &e) {
        err << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const IncompleteDataset &e) {
        err << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const CalibrationFailure &e) {
        err << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const Unidentifiable &e) {
        err << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const ModelError &e) {
        err << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

}  // namespace eprsim
