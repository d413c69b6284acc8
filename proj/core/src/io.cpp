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

#include "eprbec/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "eprbec/errors.hpp"

namespace eprbec {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

template <typename T>
T get_as(const json &j, const char *key) {
    try {
        return j.get<T>();
    } catch (const json::exception &) {
        throw InvalidArgument(std::string("config: key '") + key + "' has the wrong type");
    }
}

void reject_unknown(const json &j, const std::set<std::string> &known, const std::string &where) {
    if (!j.is_object()) throw InvalidArgument(where + " must be a JSON object");
    for (const auto &[key, value] : j.items()) {
        if (!known.count(key)) throw InvalidArgument(where + ": unknown key '" + key + "'");
    }
}

json noise_to_json(const NoiseModel &n) {
    return json{{"detection_sigma", n.detection_sigma},
                {"jitter_sigma_dt", n.jitter_sigma_dt},
                {"omega_rf", n.omega_rf},
                {"contrast", n.contrast},
                {"anti_squeeze_excess_db", n.anti_squeeze_excess_db},
                {"detectivity_sx_drop", n.detectivity_sx_drop},
                {"drift_b_per_shot", n.drift_b_per_shot}};
}

void noise_from_json(const json &j, NoiseModel &n) {
    reject_unknown(j,
                   {"detection_sigma", "jitter_sigma_dt", "omega_rf", "contrast", "anti_squeeze_excess_db",
                    "detectivity_sx_drop", "drift_b_per_shot"},
                   "config.noise");
    const std::pair<const char *, double *> fields[] = {
        {"detection_sigma", &n.detection_sigma},
        {"jitter_sigma_dt", &n.jitter_sigma_dt},
        {"omega_rf", &n.omega_rf},
        {"contrast", &n.contrast},
        {"anti_squeeze_excess_db", &n.anti_squeeze_excess_db},
        {"detectivity_sx_drop", &n.detectivity_sx_drop},
        {"drift_b_per_shot", &n.drift_b_per_shot}};
    for (const auto &[key, ptr] : fields) {
        if (j.contains(key)) *ptr = get_as<double>(j.at(key), key);
    }
}

json optional_number(const std::optional<double> &v) {
    return v ? json(*v) : json(nullptr);
}

std::string fnv1a_hex(const std::string &text) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json parse_json(const std::string &text, size_t line) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw FormatError("line " + std::to_string(line) + ": invalid JSON (" + e.what() + ")", line);
    }
}

std::ifstream open_in(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

json config_to_json(const RunConfig &c) {
    json j;
    j["n_atoms"] = c.n_atoms;
    j["squeezing_db"] = optional_number(c.squeezing_db);
    j["chi_t"] = optional_number(c.chi_t);
    j["transmission"] = c.transmission;
    j["noise"] = noise_to_json(c.noise);
    j["schedule"] = json{{"n_z", c.schedule.n_z}, {"n_y", c.schedule.n_y}, {"n_x", c.schedule.n_x}};
    j["n_blocks"] = c.n_blocks;
    j["n_shots"] = c.n_shots ? json(*c.n_shots) : json(nullptr);
    j["theta_B"] = c.theta_B;
    j["thetas"] = c.thetas;
    j["engine"] = std::string(to_string(c.engine));
    j["exact_limit"] = c.exact_limit;
    j["seed"] = c.seed;
    j["output"] = json{{"records", c.output.records},
                       {"report", c.output.report},
                       {"csv", c.output.csv},
                       {"svg", c.output.svg}};
    return j;
}

RunConfig config_from_json(const json &j) {
    reject_unknown(j,
                   {"preset", "n_atoms", "squeezing_db", "chi_t", "transmission", "noise", "schedule", "n_blocks",
                    "n_shots", "theta_B", "thetas", "engine", "exact_limit", "seed", "output"},
                   "config");
    RunConfig c;
    if (j.contains("preset")) {
        const std::string preset = get_as<std::string>(j.at("preset"), "preset");
        if (preset == "lab") {
            c = lab_config();
        } else if (preset != "default") {
            throw InvalidArgument("config: unknown preset '" + preset + "' (expected lab or default)");
        }
    }
    if (j.contains("n_atoms")) c.n_atoms = get_as<int>(j.at("n_atoms"), "n_atoms");
    auto opt_double = [&](const char *key, std::optional<double> &dst) {
        if (!j.contains(key)) return;
        dst = j.at(key).is_null() ? std::nullopt : std::optional<double>(get_as<double>(j.at(key), key));
    };
    opt_double("squeezing_db", c.squeezing_db);
    opt_double("chi_t", c.chi_t);
    if (j.contains("transmission")) c.transmission = get_as<double>(j.at("transmission"), "transmission");
    if (j.contains("noise")) noise_from_json(j.at("noise"), c.noise);
    if (j.contains("schedule")) {
        const json &s = j.at("schedule");
        reject_unknown(s, {"n_z", "n_y", "n_x"}, "config.schedule");
        if (s.contains("n_z")) c.schedule.n_z = get_as<int>(s.at("n_z"), "n_z");
        if (s.contains("n_y")) c.schedule.n_y = get_as<int>(s.at("n_y"), "n_y");
        if (s.contains("n_x")) c.schedule.n_x = get_as<int>(s.at("n_x"), "n_x");
    }
    if (j.contains("n_blocks")) c.n_blocks = get_as<int>(j.at("n_blocks"), "n_blocks");
    if (j.contains("n_shots")) {
        c.n_shots = j.at("n_shots").is_null() ? std::nullopt : std::optional<int>(get_as<int>(j.at("n_shots"), "n_shots"));
    }
    if (j.contains("theta_B")) c.theta_B = get_as<double>(j.at("theta_B"), "theta_B");
    if (j.contains("thetas")) c.thetas = get_as<std::vector<double>>(j.at("thetas"), "thetas");
    if (j.contains("engine")) c.engine = parse_engine(get_as<std::string>(j.at("engine"), "engine"));
    if (j.contains("exact_limit")) c.exact_limit = get_as<int>(j.at("exact_limit"), "exact_limit");
    if (j.contains("seed")) c.seed = get_as<uint64_t>(j.at("seed"), "seed");
    if (j.contains("output")) {
        const json &o = j.at("output");
        reject_unknown(o, {"records", "report", "csv", "svg"}, "config.output");
        if (o.contains("records")) c.output.records = get_as<std::string>(o.at("records"), "output.records");
        if (o.contains("report")) c.output.report = get_as<std::string>(o.at("report"), "output.report");
        if (o.contains("csv")) c.output.csv = get_as<std::string>(o.at("csv"), "output.csv");
        if (o.contains("svg")) c.output.svg = get_as<std::string>(o.at("svg"), "output.svg");
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in = open_in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error &e) {
        throw InvalidArgument("config '" + path + "': invalid JSON (" + e.what() + ")");
    }
    return config_from_json(j);
}

std::string config_hash(const RunConfig &config) {
    json j = config_to_json(config);
    j.erase("output");
    return fnv1a_hex(j.dump());
}

ojson record_to_json(const ShotRecord &r) {
    ojson j;
    j["n1A"] = r.n1A;
    j["n2A"] = r.n2A;
    j["n1B"] = r.n1B;
    j["n2B"] = r.n2B;
    j["basis_A"] = std::string(to_string(r.setting.basis_A));
    j["basis_B"] = std::string(to_string(r.setting.basis_B));
    j["theta_B"] = r.setting.theta_B;
    j["delta_t_s"] = r.delta_t;
    j["shot_id"] = r.shot_id;
    j["seed"] = r.seed;
    return j;
}

ShotRecord record_from_json(const json &j) {
    if (!j.is_object()) throw InvalidArgument("record is not a JSON object");
    static const char *kRequired[] = {"n1A", "n2A", "n1B", "n2B", "basis_A", "basis_B", "theta_B", "delta_t_s",
                                      "shot_id"};
    for (const char *key : kRequired) {
        if (!j.contains(key)) throw InvalidArgument(std::string("record lacks field '") + key + "'");
    }
    ShotRecord r;
    try {
        r.n1A = j.at("n1A").get<double>();
        r.n2A = j.at("n2A").get<double>();
        r.n1B = j.at("n1B").get<double>();
        r.n2B = j.at("n2B").get<double>();
        r.setting.basis_A = parse_basis(j.at("basis_A").get<std::string>());
        r.setting.basis_B = parse_basis(j.at("basis_B").get<std::string>());
        r.setting.theta_B = j.at("theta_B").get<double>();
        r.delta_t = j.at("delta_t_s").get<double>();
        r.shot_id = j.at("shot_id").get<int64_t>();
        if (j.contains("seed")) r.seed = j.at("seed").get<uint64_t>();
    } catch (const json::exception &e) {
        throw InvalidArgument(std::string("record field has the wrong type (") + e.what() + ")");
    }
    for (double v : {r.n1A, r.n2A, r.n1B, r.n2B, r.delta_t, r.setting.theta_B}) {
        if (!std::isfinite(v)) throw InvalidArgument("record contains a non-finite value");
    }
    return r;
}

void write_records(std::ostream &out, const Dataset &data) {
    ojson header;
    header["type"] = "header";
    header["format"] = kRecordFormat;
    header["config_hash"] = data.config_hash;
    header["seed"] = data.seed;
    header["n_atoms"] = data.n_atoms;
    header["units"] = ojson{{"counts", "atoms"}, {"theta_B", "rad"}, {"delta_t_s", "s"}};
    out << header.dump() << '\n';
    for (const ShotRecord &r : data.records) out << record_to_json(r).dump() << '\n';
}

void write_records_file(const std::string &path, const Dataset &data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_records(out, data);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

Dataset read_records(std::istream &in, bool force) {
    Dataset data;
    bool have_header = false;
    std::set<int64_t> ids;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const json j = parse_json(line, line_no);
        if (j.is_object() && j.contains("type") && j.at("type") == "header") {
            if (!j.contains("format") || j.at("format") != kRecordFormat) {
                throw FormatError("line " + std::to_string(line_no) + ": unsupported record format", line_no);
            }
            const std::string hash = j.value("config_hash", std::string());
            if (have_header && hash != data.config_hash && !force) {
                throw FormatError("line " + std::to_string(line_no) + ": config hash " + hash +
                                      " differs from " + data.config_hash + " (use --force to mix runs)",
                                  line_no);
            }
            if (!have_header) {
                data.config_hash = hash;
                data.seed = j.value("seed", uint64_t{0});
                data.n_atoms = j.value("n_atoms", 0);
                have_header = true;
            }
            continue;
        }
        if (!have_header) {
            throw FormatError("line " + std::to_string(line_no) + ": record before the header line", line_no);
        }
        try {
            data.records.push_back(record_from_json(j));
        } catch (const InvalidArgument &e) {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }
        if (!ids.insert(data.records.back().shot_id).second && !force) {
            throw FormatError("line " + std::to_string(line_no) + ": duplicate shot_id " +
                                  std::to_string(data.records.back().shot_id),
                              line_no);
        }
    }
    if (in.bad()) throw IoError("read error");
    if (!have_header) throw FormatError("empty record file (no header line)", line_no);
    return data;
}

Dataset read_records_file(const std::string &path, bool force) {
    std::ifstream in = open_in(path);
    return read_records(in, force);
}

ojson values_to_json(const CriteriaValues &v) {
    ojson j;
    const auto a = v.to_array();
    for (size_t k = 0; k < a.size(); ++k) j[CriteriaValues::names()[k]] = a[k];
    return j;
}

namespace {

ojson gains_to_json(const GainSet &g) {
    return ojson{{"g_z", g.g_z}, {"g_y", g.g_y}, {"c_z", g.c_z}, {"c_y", g.c_y}, {"g_dt", g.g_dt}};
}

ojson counts_to_json(const SettingCounts &c) {
    return ojson{{"z", c.z}, {"y", c.y}, {"x_A", c.x_a}, {"x_B", c.x_b}};
}

}  // namespace

ojson report_to_json(const CriteriaReport &r) {
    ojson j;
    j["values"] = values_to_json(r.values);
    j["errors"] = values_to_json(r.errors);
    j["error_method"] = r.error_method;
    j["error_note"] = "standard errors are nonparametric bootstrap estimates chosen by this tool";
    j["n_resamples"] = r.n_resamples;
    j["single_block"] = r.single_block;
    j["jitter_correction"] = r.policy.jitter_correction;
    j["n_blocks"] = r.n_blocks;
    j["n_shots_used"] = counts_to_json(r.n_shots_used);
    j["block_mean"] = r.n_blocks > 0 ? values_to_json(r.block_mean) : ojson(nullptr);
    j["whole_dataset"] = values_to_json(r.whole_dataset);
    j["gains"] = ojson{{"A->B", gains_to_json(r.gains_a_to_b)},
                       {"B->A", gains_to_json(r.gains_b_to_a)},
                       {"ent", ojson{{"g_z", r.gains_ent.g_z}, {"g_y", r.gains_ent.g_y}}}};
    ojson blocks = ojson::array();
    for (size_t i = 0; i < r.per_block.size(); ++i) {
        const BlockCriteria &b = r.per_block[i];
        ojson jb;
        jb["block"] = i;
        jb["values"] = values_to_json(b.values);
        jb["gains"] = ojson{{"A->B", gains_to_json(b.gains_a_to_b)},
                            {"B->A", gains_to_json(b.gains_b_to_a)},
                            {"ent", ojson{{"g_z", b.gains_ent.g_z}, {"g_y", b.gains_ent.g_y}}}};
        jb["counts"] = counts_to_json(b.counts);
        blocks.push_back(jb);
    }
    j["per_block"] = blocks;
    return j;
}

void write_report_csv(std::ostream &out, const CriteriaReport &r) {
    out << "scope,block";
    for (const char *name : CriteriaValues::names()) out << ',' << name;
    out << ",n_z,n_y,n_x_A,n_x_B\n";
    auto row = [&](const std::string &scope, const std::string &block, const CriteriaValues &v,
                   const SettingCounts &c) {
        out << scope << ',' << block;
        for (double x : v.to_array()) out << ',' << format_double(x);
        out << ',' << c.z << ',' << c.y << ',' << c.x_a << ',' << c.x_b << '\n';
    };
    for (size_t i = 0; i < r.per_block.size(); ++i) {
        row("block", std::to_string(i), r.per_block[i].values, r.per_block[i].counts);
    }
    if (r.n_blocks > 0) row("block_mean", "", r.block_mean, r.n_shots_used);
    row("whole_dataset", "", r.whole_dataset, r.n_shots_used);
    row("error", "", r.errors, r.n_shots_used);
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows) {
    out << "theta";
    for (const char *name : CriteriaValues::names()) out << ',' << name;
    for (const char *name : CriteriaValues::names()) out << ",err_" << name;
    out << '\n';
    for (const SweepRow &r : rows) {
        out << format_double(r.theta);
        for (double x : r.values.to_array()) out << ',' << format_double(x);
        for (double x : r.errors.to_array()) out << ',' << format_double(x);
        out << '\n';
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream &in) {
    std::string line;
    size_t line_no = 0;
    if (!std::getline(in, line)) throw FormatError("sweep CSV is empty", 0);
    ++line_no;
    constexpr size_t K = CriteriaValues::kCount;
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                size_t used = 0;
                cells.push_back(std::stod(cell, &used));
            } catch (const std::exception &) {
                throw FormatError("line " + std::to_string(line_no) + ": non-numeric cell '" + cell + "'", line_no);
            }
        }
        if (cells.size() != 1 + 2 * K) {
            throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(1 + 2 * K) +
                                  " columns",
                              line_no);
        }
        SweepRow r;
        r.theta = cells[0];
        std::array<double, K> v{}, e{};
        for (size_t k = 0; k < K; ++k) {
            v[k] = cells[1 + k];
            e[k] = cells[1 + K + k];
        }
        r.values = CriteriaValues::from_array(v);
        r.errors = CriteriaValues::from_array(e);
        rows.push_back(r);
    }
    return rows;
}

DriveScheme scheme_from_json(const json &j) {
    DriveScheme s;
    try {
        reject_unknown(j, {"levels", "tones", "duration_s", "initial"}, "scheme");
        for (const json &l : j.at("levels")) {
            reject_unknown(l, {"label", "energy_hz"}, "scheme.levels[]");
            s.levels.push_back({l.at("label").get<std::string>(), l.at("energy_hz").get<double>()});
        }
        for (const json &t : j.at("tones")) {
            reject_unknown(t, {"pair", "rabi_hz", "detuning_hz", "spurious"}, "scheme.tones[]");
            Tone tone;
            const auto pair = t.at("pair").get<std::vector<std::string>>();
            if (pair.size() != 2) throw InvalidArgument("scheme: a pair needs exactly two labels");
            tone.lower = pair[0];
            tone.upper = pair[1];
            tone.rabi_hz = t.at("rabi_hz").get<double>();
            tone.detuning_hz = t.value("detuning_hz", 0.0);
            if (t.contains("spurious")) {
                for (const json &sp : t.at("spurious")) {
                    reject_unknown(sp, {"pair", "rabi_hz"}, "scheme.tones[].spurious[]");
                    const auto sp_pair = sp.at("pair").get<std::vector<std::string>>();
                    if (sp_pair.size() != 2) throw InvalidArgument("scheme: a pair needs exactly two labels");
                    tone.spurious.push_back({sp_pair[0], sp_pair[1], sp.at("rabi_hz").get<double>()});
                }
            }
            s.tones.push_back(tone);
        }
        s.duration_s = j.at("duration_s").get<double>();
        if (j.contains("initial")) s.initial = j.at("initial").get<std::map<std::string, double>>();
    } catch (const json::exception &e) {
        throw InvalidArgument(std::string("scheme: malformed JSON (") + e.what() + ")");
    }
    s.validate();
    return s;
}

ojson scheme_to_json(const DriveScheme &s) {
    ojson j;
    ojson levels = ojson::array();
    for (const Level &l : s.levels) levels.push_back(ojson{{"label", l.label}, {"energy_hz", l.energy_hz}});
    j["levels"] = levels;
    ojson tones = ojson::array();
    for (const Tone &t : s.tones) {
        ojson jt{{"pair", {t.lower, t.upper}}, {"rabi_hz", t.rabi_hz}, {"detuning_hz", t.detuning_hz}};
        ojson sp = ojson::array();
        for (const SpuriousChannel &c : t.spurious) sp.push_back(ojson{{"pair", {c.lower, c.upper}}, {"rabi_hz", c.rabi_hz}});
        jt["spurious"] = sp;
        tones.push_back(jt);
    }
    j["tones"] = tones;
    j["duration_s"] = s.duration_s;
    if (!s.initial.empty()) j["initial"] = s.initial;
    return j;
}

void write_selectivity_csv(std::ostream &out, const std::vector<SelectivityRow> &rows) {
    out << "transition,rabi_hz,detuning_hz,peak_transfer,transfer_at_duration,simulated_population\n";
    for (const SelectivityRow &r : rows) {
        out << r.transition << ',' << format_double(r.rabi_hz) << ',' << format_double(r.detuning_hz) << ','
            << format_double(r.peak_transfer) << ',' << format_double(r.transfer_at_duration) << ',';
        if (r.simulated_population) out << format_double(*r.simulated_population);
        out << '\n';
    }
}

ojson calibration_to_json(const Calibration &c) {
    return ojson{{"conversion", c.conversion},
                 {"conversion_se", c.conversion_se},
                 {"detectivity", c.detectivity},
                 {"detectivity_se", c.detectivity_se}};
}

Calibration calibration_from_json(const json &j) {
    Calibration c;
    try {
        c.conversion = j.at("conversion").get<double>();
        c.conversion_se = j.value("conversion_se", 0.0);
        c.detectivity = j.at("detectivity").get<Counts4>();
        if (j.contains("detectivity_se")) c.detectivity_se = j.at("detectivity_se").get<Counts4>();
    } catch (const json::exception &e) {
        throw InvalidArgument(std::string("calibration: malformed JSON (") + e.what() + ")");
    }
    if (!(c.conversion > 0.0)) throw InvalidArgument("calibration: conversion must be positive");
    for (double d : c.detectivity) {
        if (!(d > 0.0)) throw InvalidArgument("calibration: detectivities must be positive");
    }
    return c;
}

std::vector<Counts4> read_signals_csv(std::istream &in) {
    std::vector<Counts4> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> cells;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                cells.push_back(std::stod(cell));
            } catch (const std::exception &) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (line_no == 1) continue;
            throw FormatError("line " + std::to_string(line_no) + ": non-numeric signal", line_no);
        }
        if (cells.size() != 4) {
            throw FormatError("line " + std::to_string(line_no) + ": expected 4 signal columns", line_no);
        }
        out.push_back({cells[0], cells[1], cells[2], cells[3]});
    }
    return out;
}

void write_signals_csv(std::ostream &out, const std::vector<Counts4> &signals) {
    out << "s1A,s2A,s1B,s2B\n";
    for (const Counts4 &s : signals) {
        out << format_double(s[0]) << ',' << format_double(s[1]) << ',' << format_double(s[2]) << ','
            << format_double(s[3]) << '\n';
    }
}

void apply_calibration(std::vector<ShotRecord> &records, const Calibration &calibration) {
    for (ShotRecord &r : records) {
        const Counts4 c = calibration.invert({r.n1A, r.n2A, r.n1B, r.n2B});
        r.n1A = c[0];
        r.n2A = c[1];
        r.n1B = c[2];
        r.n2B = c[3];
    }
}

ojson state_to_json(const DickeState &state) {
    ojson amps = ojson::array();
    for (Eigen::Index k = 0; k < state.amplitudes().size(); ++k) {
        amps.push_back({state.amplitude(static_cast<int>(k)).real(), state.amplitude(static_cast<int>(k)).imag()});
    }
    return ojson{{"n_atoms", state.n_atoms()}, {"amplitudes", amps}};
}

DickeState state_from_json(const json &j) {
    try {
        const int n = j.at("n_atoms").get<int>();
        const auto &amps = j.at("amplitudes");
        Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
        for (size_t k = 0; k < amps.size(); ++k) {
            const auto pair = amps[k].get<std::array<double, 2>>();
            v[static_cast<Eigen::Index>(k)] = cplx(pair[0], pair[1]);
        }
        return DickeState(n, v);
    } catch (const json::exception &e) {
        throw InvalidArgument(std::string("state: malformed JSON (") + e.what() + ")");
    }
}

}  // namespace eprbec
