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

#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eprbec/calibration.hpp"
#include "eprbec/criteria.hpp"
#include "eprbec/experiment.hpp"
#include "eprbec/pulses.hpp"
#include "eprbec/spin_core.hpp"

namespace eprbec {

inline constexpr const char *kRecordFormat = "eprsim-shots/1";

// Configuration ------------------------------------------------------------

nlohmann::json config_to_json(const RunConfig &config);
/// Starts from the defaults (or lab_config() when "preset" is "lab") and
/// overlays the given keys. Unknown keys and wrong types throw InvalidArgument.
RunConfig config_from_json(const nlohmann::json &j);
/// Throws IoError if unreadable, InvalidArgument if malformed.
RunConfig load_config(const std::string &path);

/// FNV-1a 64 of the canonical JSON of the configuration without its output
/// section, as 16 hex digits.
std::string config_hash(const RunConfig &config);

// Shot records --------------------------------------------------------------

/// One header line, then one JSON object per shot.
void write_records(std::ostream &out, const Dataset &data);
void write_records_file(const std::string &path, const Dataset &data);

/// Throws FormatError (with the 1-based line) for malformed lines, a missing
/// header, or headers with different config hashes unless `force` is set.
Dataset read_records(std::istream &in, bool force = false);
Dataset read_records_file(const std::string &path, bool force = false);

nlohmann::ordered_json record_to_json(const ShotRecord &record);
ShotRecord record_from_json(const nlohmann::json &j);

// Reports -------------------------------------------------------------------

nlohmann::ordered_json values_to_json(const CriteriaValues &values);
nlohmann::ordered_json report_to_json(const CriteriaReport &report);
/// One row per block, then block_mean, whole_dataset and error rows.
void write_report_csv(std::ostream &out, const CriteriaReport &report);

struct SweepRow {
    double theta = 0.0;
    CriteriaValues values;
    CriteriaValues errors;
};

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows);
std::vector<SweepRow> read_sweep_csv(std::istream &in);

/// Line plot of E_Ent, E_EPR(B->A) and E_Hei^A against theta with error bars
/// and the unit threshold.
std::string sweep_svg(const std::vector<SweepRow> &rows);

// Pulses --------------------------------------------------------------------

DriveScheme scheme_from_json(const nlohmann::json &j);
nlohmann::ordered_json scheme_to_json(const DriveScheme &scheme);
void write_selectivity_csv(std::ostream &out, const std::vector<SelectivityRow> &rows);

// Calibration ---------------------------------------------------------------

nlohmann::ordered_json calibration_to_json(const Calibration &calibration);
Calibration calibration_from_json(const nlohmann::json &j);
/// Four comma-separated signal columns per line; a non-numeric first line is
/// taken as a header.
std::vector<Counts4> read_signals_csv(std::istream &in);
void write_signals_csv(std::ostream &out, const std::vector<Counts4> &signals);

/// Converts raw-signal records to atom counts.
void apply_calibration(std::vector<ShotRecord> &records, const Calibration &calibration);

// States --------------------------------------------------------------------

/// {"n_atoms": N, "amplitudes": [[re, im], ...]} with m ascending.
nlohmann::ordered_json state_to_json(const DickeState &state);
DickeState state_from_json(const nlohmann::json &j);

}  // namespace eprbec
