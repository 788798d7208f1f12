// Copyright 2026 The qhid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Plain-text artifacts: CSV tables at full double precision and the
// structured realization / identification reports.

#include "qhid/noisemodel.hpp"
#include "qhid/statespace.hpp"
#include "qhid/sysid.hpp"
#include "qhid/tfmatch.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace qhid::io {

/// 17 significant digits, enough to round-trip a double.
std::string format_double(double v);

/// Columns are written side by side; all must share one length.
void write_csv(const std::string& path, const std::vector<std::string>& header, const Eigen::MatrixXd& columns);

/// Header t,<channel names>; time column k * dt.
void write_trajectory_csv(const std::string& path, const statespace::Trajectory& traj);
/// Inverse of write_trajectory_csv. Throws io-error on malformed input and
/// length error on non-uniform time stamps.
statespace::Trajectory read_trajectory_csv(const std::string& path);

void write_singular_values_csv(const std::string& path, const Eigen::VectorXd& sv);
void write_psd_csv(const std::string& path, const noisemodel::PsdEstimate& psd);

void write_matrix(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m);
void write_model(std::ostream& out, const statespace::AugmentedModel& model);
void write_realization(std::ostream& out, const sysid::EraResult& era);
void write_report(std::ostream& out, const tfmatch::IdentificationResult& result);
/// start,iteration,residual rows for every descent
void write_convergence_csv(const std::string& path, const tfmatch::IdentificationResult& result);

void ensure_directory(const std::string& path);

}  // namespace qhid::io
