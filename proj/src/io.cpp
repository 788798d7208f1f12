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

#include "qhid/io.hpp"

#include "qhid/error.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qhid::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory '" + path + "': " + ec.message());
}

void write_csv(const std::string& path, const std::vector<std::string>& header, const Eigen::MatrixXd& columns) {
  if (static_cast<Eigen::Index>(header.size()) != columns.cols())
    throw Error(ErrorCode::Shape, "CSV header does not match column count");
  auto out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (Eigen::Index r = 0; r < columns.rows(); ++r) {
    for (Eigen::Index c = 0; c < columns.cols(); ++c) out << (c ? "," : "") << format_double(columns(r, c));
    out << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const statespace::Trajectory& traj) {
  std::vector<std::string> header{"t"};
  for (int c = 0; c < traj.channels(); ++c)
    header.push_back(c < static_cast<int>(traj.channel_names.size()) ? traj.channel_names[c]
                                                                      : "y" + std::to_string(c + 1));
  Eigen::MatrixXd cols(traj.steps(), traj.channels() + 1);
  for (int k = 0; k < traj.steps(); ++k) cols(k, 0) = k * traj.dt;
  cols.rightCols(traj.channels()) = traj.samples;
  write_csv(path, header, cols);
}

statespace::Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read trajectory '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, "'" + path + "' is empty");
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "t") throw Error(ErrorCode::Io, "'" + path + "' must start with a t column");

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw Error(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                                     " columns");
    std::vector<double> row;
    for (const auto& c : cells) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": bad number '" + c + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw Error(ErrorCode::Length, "trajectory '" + path + "' has fewer than 2 samples");

  statespace::Trajectory traj;
  traj.dt = rows[1][0] - rows[0][0];
  traj.channel_names.assign(header.begin() + 1, header.end());
  traj.samples.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(header.size() - 1));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double expect = rows[0][0] + static_cast<double>(k) * traj.dt;
    if (std::abs(rows[k][0] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
      throw Error(ErrorCode::Length, "trajectory '" + path + "' is not uniformly sampled");
    for (std::size_t c = 1; c < header.size(); ++c)
      traj.samples(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c - 1)) = rows[k][c];
  }
  traj.validate();
  return traj;
}

void write_singular_values_csv(const std::string& path, const Eigen::VectorXd& sv) {
  Eigen::MatrixXd cols(sv.size(), 2);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    cols(i, 0) = static_cast<double>(i + 1);
    cols(i, 1) = sv(i);
  }
  write_csv(path, {"index", "sigma"}, cols);
}

void write_psd_csv(const std::string& path, const noisemodel::PsdEstimate& psd) {
  Eigen::MatrixXd cols(psd.omega.size(), 2);
  cols << psd.omega, psd.value;
  write_csv(path, {"omega", "S"}, cols);
}

void write_matrix(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m) {
  out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << format_double(m(r, c));
    out << '\n';
  }
}

void write_model(std::ostream& out, const statespace::AugmentedModel& model) {
  out << "# augmented model: quantum block first, noise block last\n";
  out << "quantum_dim " << model.quantum_dim << '\n';
  out << "noise_dim " << model.noise_dim << '\n';
  write_matrix(out, "A", model.model.A);
  write_matrix(out, "C", model.model.C);
  write_matrix(out, "x0", model.model.x0);
}

void write_realization(std::ostream& out, const sysid::EraResult& era) {
  out << "# ERA realization, matrices row-major\n";
  out << "order " << era.order << '\n';
  out << "dt " << format_double(era.dt) << '\n';
  out << "reconstruction_residual " << format_double(era.residual) << '\n';
  write_matrix(out, "Ad", era.Ad_hat);
  write_matrix(out, "C", era.C_hat);
  write_matrix(out, "x0", era.x0_hat);
  if (era.A_hat.size() > 0) write_matrix(out, "A", era.A_hat);
}

void write_report(std::ostream& out, const tfmatch::IdentificationResult& res) {
  out << "# identification report\n";
  out << "detected_order " << res.order_selection.order << (res.order_selection.clear_gap ? "" : " (no clear gap)")
      << '\n';
  out << "model_order " << res.target.order() << (res.order_forced ? " (forced)" : "") << '\n';
  out << "converged_starts " << res.converged_starts << " of " << res.histories.size() << '\n';

  out << "\n[singular_values]\n";
  for (Eigen::Index i = 0; i < res.era.singular_values.size(); ++i)
    out << i + 1 << ' ' << format_double(res.era.singular_values(i)) << '\n';

  out << "\n[target_transfer]\n";
  out << "den";
  for (Eigen::Index i = 0; i < res.target.den.size(); ++i) out << ' ' << format_double(res.target.den(i));
  out << '\n';
  for (int ch = 0; ch < res.target.channels(); ++ch) {
    out << "num" << ch + 1;
    for (Eigen::Index i = 0; i < res.target.num[ch].size(); ++i) out << ' ' << format_double(res.target.num[ch](i));
    out << '\n';
  }

  out << "\n[equivalences]\n";
  if (res.equivalence_notes.empty()) out << "none\n";
  for (const auto& note : res.equivalence_notes) out << note << '\n';

  out << "\n[solutions]\n";
  out << "rank residual condition iterations members converged";
  for (const auto& n : res.names) out << ' ' << n;
  out << '\n';
  for (std::size_t i = 0; i < res.solutions.size(); ++i) {
    const auto& s = res.solutions[i];
    out << i + 1 << ' ' << format_double(s.residual_norm) << ' ' << format_double(s.condition) << ' ' << s.iterations
        << ' ' << s.members << ' ' << (s.converged ? "yes" : "no");
    for (Eigen::Index k = 0; k < s.params.size(); ++k) out << ' ' << format_double(s.params(k));
    out << '\n';
  }
  out << "\nbest " << res.best + 1 << '\n';
}

void write_convergence_csv(const std::string& path, const tfmatch::IdentificationResult& res) {
  auto out = open_out(path);
  out << "start,iteration,residual\n";
  for (std::size_t s = 0; s < res.histories.size(); ++s)
    for (std::size_t k = 0; k < res.histories[s].size(); ++k)
      out << s << ',' << k << ',' << format_double(res.histories[s][k]) << '\n';
}

}  // namespace qhid::io
