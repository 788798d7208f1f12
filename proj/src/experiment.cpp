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

#include "qhid/experiment.hpp"

#include "qhid/io.hpp"
#include "qhid/poly.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace qhid::cli {

namespace {

Eigen::VectorXd expand_terms(const liealg::BasisSet& basis, const std::vector<Term>& terms,
                             const ParameterValues* values) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.size());
  for (const auto& t : terms) {
    double coeff = t.scale;
    if (!t.param.empty()) {
      if (!values) {
        coeff = std::abs(t.scale);
      } else {
        const auto it = values->find(t.param);
        if (it == values->end()) throw Error(ErrorCode::Config, "no value for parameter '" + t.param + "'");
        coeff *= it->second;
      }
    }
    v(basis.index_of(t.label)) += coeff;
  }
  return v;
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

}  // namespace

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
  const auto& sys = config_.system;
  try {
    basis_ = sys.basis == "pauli" ? liealg::pauli_basis(sys.qubits) : liealg::gell_mann_basis(sys.dim);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, std::string("system: ") + e.what());
  }
  for (const auto& o : sys.observables) observables_.push_back(expand_terms(*basis_, o.terms, nullptr));

  // directions present in H, independent of the parameter values
  liealg::HamiltonianCoeffs structural;
  structural.basis = basis_;
  structural.a = Eigen::VectorXd::Zero(basis_->size());
  for (const auto& t : sys.hamiltonian)
    if (t.scale != 0.0) structural.a(basis_->index_of(t.label)) = 1.0;
  for (const auto& t : sys.initial) basis_->index_of(t.label);

  const auto mode = sys.filtration == "full" ? statespace::FiltrationMode::FullAlgebra
                                             : statespace::FiltrationMode::HamiltonianDirections;
  accessible_ = statespace::filtration(statespace::observable_support(observables_), structural, mode);
}

ParameterValues Experiment::true_values() const {
  ParameterValues values;
  for (const auto& p : config_.parameters) {
    if (!p.value)
      throw Error(ErrorCode::Config, "parameter '" + p.name + "' is unknown; simulation needs its true value");
    values[p.name] = *p.value;
  }
  return values;
}

liealg::HamiltonianCoeffs Experiment::hamiltonian(const ParameterValues& values) const {
  liealg::HamiltonianCoeffs h;
  h.basis = basis_;
  h.a = expand_terms(*basis_, config_.system.hamiltonian, &values);
  return h;
}

statespace::StateSpaceModel Experiment::quantum_model(const ParameterValues& values) const {
  const Eigen::VectorXd x0 = expand_terms(*basis_, config_.system.initial, &values);
  return statespace::build_reduced_model(hamiltonian(values), observables_, x0, accessible_);
}

int Experiment::noise_order() const {
  const auto& n = config_.noise;
  if (n.source == "psd") return poly::degree(Eigen::Map<const Eigen::VectorXd>(n.psd_den.data(),
                                                                              static_cast<Eigen::Index>(n.psd_den.size())));
  if (n.source == "realization") return static_cast<int>(n.G.size());
  return 0;
}

noisemodel::NoiseTransfer Experiment::noise_transfer() const {
  const auto& n = config_.noise;
  if (n.source == "psd") {
    noisemodel::RationalPsd psd{
        Eigen::Map<const Eigen::VectorXd>(n.psd_num.data(), static_cast<Eigen::Index>(n.psd_num.size())),
        Eigen::Map<const Eigen::VectorXd>(n.psd_den.data(), static_cast<Eigen::Index>(n.psd_den.size()))};
    noisemodel::FactorizeOptions opt;
    if (n.zero_selection == "template") {
      opt.selection = noisemodel::ZeroSelection::Template;
      opt.zero_template = n.zero_template;
    }
    return noisemodel::rescale_time(noisemodel::spectral_factorize(psd, opt), n.psd_time_unit);
  }
  if (n.source == "realization") {
    const auto real = noise_realization();
    const auto tc = tfmatch::transfer_coeffs(real.E, real.G, real.F);
    return {tc.num.front(), tc.den.tail(tc.order())};
  }
  throw Error(ErrorCode::Config, "experiment has no noise model");
}

noisemodel::NoiseRealization Experiment::noise_realization() const {
  const auto& n = config_.noise;
  const int order = noise_order();
  Eigen::VectorXd xi0 = Eigen::VectorXd::Zero(order);
  if (!n.xi0.empty()) {
    if (static_cast<int>(n.xi0.size()) != order)
      throw Error(ErrorCode::Config, "noise.xi0 has " + std::to_string(n.xi0.size()) + " entries, noise order is " +
                                         std::to_string(order));
    xi0 = Eigen::Map<const Eigen::VectorXd>(n.xi0.data(), order);
  } else if (order > 0) {
    xi0(0) = 1.0;
  }
  if (n.source == "psd") return noisemodel::canonical_realization(noise_transfer(), xi0);
  noisemodel::NoiseRealization r;
  r.E = Eigen::MatrixXd::Zero(order, order);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) r.E(i, j) = n.E[i][j];
  r.F = Eigen::VectorXd::Zero(order);
  if (order > 0) r.F(order - 1) = 1.0;
  r.G = Eigen::Map<const Eigen::RowVectorXd>(n.G.data(), order);
  r.xi0 = xi0;
  return r;
}

statespace::AugmentedModel Experiment::true_model() const {
  return statespace::augment(quantum_model(true_values()), noise_realization().as_model());
}

tfmatch::ParameterSpec Experiment::parameter_spec(std::optional<int> noise_order_override) const {
  const auto& id = config_.identify;
  int order = noise_order_override.value_or(id.noise_order);
  if (order < 0) order = noise_order();
  const bool full = id.noise_mode == "full";

  tfmatch::ParameterSpec spec;
  std::vector<std::string> system_unknowns;
  std::set<std::string> in_hamiltonian;
  for (const auto& t : config_.system.hamiltonian)
    if (!t.param.empty()) in_hamiltonian.insert(t.param);
  ParameterValues fixed;
  for (const auto& p : config_.parameters) {
    if (p.bounds) {
      if (in_hamiltonian.count(p.name)) spec.sign_candidates.push_back(spec.size());
      spec.names.push_back(p.name);
      spec.bounds.push_back({p.bounds->first, p.bounds->second});
      system_unknowns.push_back(p.name);
    } else {
      fixed[p.name] = *p.value;
    }
  }
  if (full) {
    for (int i = 0; i < order; ++i)
      for (int j = 0; j < order; ++j) {
        spec.names.push_back("e" + std::to_string(i + 1) + std::to_string(j + 1));
        spec.bounds.push_back({id.entry_bounds.first, id.entry_bounds.second});
      }
  } else {
    for (int i = 0; i < order; ++i) {
      spec.names.push_back("alpha" + std::to_string(i + 1));
      const auto b = i < static_cast<int>(id.alpha_bounds.size()) ? id.alpha_bounds[i] : std::pair{0.0, 100.0};
      spec.bounds.push_back({b.first, b.second});
    }
  }
  for (int i = 0; i < order; ++i) {
    spec.names.push_back("xi0_" + std::to_string(i + 1));
    spec.bounds.push_back({id.xi0_bounds.first, id.xi0_bounds.second});
  }

  const auto self = std::make_shared<const Experiment>(*this);
  spec.builder = [self, fixed, system_unknowns, order, full](const Eigen::VectorXd& p) {
    ParameterValues values = fixed;
    Eigen::Index at = 0;
    for (const auto& name : system_unknowns) values[name] = p(at++);
    noisemodel::NoiseRealization noise;
    noise.E = Eigen::MatrixXd::Zero(order, order);
    if (full) {
      for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) noise.E(i, j) = p(at++);
    } else {
      for (int i = 0; i + 1 < order; ++i) noise.E(i, i + 1) = 1.0;
      for (int j = 0; j < order; ++j) noise.E(order - 1, j) = -p(at + order - 1 - j);
      at += order;
    }
    noise.G = Eigen::RowVectorXd::Ones(order);
    noise.xi0 = p.segment(at, order);
    return statespace::augment(self->quantum_model(values), noise.as_model());
  };
  return spec;
}

SimulationOutput run_simulation(const Experiment& exp) {
  const auto& smp = exp.config().sampling;
  SimulationOutput out;
  out.truth = exp.true_model();
  const int steps = smp.steps();
  out.measured = statespace::simulate(statespace::discretize(out.truth.model, smp.dt), steps, smp.shot_sigma, smp.seed);
  statespace::StateSpaceModel quantum;
  quantum.A = out.truth.model.A.topLeftCorner(out.truth.quantum_dim, out.truth.quantum_dim);
  quantum.C = out.truth.model.C.leftCols(out.truth.quantum_dim);
  quantum.x0 = out.truth.model.x0.head(out.truth.quantum_dim);
  out.clean = statespace::simulate(statespace::discretize(quantum, smp.dt), steps);
  std::vector<std::string> names;
  for (const auto& o : exp.config().system.observables) names.push_back(o.name);
  out.measured.channel_names = names;
  out.clean.channel_names = names;
  return out;
}

tfmatch::IdentifyOptions identify_options(const ExperimentConfig& c) {
  tfmatch::IdentifyOptions opt;
  opt.r = c.identify.r;
  opt.s = c.identify.s;
  opt.gap_ratio = c.identify.gap_ratio;
  opt.solve.starts = c.identify.starts;
  opt.solve.seed = c.identify.seed;
  opt.solve.tolerance = c.identify.tolerance;
  return opt;
}

NoiseCheckOutput run_noise_check(const Experiment& exp) {
  const auto& nc = exp.config().noise_check;
  if (exp.noise_order() == 0) throw Error(ErrorCode::Config, "noise-check needs a noise model");
  const auto tf = exp.noise_transfer();
  const auto real = exp.noise_realization();
  const int hop = std::max(1, static_cast<int>(std::lround(nc.segment * (1.0 - nc.overlap))));
  const int steps = nc.segment + (nc.segments - 1) * hop;

  const auto path_tf = noisemodel::sample_through_transfer(tf, nc.dt, steps, nc.seed);
  const auto path_real = noisemodel::sample_colored_noise(real, nc.dt, steps, nc.seed + 1);
  const auto est_tf = noisemodel::welch_psd(path_tf, nc.segment, nc.overlap);
  const auto est_real = noisemodel::welch_psd(path_real, nc.segment, nc.overlap);

  NoiseCheckOutput out;
  out.omega = est_tf.omega;
  out.welch_tf = est_tf.value;
  out.welch_realization = est_real.value;
  out.theory.resize(out.omega.size());
  for (Eigen::Index k = 0; k < out.omega.size(); ++k)
    out.theory(k) = std::norm(tf(noisemodel::cplx(0.0, out.omega(k))));
  return out;
}

void apply_overrides(ExperimentConfig& c, const Overrides& o, const std::string& command) {
  if (o.seed) {
    if (command == "simulate") c.sampling.seed = *o.seed;
    else if (command == "identify") c.identify.seed = *o.seed;
    else if (command == "noise-check") c.noise_check.seed = *o.seed;
  }
  if (o.starts) {
    if (*o.starts < 1) throw Error(ErrorCode::Config, "--starts must be at least 1");
    c.identify.starts = *o.starts;
  }
}

std::string cmd_simulate(const ExperimentConfig& config, const std::string& out_dir) {
  const Experiment exp(config);
  const auto sim = run_simulation(exp);
  io::ensure_directory(out_dir);
  io::write_trajectory_csv(join_path(out_dir, "trajectory.csv"), sim.measured);

  std::vector<std::string> header{"t"};
  for (const auto& n : sim.clean.channel_names) header.push_back("true_" + n);
  for (const auto& n : sim.measured.channel_names) header.push_back("measured_" + n);
  const int steps = sim.measured.steps(), l = sim.measured.channels();
  Eigen::MatrixXd cols(steps, 1 + 2 * l);
  for (int k = 0; k < steps; ++k) cols(k, 0) = k * sim.measured.dt;
  cols.middleCols(1, l) = sim.clean.samples;
  cols.rightCols(l) = sim.measured.samples;
  io::write_csv(join_path(out_dir, "outputs.csv"), header, cols);

  std::ofstream truth(join_path(out_dir, "ground_truth.txt"));
  if (!truth) throw Error(ErrorCode::Io, "cannot write ground truth sidecar");
  truth << "# ground truth for " << config.name << '\n';
  for (const auto& [name, value] : exp.true_values()) truth << "param " << name << ' ' << io::format_double(value) << '\n';
  io::write_model(truth, sim.truth);

  std::ostringstream msg;
  msg << "simulated " << steps << " samples (dt " << config.sampling.dt << ", model order "
      << sim.truth.model.order() << ") into " << out_dir;
  return msg.str();
}

std::string cmd_identify(const ExperimentConfig& config, const std::string& trajectory_csv,
                         const std::string& out_dir) {
  const Experiment exp(config);
  const auto traj = io::read_trajectory_csv(trajectory_csv);
  if (traj.channels() != static_cast<int>(config.system.observables.size()))
    throw Error(ErrorCode::Config, "trajectory has " + std::to_string(traj.channels()) + " channels, config declares " +
                                       std::to_string(config.system.observables.size()) + " observables");
  if (std::abs(traj.dt - config.sampling.dt) > 1e-9 * config.sampling.dt)
    throw Error(ErrorCode::Config, "trajectory sample interval does not match sampling.dt");
  const auto spec = exp.parameter_spec();
  const auto result = tfmatch::identify(traj, spec, identify_options(config));

  io::ensure_directory(out_dir);
  io::write_singular_values_csv(join_path(out_dir, "singular_values.csv"), result.era.singular_values);
  {
    std::ofstream out(join_path(out_dir, "realization.txt"));
    if (!out) throw Error(ErrorCode::Io, "cannot write realization dump");
    io::write_realization(out, result.era);
  }
  {
    std::ofstream out(join_path(out_dir, "identification.txt"));
    if (!out) throw Error(ErrorCode::Io, "cannot write identification report");
    out << "# experiment " << config.name << '\n';
    io::write_report(out, result);
  }
  io::write_convergence_csv(join_path(out_dir, "convergence.csv"), result);

  std::ostringstream msg;
  msg << "order " << result.era.order << ", " << result.solutions.size() << " solution class(es); best:";
  const auto& best = result.solutions[static_cast<std::size_t>(result.best)];
  for (std::size_t i = 0; i < result.names.size(); ++i)
    msg << ' ' << result.names[i] << '=' << io::format_double(best.params(static_cast<Eigen::Index>(i)));
  msg << " (residual " << best.residual_norm << ")";
  return msg.str();
}

std::string cmd_noise_check(const ExperimentConfig& config, const std::string& out_dir) {
  const Experiment exp(config);
  const auto nc = run_noise_check(exp);
  io::ensure_directory(out_dir);
  Eigen::MatrixXd cols(nc.omega.size(), 4);
  cols << nc.omega, nc.theory, nc.welch_tf, nc.welch_realization;
  io::write_csv(join_path(out_dir, "noise_psd.csv"), {"omega", "S_theory", "S_welch_tf", "S_welch_realization"}, cols);
  return "wrote " + std::to_string(nc.omega.size()) + " PSD bins to " + join_path(out_dir, "noise_psd.csv");
}

void cmd_basis(const ExperimentConfig& config, std::ostream& out) {
  const Experiment exp(config);
  const auto& b = exp.basis();
  out << "# basis dim " << b.dim << ", " << b.size() << " elements, tr(X_j X_j) = " << io::format_double(b.norm) << '\n';
  for (int m = 0; m < b.size(); ++m) {
    out << "element " << m << ' ' << b.labels[m] << '\n';
    for (Eigen::Index r = 0; r < b.dim; ++r) {
      for (Eigen::Index c = 0; c < b.dim; ++c) {
        const auto v = b.elements[m](r, c);
        out << (c ? " " : "") << io::format_double(v.real()) << (v.imag() < 0 ? "" : "+") << io::format_double(v.imag())
            << 'i';
      }
      out << '\n';
    }
  }
  out << "# nonzero structure constants C(j,k,l) (purely imaginary, j < k)\n";
  for (int j = 0; j < b.size(); ++j)
    for (int k = j + 1; k < b.size(); ++k)
      for (int l = 0; l < b.size(); ++l) {
        const auto v = b.structure(j, k, l);
        if (std::abs(v) > 0.0)
          out << b.labels[j] << ' ' << b.labels[k] << ' ' << b.labels[l] << ' ' << io::format_double(v.imag()) << "i\n";
      }
  out << "# accessible set:";
  for (int i : exp.accessible()) out << ' ' << b.labels[i];
  out << '\n';
}

int exit_code(const Error& e) noexcept { return e.is_config() ? 2 : 3; }

}  // namespace qhid::cli
