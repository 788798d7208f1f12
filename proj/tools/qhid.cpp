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

#include "qhid/config.hpp"
#include "qhid/error.hpp"
#include "qhid/experiment.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string trajectory;
  std::optional<std::uint64_t> seed;
  std::optional<int> starts;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "experiment YAML file")->required();
  sub->add_option("--out", f.out, "output directory (default out/<name>)");
  sub->add_option("--seed", f.seed, "override the RNG seed of this stage");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian identification from measured expectation values"};
  app.require_subcommand(1);
  Flags f;

  auto* simulate = app.add_subcommand("simulate", "simulate the configured experiment");
  add_common(simulate, f);
  auto* identify = app.add_subcommand("identify", "identify unknown parameters from a trajectory");
  add_common(identify, f);
  identify->add_option("--trajectory", f.trajectory, "trajectory CSV (default <out>/trajectory.csv)");
  identify->add_option("--starts", f.starts, "number of multistart initial points");
  auto* noise = app.add_subcommand("noise-check", "compare sampled noise PSD with the model");
  add_common(noise, f);
  auto* basis = app.add_subcommand("basis", "print the basis, structure constants and accessible set");
  basis->add_option("--config", f.config, "experiment YAML file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    auto config = qhid::cli::load_config(f.config);
    const std::string out = f.out.empty() ? (std::filesystem::path("out") / config.name).string() : f.out;
    const std::string command = app.get_subcommands().front()->get_name();
    qhid::cli::apply_overrides(config, {f.seed, f.starts}, command);

    if (command == "simulate") {
      std::cout << qhid::cli::cmd_simulate(config, out) << '\n';
    } else if (command == "identify") {
      const std::string traj =
          f.trajectory.empty() ? (std::filesystem::path(out) / "trajectory.csv").string() : f.trajectory;
      std::cout << qhid::cli::cmd_identify(config, traj, out) << '\n';
    } else if (command == "noise-check") {
      std::cout << qhid::cli::cmd_noise_check(config, out) << '\n';
    } else {
      qhid::cli::cmd_basis(config, std::cout);
    }
  } catch (const qhid::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qhid::cli::exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
