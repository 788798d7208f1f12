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

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qhid::cli {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Config, where + ": " + what);
}

template <class T>
T get(const YAML::Node& node, const std::string& where) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(where, "has the wrong type");
  }
}

template <class T>
void read_opt(const YAML::Node& parent, const char* key, T& out, const std::string& where) {
  if (const auto n = parent[key]) out = get<T>(n, where + "." + key);
}

std::pair<double, double> read_interval(const YAML::Node& n, const std::string& where) {
  const auto v = get<std::vector<double>>(n, where);
  if (v.size() != 2) fail(where, "must be a [lo, hi] pair");
  if (!(v[0] <= v[1]) || !std::isfinite(v[0]) || !std::isfinite(v[1])) fail(where, "needs finite lo <= hi");
  return {v[0], v[1]};
}

Term read_term(const YAML::Node& n, const std::string& where) {
  if (!n.IsMap()) fail(where, "must be a mapping with label/scale/param");
  Term t;
  if (!n["label"]) fail(where, "is missing 'label'");
  t.label = get<std::string>(n["label"], where + ".label");
  read_opt(n, "scale", t.scale, where);
  read_opt(n, "param", t.param, where);
  return t;
}

std::vector<Term> read_terms(const YAML::Node& n, const std::string& where) {
  std::vector<Term> out;
  if (!n) return out;
  if (!n.IsSequence()) fail(where, "must be a list");
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(read_term(n[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

void check_known_keys(const YAML::Node& n, const std::set<std::string>& keys, const std::string& where) {
  if (!n.IsMap()) fail(where, "must be a mapping");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!keys.count(key)) fail(where, "unknown key '" + key + "'");
  }
}

void validate(const ExperimentConfig& c) {
  const auto& s = c.system;
  if (s.basis != "pauli" && s.basis != "gell-mann") fail("system.basis", "must be 'pauli' or 'gell-mann'");
  if (s.filtration != "hamiltonian" && s.filtration != "full")
    fail("system.filtration", "must be 'hamiltonian' or 'full'");
  if (s.observables.empty()) fail("system.observables", "at least one observable is required");
  if (s.hamiltonian.empty()) fail("system.hamiltonian", "at least one term is required");

  std::set<std::string> names;
  for (const auto& p : c.parameters) {
    if (!names.insert(p.name).second) fail("parameters." + p.name, "declared twice");
    if (p.value && !std::isfinite(*p.value)) fail("parameters." + p.name, "value must be finite");
  }
  auto check_param = [&](const Term& t, const std::string& where) {
    if (!t.param.empty() && !names.count(t.param)) fail(where, "references undeclared parameter '" + t.param + "'");
  };
  for (const auto& t : s.hamiltonian) check_param(t, "system.hamiltonian");
  for (const auto& t : s.initial) check_param(t, "system.initial");
  for (const auto& o : s.observables)
    for (const auto& t : o.terms)
      if (!t.param.empty()) fail("system.observables." + o.name, "observable terms cannot reference parameters");

  const auto& n = c.noise;
  if (n.source != "none" && n.source != "psd" && n.source != "realization")
    fail("noise.source", "must be 'none', 'psd' or 'realization'");
  if (n.source == "psd") {
    if (n.psd_den.empty()) fail("noise.psd.den", "is required");
    std::size_t num_deg = n.psd_num.size(), den_deg = n.psd_den.size();
    std::size_t lead = 0;
    while (lead < n.psd_num.size() && n.psd_num[lead] == 0.0) ++lead;
    num_deg -= lead;
    lead = 0;
    while (lead < n.psd_den.size() && n.psd_den[lead] == 0.0) ++lead;
    den_deg -= lead;
    if (num_deg == 0) fail("noise.psd.num", "must not be zero");
    if (num_deg >= den_deg) fail("noise.psd", "must be strictly proper (numerator degree below denominator degree)");
    if (n.zero_selection != "minimum_phase" && n.zero_selection != "template")
      fail("noise.zero_selection", "must be 'minimum_phase' or 'template'");
    if (!(n.psd_time_unit > 0.0)) fail("noise.psd_time_unit", "must be positive");
  }
  if (n.source == "realization") {
    if (n.E.size() != n.G.size()) fail("noise.realization", "E must be square and match the length of G");
    for (const auto& row : n.E)
      if (row.size() != n.G.size()) fail("noise.realization.E", "must be square");
  }
  if (c.sampling.dt <= 0.0 || !std::isfinite(c.sampling.dt)) fail("sampling.dt", "must be positive");
  if (c.sampling.duration <= 0.0) fail("sampling.duration", "must be positive");
  if (c.sampling.shot_sigma < 0.0) fail("sampling.shot_sigma", "must be nonnegative");
  if (c.sampling.steps() < 2) fail("sampling", "duration / dt must give at least 2 samples");
  const auto& id = c.identify;
  if (id.r < 1 || id.s < 1) fail("identify", "r and s must be positive");
  if (id.starts < 1) fail("identify.starts", "must be at least 1");
  if (!(id.gap_ratio > 0.0 && id.gap_ratio < 1.0)) fail("identify.gap_ratio", "must lie in (0, 1)");
  if (id.noise_mode != "companion" && id.noise_mode != "full")
    fail("identify.noise_mode", "must be 'companion' or 'full'");
  const auto& nc = c.noise_check;
  if (nc.dt <= 0.0 || nc.segment < 2 || nc.segments < 1 || nc.overlap < 0.0 || nc.overlap >= 1.0)
    fail("noise_check", "needs dt > 0, segment >= 2, segments >= 1, 0 <= overlap < 1");
}

}  // namespace

int SamplingConfig::steps() const { return static_cast<int>(std::lround(duration / dt)); }

const ParameterDecl* ExperimentConfig::find_parameter(std::string_view n) const {
  for (const auto& p : parameters)
    if (p.name == n) return &p;
  return nullptr;
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    fail("config", std::string("YAML parse error: ") + e.what());
  }
  if (!root.IsMap()) fail("config", "top level must be a mapping");
  check_known_keys(root, {"name", "time_unit", "system", "parameters", "noise", "sampling", "identify", "noise_check"},
                   "config");

  ExperimentConfig c;
  read_opt(root, "name", c.name, "config");
  read_opt(root, "time_unit", c.time_unit, "config");

  const auto sys = root["system"];
  if (!sys) fail("config", "missing 'system'");
  check_known_keys(sys, {"basis", "qubits", "dim", "filtration", "hamiltonian", "observables", "initial"}, "system");
  read_opt(sys, "basis", c.system.basis, "system");
  read_opt(sys, "qubits", c.system.qubits, "system");
  read_opt(sys, "dim", c.system.dim, "system");
  read_opt(sys, "filtration", c.system.filtration, "system");
  c.system.hamiltonian = read_terms(sys["hamiltonian"], "system.hamiltonian");
  c.system.initial = read_terms(sys["initial"], "system.initial");
  if (const auto obs = sys["observables"]) {
    if (!obs.IsSequence()) fail("system.observables", "must be a list");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::string where = "system.observables[" + std::to_string(i) + "]";
      check_known_keys(obs[i], {"name", "terms"}, where);
      Observable o;
      o.name = obs[i]["name"] ? get<std::string>(obs[i]["name"], where + ".name") : "y" + std::to_string(i + 1);
      o.terms = read_terms(obs[i]["terms"], where + ".terms");
      if (o.terms.empty()) fail(where, "needs at least one term");
      c.system.observables.push_back(std::move(o));
    }
  }

  if (const auto params = root["parameters"]) {
    if (!params.IsMap()) fail("parameters", "must be a mapping of name -> {value, bounds}");
    for (const auto& kv : params) {
      ParameterDecl p;
      p.name = kv.first.as<std::string>();
      const std::string where = "parameters." + p.name;
      const auto& body = kv.second;
      if (body.IsScalar()) {
        if (body.as<std::string>() != "unknown") p.value = get<double>(body, where);
      } else {
        check_known_keys(body, {"value", "bounds"}, where);
        if (const auto v = body["value"]) {
          if (!(v.IsScalar() && v.as<std::string>() == "unknown")) p.value = get<double>(v, where + ".value");
        }
        if (const auto b = body["bounds"]) p.bounds = read_interval(b, where + ".bounds");
      }
      if (!p.value && !p.bounds) fail(where, "an unknown parameter needs bounds");
      c.parameters.push_back(std::move(p));
    }
  }

  if (const auto noise = root["noise"]) {
    check_known_keys(noise, {"psd", "psd_time_unit", "zero_selection", "zero_template", "realization", "xi0"},
                     "noise");
    if (noise["psd"] && noise["realization"]) fail("noise", "give either 'psd' or 'realization', not both");
    if (const auto psd = noise["psd"]) {
      check_known_keys(psd, {"num", "den"}, "noise.psd");
      c.noise.source = "psd";
      read_opt(psd, "num", c.noise.psd_num, "noise.psd");
      read_opt(psd, "den", c.noise.psd_den, "noise.psd");
    }
    if (const auto real = noise["realization"]) {
      check_known_keys(real, {"E", "G"}, "noise.realization");
      c.noise.source = "realization";
      read_opt(real, "E", c.noise.E, "noise.realization");
      read_opt(real, "G", c.noise.G, "noise.realization");
    }
    read_opt(noise, "psd_time_unit", c.noise.psd_time_unit, "noise");
    read_opt(noise, "zero_selection", c.noise.zero_selection, "noise");
    read_opt(noise, "zero_template", c.noise.zero_template, "noise");
    read_opt(noise, "xi0", c.noise.xi0, "noise");
  }

  if (const auto smp = root["sampling"]) {
    check_known_keys(smp, {"dt", "duration", "shot_sigma", "seed"}, "sampling");
    read_opt(smp, "dt", c.sampling.dt, "sampling");
    read_opt(smp, "duration", c.sampling.duration, "sampling");
    read_opt(smp, "shot_sigma", c.sampling.shot_sigma, "sampling");
    read_opt(smp, "seed", c.sampling.seed, "sampling");
  }

  if (const auto id = root["identify"]) {
    check_known_keys(id, {"r", "s", "gap_ratio", "starts", "seed", "tolerance", "noise_order", "noise_mode",
                          "alpha_bounds", "entry_bounds", "xi0_bounds"},
                     "identify");
    auto& d = c.identify;
    read_opt(id, "r", d.r, "identify");
    read_opt(id, "s", d.s, "identify");
    read_opt(id, "gap_ratio", d.gap_ratio, "identify");
    read_opt(id, "starts", d.starts, "identify");
    read_opt(id, "seed", d.seed, "identify");
    read_opt(id, "tolerance", d.tolerance, "identify");
    read_opt(id, "noise_order", d.noise_order, "identify");
    read_opt(id, "noise_mode", d.noise_mode, "identify");
    if (const auto ab = id["alpha_bounds"]) {
      if (!ab.IsSequence()) fail("identify.alpha_bounds", "must be a list of [lo, hi] pairs");
      for (std::size_t i = 0; i < ab.size(); ++i)
        d.alpha_bounds.push_back(read_interval(ab[i], "identify.alpha_bounds[" + std::to_string(i) + "]"));
    }
    if (const auto eb = id["entry_bounds"]) d.entry_bounds = read_interval(eb, "identify.entry_bounds");
    if (const auto xb = id["xi0_bounds"]) d.xi0_bounds = read_interval(xb, "identify.xi0_bounds");
  }

  if (const auto nc = root["noise_check"]) {
    check_known_keys(nc, {"dt", "segment", "segments", "overlap", "seed"}, "noise_check");
    read_opt(nc, "dt", c.noise_check.dt, "noise_check");
    read_opt(nc, "segment", c.noise_check.segment, "noise_check");
    read_opt(nc, "segments", c.noise_check.segments, "noise_check");
    read_opt(nc, "overlap", c.noise_check.overlap, "noise_check");
    read_opt(nc, "seed", c.noise_check.seed, "noise_check");
  }

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

void emit_terms(YAML::Emitter& out, const std::vector<Term>& terms) {
  out << YAML::BeginSeq;
  for (const auto& t : terms) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "label" << YAML::Value << t.label << YAML::Key << "scale"
        << YAML::Value << t.scale;
    if (!t.param.empty()) out << YAML::Key << "param" << YAML::Value << t.param;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

void emit_pair(YAML::Emitter& out, const std::pair<double, double>& p) {
  out << YAML::Flow << YAML::BeginSeq << p.first << p.second << YAML::EndSeq;
}

}  // namespace

std::string emit_config(const ExperimentConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.name;
  out << YAML::Key << "time_unit" << YAML::Value << c.time_unit;

  out << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "basis" << YAML::Value << c.system.basis;
  out << YAML::Key << "qubits" << YAML::Value << c.system.qubits;
  out << YAML::Key << "dim" << YAML::Value << c.system.dim;
  out << YAML::Key << "filtration" << YAML::Value << c.system.filtration;
  out << YAML::Key << "hamiltonian" << YAML::Value;
  emit_terms(out, c.system.hamiltonian);
  out << YAML::Key << "observables" << YAML::Value << YAML::BeginSeq;
  for (const auto& o : c.system.observables) {
    out << YAML::BeginMap << YAML::Key << "name" << YAML::Value << o.name << YAML::Key << "terms" << YAML::Value;
    emit_terms(out, o.terms);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "initial" << YAML::Value;
  emit_terms(out, c.system.initial);
  out << YAML::EndMap;

  out << YAML::Key << "parameters" << YAML::Value << YAML::BeginMap;
  for (const auto& p : c.parameters) {
    out << YAML::Key << p.name << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "value" << YAML::Value;
    if (p.value) out << *p.value;
    else out << "unknown";
    if (p.bounds) {
      out << YAML::Key << "bounds" << YAML::Value;
      emit_pair(out, *p.bounds);
    }
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  if (c.noise.source != "none") {
    out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
    if (c.noise.source == "psd") {
      out << YAML::Key << "psd" << YAML::Value << YAML::BeginMap;
      out << YAML::Key << "num" << YAML::Value << YAML::Flow << c.noise.psd_num;
      out << YAML::Key << "den" << YAML::Value << YAML::Flow << c.noise.psd_den;
      out << YAML::EndMap;
      out << YAML::Key << "psd_time_unit" << YAML::Value << c.noise.psd_time_unit;
      out << YAML::Key << "zero_selection" << YAML::Value << c.noise.zero_selection;
      out << YAML::Key << "zero_template" << YAML::Value << YAML::Flow << c.noise.zero_template;
    } else {
      out << YAML::Key << "realization" << YAML::Value << YAML::BeginMap;
      out << YAML::Key << "E" << YAML::Value << YAML::BeginSeq;
      for (const auto& row : c.noise.E) out << YAML::Flow << row;
      out << YAML::EndSeq;
      out << YAML::Key << "G" << YAML::Value << YAML::Flow << c.noise.G;
      out << YAML::EndMap;
    }
    out << YAML::Key << "xi0" << YAML::Value << YAML::Flow << c.noise.xi0;
    out << YAML::EndMap;
  }

  out << YAML::Key << "sampling" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt" << YAML::Value << c.sampling.dt;
  out << YAML::Key << "duration" << YAML::Value << c.sampling.duration;
  out << YAML::Key << "shot_sigma" << YAML::Value << c.sampling.shot_sigma;
  out << YAML::Key << "seed" << YAML::Value << c.sampling.seed;
  out << YAML::EndMap;

  const auto& id = c.identify;
  out << YAML::Key << "identify" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "r" << YAML::Value << id.r;
  out << YAML::Key << "s" << YAML::Value << id.s;
  out << YAML::Key << "gap_ratio" << YAML::Value << id.gap_ratio;
  out << YAML::Key << "starts" << YAML::Value << id.starts;
  out << YAML::Key << "seed" << YAML::Value << id.seed;
  out << YAML::Key << "tolerance" << YAML::Value << id.tolerance;
  out << YAML::Key << "noise_order" << YAML::Value << id.noise_order;
  out << YAML::Key << "noise_mode" << YAML::Value << id.noise_mode;
  out << YAML::Key << "alpha_bounds" << YAML::Value << YAML::BeginSeq;
  for (const auto& b : id.alpha_bounds) emit_pair(out, b);
  out << YAML::EndSeq;
  out << YAML::Key << "entry_bounds" << YAML::Value;
  emit_pair(out, id.entry_bounds);
  out << YAML::Key << "xi0_bounds" << YAML::Value;
  emit_pair(out, id.xi0_bounds);
  out << YAML::EndMap;

  const auto& nc = c.noise_check;
  out << YAML::Key << "noise_check" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt" << YAML::Value << nc.dt;
  out << YAML::Key << "segment" << YAML::Value << nc.segment;
  out << YAML::Key << "segments" << YAML::Value << nc.segments;
  out << YAML::Key << "overlap" << YAML::Value << nc.overlap;
  out << YAML::Key << "seed" << YAML::Value << nc.seed;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace qhid::cli
