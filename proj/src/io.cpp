#include "spinchain/io.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace spinchain {

namespace {

using nlohmann::json;

std::string model_name(ChainModel m) {
  return m == ChainModel::XYEndModulated ? "xy_end_modulated"
                                         : "heisenberg_uniform";
}

ChainModel model_from_name(const std::string& s) {
  if (s == "xy_end_modulated") return ChainModel::XYEndModulated;
  if (s == "heisenberg_uniform") return ChainModel::HeisenbergUniform;
  throw std::invalid_argument("unknown chain model: " + s);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string to_json(const ChainSpec& spec) {
  json j;
  j["n_sites"] = spec.n_sites;
  j["model"] = model_name(spec.model);
  j["a"] = spec.end_coupling;
  j["j"] = spec.bulk_coupling;
  j["omega"] = spec.larmor;
  j["disorder"] = spec.bond_disorder;
  return j.dump(2);
}

ChainSpec chain_spec_from_json(const std::string& text) {
  const json j = json::parse(text);
  static const char* known[] = {"n_sites", "model", "a",
                                "j",       "omega", "disorder"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw std::invalid_argument("ChainSpec: unknown key " + it.key());
  }
  ChainSpec spec;
  spec.n_sites = j.at("n_sites").get<int>();
  if (j.contains("model")) spec.model = model_from_name(j.at("model"));
  if (j.contains("a")) spec.end_coupling = j.at("a").get<double>();
  if (j.contains("j")) spec.bulk_coupling = j.at("j").get<double>();
  if (j.contains("omega")) spec.larmor = j.at("omega").get<double>();
  if (j.contains("disorder"))
    spec.bond_disorder = j.at("disorder").get<std::vector<double>>();
  spec.validate();
  return spec;
}

std::string to_json(const DisorderEnsemble& ens) {
  json j;
  j["delta"] = ens.delta_bound;
  j["n_samples"] = ens.n_samples;
  j["seed"] = ens.seed;
  json samples = json::array();
  for (const auto& [d1, d2] : ens.samples)
    samples.push_back(json{{"chain1", d1}, {"chain2", d2}});
  j["samples"] = samples;
  return j.dump(2);
}

DisorderEnsemble ensemble_from_json(const std::string& text) {
  const json j = json::parse(text);
  DisorderEnsemble ens;
  ens.delta_bound = j.at("delta").get<double>();
  ens.n_samples = j.at("n_samples").get<int>();
  ens.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& s : j.at("samples"))
    ens.samples.emplace_back(s.at("chain1").get<std::vector<double>>(),
                             s.at("chain2").get<std::vector<double>>());
  if (static_cast<int>(ens.samples.size()) != ens.n_samples)
    throw std::invalid_argument("ensemble: sample count mismatch");
  return ens;
}

std::string to_json(const ProtocolOutcome& outcome,
                    const MeasurementSchedule& schedule) {
  json j;
  j["schedule"] = schedule.times;
  j["step_success"] = outcome.step_success;
  j["joint_success"] = outcome.joint_success;
  j["phase"] = {outcome.phase_correction.real(),
                outcome.phase_correction.imag()};
  return j.dump(2);
}

void write_csv_row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << format_double(values[i]);
  }
  os << '\n';
}

void write_amplitude_csv(std::ostream& os, const AmplitudeSeries& series) {
  os << "t,re,im,abs2\n";
  for (std::size_t i = 0; i < series.t.size(); ++i)
    write_csv_row(os, {series.t[i], series.f[i].real(), series.f[i].imag(),
                       std::norm(series.f[i])});
}

}  // namespace spinchain
