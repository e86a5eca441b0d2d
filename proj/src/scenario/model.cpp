#include "offload/scenario/model.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace offload::scenario {

namespace {

constexpr int kVersion = 1;

std::string hex(double v) {
  std::ostringstream os;
  os << std::hexfloat << v;
  return os.str();
}

double parse_hex(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ModelFormatError("bad number '" + s + "'");
  return v;
}

void write_vector(std::ostream& out, const char* name, const Eigen::VectorXd& v) {
  out << name << ' ' << v.size();
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << hex(v[i]);
  out << '\n';
}

void expect(std::istream& in, const std::string& word) {
  std::string got;
  if (!(in >> got) || got != word) throw ModelFormatError("expected '" + word + "', got '" + got + "'");
}

void read_vector(std::istream& in, const char* name, Eigen::VectorXd& v) {
  expect(in, name);
  Eigen::Index n = 0;
  if (!(in >> n) || n != v.size())
    throw ModelFormatError(std::string(name) + ": expected " + std::to_string(v.size()) + " parameters");
  std::string tok;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(in >> tok)) throw ModelFormatError(std::string(name) + ": truncated");
    v[i] = parse_hex(tok);
  }
}

}  // namespace

void save_models(std::ostream& out, const std::vector<agent::Agent>& agents) {
  int active = 0;
  for (const auto& a : agents) active += a.config().active ? 1 : 0;
  out << "offload-model " << kVersion << '\n' << "agents " << active << '\n';
  for (const auto& a : agents) {
    if (!a.config().active) continue;
    out << "agent " << a.config().bidder_id << " budget " << hex(a.config().budget) << " step " << a.step()
        << " avg_reward " << hex(a.rl().avg_reward()) << '\n';
    write_vector(out, "actor", a.rl().actor().params());
    write_vector(out, "critic", a.rl().critic().params());
    write_vector(out, "sl", a.sl().net().params());
  }
}

void save_models(const std::filesystem::path& path, const std::vector<agent::Agent>& agents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  save_models(out, agents);
}

void load_models(std::istream& in, std::vector<agent::Agent>& agents) {
  expect(in, "offload-model");
  int version = 0;
  if (!(in >> version) || version != kVersion) throw ModelFormatError("unsupported model version");
  expect(in, "agents");
  int n = 0;
  int active = 0;
  for (const auto& a : agents) active += a.config().active ? 1 : 0;
  if (!(in >> n) || n != active) throw ModelFormatError("model holds a different number of agents");
  for (auto& a : agents) {
    if (!a.config().active) continue;
    std::string label, tok;
    expect(in, "agent");
    in >> label;
    if (label != a.config().bidder_id) throw ModelFormatError("expected agent " + a.config().bidder_id);
    expect(in, "budget");
    in >> tok;
    if (parse_hex(tok) != a.config().budget) throw ModelFormatError(label + ": budget differs from the scenario");
    expect(in, "step");
    long step = 0;
    if (!(in >> step)) throw ModelFormatError(label + ": bad step");
    expect(in, "avg_reward");
    in >> tok;
    a.set_step(step);
    a.rl().set_avg_reward(parse_hex(tok));
    read_vector(in, "actor", a.rl().actor().params());
    read_vector(in, "critic", a.rl().critic().params());
    read_vector(in, "sl", a.sl().net().params());
  }
}

void load_models(const std::filesystem::path& path, std::vector<agent::Agent>& agents) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  load_models(in, agents);
}

}  // namespace offload::scenario
