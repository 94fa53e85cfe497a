// Copyright 2026 The molcirc Authors
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

#include "molcirc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "molcirc/errors.hpp"

namespace molcirc {

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::X:
      return "X";
    case GateKind::H:
      return "H";
    case GateKind::RX:
      return "RX";
    case GateKind::RY:
      return "RY";
    case GateKind::RZ:
      return "RZ";
    case GateKind::CRY:
      return "CRY";
    case GateKind::CNOT:
      return "CNOT";
    case GateKind::PauliRotation:
      return "PAULI";
  }
  return "?";
}

bool is_rotation(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ ||
         kind == GateKind::CRY || kind == GateKind::PauliRotation;
}

namespace {

GateKind kind_from_name(const std::string& name) {
  for (GateKind k : {GateKind::X, GateKind::H, GateKind::RX, GateKind::RY, GateKind::RZ,
                     GateKind::CRY, GateKind::CNOT, GateKind::PauliRotation}) {
    if (name == gate_name(k)) return k;
  }
  throw InputError("unknown gate kind '" + name + "'");
}

std::size_t arity(GateKind kind) {
  return (kind == GateKind::CRY || kind == GateKind::CNOT) ? 2 : 1;
}

bool self_inverse(GateKind kind) {
  return kind == GateKind::X || kind == GateKind::H || kind == GateKind::CNOT;
}

}  // namespace

double Angle::value(std::span<const double> params) const {
  if (!param) return fixed;
  if (*param >= params.size()) throw InputError("parameter index out of range");
  return multiplier * params[*param] + fixed;
}

Gate Gate::pauli_rotation(const PauliString& p, Angle a) {
  Gate g{GateKind::PauliRotation, p.support(), a, p};
  return g;
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0) throw InputError("negative qubit count");
}

void Circuit::set_initial_value(std::size_t index, double value) {
  if (index >= initial_.size()) throw InputError("parameter index out of range");
  initial_[index] = value;
}

std::size_t Circuit::parameter(const std::string& name, double initial) {
  auto [it, inserted] = index_.try_emplace(name, names_.size());
  if (inserted) {
    names_.push_back(name);
    initial_.push_back(initial);
  }
  return it->second;
}

std::optional<std::size_t> Circuit::find_parameter(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Circuit::append(Gate g) {
  if (g.kind == GateKind::PauliRotation) {
    if (g.pauli.is_identity()) throw InputError("Pauli rotation about the identity");
    g.qubits = g.pauli.support();
  } else if (g.qubits.size() != arity(g.kind)) {
    throw InputError(std::string("wrong qubit count for gate ") + gate_name(g.kind));
  }
  for (std::size_t a = 0; a < g.qubits.size(); ++a) {
    if (g.qubits[a] < 0 || g.qubits[a] >= n_qubits_) {
      throw InputError(std::string("gate ") + gate_name(g.kind) + " qubit out of range");
    }
    for (std::size_t b = 0; b < a; ++b)
      if (g.qubits[a] == g.qubits[b]) throw InputError("gate qubits must be distinct");
  }
  if (is_rotation(g.kind)) {
    if (g.angle.param && *g.angle.param >= names_.size())
      throw InputError("gate references an unknown parameter");
    if (!std::isfinite(g.angle.fixed) || !std::isfinite(g.angle.multiplier))
      throw InputError("non-finite gate angle");
  } else {
    g.angle = Angle{};
  }
  gates_.push_back(std::move(g));
}

void Circuit::append(const Circuit& other) {
  if (other.n_qubits_ > n_qubits_) throw InputError("appended circuit has more qubits");
  std::vector<std::size_t> remap(other.names_.size());
  for (std::size_t k = 0; k < other.names_.size(); ++k)
    remap[k] = parameter(other.names_[k], other.initial_[k]);
  for (Gate g : other.gates_) {
    if (g.angle.param) g.angle.param = remap[*g.angle.param];
    append(std::move(g));
  }
}

std::vector<Gate> compile_pauli_rotation(const PauliString& p, const Angle& angle) {
  if (p.is_identity()) throw InputError("cannot compile a rotation about the identity");
  const double half_pi = std::numbers::pi / 2;
  const std::vector<int> support = p.support();
  std::vector<Gate> pre;
  std::vector<Gate> post;
  for (int q : support) {
    switch (p.axis(q)) {
      case 'X':
        pre.push_back(Gate::h(q));
        post.push_back(Gate::h(q));
        break;
      case 'Y':
        pre.push_back(Gate::rx(q, Angle::constant(half_pi)));
        post.push_back(Gate::rx(q, Angle::constant(-half_pi)));
        break;
      default:
        break;
    }
  }
  std::vector<Gate> out = pre;
  for (std::size_t k = 0; k + 1 < support.size(); ++k)
    out.push_back(Gate::cnot(support[k], support[k + 1]));
  out.push_back(Gate::rz(support.back(), angle));
  for (std::size_t k = support.size() - 1; k > 0; --k)
    out.push_back(Gate::cnot(support[k - 1], support[k]));
  out.insert(out.end(), post.begin(), post.end());
  return out;
}

namespace {

Circuit with_same_table(const Circuit& c) {
  Circuit out(c.n_qubits());
  for (std::size_t k = 0; k < c.n_parameters(); ++k)
    out.parameter(c.parameter_names()[k], c.initial_values()[k]);
  return out;
}

}  // namespace

Circuit lower(const Circuit& c) {
  Circuit out = with_same_table(c);
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::CRY: {
        const int ctl = g.qubits[0];
        const int tgt = g.qubits[1];
        out.append(Gate::ry(tgt, g.angle.scaled(0.5)));
        out.append(Gate::cnot(ctl, tgt));
        out.append(Gate::ry(tgt, g.angle.scaled(-0.5)));
        out.append(Gate::cnot(ctl, tgt));
        break;
      }
      case GateKind::PauliRotation:
        for (Gate& sub : compile_pauli_rotation(g.pauli, g.angle)) out.append(std::move(sub));
        break;
      default:
        out.append(g);
    }
  }
  return out;
}

Circuit adjoint(const Circuit& c) {
  Circuit out = with_same_table(c);
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
    Gate g = *it;
    if (is_rotation(g.kind)) g.angle = g.angle.negated();
    out.append(std::move(g));
  }
  return out;
}

Circuit cancel_adjacent_inverses(const Circuit& c) {
  std::vector<Gate> kept;
  // last[q] = index into kept of the latest live gate on q, or -1.
  std::vector<long> last(static_cast<std::size_t>(c.n_qubits()), -1);
  std::vector<bool> alive;
  auto cancels = [](const Gate& a, const Gate& b) {
    if (a.kind != b.kind || a.qubits != b.qubits) return false;
    if (self_inverse(a.kind)) return true;
    if (is_rotation(a.kind) && !a.angle.param && !b.angle.param)
      return a.pauli == b.pauli && a.angle.fixed + b.angle.fixed == 0.0;
    return false;
  };
  auto rebuild_last = [&](const std::vector<int>& qubits) {
    for (int q : qubits) {
      long idx = -1;
      for (long k = static_cast<long>(kept.size()) - 1; k >= 0; --k) {
        if (!alive[k]) continue;
        const auto& qs = kept[k].qubits;
        if (std::find(qs.begin(), qs.end(), q) != qs.end()) {
          idx = k;
          break;
        }
      }
      last[q] = idx;
    }
  };
  for (const Gate& g : c.gates()) {
    long prev = last[g.qubits[0]];
    bool adjacent = prev >= 0;
    for (int q : g.qubits) adjacent = adjacent && last[q] == prev;
    // The previous gate must also not touch extra qubits beyond g's.
    if (adjacent && kept[prev].qubits.size() == g.qubits.size() && cancels(kept[prev], g)) {
      alive[prev] = false;
      rebuild_last(g.qubits);
      continue;
    }
    kept.push_back(g);
    alive.push_back(true);
    for (int q : g.qubits) last[q] = static_cast<long>(kept.size()) - 1;
  }
  Circuit out = with_same_table(c);
  for (std::size_t k = 0; k < kept.size(); ++k)
    if (alive[k]) out.append(kept[k]);
  return out;
}

CircuitMetrics metrics(const Circuit& c) {
  const Circuit low = lower(c);
  CircuitMetrics m;
  std::vector<std::size_t> layer(static_cast<std::size_t>(low.n_qubits()), 0);
  std::vector<bool> used(low.n_parameters(), false);
  for (const Gate& g : low.gates()) {
    if (is_rotation(g.kind)) {
      if (g.angle.param) {
        used[*g.angle.param] = true;
      } else if (g.angle.fixed == 0.0) {
        continue;
      }
    }
    if (g.kind == GateKind::CNOT) ++m.cnot_count;
    std::size_t l = 0;
    for (int q : g.qubits) l = std::max(l, layer[q]);
    for (int q : g.qubits) layer[q] = l + 1;
    m.depth = std::max(m.depth, l + 1);
  }
  m.n_parameters = static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
  return m;
}

nlohmann::json circuit_to_json(const Circuit& c) {
  nlohmann::json params = nlohmann::json::array();
  for (std::size_t k = 0; k < c.n_parameters(); ++k)
    params.push_back({{"name", c.parameter_names()[k]}, {"value", c.initial_values()[k]}});
  nlohmann::json gates = nlohmann::json::array();
  for (const Gate& g : c.gates()) {
    nlohmann::json j = {{"kind", gate_name(g.kind)}, {"qubits", g.qubits}};
    if (g.kind == GateKind::PauliRotation) j["pauli"] = g.pauli.str();
    if (is_rotation(g.kind)) {
      if (g.angle.param) {
        j["param"] = c.parameter_names()[*g.angle.param];
        j["multiplier"] = g.angle.multiplier;
        if (g.angle.fixed != 0.0) j["offset"] = g.angle.fixed;
      } else {
        j["angle"] = g.angle.fixed;
      }
    }
    gates.push_back(std::move(j));
  }
  return {{"n_qubits", c.n_qubits()}, {"parameters", params}, {"gates", gates}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
  try {
    Circuit out(j.at("n_qubits").get<int>());
    for (const auto& p : j.at("parameters"))
      out.parameter(p.at("name").get<std::string>(), p.value("value", 0.0));
    for (const auto& jg : j.at("gates")) {
      Gate g;
      g.kind = kind_from_name(jg.at("kind").get<std::string>());
      g.qubits = jg.at("qubits").get<std::vector<int>>();
      if (g.kind == GateKind::PauliRotation) g.pauli = PauliString::parse(jg.at("pauli").get<std::string>());
      if (is_rotation(g.kind)) {
        if (jg.contains("param")) {
          const auto name = jg.at("param").get<std::string>();
          auto idx = out.find_parameter(name);
          if (!idx) throw InputError("gate references unknown parameter '" + name + "'");
          g.angle = Angle::symbol(*idx, jg.value("multiplier", 1.0));
          g.angle.fixed = jg.value("offset", 0.0);
        } else {
          g.angle = Angle::constant(jg.at("angle").get<double>());
        }
      }
      out.append(std::move(g));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("circuit JSON: ") + e.what());
  }
}

std::string circuit_to_text(const Circuit& c) {
  std::ostringstream out;
  out.precision(12);
  for (const Gate& g : c.gates()) {
    out << gate_name(g.kind);
    if (g.kind == GateKind::PauliRotation) {
      out << " [" << g.pauli.str() << "]";
    } else {
      for (int q : g.qubits) out << ' ' << q;
    }
    if (is_rotation(g.kind)) {
      out << ' ';
      if (g.angle.param) {
        out << c.parameter_names()[*g.angle.param] << '*' << g.angle.multiplier;
        if (g.angle.fixed != 0.0) out << '+' << g.angle.fixed;
      } else {
        out << g.angle.fixed;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace molcirc
