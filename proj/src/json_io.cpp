// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#include "dms/json_io.hpp"

namespace dms {

using nlohmann::json;

json to_json(const Term& t) {
  switch (t.kind) {
    case TermKind::Constant:
      return json{{"c", t.name}};
    case TermKind::Variable:
      return json{{"v", t.name}};
    case TermKind::Null:
      return json{{"n", t.index}};
  }
  return {};
}

json to_json(const Atom& a) {
  json args = json::array();
  for (const Term& t : a.terms) args.push_back(to_json(t));
  return json{{"pred", a.pred}, {"args", std::move(args)}};
}

json to_json(const Instance& inst) {
  json out = json::array();
  for (const Atom& a : inst) out.push_back(to_json(a));
  return out;
}

json to_json(const AbstractState& s) {
  json out{{"domain", to_string(s.domain)}};
  if (s.lower) out["lower"] = to_json(*s.lower);
  if (s.upper) out["upper"] = to_json(*s.upper);
  return out;
}

json to_json(const Substitution& s) {
  json out = json::object();
  for (const auto& [v, t] : s) out[v] = to_json(t);
  return out;
}

json to_json(const Label& l) {
  return json{{"action", l.action}, {"sigma", to_json(l.sigma)}};
}

json to_json(const Lts& lts) {
  json states = json::array();
  for (const LtsState& s : lts.states) {
    if (std::holds_alternative<Instance>(s)) {
      states.push_back(json{{"instance", to_json(std::get<Instance>(s))}});
    } else {
      states.push_back(json{{"abstract", to_json(std::get<AbstractState>(s))}});
    }
  }
  json transitions = json::array();
  for (const Transition& t : lts.transitions) {
    transitions.push_back(json{{"from", t.from}, {"label", to_json(t.label)}, {"to", t.to}});
  }
  json out{{"states", std::move(states)},
           {"initial", lts.initial},
           {"transitions", std::move(transitions)},
           {"truncated", lts.truncated}};
  if (lts.domain) out["domain"] = to_string(*lts.domain);
  return out;
}

json to_json(const CheckReport& r) {
  json out{{"verdict", r.holds ? "holds" : "fails"},
           {"explored_depth", r.explored_depth},
           {"samples", r.samples}};
  if (!r.holds) {
    out["reason"] = r.reason;
    if (r.label) out["label"] = to_json(*r.label);
    if (!r.pair.empty()) out["pair"] = r.pair;
  }
  return out;
}

Term term_from_json(const json& j) {
  if (j.contains("c")) return Term::constant(j.at("c").get<std::string>());
  if (j.contains("v")) return Term::variable(j.at("v").get<std::string>());
  if (j.contains("n")) return Term::null(j.at("n").get<std::uint64_t>());
  throw DmsError("invalid term JSON: " + j.dump());
}

Atom atom_from_json(const json& j) {
  Atom a;
  a.pred = j.at("pred").get<std::string>();
  for (const json& t : j.at("args")) a.terms.push_back(term_from_json(t));
  return a;
}

Instance instance_from_json(const json& j) {
  Instance out;
  for (const json& a : j) out.insert(atom_from_json(a));
  return out;
}

AbstractState state_from_json(const json& j) {
  auto d = parse_domain(j.at("domain").get<std::string>());
  if (!d) throw DmsError("invalid domain in JSON: " + j.dump());
  AbstractState s;
  s.domain = *d;
  if (j.contains("lower")) s.lower = instance_from_json(j.at("lower"));
  if (j.contains("upper")) s.upper = instance_from_json(j.at("upper"));
  return s;
}

}  // namespace dms
