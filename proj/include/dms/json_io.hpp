// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "dms/domains.hpp"
#include "dms/engine.hpp"
#include "dms/equivalence.hpp"

#include <json.hpp>

namespace dms {

// Atoms serialize as {"pred":"F","args":[{"c":"A"},{"n":0}]}; constants as
// {"c":name}, nulls as {"n":index}, guard-body variables as {"v":name}.
nlohmann::json to_json(const Term& t);
nlohmann::json to_json(const Atom& a);
nlohmann::json to_json(const Instance& inst);
nlohmann::json to_json(const AbstractState& s);
nlohmann::json to_json(const Substitution& s);
nlohmann::json to_json(const Label& l);
nlohmann::json to_json(const Lts& lts);
nlohmann::json to_json(const CheckReport& r);

Term term_from_json(const nlohmann::json& j);
Atom atom_from_json(const nlohmann::json& j);
Instance instance_from_json(const nlohmann::json& j);
AbstractState state_from_json(const nlohmann::json& j);

}  // namespace dms
