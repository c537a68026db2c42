#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "grouplim/config_density.hpp"
#include "grouplim/extremal.hpp"
#include "grouplim/graphon.hpp"
#include "grouplim/metric.hpp"
#include "grouplim/rounding.hpp"
#include "grouplim/sequence_lab.hpp"
#include "grouplim/spectral.hpp"

namespace grouplim::io {

using nlohmann::json;

GroupSpec group_from_json(const json& j);
json to_json(const GroupSpec& G);

Elem elem_from_json(const json& j, const GroupSpec& G);
json to_json(const Elem& g);

/// {"group":{...},"values":[[re,im],...]}; plain numbers are read as real values.
DenseFn dense_from_json(const json& j);
json to_json(const DenseFn& f);

/// {"group":{...},"entries":[{"elem":[...],"re":..,"im":..}],"l2":..}
SparseFn sparse_from_json(const json& j);
json to_json(const SparseFn& f);

bool is_sparse_json(const json& j);

/// {"forms":[[...],...]} or a builtin name as a JSON string.
ConfigSystem config_from_json(const json& j);

/// {"n":4,"edges":[[0,1],...]}
Graph graph_from_json(const json& j);

json to_json(const Complex& z);
json to_json(const PartialIso& phi);
json to_json(const DistBracket& b);
json to_json(const OptResult& r);
json to_json(const BridgeReport& r);

json read_file(const std::string& path);

}  // namespace grouplim::io
