#ifndef MISO_IO_HPP
#define MISO_IO_HPP

#include <string>

#include <json.hpp>

#include "model.hpp"

namespace miso {

using Json = nlohmann::json;

/// One instance document: {"dim": int, "n": int, "tuple": [{"U": ..., "P":
/// ...}], "params": {...}, "tolerances": {...}}. Complex entries are [re, im]
/// pairs. Unknown fields are rejected.
struct Instance {
  ModelTuple tuple;
  Json params = Json::object();
  Tolerances tol;
};

ComplexMatrix matrix_from_json(const Json& j, const std::string& where);
Json matrix_to_json(const ComplexMatrix& m);
Json subspace_to_json(const Subspace& s);

Instance parse_instance(const std::string& text);
Instance parse_instance_json(const Json& j);
Json instance_to_json(const Instance& inst);

/// Deterministic serialization: sorted keys, floats as %.17g, no locale
/// dependence. Round-trips byte-identically on normalized documents.
std::string dump_normalized(const Json& j, bool pretty = false);

} // namespace miso

#endif
