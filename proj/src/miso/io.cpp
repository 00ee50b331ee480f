#include "io.hpp"

#include <cmath>
#include <cstdio>

namespace miso {

namespace {

Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError(where + ": complex entries must be [re, im] numbers");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_to_json(Complex z) {
  return Json::array({z.real(), z.imag()});
}

void reject_unknown(const Json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) throw InputError(where + ": unknown field \"" + it.key() + "\"");
  }
}

} // namespace

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw InputError(where + ": matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty())
    throw InputError(where + ": rows must be non-empty arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw InputError(where + ": ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)],
                                  where + " entry");
  }
  if (!all_finite(m)) throw InputError(where + ": non-finite entry");
  return m;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json subspace_to_json(const Subspace& s) {
  Json j;
  j["ambient_dim"] = s.ambient_dim();
  j["dim"] = s.dim();
  j["basis"] = s.dim() > 0 ? matrix_to_json(s.basis()) : Json::array();
  return j;
}

Instance parse_instance_json(const Json& j) {
  if (!j.is_object()) throw InputError("instance: top level must be an object");
  reject_unknown(j, {"dim", "n", "tuple", "params", "tolerances"}, "instance");
  if (!j.contains("dim") || !j.contains("n") || !j.contains("tuple"))
    throw InputError("instance: \"dim\", \"n\" and \"tuple\" are required");
  if (!j["dim"].is_number_integer() || !j["n"].is_number_integer())
    throw InputError("instance: \"dim\" and \"n\" must be integers");

  Instance inst;
  inst.tuple.dim_E = j["dim"].get<Eigen::Index>();
  const auto n = j["n"].get<Eigen::Index>();
  if (inst.tuple.dim_E < 1 || n < 1)
    throw InputError("instance: \"dim\" and \"n\" must be positive");

  const Json& tuple = j["tuple"];
  if (!tuple.is_array() || static_cast<Eigen::Index>(tuple.size()) != n)
    throw InputError("instance: \"tuple\" must be an array of n pairs");
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const Json& pair = tuple[i];
    const std::string where = "tuple[" + std::to_string(i) + "]";
    if (!pair.is_object()) throw InputError(where + ": must be an object");
    reject_unknown(pair, {"U", "P"}, where);
    if (!pair.contains("U") || !pair.contains("P"))
      throw InputError(where + ": \"U\" and \"P\" are required");
    ModelPair mp{matrix_from_json(pair["U"], where + ".U"),
                 matrix_from_json(pair["P"], where + ".P")};
    if (mp.U.rows() != inst.tuple.dim_E || mp.U.cols() != inst.tuple.dim_E ||
        mp.P.rows() != inst.tuple.dim_E || mp.P.cols() != inst.tuple.dim_E)
      throw InputError(where + ": matrix size disagrees with \"dim\"");
    inst.tuple.pairs.push_back(std::move(mp));
  }

  if (j.contains("params")) {
    if (!j["params"].is_object())
      throw InputError("instance: \"params\" must be an object");
    inst.params = j["params"];
  }
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (!t.is_object())
      throw InputError("instance: \"tolerances\" must be an object");
    reject_unknown(t, {"tol_orth", "tol_rank", "tol_eq"},
                   "instance.tolerances");
    if (t.contains("tol_orth")) inst.tol.tol_orth = t["tol_orth"].get<double>();
    if (t.contains("tol_rank")) inst.tol.tol_rank = t["tol_rank"].get<double>();
    if (t.contains("tol_eq")) inst.tol.tol_eq = t["tol_eq"].get<double>();
    try {
      inst.tol.check();
    } catch (const Error& e) {
      throw InputError(std::string("instance.tolerances: ") + e.what());
    }
  }
  return inst;
}

Instance parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("instance: JSON parse error: ") + e.what());
  }
  return parse_instance_json(j);
}

Json instance_to_json(const Instance& inst) {
  Json j;
  j["dim"] = inst.tuple.dim_E;
  j["n"] = inst.tuple.n();
  Json tuple = Json::array();
  for (const auto& pair : inst.tuple.pairs) {
    Json p;
    p["U"] = matrix_to_json(pair.U);
    p["P"] = matrix_to_json(pair.P);
    tuple.push_back(std::move(p));
  }
  j["tuple"] = std::move(tuple);
  if (!inst.params.empty()) j["params"] = inst.params;
  return j;
}

namespace {

void append_number(std::string& out, double v) {
  if (std::isnan(v) || std::isinf(v)) {
    out += "null";
    return;
  }
  if (v == static_cast<double>(static_cast<long long>(v)) &&
      std::abs(v) < 1e15) {
    out += std::to_string(static_cast<long long>(v));
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_normalized(std::string& out, const Json& j, bool pretty,
                       int depth) {
  const std::string pad(pretty ? 2 * (depth + 1) : 0, ' ');
  const std::string close_pad(pretty ? 2 * depth : 0, ' ');
  const char* nl = pretty ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      // nlohmann's default object keeps keys sorted; iterate as stored
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += pretty ? ": " : ":";
        append_normalized(out, it.value(), pretty, depth + 1);
      }
      out += nl;
      out += close_pad;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        append_normalized(out, v, pretty, depth + 1);
      }
      out += nl;
      out += close_pad;
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      append_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

} // namespace

std::string dump_normalized(const Json& j, bool pretty) {
  std::string out;
  append_normalized(out, j, pretty, 0);
  return out;
}

} // namespace miso
