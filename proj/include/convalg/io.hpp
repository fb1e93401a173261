#pragma once

// JSON channel files.
//
//   {"dims": {"in": [2], "out": [2]},
//    "repr": "kraus" | "aform" | "choi",
//    "data": ...}
//
// Complex numbers are [re, im] pairs and matrices are arrays of rows. For
// "kraus", data is a list of m x n matrices; for "aform" an m^2 x n^2 matrix;
// for "choi" an nm x nm matrix. Two entries in "dims/in" and "dims/out" make
// the channel bipartite.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "convalg/bipartite.hpp"
#include "convalg/channels.hpp"
#include "convalg/errors.hpp"
#include "convalg/superop.hpp"

namespace convalg {

enum class Repr { Kraus, AForm, Choi };

inline std::string_view to_string(Repr r) {
  switch (r) {
    case Repr::Kraus: return "kraus";
    case Repr::AForm: return "aform";
    case Repr::Choi: return "choi";
  }
  return "?";
}

struct ChannelFile {
  std::vector<Index> dims_in;
  std::vector<Index> dims_out;
  Repr repr = Repr::AForm;
  std::vector<CMat> data;  // Kraus operators, or a single A-form / Choi matrix

  bool bipartite() const { return dims_in.size() == 2; }
  Index in_dim() const { return dims_in.empty() ? 0 : dims_in[0] * (bipartite() ? dims_in[1] : 1); }
  Index out_dim() const { return dims_out.empty() ? 0 : dims_out[0] * (bipartite() ? dims_out[1] : 1); }
};

using Channel = std::variant<SuperOp, BipartiteOp>;

inline const SuperOp& as_superop(const Channel& ch) {
  return std::visit(
      [](const auto& c) -> const SuperOp& {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, SuperOp>) return c;
        else return c.op();
      },
      ch);
}

namespace detail {

using nlohmann::json;

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& msg) {
  throw SchemaError((path.empty() ? std::string("/") : path) + ": " + msg);
}

inline const json& require_field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) schema_fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(path + "/" + key, "missing field");
  return *it;
}

inline std::vector<Index> parse_dims(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of positive integers");
  if (j.size() != 1 && j.size() != 2) schema_fail(path, "expected 1 (monopartite) or 2 (bipartite) dimensions");
  std::vector<Index> dims;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto& d = j[k];
    if (!d.is_number_integer() || d.get<long long>() <= 0)
      schema_fail(path + "/" + std::to_string(k), "expected a positive integer");
    dims.push_back(static_cast<Index>(d.get<long long>()));
  }
  return dims;
}

inline CMat parse_matrix(const json& j, const std::string& path, Index rows, Index cols) {
  if (!j.is_array()) schema_fail(path, "expected a matrix (array of rows)");
  if (static_cast<Index>(j.size()) != rows)
    schema_fail(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  CMat m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const std::string rpath = path + "/" + std::to_string(r);
    if (!row.is_array()) schema_fail(rpath, "expected a row (array of [re, im] pairs)");
    if (static_cast<Index>(row.size()) != cols)
      schema_fail(rpath, "expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
    for (Index c = 0; c < cols; ++c) {
      const auto& z = row[static_cast<std::size_t>(c)];
      const std::string zpath = rpath + "/" + std::to_string(c);
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        schema_fail(zpath, "expected a complex number [re, im]");
      m(r, c) = cplx(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

}  // namespace detail

inline nlohmann::json matrix_to_json(const CMat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ChannelFile parse_channel_file(std::string_view text) {
  using detail::schema_fail;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }

  ChannelFile f;
  const auto& dims = detail::require_field(j, "", "dims");
  f.dims_in = detail::parse_dims(detail::require_field(dims, "/dims", "in"), "/dims/in");
  f.dims_out = detail::parse_dims(detail::require_field(dims, "/dims", "out"), "/dims/out");
  if (f.dims_in.size() != f.dims_out.size())
    schema_fail("/dims", "'in' and 'out' must list the same number of parties");

  const auto& repr = detail::require_field(j, "", "repr");
  if (!repr.is_string()) schema_fail("/repr", "expected a string");
  const auto name = repr.get<std::string>();
  if (name == "kraus") f.repr = Repr::Kraus;
  else if (name == "aform") f.repr = Repr::AForm;
  else if (name == "choi") f.repr = Repr::Choi;
  else schema_fail("/repr", "expected one of kraus, aform, choi; got '" + name + "'");

  const Index n = f.in_dim(), m = f.out_dim();
  const auto& data = detail::require_field(j, "", "data");
  switch (f.repr) {
    case Repr::Kraus:
      if (!data.is_array() || data.empty()) schema_fail("/data", "expected a non-empty list of Kraus operators");
      for (std::size_t k = 0; k < data.size(); ++k)
        f.data.push_back(detail::parse_matrix(data[k], "/data/" + std::to_string(k), m, n));
      break;
    case Repr::AForm: f.data.push_back(detail::parse_matrix(data, "/data", m * m, n * n)); break;
    case Repr::Choi: f.data.push_back(detail::parse_matrix(data, "/data", n * m, n * m)); break;
  }
  return f;
}

inline nlohmann::json to_json(const ChannelFile& f) {
  nlohmann::json j;
  j["dims"] = {{"in", f.dims_in}, {"out", f.dims_out}};
  j["repr"] = std::string(to_string(f.repr));
  if (f.repr == Repr::Kraus) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& op : f.data) ops.push_back(matrix_to_json(op));
    j["data"] = std::move(ops);
  } else {
    j["data"] = matrix_to_json(f.data.at(0));
  }
  return j;
}

inline std::string serialize(const ChannelFile& f, int indent = -1) { return to_json(f).dump(indent); }

inline Channel to_channel(const ChannelFile& f) {
  const Index n = f.in_dim(), m = f.out_dim();
  SuperOp op = [&] {
    switch (f.repr) {
      case Repr::Kraus: return from_kraus(KrausSet(n, m, f.data));
      case Repr::AForm: return SuperOp(n, m, f.data.at(0));
      case Repr::Choi: return from_choi(f.data.at(0), n, m);
    }
    throw SchemaError("/repr: unknown representation");
  }();
  if (f.bipartite())
    return BipartiteOp(BipartiteShape{f.dims_in[0], f.dims_in[1], f.dims_out[0], f.dims_out[1]}, std::move(op));
  return op;
}

inline Channel parse_channel(std::string_view text) { return to_channel(parse_channel_file(text)); }

inline ChannelFile to_file(const SuperOp& op, Repr repr = Repr::AForm) {
  ChannelFile f{{op.in_dim()}, {op.out_dim()}, repr, {}};
  switch (repr) {
    case Repr::AForm: f.data.push_back(op.aform()); break;
    case Repr::Choi: f.data.push_back(to_choi(op)); break;
    case Repr::Kraus: f.data = minimal_kraus(op).ops(); break;
  }
  return f;
}

inline ChannelFile to_file(const BipartiteOp& bop, Repr repr = Repr::AForm) {
  ChannelFile f = to_file(bop.op(), repr);
  f.dims_in = {bop.shape().in_a, bop.shape().in_b};
  f.dims_out = {bop.shape().out_a, bop.shape().out_b};
  return f;
}

inline ChannelFile to_file(const Channel& ch, Repr repr = Repr::AForm) {
  return std::visit([&](const auto& c) { return to_file(c, repr); }, ch);
}

}  // namespace convalg
