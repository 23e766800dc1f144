#pragma once

/// @file repfile.hpp
/// JSON serialization of representations.
///
/// Doubles are written in shortest round-trip form, so reading a file back
/// reproduces every matrix entry bit for bit.  Matrices carry a "layout" tag:
/// "dense" (row-major "data") or "sparse" ("entries" as [row, col, value]).

#include "repgen/assembler.hpp"
#include "repgen/error.hpp"
#include "repgen/root_data.hpp"
#include "repgen/weight_system.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace repgen {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct Provenance {
  std::string builder = "scheme";
  std::string version = kToolVersion;
  std::map<std::string, double> tolerances;
};

enum class MatrixLayout { Dense, Sparse, Auto };

struct WriteOptions {
  MatrixLayout layout = MatrixLayout::Auto;
  /// Auto uses dense storage up to this dimension.
  int dense_limit = 512;
};

namespace detail {

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m, bool dense) {
  nlohmann::json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  if (dense) {
    j["layout"] = "dense";
    std::vector<double> data;
    data.reserve(m.size());
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    j["data"] = data;
  } else {
    j["layout"] = "sparse";
    nlohmann::json entries = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        if (m(r, c) != 0.0) entries.push_back({r, c, m(r, c)});
    j["entries"] = entries;
  }
  return j;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, int dim) {
  const int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
  if (rows != dim || cols != dim) throw Error(ErrorCode::MalformedFile, "matrix shape does not match the dimension");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  const std::string layout = j.at("layout").get<std::string>();
  if (layout == "dense") {
    const auto& data = j.at("data");
    if (static_cast<long>(data.size()) != static_cast<long>(rows) * cols)
      throw Error(ErrorCode::MalformedFile, "dense matrix has the wrong number of entries");
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r) * cols + c].get<double>();
  } else if (layout == "sparse") {
    for (const auto& e : j.at("entries")) {
      const int r = e.at(0).get<int>(), c = e.at(1).get<int>();
      if (r < 0 || r >= rows || c < 0 || c >= cols) throw Error(ErrorCode::MalformedFile, "sparse entry out of range");
      m(r, c) = e.at(2).get<double>();
    }
  } else {
    throw Error(ErrorCode::MalformedFile, "unknown matrix layout '" + layout + "'");
  }
  return m;
}

inline std::string generator_key(const char* kind, int i) { return std::string(kind) + std::to_string(i + 1); }

}  // namespace detail

inline nlohmann::json representation_to_json(const Representation& rep, const Provenance& prov = {},
                                             WriteOptions opts = {}) {
  const auto& cd = rep.algebra;
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  std::vector<double> w;
  for (int i = 0; i < cd.rank; ++i) w.push_back(cd.w(i));
  j["algebra"] = {{"name", cd.label.empty() ? "custom" : cd.label}, {"cartan", cd.cartan}, {"weights", w}};
  j["highest_weight"] = rep.highest;
  if (rep.ctx.classical)
    j["t"] = "classical";
  else
    j["t"] = rep.ctx.t;
  j["dimension"] = rep.dimension();
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& b : rep.basis) {
    nlohmann::json sd = nlohmann::json::array();
    for (const auto& [idx, m] : b.string_data) sd.push_back({idx, m});
    basis.push_back({{"weight", b.weight}, {"level", b.level}, {"string_data", sd}, {"fine_index", b.fine_index}});
  }
  j["basis"] = basis;
  const bool dense = opts.layout == MatrixLayout::Dense ||
                     (opts.layout == MatrixLayout::Auto && rep.dimension() <= opts.dense_limit);
  nlohmann::json mats;
  for (int i = 0; i < cd.rank; ++i) {
    mats[detail::generator_key("X+", i)] = detail::matrix_to_json(rep.X_plus[i], dense);
    mats[detail::generator_key("X-", i)] = detail::matrix_to_json(rep.X_minus[i], dense);
    mats[detail::generator_key("H", i)] = detail::matrix_to_json(rep.H[i].asDiagonal().toDenseMatrix(), dense);
    mats[detail::generator_key("R", i)] = detail::matrix_to_json(rep.R[i].asDiagonal().toDenseMatrix(), dense);
    mats[detail::generator_key("Hbar", i)] = detail::matrix_to_json(rep.Hbar[i].asDiagonal().toDenseMatrix(), dense);
  }
  j["matrices"] = mats;
  j["provenance"] = {{"builder", prov.builder}, {"version", prov.version}, {"tolerances", prov.tolerances}};
  return j;
}

struct RepFile {
  Representation rep;
  Provenance provenance;
};

inline RepFile representation_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorCode::MalformedFile, "top level is not an object");
    if (j.at("format_version").get<int>() != kFormatVersion)
      throw Error(ErrorCode::MalformedFile, "unsupported format_version");
    const auto& alg = j.at("algebra");
    const IntMatrix cartan = alg.at("cartan").get<IntMatrix>();
    std::string name = alg.at("name").get<std::string>();
    const CartanData cd = build_cartan_data(cartan, name == "custom" ? std::string{} : name);
    const auto weights = alg.at("weights").get<std::vector<double>>();
    if (static_cast<int>(weights.size()) != cd.rank) throw Error(ErrorCode::MalformedFile, "wrong number of root weights");
    for (int i = 0; i < cd.rank; ++i)
      if (weights[i] != cd.w(i)) throw Error(ErrorCode::MalformedFile, "root weights disagree with the Cartan matrix");

    RepFile out;
    Representation& rep = out.rep;
    rep.algebra = cd;
    rep.highest = j.at("highest_weight").get<Weight>();
    const HighestWeight hw(rep.highest);
    if (hw.size() != cd.rank) throw Error(ErrorCode::MalformedFile, "highest weight has the wrong length");
    const auto& t = j.at("t");
    if (t.is_string()) {
      if (t.get<std::string>() != "classical") throw Error(ErrorCode::MalformedFile, "t must be a number or \"classical\"");
      rep.ctx = QContext::classical_limit();
    } else {
      rep.ctx = QContext::deformed(t.get<double>());
    }
    const int dim = j.at("dimension").get<int>();
    if (dim != weyl_dimension(cd, hw)) throw Error(ErrorCode::MalformedFile, "dimension disagrees with the highest weight");
    rep.weights = weight_multiplicities(cd, hw, {std::max<long>(dim, 1)});
    const auto& basis = j.at("basis");
    if (static_cast<int>(basis.size()) != dim) throw Error(ErrorCode::MalformedFile, "basis length differs from dimension");
    for (const auto& b : basis) {
      BasisLabel l;
      l.weight = b.at("weight").get<Weight>();
      l.level = b.at("level").get<int>();
      for (const auto& p : b.at("string_data")) l.string_data.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
      l.fine_index = b.at("fine_index").get<int>();
      rep.basis.push_back(std::move(l));
    }
    const auto expected = enumerate_basis(rep.weights);
    for (int k = 0; k < dim; ++k) {
      if (rep.basis[k].weight != expected[k].weight || rep.basis[k].level != expected[k].level ||
          rep.basis[k].fine_index != expected[k].fine_index || rep.basis[k].string_data != expected[k].string_data)
        throw Error(ErrorCode::MalformedFile, "basis label " + std::to_string(k) + " is out of order");
      rep.basis[k].depth = expected[k].depth;
    }
    const auto& mats = j.at("matrices");
    for (int i = 0; i < cd.rank; ++i) {
      rep.X_plus.push_back(detail::matrix_from_json(mats.at(detail::generator_key("X+", i)), dim));
      rep.X_minus.push_back(detail::matrix_from_json(mats.at(detail::generator_key("X-", i)), dim));
      for (auto [kind, target] : {std::pair{"H", &rep.H}, std::pair{"R", &rep.R}, std::pair{"Hbar", &rep.Hbar}}) {
        const Eigen::MatrixXd m = detail::matrix_from_json(mats.at(detail::generator_key(kind, i)), dim);
        Eigen::MatrixXd off = m;
        off.diagonal().setZero();
        if (off.cwiseAbs().maxCoeff() != 0.0) throw Error(ErrorCode::MalformedFile, std::string(kind) + " is not diagonal");
        target->push_back(m.diagonal());
      }
    }
    const auto& prov = j.at("provenance");
    out.provenance.builder = prov.at("builder").get<std::string>();
    if (out.provenance.builder != "scheme" && out.provenance.builder != "oracle")
      throw Error(ErrorCode::MalformedFile, "unknown builder '" + out.provenance.builder + "'");
    out.provenance.version = prov.at("version").get<std::string>();
    out.provenance.tolerances = prov.at("tolerances").get<std::map<std::string, double>>();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedFile, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedFile) throw;
    throw Error(ErrorCode::MalformedFile, e.what());
  }
}

inline std::string write_representation(const Representation& rep, const Provenance& prov = {}, WriteOptions opts = {}) {
  return representation_to_json(rep, prov, opts).dump(1);
}

inline RepFile read_representation(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedFile, e.what());
  }
  return representation_from_json(j);
}

inline void save_representation(const std::string& path, const Representation& rep, const Provenance& prov = {},
                                WriteOptions opts = {}) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  f << write_representation(rep, prov, opts) << '\n';
  if (!f) throw Error(ErrorCode::InvalidArgument, "failed writing '" + path + "'");
}

inline RepFile load_representation(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::MalformedFile, "cannot open '" + path + "'");
  std::stringstream s;
  s << f.rdbuf();
  return read_representation(s.str());
}

}  // namespace repgen
