#pragma once

// JSON encodings of every value the command-line tool reads or writes.
// Output is deterministic: object keys are sorted (nlohmann's default map),
// word lists are length-lex ordered, scalars are normalized (lowest terms
// over Q, canonical residues over F_p).

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nchilb/cells.hpp"
#include "nchilb/errors.hpp"
#include "nchilb/field.hpp"
#include "nchilb/freealg.hpp"
#include "nchilb/matrix.hpp"
#include "nchilb/orbits.hpp"
#include "nchilb/points.hpp"
#include "nchilb/tangent.hpp"
#include "nchilb/word.hpp"

namespace nchilb {

using Json = nlohmann::json;

namespace jsonio {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw DomainError(path + ": " + what);
}

inline const Json& member(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing key \"") + key + "\"");
  return *it;
}

inline std::uint64_t to_uint(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

// ---- field ----

inline Json field_to_json(const ScalarField& f) {
  if (f.is_rationals()) return Json{{"kind", "Q"}};
  return Json{{"kind", "Fp"}, {"p", f.characteristic()}};
}

inline ScalarField field_from_json(const Json& j, const std::string& path) {
  const Json& kind = member(j, "kind", path);
  if (!kind.is_string()) fail(path + ".kind", "expected \"Q\" or \"Fp\"");
  std::string k = kind.get<std::string>();
  if (k == "Q") return ScalarField::rationals();
  if (k == "Fp") return ScalarField::prime_field(to_uint(member(j, "p", path), path + ".p"));
  fail(path + ".kind", "expected \"Q\" or \"Fp\", got \"" + k + "\"");
}

// ---- scalar values ----

inline Json value_to_json(const Value& v) {
  if (v.field().is_prime_field()) return Json(v.residue_value());
  return Json(v.to_string());
}

inline Value value_from_json(const Json& j, const ScalarField& field,
                             const std::string& path) {
  if (field.is_prime_field()) {
    if (j.is_number_integer()) {
      std::int64_t r = j.get<std::int64_t>();
      if (r < 0 || static_cast<std::uint64_t>(r) >= field.characteristic()) {
        fail(path, "residue out of [0, p)");
      }
      return Value::residue(field, static_cast<std::uint32_t>(r));
    }
    fail(path, "expected an integer residue in [0, p)");
  }
  if (j.is_number_integer()) return Value::of_integer(field, j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Value::of_rational(field, Rational(j.get<std::string>()));
    } catch (const std::exception&) {
      fail(path, "not a rational \"a/b\": " + j.get<std::string>());
    }
  }
  fail(path, "expected a rational string or integer");
}

// ---- matrices ----

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(value_to_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j, const ScalarField& field,
                               const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) fail(path + "[0]", "expected a nonempty row");
  std::size_t cols = j[0].size();
  Matrix m(field, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = j[i];
    std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != cols) fail(row_path, "ragged row");
    for (std::size_t c = 0; c < cols; ++c) {
      m.set(i, c, value_from_json(row[c], field, row_path + "[" + std::to_string(c) + "]"));
    }
  }
  return m;
}

inline Json column_to_json(const Matrix& column) {
  Json out = Json::array();
  for (std::size_t i = 0; i < column.rows(); ++i) out.push_back(value_to_json(column.at(i, 0)));
  return out;
}

inline Matrix column_from_json(const Json& j, const ScalarField& field,
                               const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array");
  Matrix m(field, j.size(), 1);
  for (std::size_t i = 0; i < j.size(); ++i) {
    m.set(i, 0, value_from_json(j[i], field, path + "[" + std::to_string(i) + "]"));
  }
  return m;
}

// ---- words and polynomials ----

inline Json word_to_json(const Word& w) {
  Json out = Json::array();
  for (std::uint32_t l : w.letters()) out.push_back(l);
  return out;
}

inline Word word_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of 1-based generator indices");
  std::vector<std::uint32_t> letters;
  letters.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::uint64_t l = to_uint(j[i], path + "[" + std::to_string(i) + "]");
    if (l == 0 || l > UINT32_MAX) fail(path + "[" + std::to_string(i) + "]",
                                       "generator index out of range");
    letters.push_back(static_cast<std::uint32_t>(l));
  }
  return Word(std::move(letters));
}

inline Json ncpoly_to_json(const NCPoly& p) {
  Json out = Json::array();
  for (const auto& [w, c] : p.terms()) {
    out.push_back(Json{{"coeff", value_to_json(c)}, {"word", word_to_json(w)}});
  }
  return out;
}

inline NCPoly ncpoly_from_json(const Json& j, const ScalarField& field,
                               const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of {coeff, word} terms");
  NCPoly p(field);
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string term_path = path + "[" + std::to_string(i) + "]";
    const Json& term = j[i];
    p.add_term(word_from_json(member(term, "word", term_path), term_path + ".word"),
               value_from_json(member(term, "coeff", term_path), field,
                               term_path + ".coeff"));
  }
  return p;
}

// ---- algebras and points ----

inline Json algebra_to_json(const AlgebraPresentation& a) {
  Json relations = Json::array();
  for (const NCPoly& r : a.relations()) relations.push_back(ncpoly_to_json(r));
  return Json{{"m", a.generators()},
              {"relations", std::move(relations)},
              {"field", field_to_json(a.field())}};
}

inline AlgebraPresentation algebra_from_json(const Json& j, const std::string& path) {
  ScalarField field = field_from_json(member(j, "field", path), path + ".field");
  std::uint64_t m = to_uint(member(j, "m", path), path + ".m");
  const Json& rel = member(j, "relations", path);
  if (!rel.is_array()) fail(path + ".relations", "expected an array");
  std::vector<NCPoly> relations;
  relations.reserve(rel.size());
  for (std::size_t i = 0; i < rel.size(); ++i) {
    relations.push_back(
        ncpoly_from_json(rel[i], field, path + ".relations[" + std::to_string(i) + "]"));
  }
  return AlgebraPresentation(m, field, std::move(relations));
}

inline Json point_to_json(const PointData& p) {
  Json mats = Json::array();
  for (const Matrix& a : p.matrices) mats.push_back(matrix_to_json(a));
  return Json{{"algebra", algebra_to_json(p.algebra)},
              {"n", p.n},
              {"matrices", std::move(mats)},
              {"y", column_to_json(p.y)}};
}

inline PointData point_from_json(const Json& j, const std::string& path) {
  AlgebraPresentation algebra = algebra_from_json(member(j, "algebra", path), path + ".algebra");
  std::uint64_t n = to_uint(member(j, "n", path), path + ".n");
  const Json& mats = member(j, "matrices", path);
  if (!mats.is_array()) fail(path + ".matrices", "expected an array of matrices");
  std::vector<Matrix> matrices;
  matrices.reserve(mats.size());
  for (std::size_t i = 0; i < mats.size(); ++i) {
    matrices.push_back(matrix_from_json(mats[i], algebra.field(),
                                        path + ".matrices[" + std::to_string(i) + "]"));
  }
  Matrix y = column_from_json(member(j, "y", path), algebra.field(), path + ".y");
  return PointData(std::move(algebra), n, std::move(matrices), std::move(y));
}

// ---- charts ----

inline Json chart_to_json(const ChartIndex& f) {
  Json out = Json::array();
  for (const NCPoly& e : f.entries) out.push_back(ncpoly_to_json(e));
  return out;
}

inline ChartIndex chart_from_json(const Json& j, const ScalarField& field,
                                  const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of polynomials");
  ChartIndex f;
  f.entries.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    f.entries.push_back(ncpoly_from_json(j[i], field, path + "[" + std::to_string(i) + "]"));
  }
  return f;
}

// ---- canonical forms and ideals ----

inline Json canonical_form_to_json(const CanonicalForm& c) {
  Json basis = Json::array();
  for (const Word& w : c.basis_words) basis.push_back(word_to_json(w));
  Json border = Json::array();
  for (const auto& [b, column] : c.border) {
    Json coeffs = Json::array();
    for (const Value& v : column) coeffs.push_back(value_to_json(v));
    border.push_back(Json{{"word", word_to_json(b)}, {"coeffs", std::move(coeffs)}});
  }
  return Json{{"algebra", algebra_to_json(c.algebra)},
              {"n", c.n},
              {"basis_words", std::move(basis)},
              {"border", std::move(border)},
              {"canonical_point", point_to_json(c.canonical_point)}};
}

inline Json ideal_to_json(const IdealData& d) {
  Json basis = Json::array();
  for (const Word& w : d.basis_words) basis.push_back(word_to_json(w));
  Json generators = Json::array();
  for (const auto& [b, g] : d.generators) {
    generators.push_back(Json{{"word", word_to_json(b)}, {"poly", ncpoly_to_json(g)}});
  }
  return Json{{"algebra", algebra_to_json(d.algebra)},
              {"n", d.n},
              {"basis_words", std::move(basis)},
              {"generators", std::move(generators)}};
}

inline IdealData ideal_from_json(const Json& j, const std::string& path) {
  AlgebraPresentation algebra = algebra_from_json(member(j, "algebra", path), path + ".algebra");
  std::uint64_t n = to_uint(member(j, "n", path), path + ".n");
  const Json& basis = member(j, "basis_words", path);
  if (!basis.is_array()) fail(path + ".basis_words", "expected an array of words");
  std::vector<Word> basis_words;
  basis_words.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    basis_words.push_back(
        word_from_json(basis[i], path + ".basis_words[" + std::to_string(i) + "]"));
  }
  const Json& gens = member(j, "generators", path);
  if (!gens.is_array()) fail(path + ".generators", "expected an array");
  std::map<Word, NCPoly> generators;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string gen_path = path + ".generators[" + std::to_string(i) + "]";
    Word b = word_from_json(member(gens[i], "word", gen_path), gen_path + ".word");
    NCPoly g = ncpoly_from_json(member(gens[i], "poly", gen_path), algebra.field(),
                                gen_path + ".poly");
    if (!generators.emplace(std::move(b), std::move(g)).second) {
      fail(gen_path, "duplicate border word");
    }
  }
  return IdealData{std::move(algebra), n, std::move(basis_words), std::move(generators)};
}

// ---- cells, counting, reports ----

inline Json cell_to_json(const Cell& c) {
  Json basis = Json::array();
  for (const Word& w : c.basis_words) basis.push_back(word_to_json(w));
  return Json{{"basis_words", std::move(basis)}, {"dimension", c.dimension}};
}

inline Json count_polynomial_to_json(const CountPolynomial& p) {
  Json out = Json::object();
  for (const auto& [e, c] : p.coefficients()) out[std::to_string(e)] = c;
  return out;
}

inline Json census_to_json(const CensusResult& r) {
  return Json{{"total_tuples", r.total_tuples},
              {"cyclic_count", r.cyclic_count},
              {"orbit_count", r.orbit_count}};
}

inline Json tangent_report_to_json(const TangentReport& r) {
  Json out{{"based_tangent_dim", r.based_tangent_dim},
           {"gl_dim", r.gl_dim},
           {"hom_I_M_dim", r.hom_i_m_dim}};
  if (r.hom_mm_dim) out["hom_MM_dim"] = *r.hom_mm_dim;
  if (r.ext1_mm_dim) out["ext1_MM_dim"] = *r.ext1_mm_dim;
  switch (r.status) {
    case TangentStatus::Exact: out["status"] = "exact"; break;
    case TangentStatus::Truncated: out["status"] = "truncated"; break;
    case TangentStatus::Unstable: out["status"] = "unstable"; break;
  }
  if (r.stabilization_degree) out["stabilization_degree"] = *r.stabilization_degree;
  return out;
}

}  // namespace jsonio
}  // namespace nchilb
