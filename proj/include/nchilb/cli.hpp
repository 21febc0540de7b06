#pragma once

// Command-line front end. Every subcommand reads JSON files plus flags,
// calls into the library, and writes one JSON envelope
//   {"diagnostics": [...], "payload": ..., "status": "ok" | "error"}
// to standard output. Exit codes: 0 ok, 1 domain error, 2 usage error.
// Identical invocations produce byte-identical output.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nchilb/cells.hpp"
#include "nchilb/errors.hpp"
#include "nchilb/json_io.hpp"
#include "nchilb/orbits.hpp"
#include "nchilb/points.hpp"
#include "nchilb/tangent.hpp"

namespace nchilb {

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

namespace cli_detail {

inline Json load_json(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw DomainError(file + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError(file + ": " + e.what());
  }
}

inline std::vector<std::uint64_t> parse_uint_list(const std::string& csv,
                                                  const char* what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      std::uint64_t v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw DomainError(std::string(what) + ": not a nonnegative integer: " + item);
    }
  }
  if (out.empty()) throw DomainError(std::string(what) + ": empty list");
  return out;
}

inline std::uint64_t default_budget() {
  if (const char* env = std::getenv("CENSUS_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw DomainError("CENSUS_BUDGET: not a nonnegative integer");
    }
  }
  return CensusOptions{}.budget;
}

inline AlgebraPresentation algebra_over_fq(const AlgebraPresentation& a, std::uint64_t q) {
  ScalarField fq = ScalarField::prime_field(q);
  return a.field() == fq ? a : a.change_field(fq);
}

}  // namespace cli_detail

inline CommandResult run(const std::vector<std::string>& args) {
  using namespace cli_detail;

  CLI::App app{"toolkit for moduli of codimension-n left ideals in a "
               "finitely generated associative algebra"};
  app.require_subcommand(1);

  std::string point_file, other_file, ideal_file, poly_file, algebra_file;
  std::string algebra_a_file, algebra_b_file;
  std::string primes_csv, degrees_csv;
  std::uint64_t m = 0, n = 0, q = 0, prime = 0;
  std::uint64_t power = 1;
  std::uint64_t budget = default_budget();
  unsigned shards = 1;
  std::uint64_t max_word_len = 0;  // 0 -> n-1 default
  std::uint64_t max_degree = 0;    // 0 -> library default cap

  CLI::App* check = app.add_subcommand("check", "validate a point: relations and cyclicity");
  check->add_option("--point", point_file, "point JSON file")->required();

  CLI::App* canon = app.add_subcommand("canon", "canonical form of a point's orbit");
  canon->add_option("--point", point_file, "point JSON file")->required();

  CLI::App* orbit_eq = app.add_subcommand("orbit-eq", "decide whether two points share an orbit");
  orbit_eq->add_option("--a", point_file, "first point JSON file")->required();
  orbit_eq->add_option("--b", other_file, "second point JSON file")->required();

  CLI::App* ideal_cmd = app.add_subcommand("ideal", "border generators of the point's left ideal");
  ideal_cmd->add_option("--point", point_file, "point JSON file")->required();

  CLI::App* from_ideal = app.add_subcommand("from-ideal", "rebuild the canonical point from ideal data");
  from_ideal->add_option("--ideal", ideal_file, "ideal JSON file")->required();

  CLI::App* nf = app.add_subcommand("normal-form", "reduce a polynomial modulo a left ideal");
  nf->add_option("--ideal", ideal_file, "ideal JSON file")->required();
  nf->add_option("--poly", poly_file, "polynomial JSON file")->required();

  CLI::App* cells_cmd = app.add_subcommand("cells", "enumerate cells with their dimensions");
  cells_cmd->add_option("--m", m, "number of generators")->required();
  cells_cmd->add_option("--n", n, "module dimension")->required();

  CLI::App* count = app.add_subcommand("count", "point-count polynomial in q");
  count->add_option("--m", m, "number of generators")->required();
  count->add_option("--n", n, "module dimension")->required();

  CLI::App* census_cmd = app.add_subcommand("census", "exhaustive count over a prime field");
  census_cmd->add_option("--algebra", algebra_file, "algebra JSON file")->required();
  census_cmd->add_option("--n", n, "module dimension")->required();
  census_cmd->add_option("--q", q, "field size (prime)")->required();
  census_cmd->add_option("--shards", shards, "number of parallel shards");
  census_cmd->add_option("--budget", budget, "tuple budget override");

  CLI::App* fit = app.add_subcommand("fit", "compare census counts with the cell polynomial");
  fit->add_option("--m", m, "number of generators")->required();
  fit->add_option("--n", n, "module dimension")->required();
  fit->add_option("--primes", primes_csv, "comma-separated primes")->required();
  fit->add_option("--shards", shards, "number of parallel shards");
  fit->add_option("--budget", budget, "tuple budget override");

  CLI::App* embed = app.add_subcommand("embed", "determinant-section coordinates of a point");
  embed->add_option("--point", point_file, "point JSON file")->required();
  embed->add_option("--family", other_file,
                    "chart family JSON file (array of charts, each an array of "
                    "polynomials); overrides --max-word-len");
  embed->add_option("--max-word-len", max_word_len, "word length bound of the chart family (default n-1)");
  embed->add_option("--power", power, "power applied to each determinant section");

  CLI::App* tangent_cmd = app.add_subcommand("tangent", "tangent-space report at a point");
  tangent_cmd->add_option("--point", point_file, "point JSON file")->required();
  tangent_cmd->add_option("--max-degree", max_degree, "truncation cap for algebras with relations");

  CLI::App* reduce = app.add_subcommand("reduce-mod-p", "reduce a point over Q modulo a prime");
  reduce->add_option("--point", point_file, "point JSON file")->required();
  reduce->add_option("--p", prime, "prime modulus")->required();

  CLI::App* veronese = app.add_subcommand("veronese", "degree bound 2 * count * product for a degree list");
  veronese->add_option("--degrees", degrees_csv, "comma-separated generator degrees")->required();

  CLI::App* embed_check = app.add_subcommand("embed-check", "census comparison for a quotient algebra");
  embed_check->add_option("--algebra-a", algebra_a_file, "source algebra JSON file")->required();
  embed_check->add_option("--algebra-b", algebra_b_file, "quotient algebra JSON file")->required();
  embed_check->add_option("--n", n, "module dimension")->required();
  embed_check->add_option("--q", q, "field size (prime)")->required();
  embed_check->add_option("--shards", shards, "number of parallel shards");
  embed_check->add_option("--budget", budget, "tuple budget override");

  CommandResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      result.output = app.help();
      result.exit_code = 0;
    } else {
      Json envelope{{"status", "error"},
                    {"payload", nullptr},
                    {"diagnostics", Json::array({std::string("usage: ") + e.what()})}};
      result.output = envelope.dump(2) + "\n";
      result.exit_code = 2;
    }
    return result;
  } catch (const Error& e) {
    // e.g. a malformed CENSUS_BUDGET environment value
    Json envelope{{"status", "error"},
                  {"payload", nullptr},
                  {"diagnostics", Json::array({std::string(e.what())})}};
    result.output = envelope.dump(2) + "\n";
    result.exit_code = 1;
    return result;
  }

  try {
    Json payload;
    CensusOptions census_options;
    census_options.budget = budget;
    census_options.shards = shards;

    if (check->parsed()) {
      PointData p = jsonio::point_from_json(load_json(point_file), point_file);
      bool relations = check_relations(p);
      bool cyclic = is_cyclic(p);
      payload = Json{{"check_relations", relations},
                     {"is_cyclic", cyclic},
                     {"valid", relations && cyclic}};
    } else if (canon->parsed()) {
      PointData p = jsonio::point_from_json(load_json(point_file), point_file);
      payload = jsonio::canonical_form_to_json(canonicalize(p));
    } else if (orbit_eq->parsed()) {
      PointData a = jsonio::point_from_json(load_json(point_file), point_file);
      PointData b = jsonio::point_from_json(load_json(other_file), other_file);
      payload = Json{{"equal", orbit_equal(a, b)}};
    } else if (ideal_cmd->parsed()) {
      PointData p = jsonio::point_from_json(load_json(point_file), point_file);
      payload = jsonio::ideal_to_json(extract_ideal(canonicalize(p)));
    } else if (from_ideal->parsed()) {
      IdealData d = jsonio::ideal_from_json(load_json(ideal_file), ideal_file);
      payload = jsonio::point_to_json(point_from_ideal(d));
    } else if (nf->parsed()) {
      IdealData d = jsonio::ideal_from_json(load_json(ideal_file), ideal_file);
      NCPoly f = jsonio::ncpoly_from_json(load_json(poly_file), d.algebra.field(), poly_file);
      NCPoly reduced = normal_form(f, d);
      payload = Json{{"normal_form", jsonio::ncpoly_to_json(reduced)},
                     {"in_ideal", reduced.is_zero()}};
    } else if (cells_cmd->parsed()) {
      Json list = Json::array();
      for (const Cell& c : enumerate_cells(m, n)) list.push_back(jsonio::cell_to_json(c));
      payload = Json{{"cells", std::move(list)}};
    } else if (count->parsed()) {
      payload = Json{{"polynomial", jsonio::count_polynomial_to_json(count_polynomial(m, n))}};
    } else if (census_cmd->parsed()) {
      AlgebraPresentation algebra =
          algebra_over_fq(jsonio::algebra_from_json(load_json(algebra_file), algebra_file), q);
      payload = jsonio::census_to_json(census(algebra, n, q, census_options));
    } else if (fit->parsed()) {
      CountPolynomial poly = count_polynomial(m, n);
      Json checks = Json::array();
      bool ok = true;
      for (std::uint64_t pq : parse_uint_list(primes_csv, "--primes")) {
        AlgebraPresentation algebra =
            AlgebraPresentation::free_algebra(m, ScalarField::prime_field(pq));
        CensusResult r = census(algebra, n, pq, census_options);
        std::uint64_t expected = poly.evaluate(pq);
        ok = ok && r.orbit_count == expected;
        checks.push_back(Json{{"q", pq},
                              {"orbit_count", r.orbit_count},
                              {"polynomial_value", expected}});
      }
      payload = Json{{"ok", ok}, {"checks", std::move(checks)},
                     {"polynomial", jsonio::count_polynomial_to_json(poly)}};
    } else if (embed->parsed()) {
      PointData p = jsonio::point_from_json(load_json(point_file), point_file);
      std::vector<ChartIndex> family;
      if (!other_file.empty()) {
        Json fam = load_json(other_file);
        if (!fam.is_array()) throw DomainError(other_file + ": expected an array of charts");
        for (std::size_t i = 0; i < fam.size(); ++i) {
          family.push_back(jsonio::chart_from_json(
              fam[i], p.field(), other_file + "[" + std::to_string(i) + "]"));
        }
      } else {
        std::size_t len = max_word_len == 0 ? p.n - 1 : max_word_len;
        family = word_chart_family(p.field(), p.algebra.generators(), p.n, len);
      }
      std::vector<Value> coords = embedding_coordinates(p, family, power);
      Json raw = Json::array();
      for (const Value& v : coords) raw.push_back(jsonio::value_to_json(v));
      Json projective = Json::array();
      for (const Value& v : projective_normalize(coords)) {
        projective.push_back(jsonio::value_to_json(v));
      }
      payload = Json{{"power", power},
                     {"coordinates", std::move(raw)},
                     {"projective", std::move(projective)}};
    } else if (tangent_cmd->parsed()) {
      PointData p = jsonio::point_from_json(load_json(point_file), point_file);
      payload = jsonio::tangent_report_to_json(tangent_dim(p, max_degree));
    } else if (reduce->parsed()) {
      PointData p = jsonio::point_from_json(load_json(point_file), point_file);
      ReducedPoint r = reduce_point_mod_p(p, prime);
      payload = Json{{"point", jsonio::point_to_json(r.point)}, {"is_cyclic", r.cyclic}};
    } else if (veronese->parsed()) {
      payload = Json{{"bound", veronese_bound(parse_uint_list(degrees_csv, "--degrees"))}};
    } else if (embed_check->parsed()) {
      AlgebraPresentation a =
          jsonio::algebra_from_json(load_json(algebra_a_file), algebra_a_file);
      AlgebraPresentation b =
          jsonio::algebra_from_json(load_json(algebra_b_file), algebra_b_file);
      EmbeddingCheck r = check_closed_embedding(a, b, n, q, census_options);
      payload = Json{{"ok", r.ok},
                     {"forms_pass", r.forms_pass},
                     {"orbit_count_a", r.orbit_count_a},
                     {"orbit_count_b", r.orbit_count_b}};
    }

    Json envelope{{"status", "ok"}, {"payload", std::move(payload)},
                  {"diagnostics", Json::array()}};
    result.output = envelope.dump(2) + "\n";
    result.exit_code = 0;
  } catch (const Error& e) {
    Json envelope{{"status", "error"},
                  {"payload", nullptr},
                  {"diagnostics", Json::array({std::string(e.what())})}};
    result.output = envelope.dump(2) + "\n";
    result.exit_code = 1;
  }
  return result;
}

}  // namespace nchilb
