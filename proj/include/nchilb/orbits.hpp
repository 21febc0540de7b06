#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nchilb/errors.hpp"
#include "nchilb/freealg.hpp"
#include "nchilb/matrix.hpp"
#include "nchilb/points.hpp"
#include "nchilb/word.hpp"

namespace nchilb {

// The unique orbit representative of a valid point: the n basis words S
// chosen greedily by the Krylov search (length-lex sorted, closed under
// deleting the leftmost letter), the border coefficient columns, and the
// point moved so that s(A) y is the s-th standard basis vector for s in S.
//
// Support condition: for a border word b, the coefficient on a basis word
// t >= b is zero. It holds by construction (greedy acceptance in length-lex
// order) and is what makes the rewriting in normal_form terminate.
struct CanonicalForm {
  AlgebraPresentation algebra;
  std::size_t n;
  std::vector<Word> basis_words;
  std::map<Word, std::vector<Value>> border;  // border word -> length-n column
  PointData canonical_point;

  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) {
    return a.algebra == b.algebra && a.n == b.n && a.basis_words == b.basis_words &&
           a.border == b.border;
  }

  // Deterministic total order so canonical forms can live in ordered sets.
  // Only forms over one field/algebra are ever compared.
  friend bool operator<(const CanonicalForm& a, const CanonicalForm& b) {
    if (a.basis_words != b.basis_words) return a.basis_words < b.basis_words;
    auto ia = a.border.begin(), ib = b.border.begin();
    for (; ia != a.border.end() && ib != b.border.end(); ++ia, ++ib) {
      if (ia->first != ib->first) return ia->first < ib->first;
      for (std::size_t t = 0; t < ia->second.size() && t < ib->second.size(); ++t) {
        int c = compare(ia->second[t], ib->second[t]);
        if (c != 0) return c < 0;
      }
    }
    return false;
  }
};

namespace detail {

inline void require_valid_point(const PointData& p, const char* where) {
  if (!check_relations(p)) {
    throw DomainError(std::string(where) + ": point does not satisfy the relations");
  }
  if (!is_cyclic(p)) {
    throw DomainError(std::string(where) + ": y is not a cyclic vector");
  }
}

}  // namespace detail

// Computes the canonical form: run the Krylov search, move the point by the
// inverse of the basis-vector matrix, and read the border columns straight
// off the transformed matrices (column s of A_j is the vector of x_j * s).
inline CanonicalForm canonicalize(const PointData& p) {
  if (!check_relations(p)) {
    throw DomainError("canonicalize: point does not satisfy the relations");
  }
  KrylovResult krylov = krylov_basis(p);
  if (krylov.words.size() != p.n) {
    throw DomainError("canonicalize: y is not a cyclic vector");
  }
  GroupElement g(*inverse(Matrix::from_columns(krylov.vectors)));
  PointData moved = gl_act(g, p);

  std::set<Word> in_basis(krylov.words.begin(), krylov.words.end());
  std::map<Word, std::vector<Value>> border;
  for (std::size_t i = 0; i < krylov.words.size(); ++i) {
    for (std::uint32_t j = 1; j <= p.algebra.generators(); ++j) {
      Word b = krylov.words[i].prepend(j);
      if (in_basis.count(b)) continue;
      std::vector<Value> column;
      column.reserve(p.n);
      for (std::size_t t = 0; t < p.n; ++t) column.push_back(moved.matrices[j - 1].at(t, i));
      border.emplace(std::move(b), std::move(column));
    }
  }
  return CanonicalForm{p.algebra, p.n, std::move(krylov.words), std::move(border),
                       std::move(moved)};
}

// Orbit membership test via canonical forms (no group search).
inline bool orbit_equal(const PointData& p, const PointData& q) {
  if (!(p.algebra == q.algebra) || p.n != q.n) {
    throw DomainError("orbit_equal: points live on different moduli spaces");
  }
  return canonicalize(p) == canonicalize(q);
}

// The left ideal attached to a canonical form, presented by one generator
// per border word: g_b = b - sum_t c_{b,t} t with t running over the basis
// words below b.
struct IdealData {
  AlgebraPresentation algebra;
  std::size_t n;
  std::vector<Word> basis_words;
  std::map<Word, NCPoly> generators;

  friend bool operator==(const IdealData& a, const IdealData& b) {
    return a.algebra == b.algebra && a.n == b.n && a.basis_words == b.basis_words &&
           a.generators == b.generators;
  }
};

inline IdealData extract_ideal(const CanonicalForm& c) {
  const ScalarField& field = c.algebra.field();
  std::map<Word, NCPoly> generators;
  for (const auto& [b, column] : c.border) {
    NCPoly g = NCPoly::of_word(field, b);
    for (std::size_t t = 0; t < c.basis_words.size(); ++t) {
      g.add_term(c.basis_words[t], -column[t]);
    }
    generators.emplace(b, std::move(g));
  }
  return IdealData{c.algebra, c.n, c.basis_words, std::move(generators)};
}

// One rewriting step: the reduced polynomial lost the term coeff * left * b.
struct ReductionStep {
  Value coeff;
  Word left;
  Word border;
};

struct ReductionResult {
  NCPoly normal_form;
  std::vector<ReductionStep> steps;  // f = sum coeff * left * g_border + normal_form
};

// Rewrites f to its normal form supported on the basis words. Strategy: pick
// the length-lex-largest reducible term, factor its word as u * b where b is
// the shortest left-deletion suffix outside the basis (necessarily a border
// word), and replace u * b through the generator g_b. The support condition
// plus left-compatibility of the order make every step strictly decreasing,
// so the loop terminates. Membership test: f is in the ideal iff the normal
// form is zero.
inline ReductionResult reduce_with_steps(const NCPoly& f, const IdealData& ideal) {
  require_same_field(f.field(), ideal.algebra.field(), "normal_form");
  // Termination needs every generator to rewrite its border word into
  // strictly smaller ones; reject malformed data instead of looping.
  for (const auto& [b, g] : ideal.generators) {
    if (g.is_zero() || g.leading_word() != b || !g.coefficient(b).is_one()) {
      throw DomainError("normal_form: generator for " + b.to_string() +
                        " must have leading word " + b.to_string() +
                        " with coefficient 1");
    }
  }
  std::set<Word> in_basis(ideal.basis_words.begin(), ideal.basis_words.end());

  NCPoly work = f;
  std::vector<ReductionStep> steps;
  while (true) {
    // Largest term whose word is not a basis word.
    std::optional<Word> target;
    Value coeff = Value::zero(work.field());
    for (auto it = work.terms().rbegin(); it != work.terms().rend(); ++it) {
      if (!in_basis.count(it->first)) {
        target = it->first;
        coeff = it->second;
        break;
      }
    }
    if (!target) break;

    const std::size_t k = target->length();
    std::size_t blen = 1;
    while (blen <= k && in_basis.count(target->suffix(blen))) ++blen;
    if (blen > k) throw InternalError("normal_form: reducible word has no border suffix");
    Word b = target->suffix(blen);
    Word u = target->prefix(k - blen);
    auto gen = ideal.generators.find(b);
    if (gen == ideal.generators.end()) {
      throw DomainError("normal_form: ideal data is missing the generator for " +
                        b.to_string());
    }
    // work -= coeff * u * g_b removes exactly the target term.
    work = work - coeff * (NCPoly::of_word(work.field(), u) * gen->second);
    steps.push_back(ReductionStep{coeff, std::move(u), std::move(b)});
  }
  return ReductionResult{std::move(work), std::move(steps)};
}

inline NCPoly normal_form(const NCPoly& f, const IdealData& ideal) {
  return reduce_with_steps(f, ideal).normal_form;
}

// Rebuilds the canonical point from ideal data: column s of A_j is the
// standard vector of x_j * s when that word stays in the basis, and the
// border coefficient column otherwise; y is the unit-word basis vector.
// Validates the shape of the data (basis words prefix-closed, generators
// exactly on the border, support condition) and, when the algebra has
// relations, that the matrices satisfy them.
inline PointData point_from_ideal(const IdealData& ideal) {
  const ScalarField& field = ideal.algebra.field();
  const std::size_t n = ideal.n;
  const std::size_t m = ideal.algebra.generators();

  if (ideal.basis_words.size() != n) {
    throw DomainError("point_from_ideal: expected " + std::to_string(n) + " basis words");
  }
  std::map<Word, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(ideal.basis_words[i], i);
  if (index.size() != n) throw DomainError("point_from_ideal: duplicate basis words");
  if (!index.count(Word::unit())) {
    throw DomainError("point_from_ideal: basis words must contain the unit word");
  }
  std::vector<Word> sorted;
  for (const auto& [w, i] : index) sorted.push_back(w);
  if (sorted != ideal.basis_words) {
    throw DomainError("point_from_ideal: basis words must be length-lex sorted");
  }
  for (const Word& w : ideal.basis_words) {
    if (!w.is_unit() && !index.count(w.remove_leftmost())) {
      throw DomainError("point_from_ideal: basis words are not prefix-closed");
    }
  }

  // The border and its generators must match exactly.
  std::set<Word> border;
  for (const auto& [s, i] : index) {
    for (std::uint32_t j = 1; j <= m; ++j) {
      Word b = s.prepend(j);
      if (!index.count(b)) border.insert(std::move(b));
    }
  }
  for (const Word& b : border) {
    if (!ideal.generators.count(b)) {
      throw DomainError("point_from_ideal: missing generator for border word " +
                        b.to_string());
    }
  }
  for (const auto& [b, g] : ideal.generators) {
    if (!border.count(b)) {
      throw DomainError("point_from_ideal: generator key " + b.to_string() +
                        " is not a border word");
    }
    require_same_field(field, g.field(), "point_from_ideal");
    if (g.is_zero() || g.leading_word() != b || !g.coefficient(b).is_one()) {
      throw DomainError("point_from_ideal: generator for " + b.to_string() +
                        " must have leading word " + b.to_string() +
                        " with coefficient 1");
    }
    for (const auto& [t, c] : g.terms()) {
      if (t == b) continue;
      if (!index.count(t)) {
        throw DomainError("point_from_ideal: generator for " + b.to_string() +
                          " has a lower term outside the basis words");
      }
      if (!(t < b)) {
        throw DomainError("point_from_ideal: support condition violated at " +
                          b.to_string() + " / " + t.to_string());
      }
    }
  }

  std::vector<Matrix> mats(m, Matrix(field, n, n));
  for (const auto& [s, i] : index) {
    for (std::uint32_t j = 1; j <= m; ++j) {
      Word b = s.prepend(j);
      auto hit = index.find(b);
      if (hit != index.end()) {
        mats[j - 1].set(hit->second, i, Value::one(field));
      } else {
        const NCPoly& g = ideal.generators.at(b);
        for (const auto& [t, c] : g.terms()) {
          if (t == b) continue;
          mats[j - 1].set(index.at(t), i, -c);
        }
      }
    }
  }
  Matrix y(field, n, 1);
  y.set(index.at(Word::unit()), 0, Value::one(field));

  PointData p(ideal.algebra, n, std::move(mats), std::move(y));
  if (!check_relations(p)) {
    throw DomainError("point_from_ideal: the ideal does not define a module "
                      "over the presented algebra");
  }
  return p;
}

}  // namespace nchilb
