#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nchilb/errors.hpp"
#include "nchilb/field.hpp"
#include "nchilb/matrix.hpp"
#include "nchilb/word.hpp"

namespace nchilb {

// A finite k-linear combination of words. Terms are kept in length-lex order
// and never carry a zero coefficient.
class NCPoly {
public:
  explicit NCPoly(const ScalarField& field) : field_(field) {}

  static NCPoly zero(const ScalarField& field) { return NCPoly(field); }

  static NCPoly monomial(const Value& coeff, const Word& w) {
    NCPoly p(coeff.field());
    p.add_term(w, coeff);
    return p;
  }

  static NCPoly of_word(const ScalarField& field, const Word& w) {
    return monomial(Value::one(field), w);
  }

  const ScalarField& field() const { return field_; }
  const std::map<Word, Value>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  std::size_t degree() const {
    if (is_zero()) throw DomainError("NCPoly::degree: zero polynomial");
    return terms_.rbegin()->first.length();
  }

  const Word& leading_word() const {
    if (is_zero()) throw DomainError("NCPoly::leading_word: zero polynomial");
    return terms_.rbegin()->first;
  }

  Value coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Value::zero(field_) : it->second;
  }

  std::uint32_t max_letter() const {
    std::uint32_t mx = 0;
    for (const auto& [w, c] : terms_) mx = std::max(mx, w.max_letter());
    return mx;
  }

  void add_term(const Word& w, const Value& coeff) {
    require_same_field(field_, coeff.field(), "NCPoly::add_term");
    auto it = terms_.find(w);
    if (it == terms_.end()) {
      if (!coeff.is_zero()) terms_.emplace(w, coeff);
      return;
    }
    Value s = it->second + coeff;
    if (s.is_zero()) {
      terms_.erase(it);
    } else {
      it->second = s;
    }
  }

  friend NCPoly operator+(const NCPoly& a, const NCPoly& b) {
    require_same_field(a.field_, b.field_, "NCPoly::operator+");
    NCPoly r = a;
    for (const auto& [w, c] : b.terms_) r.add_term(w, c);
    return r;
  }

  friend NCPoly operator-(const NCPoly& a, const NCPoly& b) {
    require_same_field(a.field_, b.field_, "NCPoly::operator-");
    NCPoly r = a;
    for (const auto& [w, c] : b.terms_) r.add_term(w, -c);
    return r;
  }

  friend NCPoly operator*(const Value& s, const NCPoly& a) {
    NCPoly r(a.field_);
    for (const auto& [w, c] : a.terms_) r.add_term(w, s * c);
    return r;
  }

  friend NCPoly operator*(const NCPoly& a, const NCPoly& b) {
    require_same_field(a.field_, b.field_, "NCPoly::operator*");
    NCPoly r(a.field_);
    for (const auto& [u, cu] : a.terms_) {
      for (const auto& [v, cv] : b.terms_) r.add_term(u * v, cu * cv);
    }
    return r;
  }

  NCPoly operator-() const { return (-Value::one(field_)) * (*this); }

  friend bool operator==(const NCPoly& a, const NCPoly& b) {
    return a.field_ == b.field_ && a.terms_ == b.terms_;
  }

  // Coefficientwise coercion; only Q -> F_p changes anything. Over F_p a
  // rational coefficient whose denominator vanishes is rejected.
  NCPoly change_field(const ScalarField& target) const {
    if (target == field_) return *this;
    if (!field_.is_rationals()) {
      throw DomainError("NCPoly::change_field: only Q coefficients can be coerced");
    }
    NCPoly r(target);
    for (const auto& [w, c] : terms_) r.add_term(w, Value::of_rational(target, c.rational()));
    return r;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (const auto& [w, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += c.to_string() + "*" + w.to_string();
    }
    return s;
  }

private:
  ScalarField field_;
  std::map<Word, Value> terms_;
};

// A presentation of the algebra: number of generators, base field and the
// defining relations. The free algebra has no relations.
class AlgebraPresentation {
public:
  AlgebraPresentation(std::size_t generators, const ScalarField& field,
                      std::vector<NCPoly> relations)
      : generators_(generators), field_(field), relations_(std::move(relations)) {
    if (generators_ == 0) throw DomainError("AlgebraPresentation: need at least one generator");
    for (const NCPoly& r : relations_) {
      if (r.is_zero()) throw DomainError("AlgebraPresentation: zero relation");
      require_same_field(field_, r.field(), "AlgebraPresentation");
      if (r.max_letter() > generators_) {
        throw DomainError("AlgebraPresentation: relation uses generator x" +
                          std::to_string(r.max_letter()) + " but m = " +
                          std::to_string(generators_));
      }
    }
  }

  static AlgebraPresentation free_algebra(std::size_t m, const ScalarField& field) {
    return AlgebraPresentation(m, field, {});
  }

  std::size_t generators() const { return generators_; }
  const ScalarField& field() const { return field_; }
  const std::vector<NCPoly>& relations() const { return relations_; }
  bool is_free() const { return relations_.empty(); }

  AlgebraPresentation change_field(const ScalarField& target) const {
    if (target == field_) return *this;
    std::vector<NCPoly> rs;
    rs.reserve(relations_.size());
    for (const NCPoly& r : relations_) rs.push_back(r.change_field(target));
    return AlgebraPresentation(generators_, target, std::move(rs));
  }

  friend bool operator==(const AlgebraPresentation& a, const AlgebraPresentation& b) {
    return a.generators_ == b.generators_ && a.field_ == b.field_ &&
           a.relations_ == b.relations_;
  }

private:
  std::size_t generators_;
  ScalarField field_;
  std::vector<NCPoly> relations_;
};

namespace detail {

inline void require_matrix_tuple(const std::vector<Matrix>& mats, const char* where) {
  if (mats.empty()) throw ShapeError(std::string(where) + ": empty matrix tuple");
  const Matrix& first = mats.front();
  if (!first.is_square()) throw ShapeError(std::string(where) + ": matrices must be square");
  for (const Matrix& a : mats) {
    require_same_field(first.field(), a.field(), where);
    if (a.rows() != first.rows() || a.cols() != first.cols()) {
      throw ShapeError(std::string(where) + ": matrices of unequal size");
    }
  }
}

inline void require_arity(const Word& w, std::size_t m, const char* where) {
  if (w.max_letter() > m) {
    throw ShapeError(std::string(where) + ": word uses generator x" +
                     std::to_string(w.max_letter()) + " but only " +
                     std::to_string(m) + " matrices were given");
  }
}

}  // namespace detail

// w(A_1,...,A_m): the word as written multiplies in the same order, so
// x_i x_j evaluates to the product A_i * A_j. The unit word gives the
// identity matrix.
inline Matrix evaluate(const Word& w, const std::vector<Matrix>& mats) {
  detail::require_matrix_tuple(mats, "evaluate");
  detail::require_arity(w, mats.size(), "evaluate");
  Matrix acc = Matrix::identity(mats.front().field(), mats.front().rows());
  for (std::uint32_t l : w.letters()) acc = acc * mats[l - 1];
  return acc;
}

inline Matrix evaluate(const NCPoly& f, const std::vector<Matrix>& mats) {
  detail::require_matrix_tuple(mats, "evaluate");
  require_same_field(f.field(), mats.front().field(), "evaluate");
  Matrix acc(mats.front().field(), mats.front().rows(), mats.front().rows());
  for (const auto& [w, c] : f.terms()) {
    acc = acc + c * evaluate(w, mats);
  }
  return acc;
}

// w(A) * y computed with one matrix-vector product per letter, folding from
// the rightmost letter leftward.
inline Matrix apply_word_to_vector(const Word& w, const std::vector<Matrix>& mats,
                                   const Matrix& y) {
  detail::require_matrix_tuple(mats, "apply_word_to_vector");
  detail::require_arity(w, mats.size(), "apply_word_to_vector");
  if (y.cols() != 1 || y.rows() != mats.front().rows()) {
    throw ShapeError("apply_word_to_vector: vector shape mismatch");
  }
  Matrix v = y;
  const auto& letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    v = mats[*it - 1] * v;
  }
  return v;
}

// Directional derivative of the word evaluation:
//   D(w)(A)[A'] = sum_j A_{i_1}...A_{i_{j-1}} * A'_{i_j} * A_{i_{j+1}}...A_{i_k}.
inline Matrix differentiate(const Word& w, const std::vector<Matrix>& mats,
                            const std::vector<Matrix>& direction) {
  detail::require_matrix_tuple(mats, "differentiate");
  detail::require_matrix_tuple(direction, "differentiate");
  if (mats.size() != direction.size()) {
    throw ShapeError("differentiate: tuple arities differ");
  }
  require_same_field(mats.front().field(), direction.front().field(), "differentiate");
  if (mats.front().rows() != direction.front().rows()) {
    throw ShapeError("differentiate: tuple sizes differ");
  }
  detail::require_arity(w, mats.size(), "differentiate");

  const ScalarField& field = mats.front().field();
  const std::size_t n = mats.front().rows();
  const auto& letters = w.letters();
  const std::size_t k = letters.size();

  // prefixes[j] = A_{i_1}...A_{i_j}, suffixes[j] = A_{i_{j+1}}...A_{i_k}.
  std::vector<Matrix> prefixes, suffixes;
  prefixes.reserve(k + 1);
  suffixes.assign(k + 1, Matrix::identity(field, n));
  prefixes.push_back(Matrix::identity(field, n));
  for (std::size_t j = 0; j < k; ++j) {
    prefixes.push_back(prefixes.back() * mats[letters[j] - 1]);
  }
  for (std::size_t j = k; j-- > 0;) {
    suffixes[j] = mats[letters[j] - 1] * suffixes[j + 1];
  }

  Matrix acc(field, n, n);
  for (std::size_t j = 0; j < k; ++j) {
    acc = acc + prefixes[j] * direction[letters[j] - 1] * suffixes[j + 1];
  }
  return acc;
}

inline Matrix differentiate(const NCPoly& f, const std::vector<Matrix>& mats,
                            const std::vector<Matrix>& direction) {
  detail::require_matrix_tuple(mats, "differentiate");
  require_same_field(f.field(), mats.front().field(), "differentiate");
  Matrix acc(mats.front().field(), mats.front().rows(), mats.front().rows());
  for (const auto& [w, c] : f.terms()) {
    acc = acc + c * differentiate(w, mats, direction);
  }
  return acc;
}

}  // namespace nchilb
