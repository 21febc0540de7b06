#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nchilb/errors.hpp"
#include "nchilb/freealg.hpp"
#include "nchilb/matrix.hpp"
#include "nchilb/word.hpp"

namespace nchilb {

// A point of the based moduli space: an m-tuple of n x n matrices together
// with a column vector y. Shapes and fields are constructor-checked; whether
// the point actually satisfies the relations and has cyclic y is decided by
// check_relations / is_cyclic, because the census enumerator must be able to
// hold invalid candidates too.
struct PointData {
  AlgebraPresentation algebra;
  std::size_t n;
  std::vector<Matrix> matrices;
  Matrix y;

  PointData(AlgebraPresentation algebra_, std::size_t n_, std::vector<Matrix> matrices_,
            Matrix y_)
      : algebra(std::move(algebra_)), n(n_), matrices(std::move(matrices_)),
        y(std::move(y_)) {
    if (n == 0) throw ShapeError("PointData: n must be positive");
    if (matrices.size() != algebra.generators()) {
      throw ShapeError("PointData: expected " + std::to_string(algebra.generators()) +
                       " matrices, got " + std::to_string(matrices.size()));
    }
    for (const Matrix& a : matrices) {
      require_same_field(algebra.field(), a.field(), "PointData");
      if (a.rows() != n || a.cols() != n) throw ShapeError("PointData: matrices must be n x n");
    }
    require_same_field(algebra.field(), y.field(), "PointData");
    if (y.rows() != n || y.cols() != 1) throw ShapeError("PointData: y must be a length-n column");
  }

  const ScalarField& field() const { return algebra.field(); }

  friend bool operator==(const PointData& a, const PointData& b) {
    return a.algebra == b.algebra && a.n == b.n && a.matrices == b.matrices && a.y == b.y;
  }
};

// An invertible n x n matrix; the inverse is computed once at construction.
class GroupElement {
public:
  explicit GroupElement(Matrix g) : g_(std::move(g)), inv_(g_) {
    if (!g_.is_square()) throw ShapeError("GroupElement: matrix must be square");
    std::optional<Matrix> inv = inverse(g_);
    if (!inv) throw DomainError("GroupElement: matrix is singular");
    inv_ = *std::move(inv);
  }

  static GroupElement identity(const ScalarField& field, std::size_t n) {
    return GroupElement(Matrix::identity(field, n));
  }

  const Matrix& matrix() const { return g_; }
  const Matrix& inverse_matrix() const { return inv_; }
  std::size_t size() const { return g_.rows(); }
  Value determinant() const { return det(g_); }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    return GroupElement(a.g_ * b.g_);
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.g_ == b.g_;
  }

private:
  Matrix g_;
  Matrix inv_;
};

// An (n-1)-tuple of elements of the free algebra indexing a chart; empty
// when n = 1.
struct ChartIndex {
  std::vector<NCPoly> entries;

  static ChartIndex of_words(const ScalarField& field, const std::vector<Word>& words) {
    ChartIndex f;
    f.entries.reserve(words.size());
    for (const Word& w : words) f.entries.push_back(NCPoly::of_word(field, w));
    return f;
  }

  friend bool operator==(const ChartIndex& a, const ChartIndex& b) = default;
};

// True iff every defining relation evaluates to the zero matrix.
inline bool check_relations(const PointData& p) {
  for (const NCPoly& r : p.algebra.relations()) {
    if (!evaluate(r, p.matrices).is_zero()) return false;
  }
  return true;
}

struct KrylovResult {
  std::vector<Word> words;     // accepted words, length-lex sorted, prefix-closed
  std::vector<Matrix> vectors; // w(A) y for each accepted word
};

// Greedy breadth-first search over the word tree in length-lex order:
// start at the unit word with vector y; the children of an accepted word w
// are x_j * w (one matrix-vector product each); a candidate is accepted iff
// its vector is linearly independent of the previously accepted ones. Stops
// as soon as n words are accepted or a whole level adds nothing. Accepted
// words always have length <= n-1.
inline KrylovResult krylov_basis(const PointData& p) {
  KrylovResult result;

  // Echelonized copies of the accepted vectors, for the independence test.
  std::vector<std::pair<std::size_t, Matrix>> echelon;  // (pivot row, vector)
  auto try_accept = [&](const Matrix& v) -> bool {
    Matrix r = v;
    for (const auto& [piv, u] : echelon) {
      if (!r.at(piv, 0).is_zero()) r = r - r.at(piv, 0) * u;
    }
    for (std::size_t i = 0; i < p.n; ++i) {
      if (!r.at(i, 0).is_zero()) {
        echelon.emplace_back(i, r.at(i, 0).inverse() * r);
        return true;
      }
    }
    return false;
  };

  std::size_t m = p.algebra.generators();
  std::vector<std::pair<Word, Matrix>> frontier;
  if (try_accept(p.y)) {
    result.words.push_back(Word::unit());
    result.vectors.push_back(p.y);
    frontier.emplace_back(Word::unit(), p.y);
  }
  while (!frontier.empty() && result.words.size() < p.n) {
    std::vector<std::pair<Word, Matrix>> next;
    // Candidates of this level in length-lex order: the first letter varies
    // slowest, the parent (already length-lex sorted) fastest.
    for (std::uint32_t j = 1; j <= m && result.words.size() < p.n; ++j) {
      for (const auto& [w, v] : frontier) {
        Matrix candidate = p.matrices[j - 1] * v;
        if (try_accept(candidate)) {
          Word word = w.prepend(j);
          result.words.push_back(word);
          result.vectors.push_back(candidate);
          next.emplace_back(std::move(word), std::move(candidate));
          if (result.words.size() == p.n) break;
        }
      }
    }
    frontier = std::move(next);
  }
  return result;
}

inline bool is_cyclic(const PointData& p) { return krylov_basis(p).words.size() == p.n; }

// The n x n matrix with columns y, f_1(A) y, ..., f_{n-1}(A) y.
inline Matrix chart_matrix(const PointData& p, const ChartIndex& f) {
  if (f.entries.size() + 1 != p.n) {
    throw ShapeError("chart_matrix: chart has " + std::to_string(f.entries.size()) +
                     " entries but n = " + std::to_string(p.n));
  }
  Matrix m(p.field(), p.n, p.n);
  for (std::size_t i = 0; i < p.n; ++i) m.set(i, 0, p.y.at(i, 0));
  for (std::size_t j = 0; j < f.entries.size(); ++j) {
    require_same_field(p.field(), f.entries[j].field(), "chart_matrix");
    Matrix col = evaluate(f.entries[j], p.matrices) * p.y;
    for (std::size_t i = 0; i < p.n; ++i) m.set(i, j + 1, col.at(i, 0));
  }
  return m;
}

// The determinant section D_f; p lies in the chart U_f iff D_f(p) != 0.
inline Value chart_det(const PointData& p, const ChartIndex& f) {
  return det(chart_matrix(p, f));
}

inline bool in_chart(const PointData& p, const ChartIndex& f) {
  return !chart_det(p, f).is_zero();
}

// The change-of-basis action: g . (A_1,...,A_m,Y) = (gA_1g^-1,...,gA_mg^-1,gY).
inline PointData gl_act(const GroupElement& g, const PointData& p) {
  require_same_field(g.matrix().field(), p.field(), "gl_act");
  if (g.size() != p.n) throw ShapeError("gl_act: group element size mismatch");
  std::vector<Matrix> mats;
  mats.reserve(p.matrices.size());
  for (const Matrix& a : p.matrices) mats.push_back(g.matrix() * a * g.inverse_matrix());
  return PointData(p.algebra, p.n, std::move(mats), g.matrix() * p.y);
}

struct ChartNormalization {
  PointData point;   // the slice representative: chart_matrix(point, f) = identity
  GroupElement g;    // the group element that moved p there
};

// Moves p to the unique point of its orbit whose chart matrix is the
// identity, by acting with chart_matrix(p, f)^-1. Requires D_f(p) != 0.
inline ChartNormalization normalize_in_chart(const PointData& p, const ChartIndex& f) {
  Matrix mf = chart_matrix(p, f);
  std::optional<Matrix> inv = inverse(mf);
  if (!inv) throw NotInChartError("normalize_in_chart: chart determinant vanishes");
  GroupElement g(*std::move(inv));
  return ChartNormalization{gl_act(g, p), std::move(g)};
}

// M_{f'}^-1 * M_f at p; defined on the chart overlap and invariant under the
// group action because both factors pick up the same left factor.
inline GroupElement transition_cocycle(const PointData& p, const ChartIndex& f,
                                       const ChartIndex& fprime) {
  Matrix mf = chart_matrix(p, f);
  Matrix mfp = chart_matrix(p, fprime);
  std::optional<Matrix> inv = inverse(mfp);
  if (!inv || det(mf).is_zero()) {
    throw NotInChartError("transition_cocycle: point is not in both charts");
  }
  return GroupElement(*inv * mf);
}

// Checks the weight-k scaling law for a product of k determinant sections:
//   prod_i D_{f_i}(g . p) == det(g)^k * prod_i D_{f_i}(p).
inline bool semi_invariant_weight_check(const std::vector<ChartIndex>& sections,
                                        const PointData& p, const GroupElement& g) {
  PointData moved = gl_act(g, p);
  Value lhs = Value::one(p.field());
  Value rhs = g.determinant().pow(sections.size());
  for (const ChartIndex& f : sections) {
    lhs = lhs * chart_det(moved, f);
    rhs = rhs * chart_det(p, f);
  }
  return lhs == rhs;
}

// Raw homogeneous coordinates (D_{f^(0)}(p)^power, ..., D_{f^(N)}(p)^power).
// All-zero output means the family does not cover p and is an error.
inline std::vector<Value> embedding_coordinates(const PointData& p,
                                                const std::vector<ChartIndex>& family,
                                                std::uint64_t power) {
  if (family.empty()) throw DomainError("embedding_coordinates: empty chart family");
  if (power == 0) throw DomainError("embedding_coordinates: power must be positive");
  std::vector<Value> coords;
  coords.reserve(family.size());
  bool any_nonzero = false;
  for (const ChartIndex& f : family) {
    Value d = chart_det(p, f).pow(power);
    any_nonzero = any_nonzero || !d.is_zero();
    coords.push_back(std::move(d));
  }
  if (!any_nonzero) {
    throw DomainError("embedding_coordinates: all coordinates vanish; "
                      "the chart family does not cover the point");
  }
  return coords;
}

// Scales the first nonzero coordinate to 1, making projective equality a
// plain data equality.
inline std::vector<Value> projective_normalize(std::vector<Value> coords) {
  for (const Value& v : coords) {
    if (!v.is_zero()) {
      Value inv = v.inverse();
      for (Value& c : coords) c = inv * c;
      return coords;
    }
  }
  throw DomainError("projective_normalize: zero vector");
}

inline bool projective_equal(const std::vector<Value>& a, const std::vector<Value>& b) {
  return projective_normalize(a) == projective_normalize(b);
}

// 2 * (number of degrees) * (product of degrees): a degree from which the
// graded pieces are generated by the bottom one.
inline std::uint64_t veronese_bound(const std::vector<std::uint64_t>& degrees) {
  if (degrees.empty()) throw DomainError("veronese_bound: empty degree list");
  std::uint64_t product = 1;
  for (std::uint64_t d : degrees) {
    if (d == 0) throw DomainError("veronese_bound: degrees must be positive");
    if (product > UINT64_MAX / d) throw DomainError("veronese_bound: overflow");
    product *= d;
  }
  std::uint64_t n = degrees.size();
  if (product > UINT64_MAX / (2 * n)) throw DomainError("veronese_bound: overflow");
  return 2 * n * product;
}

struct ReducedPoint {
  PointData point;
  bool cyclic;  // recomputed after reduction; it may differ from the source
};

// Entrywise reduction of a point over Q modulo a prime. Relations reduce
// along (polynomial identities survive), but cyclicity can be lost, so it is
// recomputed and reported.
inline ReducedPoint reduce_point_mod_p(const PointData& p, std::uint64_t prime) {
  if (!p.field().is_rationals()) {
    throw DomainError("reduce_point_mod_p: point is not over Q");
  }
  ScalarField fp = ScalarField::prime_field(prime);
  AlgebraPresentation algebra = p.algebra.change_field(fp);
  auto reduce_matrix = [&](const Matrix& a) {
    Matrix r(fp, a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        r.set(i, j, Value::of_rational(fp, a.at(i, j).rational()));
      }
    }
    return r;
  };
  std::vector<Matrix> mats;
  mats.reserve(p.matrices.size());
  for (const Matrix& a : p.matrices) mats.push_back(reduce_matrix(a));
  PointData reduced(std::move(algebra), p.n, std::move(mats), reduce_matrix(p.y));
  bool cyclic = is_cyclic(reduced);
  return ReducedPoint{std::move(reduced), cyclic};
}

// Every (n-1)-tuple of words of length <= max_len, as a chart family over
// the given field, in length-lex product order (last entry fastest). By the
// Krylov bound, max_len = n-1 yields a family covering every cyclic point.
inline std::vector<ChartIndex> word_chart_family(const ScalarField& field, std::size_t m,
                                                 std::size_t n, std::size_t max_len) {
  std::vector<ChartIndex> family;
  if (n == 1) {
    family.push_back(ChartIndex{});
    return family;
  }
  std::vector<Word> words = words_up_to_length(m, max_len);
  std::vector<std::size_t> idx(n - 1, 0);
  while (true) {
    std::vector<Word> tuple;
    tuple.reserve(n - 1);
    for (std::size_t i : idx) tuple.push_back(words[i]);
    family.push_back(ChartIndex::of_words(field, tuple));
    std::size_t pos = n - 1;
    while (pos > 0 && ++idx[pos - 1] == words.size()) {
      idx[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) return family;
  }
}

}  // namespace nchilb
