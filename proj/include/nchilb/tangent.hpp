#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nchilb/errors.hpp"
#include "nchilb/freealg.hpp"
#include "nchilb/matrix.hpp"
#include "nchilb/orbits.hpp"
#include "nchilb/points.hpp"
#include "nchilb/word.hpp"

namespace nchilb {

// A first-order deformation of a point: directions for the matrix tuple and
// for the vector y.
struct TangentVector {
  std::vector<Matrix> direction;  // one n x n matrix per generator
  Matrix y_direction;             // length-n column
};

struct BasedTangent {
  std::size_t dim;
  std::vector<TangentVector> basis;
};

namespace detail {

inline std::vector<Value> flatten_tangent(const TangentVector& v) {
  std::vector<Value> out;
  const std::size_t n = v.y_direction.rows();
  out.reserve(v.direction.size() * n * n + n);
  for (const Matrix& a : v.direction) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out.push_back(a.at(i, j));
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.push_back(v.y_direction.at(i, 0));
  return out;
}

inline TangentVector unflatten_tangent(const ScalarField& field, std::size_t m,
                                       std::size_t n, const Matrix& column) {
  std::vector<Matrix> mats;
  mats.reserve(m);
  std::size_t pos = 0;
  for (std::size_t s = 0; s < m; ++s) {
    Matrix a(field, n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a.set(i, j, column.at(pos++, 0));
    }
    mats.push_back(std::move(a));
  }
  Matrix y(field, n, 1);
  for (std::size_t i = 0; i < n; ++i) y.set(i, 0, column.at(pos++, 0));
  return TangentVector{std::move(mats), std::move(y)};
}

inline TangentVector unit_tangent(const ScalarField& field, std::size_t m, std::size_t n,
                                  std::size_t flat_index) {
  Matrix column(field, m * n * n + n, 1);
  column.set(flat_index, 0, Value::one(field));
  return unflatten_tangent(field, m, n, column);
}

}  // namespace detail

// Columns are the flattened vectors; used for rank and kernel computations
// on spaces of tangent vectors.
inline Matrix tangent_span_matrix(const std::vector<TangentVector>& vectors) {
  if (vectors.empty()) throw ShapeError("tangent_span_matrix: empty list");
  std::vector<Matrix> cols;
  cols.reserve(vectors.size());
  for (const TangentVector& v : vectors) {
    cols.push_back(Matrix::column(v.y_direction.field(), detail::flatten_tangent(v)));
  }
  return Matrix::from_columns(cols);
}

// Solves the linearized relations D(r)(A)[A'] = 0; y' is unconstrained. For
// the free algebra the space is everything, dimension m n^2 + n.
inline BasedTangent based_tangent(const PointData& p) {
  detail::require_valid_point(p, "based_tangent");
  const ScalarField& field = p.field();
  const std::size_t m = p.algebra.generators();
  const std::size_t n = p.n;
  const std::size_t unknowns = m * n * n + n;

  BasedTangent result;
  if (p.algebra.is_free()) {
    result.dim = unknowns;
    result.basis.reserve(unknowns);
    for (std::size_t u = 0; u < unknowns; ++u) {
      result.basis.push_back(detail::unit_tangent(field, m, n, u));
    }
    return result;
  }

  const std::size_t rows = p.algebra.relations().size() * n * n;
  Matrix constraints(field, rows, unknowns);
  for (std::size_t u = 0; u < m * n * n; ++u) {
    TangentVector unit = detail::unit_tangent(field, m, n, u);
    std::size_t row = 0;
    for (const NCPoly& r : p.algebra.relations()) {
      Matrix d = differentiate(r, p.matrices, unit.direction);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) constraints.set(row++, u, d.at(i, j));
      }
    }
  }
  for (Matrix& column : kernel_basis(constraints)) {
    result.basis.push_back(detail::unflatten_tangent(field, m, n, column));
  }
  result.dim = result.basis.size();
  return result;
}

// The n^2 directions induced by the group action: for each elementary xi,
// A'_s = [xi, A_s] and y' = xi y. These always satisfy the linearized
// relations, and at a valid point the map xi -> direction is injective.
inline std::vector<TangentVector> gl_directions(const PointData& p) {
  const ScalarField& field = p.field();
  const std::size_t n = p.n;
  std::vector<TangentVector> out;
  out.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Matrix xi(field, n, n);
      xi.set(i, j, Value::one(field));
      std::vector<Matrix> dirs;
      dirs.reserve(p.matrices.size());
      for (const Matrix& a : p.matrices) dirs.push_back(xi * a - a * xi);
      out.push_back(TangentVector{std::move(dirs), xi * p.y});
    }
  }
  return out;
}

// The linear map sending a tangent vector at p to a module map I -> M,
// recorded by its values on the border generators:
//   phi(g_b) = D(g_b)(A)[A'] y + g_b(A) y',
// written in the coordinates of the Krylov basis {s(A) y}. The point's
// ideal, Krylov frame, and generator evaluations are computed once and
// shared across applications. The group directions land in the kernel.
class TangentHomMap {
public:
  explicit TangentHomMap(const PointData& p)
      : point_(p), ideal_(extract_ideal(canonicalize(p))) {
    basis_inverse_.emplace(*inverse(Matrix::from_columns(krylov_basis(p).vectors)));
    for (const auto& [b, g] : ideal_.generators) {
      evaluated_.emplace(b, evaluate(g, point_.matrices));
    }
  }

  const IdealData& ideal() const { return ideal_; }

  std::map<Word, Matrix> values(const TangentVector& v) const {
    for (const NCPoly& r : point_.algebra.relations()) {
      if (!differentiate(r, point_.matrices, v.direction).is_zero()) {
        throw DomainError("tangent_vector_to_hom: the direction violates the "
                          "linearized relations");
      }
    }
    std::map<Word, Matrix> out;
    for (const auto& [b, g] : ideal_.generators) {
      Matrix raw = differentiate(g, point_.matrices, v.direction) * point_.y +
                   evaluated_.at(b) * v.y_direction;
      out.emplace(b, *basis_inverse_ * raw);
    }
    return out;
  }

  // One column per input vector, the border generators stacked in
  // length-lex order; for rank and kernel computations.
  Matrix matrix(const std::vector<TangentVector>& vectors) const {
    if (vectors.empty()) throw ShapeError("TangentHomMap::matrix: empty list");
    std::vector<Matrix> cols;
    cols.reserve(vectors.size());
    for (const TangentVector& v : vectors) {
      std::vector<Value> flat;
      for (const auto& [b, col] : values(v)) {
        for (std::size_t i = 0; i < col.rows(); ++i) flat.push_back(col.at(i, 0));
      }
      cols.push_back(Matrix::column(point_.field(), flat));
    }
    return Matrix::from_columns(cols);
  }

private:
  PointData point_;
  IdealData ideal_;
  std::optional<Matrix> basis_inverse_;
  std::map<Word, Matrix> evaluated_;
};

inline std::map<Word, Matrix> tangent_vector_to_hom(const PointData& p,
                                                    const TangentVector& v) {
  return TangentHomMap(p).values(v);
}

inline Matrix tangent_hom_matrix(const PointData& p,
                                 const std::vector<TangentVector>& vectors) {
  return TangentHomMap(p).matrix(vectors);
}

// dim Hom(M_p, M_q): matrices phi with phi A_s(p) = A_s(q) phi for every
// generator; compatibility with the relations is automatic for modules over
// the same algebra.
inline std::size_t hom_space_dim(const PointData& p, const PointData& q) {
  if (!(p.algebra == q.algebra)) {
    throw DomainError("hom_space_dim: modules over different algebras");
  }
  if (!check_relations(p) || !check_relations(q)) {
    throw DomainError("hom_space_dim: matrices do not satisfy the relations");
  }
  const ScalarField& field = p.field();
  const std::size_t np = p.n, nq = q.n, m = p.algebra.generators();
  // Unknown phi is nq x np, flattened row-major.
  Matrix constraints(field, m * nq * np, nq * np);
  std::size_t row = 0;
  for (std::size_t s = 0; s < m; ++s) {
    const Matrix& ap = p.matrices[s];
    const Matrix& aq = q.matrices[s];
    for (std::size_t a = 0; a < nq; ++a) {
      for (std::size_t b = 0; b < np; ++b) {
        // (phi ap - aq phi)_{a,b} = 0
        for (std::size_t j = 0; j < np; ++j) {
          constraints.set(row, a * np + j, constraints.at(row, a * np + j) + ap.at(j, b));
        }
        for (std::size_t i = 0; i < nq; ++i) {
          constraints.set(row, i * np + b, constraints.at(row, i * np + b) - aq.at(a, i));
        }
        ++row;
      }
    }
  }
  return nq * np - rank(constraints);
}

// dim Ext^1(M_p, M_q) over the free algebra: the cokernel dimension of
// phi -> (phi A_s(p) - A_s(q) phi)_s. Together with hom_space_dim this
// realizes the Euler form hom - ext1 = (1 - m) dim M_p dim M_q.
inline std::size_t ext1_dim_free(const PointData& p, const PointData& q) {
  if (!p.algebra.is_free() || !q.algebra.is_free()) {
    throw DomainError("ext1_dim_free: the algebra has relations");
  }
  require_same_field(p.field(), q.field(), "ext1_dim_free");
  if (p.algebra.generators() != q.algebra.generators()) {
    throw DomainError("ext1_dim_free: generator counts differ");
  }
  const ScalarField& field = p.field();
  const std::size_t np = p.n, nq = q.n, m = p.algebra.generators();
  Matrix map(field, m * nq * np, nq * np);
  std::size_t row = 0;
  for (std::size_t s = 0; s < m; ++s) {
    const Matrix& ap = p.matrices[s];
    const Matrix& aq = q.matrices[s];
    for (std::size_t a = 0; a < nq; ++a) {
      for (std::size_t b = 0; b < np; ++b) {
        for (std::size_t j = 0; j < np; ++j) {
          map.set(row, a * np + j, map.at(row, a * np + j) + ap.at(j, b));
        }
        for (std::size_t i = 0; i < nq; ++i) {
          map.set(row, i * np + b, map.at(row, i * np + b) - aq.at(a, i));
        }
        ++row;
      }
    }
  }
  return m * nq * np - rank(map);
}

enum class TangentStatus { Exact, Truncated, Unstable };

struct TangentReport {
  std::size_t based_tangent_dim = 0;
  std::size_t gl_dim = 0;
  std::size_t hom_i_m_dim = 0;
  std::optional<std::size_t> hom_mm_dim;       // free algebra only
  std::optional<std::size_t> ext1_mm_dim;      // free algebra only
  TangentStatus status = TangentStatus::Exact;
  std::optional<std::size_t> stabilization_degree;  // truncated only
};

// Tangent dimension at a valid point.
//
// Free algebra: dim Hom(I, M) = n - hom(M, M) + ext1(M, M) from the long
// exact sequence of 0 -> I -> A -> M -> 0; always (m-1) n^2 + n.
//
// With relations: degree truncation. The annihilator ideal of y inside the
// free algebra is presented by the border generators, and a module map
// phi: I -> M is a choice of phi(g_b) subject to phi(r w) = 0 for every
// relation r and word w (the border generators have no relations of their
// own inside the free algebra, so these are the only constraints). The
// constraints are imposed for r w of total degree <= d, with d climbing from
// n until the dimension agrees on two consecutive degrees; failure to
// stabilize by the cap is reported, never silently accepted.
inline TangentReport tangent_dim(const PointData& p, std::size_t max_degree = 0) {
  detail::require_valid_point(p, "tangent_dim");
  const std::size_t n = p.n;
  const std::size_t m = p.algebra.generators();

  TangentReport report;
  report.based_tangent_dim = based_tangent(p).dim;
  report.gl_dim = n * n;

  if (p.algebra.is_free()) {
    std::size_t hom_mm = hom_space_dim(p, p);
    std::size_t ext1_mm = ext1_dim_free(p, p);
    report.hom_mm_dim = hom_mm;
    report.ext1_mm_dim = ext1_mm;
    report.hom_i_m_dim = n - hom_mm + ext1_mm;
    report.status = TangentStatus::Exact;
    return report;
  }

  IdealData ideal = extract_ideal(canonicalize(p));
  const PointData canonical = point_from_ideal(ideal);
  const std::size_t num_borders = ideal.generators.size();
  const std::size_t unknowns = num_borders * n;
  std::map<Word, std::size_t> border_index;
  for (const auto& [b, g] : ideal.generators) {
    border_index.emplace(b, border_index.size());
  }

  const std::size_t cap = max_degree == 0 ? 2 * n + 2 : max_degree;
  std::optional<std::size_t> previous;
  for (std::size_t d = n; d <= cap; ++d) {
    // Collect the constraint rows phi(r w) = 0 for deg(r) + |w| <= d.
    std::vector<std::vector<Value>> rows;
    for (const NCPoly& r : p.algebra.relations()) {
      if (r.degree() > d) continue;
      for (const Word& w : words_up_to_length(m, d - r.degree())) {
        NCPoly rw = r * NCPoly::of_word(p.field(), w);
        ReductionResult red = reduce_with_steps(rw, ideal);
        if (!red.normal_form.is_zero()) {
          throw InternalError("tangent_dim: r * w did not reduce to zero in the "
                              "annihilator ideal");
        }
        std::vector<Matrix> blocks(num_borders, Matrix(p.field(), n, n));
        for (const ReductionStep& step : red.steps) {
          std::size_t col = border_index.at(step.border);
          blocks[col] = blocks[col] + step.coeff * evaluate(step.left, canonical.matrices);
        }
        for (std::size_t i = 0; i < n; ++i) {
          std::vector<Value> row;
          row.reserve(unknowns);
          for (std::size_t blk = 0; blk < num_borders; ++blk) {
            for (std::size_t j = 0; j < n; ++j) row.push_back(blocks[blk].at(i, j));
          }
          rows.push_back(std::move(row));
        }
      }
    }
    std::size_t dim = unknowns;
    if (!rows.empty()) {
      Matrix constraints(p.field(), rows.size(), unknowns);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < unknowns; ++j) constraints.set(i, j, rows[i][j]);
      }
      dim = unknowns - rank(constraints);
    }
    if (previous && *previous == dim) {
      report.hom_i_m_dim = dim;
      report.status = TangentStatus::Truncated;
      report.stabilization_degree = d;
      return report;
    }
    previous = dim;
  }
  report.hom_i_m_dim = previous.value_or(unknowns);
  report.status = TangentStatus::Unstable;
  return report;
}

}  // namespace nchilb
