#pragma once

#include <cstdint>
#include <exception>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nchilb/errors.hpp"
#include "nchilb/freealg.hpp"
#include "nchilb/orbits.hpp"
#include "nchilb/points.hpp"
#include "nchilb/word.hpp"

namespace nchilb {

// A cell of the moduli space of the free algebra: a prefix-closed n-element
// word set S containing the unit word, together with its dimension
//   dim(S) = sum over border words b of #{t in S : t < b},
// i.e. the number of free border coefficients under the support condition.
struct Cell {
  std::vector<Word> basis_words;
  std::uint64_t dimension;

  friend bool operator==(const Cell& a, const Cell& b) = default;
};

namespace detail {

inline std::uint64_t cell_dimension(const std::vector<Word>& basis, std::size_t m) {
  std::set<Word> in_basis(basis.begin(), basis.end());
  std::uint64_t dim = 0;
  for (const Word& s : basis) {
    for (std::uint32_t j = 1; j <= m; ++j) {
      Word b = s.prepend(j);
      if (in_basis.count(b)) continue;
      for (const Word& t : basis) {
        if (t < b) ++dim;
      }
    }
  }
  return dim;
}

inline void enumerate_cells_rec(std::size_t m, std::size_t n, std::vector<Word>& basis,
                                std::vector<Cell>& out) {
  if (basis.size() == n) {
    out.push_back(Cell{basis, cell_dimension(basis, m)});
    return;
  }
  // Extend by candidates above the last added word; every prefix-closed set
  // arises exactly once this way because parents are length-lex smaller than
  // their children.
  const Word& last = basis.back();
  std::set<Word> in_basis(basis.begin(), basis.end());
  std::set<Word> candidates;
  for (const Word& s : basis) {
    for (std::uint32_t j = 1; j <= m; ++j) {
      Word b = s.prepend(j);
      if (b > last && !in_basis.count(b)) candidates.insert(std::move(b));
    }
  }
  for (const Word& c : candidates) {
    basis.push_back(c);
    enumerate_cells_rec(m, n, basis, out);
    basis.pop_back();
  }
}

}  // namespace detail

// All cells for m generators and module dimension n, in lexicographic order
// of their sorted word lists. For m = 2 the number of cells is the n-th
// Catalan number.
inline std::vector<Cell> enumerate_cells(std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw DomainError("enumerate_cells: m and n must be positive");
  std::vector<Cell> out;
  std::vector<Word> basis{Word::unit()};
  detail::enumerate_cells_rec(m, n, basis, out);
  return out;
}

// Integer-coefficient polynomial in q recording the point count of the
// moduli space over F_q as a sum of affine cells.
class CountPolynomial {
public:
  void add_monomial(std::uint64_t exponent, std::uint64_t coefficient) {
    if (coefficient == 0) return;
    coefficients_[exponent] += coefficient;
  }

  const std::map<std::uint64_t, std::uint64_t>& coefficients() const {
    return coefficients_;
  }

  std::uint64_t top_degree() const {
    if (coefficients_.empty()) throw DomainError("CountPolynomial: zero polynomial");
    return coefficients_.rbegin()->first;
  }

  std::uint64_t evaluate(std::uint64_t q) const {
    unsigned __int128 total = 0;
    for (const auto& [e, c] : coefficients_) {
      unsigned __int128 term = c;
      for (std::uint64_t i = 0; i < e; ++i) {
        term *= q;
        if (term > (unsigned __int128)UINT64_MAX) {
          throw DomainError("CountPolynomial::evaluate: value exceeds 64 bits");
        }
      }
      total += term;
      if (total > (unsigned __int128)UINT64_MAX) {
        throw DomainError("CountPolynomial::evaluate: value exceeds 64 bits");
      }
    }
    return static_cast<std::uint64_t>(total);
  }

  friend bool operator==(const CountPolynomial& a, const CountPolynomial& b) = default;

private:
  std::map<std::uint64_t, std::uint64_t> coefficients_;
};

// Sum of q^dim over the cells. The top term is always q^((m-1)n^2 + n) with
// coefficient 1; anything else is an internal error.
inline CountPolynomial count_polynomial(std::size_t m, std::size_t n) {
  CountPolynomial poly;
  for (const Cell& cell : enumerate_cells(m, n)) {
    poly.add_monomial(cell.dimension, 1);
  }
  std::uint64_t expected_top = (static_cast<std::uint64_t>(m) - 1) * n * n + n;
  if (poly.top_degree() != expected_top ||
      poly.coefficients().rbegin()->second != 1) {
    throw InternalError("count_polynomial: top cell has unexpected dimension");
  }
  return poly;
}

// |GL_n(F_q)| = prod_{i=0}^{n-1} (q^n - q^i).
inline std::uint64_t gl_group_order(std::size_t n, std::uint64_t q) {
  unsigned __int128 qn = 1;
  for (std::size_t i = 0; i < n; ++i) qn *= q;
  unsigned __int128 order = 1;
  unsigned __int128 qi = 1;
  for (std::size_t i = 0; i < n; ++i) {
    order *= qn - qi;
    qi *= q;
    if (order > (unsigned __int128)UINT64_MAX) {
      throw DomainError("gl_group_order: value exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(order);
}

struct CensusOptions {
  std::uint64_t budget = 100'000'000;  // refuse larger tuple spaces
  unsigned shards = 1;                 // contiguous index ranges, one thread each
  bool collect_forms = false;          // also gather the canonical forms
};

struct CensusResult {
  std::uint64_t total_tuples = 0;
  std::uint64_t cyclic_count = 0;  // tuples passing the relations with cyclic y
  std::uint64_t orbit_count = 0;   // cyclic_count / |GL_n(F_q)|, exactly
  std::set<CanonicalForm> forms;   // filled only when collect_forms is set
};

namespace detail {

// Index -> tuple decoding: base-q digits fill the matrices in generator
// order, each row-major, then y; the last coordinate is the fastest wheel.
inline PointData census_point(const AlgebraPresentation& algebra, std::size_t n,
                              std::uint64_t index, std::uint64_t q) {
  const ScalarField& field = algebra.field();
  const std::size_t m = algebra.generators();
  const std::size_t num_entries = m * n * n + n;
  std::vector<std::uint32_t> digits(num_entries, 0);
  for (std::size_t t = num_entries; t-- > 0;) {
    digits[t] = static_cast<std::uint32_t>(index % q);
    index /= q;
  }
  std::vector<Matrix> mats;
  mats.reserve(m);
  std::size_t pos = 0;
  for (std::size_t s = 0; s < m; ++s) {
    Matrix a(field, n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a.set(i, j, Value::residue(field, digits[pos++]));
    }
    mats.push_back(std::move(a));
  }
  Matrix y(field, n, 1);
  for (std::size_t i = 0; i < n; ++i) y.set(i, 0, Value::residue(field, digits[pos++]));
  return PointData(algebra, n, std::move(mats), std::move(y));
}

}  // namespace detail

// Exhaustive census over F_q: counts the tuples (A_1,...,A_m,y) that satisfy
// the relations and have cyclic y, and divides by |GL_n(F_q)|. The division
// must be exact because the group acts freely on those tuples; a remainder
// is an internal error, never rounded away. Shards partition the index space
// into contiguous ranges processed independently; the result does not depend
// on the shard count.
inline CensusResult census(const AlgebraPresentation& algebra, std::size_t n,
                           std::uint64_t q, const CensusOptions& options = {}) {
  if (!algebra.field().is_prime_field() || algebra.field().characteristic() != q) {
    throw DomainError("census: algebra must be presented over F_q");
  }
  const std::size_t m = algebra.generators();
  const std::size_t num_entries = m * n * n + n;
  unsigned __int128 total = 1;
  for (std::size_t i = 0; i < num_entries; ++i) {
    total *= q;
    if (total > (unsigned __int128)UINT64_MAX || total > options.budget) {
      throw BudgetError("census: " + std::to_string(m) + " matrices of size " +
                        std::to_string(n) + " over F_" + std::to_string(q) +
                        " exceed the tuple budget of " + std::to_string(options.budget));
    }
  }
  const std::uint64_t total_tuples = static_cast<std::uint64_t>(total);

  struct ShardResult {
    std::uint64_t cyclic = 0;
    std::set<CanonicalForm> forms;
    std::exception_ptr error;
  };

  unsigned shards = options.shards == 0 ? 1 : options.shards;
  if (shards > total_tuples) shards = static_cast<unsigned>(total_tuples);
  std::vector<ShardResult> results(shards);

  auto work = [&](unsigned shard) {
    ShardResult& out = results[shard];
    try {
      std::uint64_t begin = total_tuples / shards * shard;
      std::uint64_t end =
          shard + 1 == shards ? total_tuples : total_tuples / shards * (shard + 1);
      for (std::uint64_t index = begin; index < end; ++index) {
        PointData p = detail::census_point(algebra, n, index, q);
        if (!check_relations(p)) continue;
        KrylovResult krylov = krylov_basis(p);
        if (krylov.words.size() != n) continue;
        ++out.cyclic;
        if (options.collect_forms) out.forms.insert(canonicalize(p));
      }
    } catch (...) {
      out.error = std::current_exception();
    }
  };

  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(shards);
    for (unsigned s = 0; s < shards; ++s) threads.emplace_back(work, s);
    for (std::thread& t : threads) t.join();
  }

  CensusResult result;
  result.total_tuples = total_tuples;
  for (ShardResult& r : results) {
    if (r.error) std::rethrow_exception(r.error);
    result.cyclic_count += r.cyclic;
    result.forms.merge(r.forms);
  }
  std::uint64_t order = gl_group_order(n, q);
  if (result.cyclic_count % order != 0) {
    throw InternalError("census: cyclic count " + std::to_string(result.cyclic_count) +
                        " is not divisible by |GL_" + std::to_string(n) + "(F_" +
                        std::to_string(q) + ")| = " + std::to_string(order));
  }
  result.orbit_count = result.cyclic_count / order;
  return result;
}

// True iff the census orbit count of the free algebra on m generators equals
// the cell-count polynomial at every listed prime.
inline bool polynomial_fit_check(std::size_t m, std::size_t n,
                                 const std::vector<std::uint64_t>& primes,
                                 const CensusOptions& options = {}) {
  CountPolynomial poly = count_polynomial(m, n);
  for (std::uint64_t q : primes) {
    AlgebraPresentation algebra =
        AlgebraPresentation::free_algebra(m, ScalarField::prime_field(q));
    CensusResult result = census(algebra, n, q, options);
    if (result.orbit_count != poly.evaluate(q)) return false;
  }
  return true;
}

struct EmbeddingCheck {
  bool ok = false;          // forms_pass and orbit_count_b <= orbit_count_a
  bool forms_pass = false;  // every canonical form of B satisfies A's relations
  std::uint64_t orbit_count_a = 0;
  std::uint64_t orbit_count_b = 0;
};

// For a declared quotient map (every relation of A appears among the
// relations of B): censuses B, re-checks every canonical form of B against
// the relations of A, and compares the orbit counts. Passes iff all forms
// check out and orbit_count(B) <= orbit_count(A).
inline EmbeddingCheck check_closed_embedding(const AlgebraPresentation& algebra_a,
                                             const AlgebraPresentation& algebra_b,
                                             std::size_t n, std::uint64_t q,
                                             const CensusOptions& options = {}) {
  ScalarField fq = ScalarField::prime_field(q);
  AlgebraPresentation a = algebra_a.field() == fq ? algebra_a : algebra_a.change_field(fq);
  AlgebraPresentation b = algebra_b.field() == fq ? algebra_b : algebra_b.change_field(fq);
  if (a.generators() != b.generators()) {
    throw DomainError("check_closed_embedding: generator counts differ");
  }
  for (const NCPoly& r : a.relations()) {
    bool found = false;
    for (const NCPoly& s : b.relations()) {
      if (r == s) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw DomainError("check_closed_embedding: the second algebra is not presented "
                        "as a quotient of the first (missing relation " +
                        r.to_string() + ")");
    }
  }

  CensusOptions with_forms = options;
  with_forms.collect_forms = true;
  CensusResult census_b = census(b, n, q, with_forms);
  EmbeddingCheck result;
  result.forms_pass = true;
  for (const CanonicalForm& form : census_b.forms) {
    PointData as_a(a, n, form.canonical_point.matrices, form.canonical_point.y);
    if (!check_relations(as_a)) {
      result.forms_pass = false;
      break;
    }
  }
  CensusResult census_a = census(a, n, q, options);
  result.orbit_count_a = census_a.orbit_count;
  result.orbit_count_b = census_b.orbit_count;
  result.ok = result.forms_pass && census_b.orbit_count <= census_a.orbit_count;
  return result;
}

}  // namespace nchilb
