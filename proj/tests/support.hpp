#pragma once

// Deterministic random generators shared by the test suites. Everything is
// seeded explicitly so failures reproduce.

#include <cstdint>
#include <random>
#include <vector>

#include "nchilb/freealg.hpp"
#include "nchilb/matrix.hpp"
#include "nchilb/orbits.hpp"
#include "nchilb/points.hpp"
#include "nchilb/word.hpp"

namespace nchilb::testing {

using Rng = std::mt19937_64;

// Over Q: small integers |v| <= 3 keep rational growth tame. Over F_p:
// uniform residues.
inline Value random_value(Rng& rng, const ScalarField& field) {
  if (field.is_rationals()) {
    std::uniform_int_distribution<std::int64_t> dist(-3, 3);
    return Value::of_integer(field, dist(rng));
  }
  std::uniform_int_distribution<std::uint32_t> dist(0, field.characteristic() - 1);
  return Value::residue(field, dist(rng));
}

inline Matrix random_matrix(Rng& rng, const ScalarField& field, std::size_t rows,
                            std::size_t cols) {
  Matrix m(field, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, random_value(rng, field));
  }
  return m;
}

inline GroupElement random_invertible(Rng& rng, const ScalarField& field, std::size_t n) {
  while (true) {
    Matrix g = random_matrix(rng, field, n, n);
    if (!det(g).is_zero()) return GroupElement(std::move(g));
  }
}

inline Word random_word(Rng& rng, std::size_t m, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
  std::uniform_int_distribution<std::uint32_t> letter_dist(1, static_cast<std::uint32_t>(m));
  std::size_t len = len_dist(rng);
  std::vector<std::uint32_t> letters;
  letters.reserve(len);
  for (std::size_t i = 0; i < len; ++i) letters.push_back(letter_dist(rng));
  return Word(std::move(letters));
}

inline NCPoly random_poly(Rng& rng, const ScalarField& field, std::size_t m,
                          std::size_t max_len, std::size_t terms) {
  NCPoly p(field);
  for (std::size_t t = 0; t < terms; ++t) {
    p.add_term(random_word(rng, m, max_len), random_value(rng, field));
  }
  return p;
}

// A random tuple (A_1..A_m, y); not necessarily valid.
inline PointData random_point(Rng& rng, const AlgebraPresentation& algebra, std::size_t n) {
  std::vector<Matrix> mats;
  for (std::size_t s = 0; s < algebra.generators(); ++s) {
    mats.push_back(random_matrix(rng, algebra.field(), n, n));
  }
  return PointData(algebra, n, std::move(mats), random_matrix(rng, algebra.field(), n, 1));
}

// Rejection sampling until the tuple satisfies the relations and y is cyclic.
inline PointData random_valid_point(Rng& rng, const AlgebraPresentation& algebra,
                                    std::size_t n) {
  while (true) {
    PointData p = random_point(rng, algebra, n);
    if (check_relations(p) && is_cyclic(p)) return p;
  }
}

inline AlgebraPresentation commutative_algebra(const ScalarField& field) {
  NCPoly comm(field);
  comm.add_term(Word({1, 2}), Value::one(field));
  comm.add_term(Word({2, 1}), -Value::one(field));
  return AlgebraPresentation(2, field, {comm});
}

}  // namespace nchilb::testing
