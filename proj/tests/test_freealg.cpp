#include <catch2/catch_amalgamated.hpp>

#include "nchilb/freealg.hpp"
#include "support.hpp"

using namespace nchilb;
using nchilb::testing::Rng;

namespace {

Matrix make(const ScalarField& f, std::size_t n, const std::vector<std::int64_t>& entries) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, Value::of_integer(f, entries[i * n + j]));
  }
  return m;
}

Matrix column(const ScalarField& f, const std::vector<std::int64_t>& entries) {
  Matrix m(f, entries.size(), 1);
  for (std::size_t i = 0; i < entries.size(); ++i) m.set(i, 0, Value::of_integer(f, entries[i]));
  return m;
}

// The derivative computed straight from its definition, one term per letter
// position, with no shared prefixes. Oracle for the cached implementation.
Matrix derivative_by_positions(const Word& w, const std::vector<Matrix>& a,
                               const std::vector<Matrix>& aprime) {
  const ScalarField& f = a.front().field();
  const std::size_t n = a.front().rows();
  Matrix acc(f, n, n);
  const auto& letters = w.letters();
  for (std::size_t j = 0; j < letters.size(); ++j) {
    Matrix term = Matrix::identity(f, n);
    for (std::size_t t = 0; t < letters.size(); ++t) {
      term = term * (t == j ? aprime[letters[t] - 1] : a[letters[t] - 1]);
    }
    acc = acc + term;
  }
  return acc;
}

}  // namespace

TEST_CASE("length-lex order: total, left-compatible, shorter first") {
  CHECK(Word::unit() < Word({1}));
  CHECK(Word({2}) < Word({1, 1}));
  CHECK(Word({1, 2}) < Word({2, 1}));
  Rng rng(101);
  for (int i = 0; i < 500; ++i) {
    Word u = nchilb::testing::random_word(rng, 3, 4);
    Word t = nchilb::testing::random_word(rng, 3, 4);
    Word b = nchilb::testing::random_word(rng, 3, 4);
    // left-multiplication compatibility
    CHECK((t < b) == (u * t < u * b));
    CHECK((t == b) == (u * t == u * b));
    // totality / antisymmetry
    CHECK(((t < b) ? 1 : 0) + ((b < t) ? 1 : 0) + ((t == b) ? 1 : 0) == 1);
  }
}

TEST_CASE("words_up_to_length is length-lex sorted and complete") {
  std::vector<Word> words = words_up_to_length(2, 3);
  CHECK(words.size() == 1 + 2 + 4 + 8);
  CHECK(std::is_sorted(words.begin(), words.end()));
  CHECK(words[0] == Word::unit());
  CHECK(words[3] == Word({1, 1}));
}

TEST_CASE("evaluate fixtures") {
  ScalarField q = ScalarField::rationals();
  Matrix a1 = make(q, 2, {0, 1, 0, 0});
  Matrix a2 = make(q, 2, {0, 0, 1, 0});
  std::vector<Matrix> tuple{a1, a2};

  CHECK(evaluate(Word::unit(), tuple) == Matrix::identity(q, 2));
  CHECK(evaluate(Word({1}), tuple) == a1);

  NCPoly commutator(q);
  commutator.add_term(Word({1, 2}), Value::one(q));
  commutator.add_term(Word({2, 1}), -Value::one(q));
  CHECK(evaluate(commutator, tuple) == make(q, 2, {1, 0, 0, -1}));

  CHECK_THROWS_AS(evaluate(Word({3}), tuple), ShapeError);
  ScalarField f5 = ScalarField::prime_field(5);
  CHECK_THROWS_AS(evaluate(NCPoly::of_word(f5, Word({1})), tuple), FieldMismatchError);
}

TEST_CASE("evaluate is a homomorphism on words") {
  Rng rng(103);
  for (const ScalarField& f : {ScalarField::rationals(), ScalarField::prime_field(5)}) {
    std::vector<Matrix> tuple{nchilb::testing::random_matrix(rng, f, 3, 3),
                              nchilb::testing::random_matrix(rng, f, 3, 3)};
    for (int i = 0; i < 50; ++i) {
      Word u = nchilb::testing::random_word(rng, 2, 3);
      Word v = nchilb::testing::random_word(rng, 2, 3);
      CHECK(evaluate(u * v, tuple) == evaluate(u, tuple) * evaluate(v, tuple));
    }
  }
}

TEST_CASE("apply_word_to_vector fixtures and agreement with evaluate") {
  ScalarField q = ScalarField::rationals();
  Matrix a = make(q, 2, {0, 1, 0, 0});
  std::vector<Matrix> tuple{a};
  Matrix y = column(q, {0, 1});

  CHECK(apply_word_to_vector(Word::unit(), tuple, y) == y);
  CHECK(apply_word_to_vector(Word({1}), tuple, y) == column(q, {1, 0}));
  CHECK(apply_word_to_vector(Word({1, 1}), tuple, y) == column(q, {0, 0}));

  Rng rng(107);
  for (int i = 0; i < 50; ++i) {
    std::vector<Matrix> t{nchilb::testing::random_matrix(rng, q, 3, 3),
                          nchilb::testing::random_matrix(rng, q, 3, 3)};
    Matrix v = nchilb::testing::random_matrix(rng, q, 3, 1);
    Word w = nchilb::testing::random_word(rng, 2, 4);
    CHECK(apply_word_to_vector(w, t, v) == evaluate(w, t) * v);
  }
}

TEST_CASE("differentiate fixtures") {
  ScalarField q = ScalarField::rationals();
  Matrix a = make(q, 2, {0, 1, 0, 0});
  std::vector<Matrix> tuple{a};
  std::vector<Matrix> dir{Matrix::identity(q, 2)};

  CHECK(differentiate(Word::unit(), tuple, dir).is_zero());
  CHECK(differentiate(Word({1}), tuple, dir) == Matrix::identity(q, 2));
  // d(x^2)[I] = I*A + A*I = 2A
  CHECK(differentiate(Word({1, 1}), tuple, dir) == make(q, 2, {0, 2, 0, 0}));
}

TEST_CASE("differentiate agrees with the position-sum oracle up to length 4") {
  Rng rng(109);
  for (const ScalarField& f : {ScalarField::rationals(), ScalarField::prime_field(7)}) {
    std::vector<Matrix> a{nchilb::testing::random_matrix(rng, f, 2, 2),
                          nchilb::testing::random_matrix(rng, f, 2, 2)};
    std::vector<Matrix> ap{nchilb::testing::random_matrix(rng, f, 2, 2),
                           nchilb::testing::random_matrix(rng, f, 2, 2)};
    for (int i = 0; i < 60; ++i) {
      Word w = nchilb::testing::random_word(rng, 2, 4);
      CHECK(differentiate(w, a, ap) == derivative_by_positions(w, a, ap));
    }
  }
}

TEST_CASE("first-order expansion: evaluate at A + tA' interpolates the derivative") {
  // For |w| <= 2 the evaluation is quadratic in t, so the linear coefficient
  // is (E(1) - E(-1)) / 2; it must equal the derivative at A.
  Rng rng(113);
  ScalarField q = ScalarField::rationals();
  Value half = Value::of_rational(q, Rational(1, 2));
  for (int i = 0; i < 60; ++i) {
    std::vector<Matrix> a{nchilb::testing::random_matrix(rng, q, 2, 2),
                          nchilb::testing::random_matrix(rng, q, 2, 2)};
    std::vector<Matrix> ap{nchilb::testing::random_matrix(rng, q, 2, 2),
                           nchilb::testing::random_matrix(rng, q, 2, 2)};
    std::vector<Matrix> plus{a[0] + ap[0], a[1] + ap[1]};
    std::vector<Matrix> minus{a[0] - ap[0], a[1] - ap[1]};
    Word w = nchilb::testing::random_word(rng, 2, 2);
    Matrix linear = half * (evaluate(w, plus) - evaluate(w, minus));
    CHECK(linear == differentiate(w, a, ap));
  }
}

TEST_CASE("relation coercion into F_p") {
  ScalarField q = ScalarField::rationals();
  NCPoly r(q);
  r.add_term(Word({1}), Value::of_rational(q, Rational(1, 3)));
  AlgebraPresentation a(1, q, {r});
  // 1/3 = 1 mod 2 but is undefined mod 3
  AlgebraPresentation mod2 = a.change_field(ScalarField::prime_field(2));
  CHECK(mod2.relations()[0].coefficient(Word({1})).residue_value() == 1);
  CHECK_THROWS_AS(a.change_field(ScalarField::prime_field(3)), DomainError);
}

TEST_CASE("algebra presentation validation") {
  ScalarField q = ScalarField::rationals();
  CHECK_THROWS_AS(AlgebraPresentation(2, q, {NCPoly::zero(q)}), DomainError);
  CHECK_THROWS_AS(AlgebraPresentation(1, q, {NCPoly::of_word(q, Word({2}))}), DomainError);
  CHECK(AlgebraPresentation::free_algebra(3, q).is_free());
}

TEST_CASE("ncpoly bookkeeping drops zero terms") {
  ScalarField f2 = ScalarField::prime_field(2);
  NCPoly p(f2);
  p.add_term(Word({1}), Value::one(f2));
  p.add_term(Word({1}), Value::one(f2));
  CHECK(p.is_zero());
  p.add_term(Word({2, 1}), Value::one(f2));
  p.add_term(Word::unit(), Value::one(f2));
  CHECK(p.leading_word() == Word({2, 1}));
  CHECK(p.degree() == 2);
}
