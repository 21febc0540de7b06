#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "nchilb/cells.hpp"
#include "nchilb/orbits.hpp"
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

PointData nilpotent_point(const ScalarField& f) {
  AlgebraPresentation free1 = AlgebraPresentation::free_algebra(1, f);
  return PointData(free1, 2, {make(f, 2, {0, 1, 0, 0})}, column(f, {0, 1}));
}

// All points of the based space for a free algebra over a small prime field,
// by brute force.
std::vector<PointData> all_valid_points(const AlgebraPresentation& algebra, std::size_t n) {
  std::uint64_t q = algebra.field().characteristic();
  std::size_t entries = algebra.generators() * n * n + n;
  std::uint64_t total = 1;
  for (std::size_t e = 0; e < entries; ++e) total *= q;
  std::vector<PointData> out;
  for (std::uint64_t index = 0; index < total; ++index) {
    std::uint64_t v = index;
    std::vector<Matrix> mats;
    for (std::size_t s = 0; s < algebra.generators(); ++s) {
      Matrix a(algebra.field(), n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          a.set(i, j, Value::residue(algebra.field(), static_cast<std::uint32_t>(v % q)));
          v /= q;
        }
      }
      mats.push_back(std::move(a));
    }
    Matrix y(algebra.field(), n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      y.set(i, 0, Value::residue(algebra.field(), static_cast<std::uint32_t>(v % q)));
      v /= q;
    }
    PointData p(algebra, n, std::move(mats), std::move(y));
    if (check_relations(p) && is_cyclic(p)) out.push_back(std::move(p));
  }
  return out;
}

std::vector<GroupElement> all_invertible(const ScalarField& f, std::size_t n) {
  std::uint64_t q = f.characteristic();
  std::uint64_t total = 1;
  for (std::size_t e = 0; e < n * n; ++e) total *= q;
  std::vector<GroupElement> out;
  for (std::uint64_t index = 0; index < total; ++index) {
    std::uint64_t v = index;
    Matrix g(f, n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        g.set(i, j, Value::residue(f, static_cast<std::uint32_t>(v % q)));
        v /= q;
      }
    }
    if (!det(g).is_zero()) out.emplace_back(std::move(g));
  }
  return out;
}

}  // namespace

TEST_CASE("canonicalize fixtures") {
  ScalarField q = ScalarField::rationals();

  // n = 1: y is scaled away, scalars are conjugation-fixed, borders are the
  // matrix entries themselves.
  AlgebraPresentation free2 = AlgebraPresentation::free_algebra(2, q);
  PointData p1(free2, 1, {make(q, 1, {4}), make(q, 1, {-2})}, column(q, {3}));
  CanonicalForm c1 = canonicalize(p1);
  CHECK(c1.basis_words == std::vector<Word>{Word::unit()});
  CHECK(c1.canonical_point.y == column(q, {1}));
  CHECK(c1.canonical_point.matrices[0] == make(q, 1, {4}));
  CHECK(c1.border.at(Word({1})) == std::vector<Value>{Value::of_integer(q, 4)});
  CHECK(c1.border.at(Word({2})) == std::vector<Value>{Value::of_integer(q, -2)});

  // m = 1, n = 2 nilpotent: slide to the shift matrix
  PointData p = nilpotent_point(q);
  CanonicalForm c = canonicalize(p);
  CHECK(c.basis_words == std::vector<Word>{Word::unit(), Word({1})});
  CHECK(c.canonical_point.matrices[0] == make(q, 2, {0, 0, 1, 0}));
  CHECK(c.canonical_point.y == column(q, {1, 0}));
  CHECK(c.border.at(Word({1, 1})) ==
        std::vector<Value>{Value::zero(q), Value::zero(q)});

  // idempotence
  CanonicalForm c2 = canonicalize(c.canonical_point);
  CHECK(c2 == c);
  CHECK(c2.canonical_point == c.canonical_point);

  // invalid points are rejected
  PointData bad(free2, 1, {make(q, 1, {4}), make(q, 1, {5})}, column(q, {0}));
  CHECK_THROWS_AS(canonicalize(bad), DomainError);
}

TEST_CASE("canonical forms reproduce the border through the matrices") {
  Rng rng(307);
  ScalarField f5 = ScalarField::prime_field(5);
  AlgebraPresentation free2 = AlgebraPresentation::free_algebra(2, f5);
  for (int i = 0; i < 40; ++i) {
    PointData p = nchilb::testing::random_valid_point(rng, free2, 3);
    CanonicalForm c = canonicalize(p);
    // A_j e_s = e_{x_j s} for basis words, the border column otherwise
    for (std::size_t s = 0; s < c.basis_words.size(); ++s) {
      for (std::uint32_t j = 1; j <= 2; ++j) {
        Word b = c.basis_words[s].prepend(j);
        Matrix col = c.canonical_point.matrices[j - 1].col(s);
        auto in_basis =
            std::find(c.basis_words.begin(), c.basis_words.end(), b);
        if (in_basis != c.basis_words.end()) {
          Matrix expected(f5, c.n, 1);
          expected.set(in_basis - c.basis_words.begin(), 0, Value::one(f5));
          CHECK(col == expected);
        } else {
          CHECK(col == Matrix::column(f5, c.border.at(b)));
        }
      }
    }
    // support condition
    for (const auto& [b, columnv] : c.border) {
      for (std::size_t t = 0; t < c.basis_words.size(); ++t) {
        if (!(c.basis_words[t] < b)) CHECK(columnv[t].is_zero());
      }
    }
  }
}

TEST_CASE("orbit_equal") {
  ScalarField q = ScalarField::rationals();
  PointData p = nilpotent_point(q);

  Rng rng(311);
  for (int i = 0; i < 30; ++i) {
    GroupElement g = nchilb::testing::random_invertible(rng, q, 2);
    CHECK(orbit_equal(p, gl_act(g, p)));
  }

  // distinct basis-word sets are distinct orbits
  ScalarField f2 = ScalarField::prime_field(2);
  AlgebraPresentation free2 = AlgebraPresentation::free_algebra(2, f2);
  Matrix zero(f2, 2, 2);
  Matrix shift = make(f2, 2, {0, 0, 1, 0});
  PointData cell_a(free2, 2, {shift, zero}, column(f2, {1, 0}));
  PointData cell_b(free2, 2, {zero, shift}, column(f2, {1, 0}));
  CHECK(canonicalize(cell_a).basis_words == std::vector<Word>{Word::unit(), Word({1})});
  CHECK(canonicalize(cell_b).basis_words == std::vector<Word>{Word::unit(), Word({2})});
  CHECK(!orbit_equal(cell_a, cell_b));

  // n = 1: scaling y moves inside the orbit
  AlgebraPresentation free1 = AlgebraPresentation::free_algebra(1, q);
  PointData s1(free1, 1, {make(q, 1, {6})}, column(q, {1}));
  PointData s2(free1, 1, {make(q, 1, {6})}, column(q, {-7}));
  CHECK(orbit_equal(s1, s2));

  AlgebraPresentation other = AlgebraPresentation::free_algebra(2, q);
  PointData o(other, 1, {make(q, 1, {6}), make(q, 1, {1})}, column(q, {1}));
  CHECK_THROWS_AS(orbit_equal(s1, o), DomainError);
}

TEST_CASE("canonicalize is a complete orbit invariant (exhaustive, m=1, n=2, F_2)") {
  ScalarField f2 = ScalarField::prime_field(2);
  AlgebraPresentation free1 = AlgebraPresentation::free_algebra(1, f2);
  std::vector<PointData> points = all_valid_points(free1, 2);
  std::vector<GroupElement> group = all_invertible(f2, 2);
  REQUIRE(group.size() == 6);
  for (const PointData& p : points) {
    for (const PointData& r : points) {
      bool same_orbit = false;
      for (const GroupElement& g : group) {
        if (gl_act(g, p) == r) {
          same_orbit = true;
          break;
        }
      }
      CHECK(orbit_equal(p, r) == same_orbit);
    }
  }
}

TEST_CASE("extract_ideal fixtures") {
  ScalarField q = ScalarField::rationals();

  // m = 1, n = 2 nilpotent: the single generator is x^2
  IdealData d = extract_ideal(canonicalize(nilpotent_point(q)));
  REQUIRE(d.generators.size() == 1);
  CHECK(d.generators.begin()->first == Word({1, 1}));
  CHECK(d.generators.begin()->second == NCPoly::of_word(q, Word({1, 1})));

  // n = 1 free algebra: generators x_j - a_j
  AlgebraPresentation free2 = AlgebraPresentation::free_algebra(2, q);
  PointData p1(free2, 1, {make(q, 1, {4}), make(q, 1, {-2})}, column(q, {3}));
  IdealData d1 = extract_ideal(canonicalize(p1));
  NCPoly g1 = NCPoly::of_word(q, Word({1}));
  g1.add_term(Word::unit(), Value::of_integer(q, -4));
  NCPoly g2 = NCPoly::of_word(q, Word({2}));
  g2.add_term(Word::unit(), Value::of_integer(q, 2));
  CHECK(d1.generators.at(Word({1})) == g1);
  CHECK(d1.generators.at(Word({2})) == g2);

  // generator count is nm - (n-1)
  Rng rng(313);
  ScalarField f5 = ScalarField::prime_field(5);
  for (std::size_t m = 1; m <= 3; ++m) {
    AlgebraPresentation algebra = AlgebraPresentation::free_algebra(m, f5);
    for (std::size_t n = 1; n <= 3; ++n) {
      PointData p = nchilb::testing::random_valid_point(rng, algebra, n);
      IdealData d2 = extract_ideal(canonicalize(p));
      CHECK(d2.generators.size() == n * m - (n - 1));
    }
  }
}

TEST_CASE("normal_form fixtures") {
  ScalarField q = ScalarField::rationals();
  IdealData d = extract_ideal(canonicalize(nilpotent_point(q)));  // I = (x^2)

  CHECK(normal_form(NCPoly::of_word(q, Word({1, 1, 1})), d).is_zero());

  NCPoly one_plus_xx = NCPoly::of_word(q, Word::unit());
  one_plus_xx.add_term(Word({1, 1}), Value::one(q));
  CHECK(normal_form(one_plus_xx, d) == NCPoly::of_word(q, Word::unit()));

  for (const Word& s : d.basis_words) {
    CHECK(normal_form(NCPoly::of_word(q, s), d) == NCPoly::of_word(q, s));
  }
}

TEST_CASE("normal_form properties on random ideals") {
  Rng rng(317);
  ScalarField f5 = ScalarField::prime_field(5);
  AlgebraPresentation free2 = AlgebraPresentation::free_algebra(2, f5);
  for (int trial = 0; trial < 20; ++trial) {
    PointData p = nchilb::testing::random_valid_point(rng, free2, 3);
    CanonicalForm c = canonicalize(p);
    IdealData d = extract_ideal(c);
    std::set<Word> basis(d.basis_words.begin(), d.basis_words.end());

    // left multiples of generators reduce to zero
    for (int i = 0; i < 10; ++i) {
      Word u = nchilb::testing::random_word(rng, 2, 3);
      for (const auto& [b, g] : d.generators) {
        CHECK(normal_form(NCPoly::of_word(f5, u) * g, d).is_zero());
      }
    }

    // normal forms land in the span of the basis words, and evaluation at
    // the canonical point factors through them
    for (int i = 0; i < 10; ++i) {
      NCPoly f = nchilb::testing::random_poly(rng, f5, 2, 4, 4);
      NCPoly nf = normal_form(f, d);
      for (const auto& [w, coeff] : nf.terms()) CHECK(basis.count(w) == 1);
      Matrix lhs = evaluate(f, c.canonical_point.matrices) * c.canonical_point.y;
      Matrix rhs(f5, 3, 1);
      for (const auto& [w, coeff] : nf.terms()) {
        auto at = std::find(d.basis_words.begin(), d.basis_words.end(), w);
        Matrix e(f5, 3, 1);
        e.set(at - d.basis_words.begin(), 0, coeff);
        rhs = rhs + e;
      }
      CHECK(lhs == rhs);
    }

    // the quotient has dimension n: normal forms of short words span n
    // dimensions
    std::vector<Matrix> cols;
    for (const Word& w : words_up_to_length(2, 2)) {
      NCPoly nf = normal_form(NCPoly::of_word(f5, w), d);
      Matrix e(f5, 3, 1);
      for (const auto& [t, coeff] : nf.terms()) {
        auto at = std::find(d.basis_words.begin(), d.basis_words.end(), t);
        e.set(at - d.basis_words.begin(), 0, coeff);
      }
      cols.push_back(std::move(e));
    }
    CHECK(rank(Matrix::from_columns(cols)) == 3);
  }
}

TEST_CASE("point_from_ideal round trip and validation") {
  ScalarField q = ScalarField::rationals();
  CanonicalForm c = canonicalize(nilpotent_point(q));
  IdealData d = extract_ideal(c);
  PointData rebuilt = point_from_ideal(d);
  CHECK(rebuilt == c.canonical_point);
  CHECK(canonicalize(rebuilt) == c);

  // malformed: support condition violation. With basis {1, x_2} the border
  // word x_1 precedes the basis word x_2, so a coefficient there is illegal.
  ScalarField f2 = ScalarField::prime_field(2);
  AlgebraPresentation free2 = AlgebraPresentation::free_algebra(2, f2);
  std::vector<Word> basis{Word::unit(), Word({2})};
  std::map<Word, NCPoly> gens;
  NCPoly gx1 = NCPoly::of_word(f2, Word({1}));
  gx1.add_term(Word({2}), Value::one(f2));  // forbidden: x_2 >= x_1
  gens.emplace(Word({1}), gx1);
  gens.emplace(Word({1, 2}), NCPoly::of_word(f2, Word({1, 2})));
  gens.emplace(Word({2, 2}), NCPoly::of_word(f2, Word({2, 2})));
  IdealData bad{free2, 2, basis, gens};
  CHECK_THROWS_AS(point_from_ideal(bad), DomainError);

  // missing generator
  std::map<Word, NCPoly> too_few = gens;
  too_few.erase(Word({1}));
  CHECK_THROWS_AS(point_from_ideal(IdealData{free2, 2, basis, too_few}), DomainError);

  // relation failure: x^2 with a commutativity constraint it cannot satisfy
  ScalarField qq = ScalarField::rationals();
  AlgebraPresentation kxy = nchilb::testing::commutative_algebra(qq);
  std::vector<Word> basis2{Word::unit(), Word({1})};
  std::map<Word, NCPoly> gens2;
  gens2.emplace(Word({2}), NCPoly::of_word(qq, Word({2})));  // x_2 acts as 0 on 1
  NCPoly g11 = NCPoly::of_word(qq, Word({1, 1}));
  gens2.emplace(Word({1, 1}), g11);
  NCPoly g21 = NCPoly::of_word(qq, Word({2, 1}));
  g21.add_term(Word::unit(), -Value::one(qq));  // x_2 x_1 = 1 while x_2 = 0: incompatible
  gens2.emplace(Word({2, 1}), g21);
  CHECK_THROWS_AS(point_from_ideal(IdealData{kxy, 2, basis2, gens2}), DomainError);
}

TEST_CASE("exhaustive reconstruction over F_2: every cell of every (m,n) <= (2,2)") {
  // For each cell, run over all border coefficient assignments allowed by
  // the support condition; reconstruction must return the same basis words,
  // and the number of assignments must be 2^dimension.
  ScalarField f2 = ScalarField::prime_field(2);
  for (std::size_t m = 1; m <= 2; ++m) {
    AlgebraPresentation algebra = AlgebraPresentation::free_algebra(m, f2);
    for (std::size_t n = 1; n <= 2; ++n) {
      for (const Cell& cell : enumerate_cells(m, n)) {
        // the free coefficient slots: pairs (border word, basis index t < b)
        std::set<Word> in_basis(cell.basis_words.begin(), cell.basis_words.end());
        std::vector<std::pair<Word, std::size_t>> slots;
        for (const Word& s : cell.basis_words) {
          for (std::uint32_t j = 1; j <= m; ++j) {
            Word b = s.prepend(j);
            if (in_basis.count(b)) continue;
            for (std::size_t t = 0; t < cell.basis_words.size(); ++t) {
              if (cell.basis_words[t] < b) slots.emplace_back(b, t);
            }
          }
        }
        REQUIRE(slots.size() == cell.dimension);
        std::uint64_t assignments = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
          std::map<Word, NCPoly> gens;
          for (const Word& s : cell.basis_words) {
            for (std::uint32_t j = 1; j <= m; ++j) {
              Word b = s.prepend(j);
              if (!in_basis.count(b) && !gens.count(b)) {
                gens.emplace(b, NCPoly::of_word(f2, b));
              }
            }
          }
          for (std::size_t k = 0; k < slots.size(); ++k) {
            if ((mask >> k) & 1) {
              gens.at(slots[k].first)
                  .add_term(cell.basis_words[slots[k].second], -Value::one(f2));
            }
          }
          IdealData d{algebra, n, cell.basis_words, gens};
          CanonicalForm c = canonicalize(point_from_ideal(d));
          CHECK(c.basis_words == cell.basis_words);
          CHECK(extract_ideal(c) == d);
          ++assignments;
        }
        CHECK(assignments == (std::uint64_t{1} << cell.dimension));
      }
    }
  }
}

TEST_CASE("exhaustive reconstruction over F_2: all 64 ideals for S = {1, x_1}") {
  ScalarField f2 = ScalarField::prime_field(2);
  AlgebraPresentation free2 = AlgebraPresentation::free_algebra(2, f2);
  std::vector<Word> basis{Word::unit(), Word({1})};
  std::vector<Word> borders{Word({2}), Word({1, 1}), Word({2, 1})};

  std::set<std::vector<std::uint32_t>> seen;
  int count = 0;
  // all assignments of the three border columns over F_2^2
  for (std::uint32_t mask = 0; mask < 64; ++mask) {
    std::map<Word, NCPoly> gens;
    std::vector<std::uint32_t> key;
    for (std::size_t b = 0; b < 3; ++b) {
      NCPoly g = NCPoly::of_word(f2, borders[b]);
      for (std::size_t t = 0; t < 2; ++t) {
        std::uint32_t bit = (mask >> (2 * b + t)) & 1;
        key.push_back(bit);
        if (bit) g.add_term(basis[t], -Value::one(f2));
      }
      gens.emplace(borders[b], std::move(g));
    }
    IdealData d{free2, 2, basis, gens};
    PointData p = point_from_ideal(d);
    CanonicalForm c = canonicalize(p);
    // greedy reproducibility: the same basis words come back
    CHECK(c.basis_words == basis);
    CHECK(extract_ideal(c) == d);
    seen.insert(key);
    ++count;
  }
  CHECK(count == 64);
  CHECK(seen.size() == 64);
}
