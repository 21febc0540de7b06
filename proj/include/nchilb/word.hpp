#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "nchilb/errors.hpp"

namespace nchilb {

// A monomial in m noncommuting generators: the sequence of 1-based generator
// indices, written left to right. The empty sequence is the unit word.
//
// Words are totally ordered length-lexicographically: shorter words first,
// equal lengths compared letter by letter with x_1 < x_2 < ... This order is
// compatible with left multiplication: u*t < u*b iff t < b.
class Word {
public:
  Word() = default;
  explicit Word(std::vector<std::uint32_t> letters) : letters_(std::move(letters)) {
    for (std::uint32_t l : letters_) {
      if (l == 0) throw DomainError("Word: generator indices are 1-based");
    }
  }

  static Word unit() { return Word(); }
  static Word generator(std::uint32_t j) { return Word({j}); }

  const std::vector<std::uint32_t>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_unit() const { return letters_.empty(); }

  std::uint32_t max_letter() const {
    std::uint32_t mx = 0;
    for (std::uint32_t l : letters_) mx = l > mx ? l : mx;
    return mx;
  }

  // x_j * w: the tree extension used by the Krylov search.
  Word prepend(std::uint32_t j) const {
    if (j == 0) throw DomainError("Word::prepend: generator indices are 1-based");
    std::vector<std::uint32_t> ls;
    ls.reserve(letters_.size() + 1);
    ls.push_back(j);
    ls.insert(ls.end(), letters_.begin(), letters_.end());
    return Word(std::move(ls));
  }

  // Deletes the leftmost letter; "prefix-closed" word sets are closed under
  // this map.
  Word remove_leftmost() const {
    if (is_unit()) throw DomainError("Word::remove_leftmost: unit word");
    return Word({letters_.begin() + 1, letters_.end()});
  }

  // The last `len` letters.
  Word suffix(std::size_t len) const {
    if (len > length()) throw DomainError("Word::suffix: length out of range");
    return Word({letters_.end() - static_cast<std::ptrdiff_t>(len), letters_.end()});
  }

  // The first `len` letters.
  Word prefix(std::size_t len) const {
    if (len > length()) throw DomainError("Word::prefix: length out of range");
    return Word({letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(len)});
  }

  friend Word operator*(const Word& u, const Word& v) {
    std::vector<std::uint32_t> ls;
    ls.reserve(u.length() + v.length());
    ls.insert(ls.end(), u.letters_.begin(), u.letters_.end());
    ls.insert(ls.end(), v.letters_.begin(), v.letters_.end());
    return Word(std::move(ls));
  }

  friend bool operator==(const Word& a, const Word& b) = default;

  // Length-lex order.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (a.length() != b.length()) return a.length() <=> b.length();
    return a.letters_ <=> b.letters_;
  }

  std::string to_string() const {
    if (is_unit()) return "1";
    std::string s;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (i) s += "*";
      s += "x" + std::to_string(letters_[i]);
    }
    return s;
  }

private:
  std::vector<std::uint32_t> letters_;
};

// All words in m generators of length <= max_len, in length-lex order.
inline std::vector<Word> words_up_to_length(std::size_t m, std::size_t max_len) {
  std::vector<Word> out{Word::unit()};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t level_end = out.size();
    for (std::uint32_t j = 1; j <= m; ++j) {
      for (std::size_t k = level_begin; k < level_end; ++k) {
        out.push_back(out[k].prepend(j));
      }
    }
    level_begin = level_end;
  }
  return out;
}

}  // namespace nchilb
