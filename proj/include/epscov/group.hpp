#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "epscov/integer_matrix.hpp"

namespace epscov {

// Letter g+1 is generator g, -(g+1) its inverse.
using Word = std::vector<int>;

Word free_reduce(const Word& w);
Word cyclic_reduce(const Word& w);
Word inverse(const Word& w);
Word operator*(const Word& a, const Word& b);
// Least rotation of w or of its inverse; equal for conjugate-or-inverse cyclic words.
Word cyclic_canonical(const Word& w);
Word commutator(int a, int b);

// Many short words stored back to back.
struct WordList {
  std::vector<int> letters;
  std::vector<std::size_t> offsets{0};

  std::size_t size() const { return offsets.size() - 1; }
  void push(const Word& w) {
    letters.insert(letters.end(), w.begin(), w.end());
    offsets.push_back(letters.size());
  }
  template <class It>
  void push(It first, It last) {
    letters.insert(letters.end(), first, last);
    offsets.push_back(letters.size());
  }
  Word at(std::size_t i) const {
    return Word(letters.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
                letters.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
  }
};

enum class GroupKind { Trivial, Free, Abelian, Unrecognized };
const char* to_string(GroupKind k);

// A finitely presented group after Tietze simplification, together with the
// map from the original generators.
class SimplifiedGroup {
 public:
  static SimplifiedGroup simplify(int num_generators, const WordList& relators);
  static SimplifiedGroup simplify(int num_generators, const std::vector<Word>& relators);

  int num_original() const { return static_cast<int>(image_.size()); }
  int num_generators() const { return num_generators_; }
  const std::vector<Word>& relators() const { return relators_; }
  GroupKind kind() const { return kind_; }

  // Original-generator word to a reduced word in the simplified generators.
  Word map_word(const Word& original) const;
  const Word& image(int original_generator) const { return image_.at(original_generator); }

  // Abelian invariants: factors > 1 then zeros for the free part.
  std::vector<std::int64_t> invariant_factors() const;
  int rank() const;
  std::vector<std::int64_t> torsion() const;
  // Coordinates of a simplified word in the Smith basis, one per invariant factor.
  std::vector<std::int64_t> h1(const Word& simplified) const;
  std::vector<std::int64_t> h1_of_exponents(const std::vector<std::int64_t>& exponents) const;
  std::vector<std::int64_t> reduce_h1(std::vector<std::int64_t> coords) const;

  // Exact when the group is recognized, empty otherwise.
  std::optional<bool> is_identity(const Word& simplified) const;
  // Whether w1 is conjugate to w2 or to w2^-1.
  std::optional<bool> conjugate_up_to_inverse(const Word& w1, const Word& w2) const;

  // Quotient by extra relators written in the simplified generators. The
  // result maps the same original generators.
  SimplifiedGroup quotient(const std::vector<Word>& extra) const;

 private:
  int num_generators_ = 0;
  std::vector<Word> relators_;
  std::vector<Word> image_;
  GroupKind kind_ = GroupKind::Trivial;
  SmithForm smith_;
  std::vector<std::size_t> kept_;  // Smith coordinates with factor != 1

  void finish();
};

}  // namespace epscov
