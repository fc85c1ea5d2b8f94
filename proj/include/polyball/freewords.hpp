#pragma once

// Combinatorics of the free monoids F_n^+ and their k-fold products.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace polyball {

/// A word in the free monoid on generators g_1..g_n. The empty word is g_0.
class Word {
 public:
  Word() = default;
  explicit Word(int alphabet, std::vector<int> letters = {});

  static Word identity(int alphabet) { return Word(alphabet); }
  static Word generator(int alphabet, int j) { return Word(alphabet, {j}); }

  int alphabet() const noexcept { return n_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  const std::vector<int>& letters() const noexcept { return letters_; }

  /// Digit string, "12" for g1g2 and "" for g0.
  std::string str() const;

  friend bool operator==(const Word&, const Word&) = default;
  /// Graded lexicographic order (length first).
  friend bool operator<(const Word& a, const Word& b);

 private:
  int n_ = 1;
  std::vector<int> letters_;
};

Word parse_word(int alphabet, const std::string& digits);

Word concat(const Word& a, const Word& b);
Word reverse(const Word& w);

/// Returns sigma with w == sigma * divisor when divisor is a right factor of w.
std::optional<Word> right_quotient(const Word& w, const Word& divisor);

/// Factor-wise tuple of words; component i lives over alphabet n_i.
using MultiWord = std::vector<Word>;

std::vector<std::size_t> degree(const MultiWord& w);
MultiWord identity_multiword(const std::vector<int>& alphabets);
std::string to_string(const MultiWord& w);
MultiWord parse_multiword(const std::vector<int>& alphabets, const std::string& text);

struct ReducedPair {
  MultiWord alpha;
  MultiWord beta;
  friend bool operator==(const ReducedPair&, const ReducedPair&) = default;
};

bool comparable(const Word& w, const Word& g);
bool comparable(const MultiWord& w, const MultiWord& g);

/// Cancels the common right factor in every component. Throws on
/// non-comparable input.
ReducedPair simplify(const MultiWord& w, const MultiWord& g);

/// True when min(|alpha_i|, |beta_i|) == 0 for every i.
bool is_reduced_pair(const MultiWord& alpha, const MultiWord& beta);

/// All words of length <= max_len, graded lexicographic.
std::vector<Word> enumerate_words(int alphabet, int max_len);

/// Signed degree vector with s+ = max(s,0), s- = max(-s,0).
struct DegreeVector {
  std::vector<int> s;

  std::vector<int> plus() const;
  std::vector<int> minus() const;
  friend bool operator==(const DegreeVector&, const DegreeVector&) = default;
};

}  // namespace polyball
