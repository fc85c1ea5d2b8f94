#include "polyball/freewords.hpp"

#include <algorithm>
#include <stdexcept>

namespace polyball {

Word::Word(int alphabet, std::vector<int> letters) : n_(alphabet), letters_(std::move(letters)) {
  if (alphabet < 1) throw std::invalid_argument("Word: alphabet size must be >= 1");
  for (int j : letters_) {
    if (j < 1 || j > alphabet)
      throw std::invalid_argument("Word: letter " + std::to_string(j) + " outside 1.." +
                                  std::to_string(alphabet));
  }
}

std::string Word::str() const {
  std::string out;
  for (int j : letters_) {
    // alphabets above 9 would need a separator; the digit format caps n at 9
    out.push_back(static_cast<char>('0' + j));
  }
  return out;
}

bool operator<(const Word& a, const Word& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  return a.letters_ < b.letters_;
}

Word parse_word(int alphabet, const std::string& digits) {
  std::vector<int> letters;
  letters.reserve(digits.size());
  for (char c : digits) {
    if (c < '1' || c > '9') throw std::invalid_argument("parse_word: bad letter '" + std::string(1, c) + "'");
    letters.push_back(c - '0');
  }
  return Word(alphabet, std::move(letters));
}

Word concat(const Word& a, const Word& b) {
  if (a.alphabet() != b.alphabet()) throw std::invalid_argument("concat: alphabet mismatch");
  std::vector<int> letters = a.letters();
  letters.insert(letters.end(), b.letters().begin(), b.letters().end());
  return Word(a.alphabet(), std::move(letters));
}

Word reverse(const Word& w) {
  std::vector<int> letters(w.letters().rbegin(), w.letters().rend());
  return Word(w.alphabet(), std::move(letters));
}

std::optional<Word> right_quotient(const Word& w, const Word& divisor) {
  if (w.alphabet() != divisor.alphabet()) throw std::invalid_argument("right_quotient: alphabet mismatch");
  if (divisor.length() > w.length()) return std::nullopt;
  const auto& wl = w.letters();
  const auto& dl = divisor.letters();
  const std::size_t cut = wl.size() - dl.size();
  if (!std::equal(dl.begin(), dl.end(), wl.begin() + static_cast<std::ptrdiff_t>(cut))) return std::nullopt;
  return Word(w.alphabet(), std::vector<int>(wl.begin(), wl.begin() + static_cast<std::ptrdiff_t>(cut)));
}

std::vector<std::size_t> degree(const MultiWord& w) {
  std::vector<std::size_t> out;
  out.reserve(w.size());
  for (const auto& c : w) out.push_back(c.length());
  return out;
}

MultiWord identity_multiword(const std::vector<int>& alphabets) {
  MultiWord out;
  for (int n : alphabets) out.emplace_back(n);
  return out;
}

std::string to_string(const MultiWord& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out.push_back('/');
    out += w[i].str();
  }
  return out;
}

MultiWord parse_multiword(const std::vector<int>& alphabets, const std::string& text) {
  MultiWord out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < alphabets.size(); ++i) {
    std::size_t stop = text.find('/', start);
    if (i + 1 == alphabets.size()) {
      if (stop != std::string::npos) throw std::invalid_argument("parse_multiword: too many components in '" + text + "'");
      stop = text.size();
    } else if (stop == std::string::npos) {
      throw std::invalid_argument("parse_multiword: too few components in '" + text + "'");
    }
    out.push_back(parse_word(alphabets[i], text.substr(start, stop - start)));
    start = stop + 1;
  }
  return out;
}

bool comparable(const Word& w, const Word& g) {
  return right_quotient(w, g).has_value() || right_quotient(g, w).has_value();
}

bool comparable(const MultiWord& w, const MultiWord& g) {
  if (w.size() != g.size()) throw std::invalid_argument("comparable: factor count mismatch");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!comparable(w[i], g[i])) return false;
  }
  return true;
}

ReducedPair simplify(const MultiWord& w, const MultiWord& g) {
  if (w.size() != g.size()) throw std::invalid_argument("simplify: factor count mismatch");
  ReducedPair out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto sigma = right_quotient(w[i], g[i]);
    auto beta = right_quotient(g[i], w[i]);
    if (!sigma && !beta)
      throw std::domain_error("simplify: components " + w[i].str() + " and " + g[i].str() + " are not comparable");
    out.alpha.push_back(sigma ? *sigma : Word(w[i].alphabet()));
    out.beta.push_back(beta ? *beta : Word(g[i].alphabet()));
  }
  return out;
}

bool is_reduced_pair(const MultiWord& alpha, const MultiWord& beta) {
  if (alpha.size() != beta.size()) throw std::invalid_argument("is_reduced_pair: factor count mismatch");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (std::min(alpha[i].length(), beta[i].length()) != 0) return false;
  }
  return true;
}

std::vector<Word> enumerate_words(int alphabet, int max_len) {
  if (alphabet < 1 || max_len < 0) throw std::invalid_argument("enumerate_words: need n >= 1, L >= 0");
  std::vector<Word> out{Word(alphabet)};
  std::vector<int> letters;
  for (int len = 1; len <= max_len; ++len) {
    letters.assign(static_cast<std::size_t>(len), 1);
    while (true) {
      out.emplace_back(alphabet, letters);
      // odometer increment, last letter fastest
      int pos = len - 1;
      while (pos >= 0 && letters[static_cast<std::size_t>(pos)] == alphabet) letters[static_cast<std::size_t>(pos--)] = 1;
      if (pos < 0) break;
      ++letters[static_cast<std::size_t>(pos)];
    }
  }
  return out;
}

std::vector<int> DegreeVector::plus() const {
  std::vector<int> out;
  for (int v : s) out.push_back(std::max(v, 0));
  return out;
}

std::vector<int> DegreeVector::minus() const {
  std::vector<int> out;
  for (int v : s) out.push_back(std::max(-v, 0));
  return out;
}

}  // namespace polyball
