#pragma once

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lyndon {

/// Letters are small integers, 0 being the smallest letter of the alphabet.
/// The CLI maps a,b,c,... onto 0,1,2,... for alphabets of up to 26 letters.
using Letter = std::uint8_t;

class Alphabet {
 public:
  explicit Alphabet(unsigned size) : size_(size) {
    if (size < 2 || size > 256)
      throw std::invalid_argument("alphabet size must be in [2, 256]");
  }
  unsigned size() const { return size_; }
  friend bool operator==(Alphabet, Alphabet) = default;

 private:
  unsigned size_;
};

namespace detail {

inline std::strong_ordering lex_compare(std::span<const Letter> u,
                                        std::span<const Letter> v) {
  const std::size_t m = std::min(u.size(), v.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (u[i] != v[i]) return u[i] <=> v[i];
  }
  return u.size() <=> v.size();  // a proper prefix sorts first
}

// Single left-to-right scan; returns false as soon as some proper suffix
// would compare less-or-equal.
inline bool is_lyndon(std::span<const Letter> s) {
  const std::size_t n = s.size();
  if (n == 0) return false;
  std::size_t i = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (s[i] == s[j]) {
      ++i;
    } else if (s[i] < s[j]) {
      i = 0;
    } else {
      return false;
    }
  }
  return i == 0;
}

// Border-based primitivity: the smallest period divides n only for powers.
inline bool is_primitive(std::span<const Letter> s) {
  const std::size_t n = s.size();
  if (n <= 1) return n == 1;
  std::vector<std::size_t> border(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t b = border[i - 1];
    while (b > 0 && s[i] != s[b]) b = border[b - 1];
    if (s[i] == s[b]) ++b;
    border[i] = b;
  }
  const std::size_t period = n - border[n - 1];
  return period == n || n % period != 0;
}

// Index of the lexicographically least rotation (three-pointer duel on the
// cyclic word). For primitive input the minimum is unique.
inline std::size_t least_rotation(std::span<const Letter> s) {
  const std::size_t n = s.size();
  auto at = [&](std::size_t idx) { return idx < n ? s[idx] : s[idx - n]; };
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const Letter a = at(i + k), b = at(j + k);
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b)
      i += k + 1;
    else
      j += k + 1;
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

}  // namespace detail

/// A finite word over a totally ordered alphabet. Immutable after
/// construction; all operations below are pure functions.
class Word {
 public:
  Word(std::vector<Letter> letters, Alphabet alphabet)
      : letters_(std::move(letters)), alphabet_(alphabet) {
    if (letters_.empty()) throw std::invalid_argument("word must be nonempty");
    for (Letter c : letters_) {
      if (static_cast<unsigned>(c) >= alphabet_.size())
        throw std::invalid_argument("letter out of alphabet range");
    }
  }

  /// Parses either the plain letter form "aabab" or the integer-sequence
  /// form "0,0,1,0,1". With alphabet_size == 0 the alphabet is inferred as
  /// max(letter) + 1, floored at two letters.
  static Word from_string(std::string_view text, unsigned alphabet_size = 0) {
    std::vector<Letter> letters;
    const bool numeric =
        text.find(',') != std::string_view::npos ||
        (!text.empty() && text[0] >= '0' && text[0] <= '9');
    if (numeric) {
      std::size_t pos = 0;
      while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const std::string_view tok = text.substr(pos, comma - pos);
        if (tok.empty()) throw std::invalid_argument("empty letter token");
        unsigned value = 0;
        for (char c : tok) {
          if (c < '0' || c > '9')
            throw std::invalid_argument("bad integer letter: " +
                                        std::string(tok));
          value = value * 10 + static_cast<unsigned>(c - '0');
          if (value > 255) throw std::invalid_argument("letter exceeds 255");
        }
        letters.push_back(static_cast<Letter>(value));
        if (comma == text.size()) break;
        pos = comma + 1;
      }
    } else {
      for (char c : text) {
        if (c < 'a' || c > 'z')
          throw std::invalid_argument(
              "words use letters a-z or comma-separated integers");
        letters.push_back(static_cast<Letter>(c - 'a'));
      }
    }
    if (letters.empty()) throw std::invalid_argument("word must be nonempty");
    unsigned q = alphabet_size;
    if (q == 0) {
      unsigned top = 0;
      for (Letter c : letters) top = std::max(top, static_cast<unsigned>(c));
      q = std::max(top + 1, 2u);
    }
    return Word(std::move(letters), Alphabet(q));
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::span<const Letter> view() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  Alphabet alphabet() const { return alphabet_; }

  std::string to_string() const {
    std::string out;
    if (alphabet_.size() <= 26) {
      out.reserve(letters_.size());
      for (Letter c : letters_) out.push_back(static_cast<char>('a' + c));
    } else {
      for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(static_cast<unsigned>(letters_[i]));
      }
    }
    return out;
  }

  friend bool operator==(const Word& u, const Word& v) {
    return u.alphabet_ == v.alphabet_ && u.letters_ == v.letters_;
  }

 private:
  std::vector<Letter> letters_;
  Alphabet alphabet_;
};

/// Lexicographic order; a proper prefix sorts before its extensions.
inline std::strong_ordering lex_compare(const Word& u, const Word& v) {
  if (u.alphabet() != v.alphabet())
    throw std::invalid_argument("lex_compare: words over distinct alphabets");
  return detail::lex_compare(u.view(), v.view());
}

/// Cyclic left shift by `shift` positions (reduced modulo the length).
inline Word rotate(const Word& w, std::size_t shift) {
  const std::size_t n = w.size();
  const std::size_t k = shift % n;
  std::vector<Letter> out;
  out.reserve(n);
  out.insert(out.end(), w.letters().begin() + static_cast<std::ptrdiff_t>(k),
             w.letters().end());
  out.insert(out.end(), w.letters().begin(),
             w.letters().begin() + static_cast<std::ptrdiff_t>(k));
  return Word(std::move(out), w.alphabet());
}

/// True iff w is not a proper power of a shorter word; equivalently all of
/// its rotations are distinct.
inline bool is_primitive(const Word& w) {
  return detail::is_primitive(w.view());
}

/// True iff w is strictly smaller than each of its proper suffixes
/// (equivalently, strictly smaller than each of its nontrivial rotations).
inline bool is_lyndon(const Word& w) { return detail::is_lyndon(w.view()); }

/// The unique Lyndon word in the rotation orbit of a primitive word.
/// Rejects non-primitive input: the least rotation of a power is not Lyndon
/// and silently returning it would corrupt orbit-based sampling.
inline Word canonical_rotation(const Word& w) {
  if (!is_primitive(w))
    throw std::invalid_argument("canonical_rotation: word is not primitive");
  const Word out = rotate(w, detail::least_rotation(w.view()));
  assert(is_lyndon(out));
  return out;
}

/// Size of the rotation fiber over a Lyndon word, computed by explicit
/// orbit enumeration (kept deliberately naive; it is an oracle).
inline std::size_t preimage_count(const Word& w) {
  if (!is_lyndon(w))
    throw std::invalid_argument("preimage_count: word is not Lyndon");
  const std::size_t n = w.size();
  std::vector<Word> orbit;
  orbit.reserve(n);
  for (std::size_t k = 0; k < n; ++k) orbit.push_back(rotate(w, k));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (orbit[i] == orbit[j])
        throw std::logic_error("preimage_count: rotations of a Lyndon word must be distinct");
  return n;
}

}  // namespace lyndon
