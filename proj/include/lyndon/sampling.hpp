#pragma once

#include <array>
#include <bit>
#include <cstdint>

#include "lyndon/word.hpp"

namespace lyndon {

/// Deterministic seedable generator (xoshiro256** seeded through splitmix64).
/// Identical (seed, stream) pairs produce identical sequences on every
/// platform; distinct stream indices give decorrelated streams for parallel
/// workers.
class Rng {
 public:
  static constexpr const char* kName = "xoshiro256**";

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    for (auto& word : state_) {
      x += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      word = z ^ (z >> 31);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next() {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  /// Unbiased integer in [0, bound) (multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t cutoff = (0 - bound) % bound;
      while (lo < cutoff) {
        m = static_cast<unsigned __int128>(next()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::array<std::uint64_t, 4> state_;
};

namespace detail {

inline void fill_uniform_letters(std::vector<Letter>& out, std::size_t n,
                                 unsigned q, Rng& rng) {
  out.resize(n);
  if ((q & (q - 1)) == 0) {
    // Power-of-two alphabets take fixed-width bit slices.
    const unsigned bits = static_cast<unsigned>(std::countr_zero(q));
    const unsigned per_word = 64 / bits;
    const std::uint64_t mask = q - 1;
    std::size_t i = 0;
    while (i < n) {
      std::uint64_t x = rng.next();
      for (unsigned k = 0; k < per_word && i < n; ++k, ++i) {
        out[i] = static_cast<Letter>(x & mask);
        x >>= bits;
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = static_cast<Letter>(rng.below(q));
  }
}

// Run length with P(len = k) = (1/q)^(k-1) * (q-1)/q, by counting trials.
inline std::size_t geometric_run_length(unsigned q, Rng& rng) {
  std::size_t len = 1;
  while (rng.below(q) == 0) ++len;
  return len;
}

}  // namespace detail

/// Uniform word on the q^n words of length n.
inline Word sample_word(std::size_t n, unsigned q, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_word: n must be >= 1");
  Alphabet alphabet(q);
  std::vector<Letter> letters;
  detail::fill_uniform_letters(letters, n, q, rng);
  return Word(std::move(letters), alphabet);
}

/// Uniform word built run by run: letters chosen uniformly, each conditioned
/// to differ from its predecessor, with independent geometric((q-1)/q) run
/// lengths; the output is truncated to n letters. Distributionally identical
/// to sample_word; kept as an independent construction to cross-validate.
inline Word sample_word_geometric(std::size_t n, unsigned q, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_word_geometric: n must be >= 1");
  Alphabet alphabet(q);
  std::vector<Letter> letters;
  letters.reserve(n);
  Letter current = static_cast<Letter>(rng.below(q));
  while (letters.size() < n) {
    std::size_t len = detail::geometric_run_length(q, rng);
    len = std::min(len, n - letters.size());
    letters.insert(letters.end(), len, current);
    if (letters.size() == n) break;
    Letter next = static_cast<Letter>(rng.below(q - 1));
    if (next >= current) ++next;
    current = next;
  }
  return Word(std::move(letters), alphabet);
}

/// Uniform Lyndon word of length n: rejection on non-primitive words, then
/// the canonical rotation. Exactly uniform because every Lyndon word has
/// exactly n primitive preimages.
inline Word sample_lyndon(std::size_t n, unsigned q, Rng& rng,
                          std::size_t* rejections = nullptr) {
  if (n == 0) throw std::invalid_argument("sample_lyndon: n must be >= 1");
  Alphabet alphabet(q);
  std::vector<Letter> letters;
  for (;;) {
    detail::fill_uniform_letters(letters, n, q, rng);
    if (detail::is_primitive(letters)) break;
    if (rejections) ++*rejections;
  }
  const std::size_t shift = detail::least_rotation(letters);
  std::vector<Letter> rotated;
  rotated.reserve(n);
  rotated.insert(rotated.end(), letters.begin() + static_cast<std::ptrdiff_t>(shift),
                 letters.end());
  rotated.insert(rotated.end(), letters.begin(),
                 letters.begin() + static_cast<std::ptrdiff_t>(shift));
  assert(detail::is_lyndon(rotated));
  return Word(std::move(rotated), alphabet);
}

}  // namespace lyndon
