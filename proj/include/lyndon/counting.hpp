#pragma once

#include <cstdint>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "lyndon/word.hpp"

namespace lyndon {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Number-theoretic Moebius function, by trial division.
inline int mobius(std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("mobius: argument must be >= 1");
  int factors = 0;
  for (std::uint64_t p = 2; p * p <= d; ++p) {
    if (d % p == 0) {
      d /= p;
      if (d % p == 0) return 0;
      ++factors;
    }
  }
  if (d > 1) ++factors;
  return (factors % 2 == 0) ? 1 : -1;
}

/// card(P_n) = sum over d | n of mu(d) * q^(n/d), exactly.
inline BigInt count_primitive(std::size_t n, unsigned q) {
  if (n == 0) throw std::invalid_argument("count_primitive: n must be >= 1");
  Alphabet check(q);
  BigInt total = 0;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    const std::uint64_t e = n / d;
    total += mobius(d) * boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(e));
    if (d != e)
      total += mobius(e) * boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(d));
  }
  return total;
}

/// card(L_n) = card(P_n) / n: every length-n Lyndon word has exactly n
/// primitive words in its rotation orbit.
inline BigInt count_lyndon(std::size_t n, unsigned q) {
  const BigInt primitive = count_primitive(n, q);
  if (primitive % n != 0)
    throw std::logic_error("count_lyndon: primitive count not divisible by n");
  return primitive / n;
}

struct CountReport {
  std::size_t n;
  unsigned q;
  BigInt primitive_count;
  BigInt lyndon_count;
  BigInt nonprimitive_count;
};

inline CountReport count_report(std::size_t n, unsigned q) {
  CountReport r{n, q, count_primitive(n, q), 0, 0};
  r.lyndon_count = r.primitive_count / n;
  r.nonprimitive_count =
      boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(n)) - r.primitive_count;
  return r;
}

/// Exact probability that a uniform Lyndon word of length n has its right
/// factor obtained by deleting the first letter (split length n-1).
///
/// Such words are exactly the Lyndon words whose tail is again Lyndon; for
/// n >= 3 they decompose by first letter a_j into a_j . L_{n-1}(a_j..a_q),
/// giving sum over k in [2, q] of card(L_{n-1} over k letters). For n = 2
/// every Lyndon word qualifies, and the sum formula overcounts because
/// a_j . a_j is not Lyndon; the mass is exactly 1 there.
inline BigRational atom_mass(std::size_t n, unsigned q) {
  if (n < 2) throw std::invalid_argument("atom_mass: n must be >= 2");
  Alphabet check(q);
  if (n == 2) return BigRational(1);
  BigInt with_lyndon_tail = 0;
  for (unsigned k = 2; k <= q; ++k) with_lyndon_tail += count_lyndon(n - 1, k);
  return BigRational(with_lyndon_tail, count_lyndon(n, q));
}

}  // namespace lyndon
