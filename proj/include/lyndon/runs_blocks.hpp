#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lyndon/word.hpp"

namespace lyndon {

struct Run {
  Letter letter;
  std::size_t start;
  std::size_t length;
};

/// Maximal-run decomposition with the derived statistics: run count,
/// longest run, and longest run of the smallest letter.
struct RunProfile {
  std::vector<Run> runs;
  std::size_t max_run = 0;                 // over all runs
  std::size_t max_smallest_letter_run = 0; // over runs of letter 0; 0 if none
  std::size_t run_count() const { return runs.size(); }
};

inline RunProfile run_profile(const Word& w) {
  RunProfile out;
  const auto s = w.view();
  std::size_t start = 0;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    if (i == s.size() || s[i] != s[start]) {
      const std::size_t len = i - start;
      out.runs.push_back(Run{s[start], start, len});
      out.max_run = std::max(out.max_run, len);
      if (s[start] == 0)
        out.max_smallest_letter_run = std::max(out.max_smallest_letter_run, len);
      start = i;
    }
  }
  return out;
}

/// Thresholds of the block decomposition, all derived deterministically
/// from (n, q, epsilon). Integer thresholds use ceilings so the comparisons
/// below are exact.
struct BlockParams {
  double epsilon = 0.2;
  std::size_t min_run = 1;        // a run of letter 0 this long opens a long block
  std::size_t min_block_len = 1;  // long blocks close at the first boundary at or past this
  std::size_t max_run = 1;        // good words keep every run at or below this
  std::size_t min_separation = 1; // diagnostic spacing scale for long-block openings
  double h_lo = 0;                // good-word band for the long-block count
  double h_hi = 0;

  static BlockParams for_size(std::size_t n, unsigned q, double epsilon) {
    if (n < 2) throw std::invalid_argument("block params need n >= 2");
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw std::invalid_argument("epsilon must lie in (0, 1)");
    Alphabet check(q);
    const double log_q_n = std::log(static_cast<double>(n)) / std::log(static_cast<double>(q));
    BlockParams p;
    p.epsilon = epsilon;
    p.min_run = static_cast<std::size_t>(std::ceil((1.0 - epsilon) * log_q_n));
    p.min_run = std::max<std::size_t>(p.min_run, 1);
    p.min_block_len = static_cast<std::size_t>(std::ceil(3.0 * log_q_n));
    p.max_run = static_cast<std::size_t>(std::ceil(2.0 * log_q_n));
    p.min_separation = static_cast<std::size_t>(std::ceil(8.0 * log_q_n));
    const double h = std::pow(static_cast<double>(n), epsilon);
    p.h_lo = h / 4.0;
    p.h_hi = 9.0 * h / 4.0;
    return p;
  }
};

enum class BlockKind { Long, Short };

struct Block {
  BlockKind kind;
  std::size_t start;
  std::size_t length;
};

/// Ordered block partition of a word. Every block begins with a run of the
/// smallest letter and ends immediately before the next such run (for a
/// two-letter alphabet: ends with a run of the larger letter). A long block
/// opens at each run of letter 0 of length >= min_run and closes at the
/// first boundary at or past min_block_len; material between long blocks is
/// cut into short blocks, one per run of letter 0.
struct BlockDecomposition {
  std::vector<Block> blocks;
  std::size_t long_count = 0;   // number of complete long blocks
  bool starts_with_long = false;
  bool trailing_attached = false; // an unfinished tail was glued to the last block
  std::size_t interfering_runs = 0; // qualifying runs that opened no complete long block
  std::optional<std::size_t> second_smallest_index;  // among blocks[1..], unique minimum
  std::optional<std::size_t> second_smallest_offset; // word offset where that block starts
  std::optional<double> second_smallest_distance;    // offset / n

  std::size_t block_count() const { return blocks.size(); }
};

namespace detail {

inline std::span<const Letter> block_view(std::span<const Letter> s, const Block& b) {
  return s.subspan(b.start, b.length);
}

inline void resolve_second_smallest(BlockDecomposition& dec,
                                    std::span<const Letter> s) {
  if (dec.blocks.size() < 2 || !dec.starts_with_long || dec.trailing_attached)
    return;
  std::size_t best = 1;
  bool tie = false;
  for (std::size_t i = 2; i < dec.blocks.size(); ++i) {
    const auto cmp = lex_compare(block_view(s, dec.blocks[i]),
                                 block_view(s, dec.blocks[best]));
    if (cmp < 0) {
      best = i;
      tie = false;
    } else if (cmp == 0) {
      tie = true;
    }
  }
  if (tie) return;
  dec.second_smallest_index = best;
  dec.second_smallest_offset = dec.blocks[best].start;
  dec.second_smallest_distance =
      static_cast<double>(dec.blocks[best].start) / static_cast<double>(s.size());
}

}  // namespace detail

inline BlockDecomposition decompose_blocks(const Word& w, const BlockParams& p) {
  const auto s = w.view();
  const std::size_t n = s.size();
  BlockDecomposition dec;

  // Unit starts: positions of runs of letter 0. Each unit stretches to the
  // next such run (or the end of the word) and is the atomic building piece.
  std::vector<std::pair<std::size_t, std::size_t>> units;  // (start, opening run length)
  {
    std::size_t i = 0;
    while (i < n) {
      if (s[i] == 0) {
        std::size_t j = i;
        while (j < n && s[j] == 0) ++j;
        units.emplace_back(i, j - i);
        while (j < n && s[j] != 0) ++j;
        i = j;
      } else {
        ++i;
      }
    }
  }
  if (units.empty()) {
    // No smallest-letter run at all: the word carries no block structure.
    dec.blocks.push_back(Block{BlockKind::Short, 0, n});
    dec.trailing_attached = true;
    return dec;
  }
  if (units[0].first != 0) {
    // Leading material before the first unit (impossible for Lyndon input
    // containing letter 0); keep the partition total and flag it.
    dec.blocks.push_back(Block{BlockKind::Short, 0, units[0].first});
    dec.trailing_attached = true;
  }
  dec.starts_with_long = units[0].first == 0 && units[0].second >= p.min_run;

  std::optional<std::size_t> open_long;
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto [start, run_len] = units[u];
    const std::size_t unit_end = (u + 1 < units.size()) ? units[u + 1].first : n;
    if (open_long) {
      if (run_len >= p.min_run) ++dec.interfering_runs;  // swallowed opening
    } else if (run_len >= p.min_run) {
      open_long = start;
    } else {
      dec.blocks.push_back(Block{BlockKind::Short, start, unit_end - start});
    }
    if (open_long && unit_end - *open_long >= p.min_block_len) {
      dec.blocks.push_back(Block{BlockKind::Long, *open_long, unit_end - *open_long});
      ++dec.long_count;
      open_long.reset();
    }
  }
  if (open_long) {
    // The final qualifying run could not reach a complete long block.
    ++dec.interfering_runs;
    if (dec.blocks.empty()) {
      dec.blocks.push_back(Block{BlockKind::Long, *open_long, n - *open_long});
    } else {
      dec.blocks.back().length = n - dec.blocks.back().start;
    }
    dec.trailing_attached = true;
  }

  detail::resolve_second_smallest(dec, s);
  return dec;
}

/// Structural conditions a Lyndon word must satisfy for the block machinery
/// to behave: run-length bounds, long-block count in band, no interference
/// between long blocks, and pairwise-distinct long blocks. Every condition
/// is evaluated; nothing short-circuits.
struct GoodWordReport {
  bool max_run_a_low = false;
  bool max_run_a_high = false;
  bool max_run_low = false;
  bool max_run_high = false;
  bool block_count = false;
  bool separation = false;
  bool duplicate_blocks = false;

  bool is_good() const {
    return !(max_run_a_low || max_run_a_high || max_run_low || max_run_high ||
             block_count || separation || duplicate_blocks);
  }
  std::vector<std::string> failed_conditions() const {
    std::vector<std::string> out;
    if (max_run_a_low) out.push_back("max_run_a_low");
    if (max_run_a_high) out.push_back("max_run_a_high");
    if (max_run_low) out.push_back("max_run_low");
    if (max_run_high) out.push_back("max_run_high");
    if (block_count) out.push_back("block_count");
    if (separation) out.push_back("separation");
    if (duplicate_blocks) out.push_back("duplicate_blocks");
    return out;
  }
};

inline GoodWordReport classify_good(const RunProfile& profile,
                                    const BlockDecomposition& dec,
                                    const BlockParams& p) {
  GoodWordReport g;
  g.max_run_a_low = profile.max_smallest_letter_run < p.min_run;
  g.max_run_a_high = profile.max_smallest_letter_run > p.max_run;
  g.max_run_low = profile.max_run < p.min_run;
  g.max_run_high = profile.max_run > p.max_run;
  const double h = static_cast<double>(dec.long_count);
  g.block_count = !(h >= p.h_lo && h <= p.h_hi);
  // Long blocks must not interfere: every qualifying run of letter 0 has to
  // open its own complete long block. This is the permutation-stable form
  // of the spacing requirement (min_separation stays as a diagnostic).
  g.separation = dec.interfering_runs > 0 || !dec.starts_with_long ||
                 dec.trailing_attached;
  return g;
}

/// Full report from precomputed pieces, including the duplicate check.
inline GoodWordReport classify_good_full(const RunProfile& profile,
                                         const BlockDecomposition& dec,
                                         const BlockParams& p,
                                         std::span<const Letter> s) {
  GoodWordReport g = classify_good(profile, dec, p);
  std::vector<const Block*> longs;
  for (const Block& b : dec.blocks)
    if (b.kind == BlockKind::Long) longs.push_back(&b);
  for (std::size_t a = 0; a < longs.size() && !g.duplicate_blocks; ++a)
    for (std::size_t b = a + 1; b < longs.size(); ++b) {
      if (longs[a]->length == longs[b]->length &&
          detail::lex_compare(detail::block_view(s, *longs[a]),
                              detail::block_view(s, *longs[b])) == 0) {
        g.duplicate_blocks = true;
        break;
      }
    }
  return g;
}

inline GoodWordReport classify_good(const Word& w, const BlockParams& p) {
  assert(is_lyndon(w));
  const RunProfile profile = run_profile(w);
  const BlockDecomposition dec = decompose_blocks(w, p);
  return classify_good_full(profile, dec, p, w.view());
}

/// Keeps the first block in place and reorders the remaining blocks by
/// sigma (a permutation of the indices 1..K-1). The result has the same
/// family of blocks as the input.
inline Word permute_blocks(const Word& w, std::span<const std::size_t> sigma,
                           const BlockParams& p) {
  if (!is_lyndon(w))
    throw std::invalid_argument("permute_blocks: word is not Lyndon");
  const BlockDecomposition dec = decompose_blocks(w, p);
  const GoodWordReport g = classify_good(w, p);
  if (!g.is_good())
    throw std::invalid_argument("permute_blocks: word fails the structural conditions");
  const std::size_t k = dec.blocks.size();
  if (sigma.size() != k - 1)
    throw std::invalid_argument("permute_blocks: permutation size must be K-1");
  std::vector<bool> seen(k, false);
  for (std::size_t v : sigma) {
    if (v < 1 || v >= k || seen[v])
      throw std::invalid_argument("permute_blocks: not a permutation of 1..K-1");
    seen[v] = true;
  }
  std::vector<Letter> out;
  out.reserve(w.size());
  const auto s = w.view();
  const auto append = [&](const Block& b) {
    const auto piece = detail::block_view(s, b);
    out.insert(out.end(), piece.begin(), piece.end());
  };
  append(dec.blocks[0]);
  for (std::size_t v : sigma) append(dec.blocks[v]);
  return Word(std::move(out), w.alphabet());
}

/// Normalized start position of the second smallest block. Defined for
/// words passing classify_good; throws when the minimum is ambiguous.
inline double second_smallest_distance(const Word& w, const BlockParams& p) {
  if (!classify_good(w, p).is_good())
    throw std::invalid_argument("second_smallest_distance: word fails the structural conditions");
  const BlockDecomposition dec = decompose_blocks(w, p);
  if (!dec.second_smallest_distance)
    throw std::invalid_argument("second_smallest_distance: second smallest block is ambiguous");
  return *dec.second_smallest_distance;
}

}  // namespace lyndon
