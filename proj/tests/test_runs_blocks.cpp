#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "lyndon/factorize.hpp"
#include "lyndon/runs_blocks.hpp"
#include "lyndon/sampling.hpp"

using namespace lyndon;

namespace {

Word W(const std::string& text, unsigned q = 2) { return Word::from_string(text, q); }

// Hand-sized parameter set matching the 12-letter worked example below.
BlockParams small_params() {
  BlockParams p;
  p.epsilon = 0.25;
  p.min_run = 3;
  p.min_block_len = 4;
  p.max_run = 4;
  p.min_separation = 6;
  p.h_lo = 1.0;
  p.h_hi = 3.0;
  return p;
}

std::string block_text(const Word& w, const Block& b) {
  std::string out;
  for (std::size_t i = 0; i < b.length; ++i)
    out.push_back(static_cast<char>('a' + w.letters()[b.start + i]));
  return out;
}

std::multiset<std::string> block_multiset(const Word& w, const BlockDecomposition& dec) {
  std::multiset<std::string> out;
  for (const Block& b : dec.blocks) out.insert(block_text(w, b));
  return out;
}

// Random good words by rejection.
std::vector<Word> sample_good_words(std::size_t how_many, std::size_t n, unsigned q,
                                    const BlockParams& params, Rng& rng) {
  std::vector<Word> out;
  std::size_t attempts = 0;
  while (out.size() < how_many) {
    REQUIRE(++attempts < how_many * 200);
    Word w = sample_lyndon(n, q, rng);
    if (classify_good(w, params).is_good()) out.push_back(std::move(w));
  }
  return out;
}

std::vector<std::size_t> random_sigma(std::size_t k, Rng& rng) {
  std::vector<std::size_t> sigma(k - 1);
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = i + 1;
  for (std::size_t i = sigma.size(); i > 1; --i)
    std::swap(sigma[i - 1], sigma[rng.below(i)]);
  return sigma;
}

}  // namespace

TEST_CASE("run profile", "[runs]") {
  const RunProfile a = run_profile(W("aabbbbaaa"));
  CHECK(a.run_count() == 3);
  REQUIRE(a.runs.size() == 3);
  CHECK(a.runs[0].length == 2);
  CHECK(a.runs[1].length == 4);
  CHECK(a.runs[2].length == 3);
  CHECK(a.max_run == 4);
  CHECK(a.max_smallest_letter_run == 3);

  const RunProfile b = run_profile(W("aaaaabbbb"));
  CHECK(b.run_count() == 2);
  CHECK(b.runs[0].length == 5);
  CHECK(b.runs[1].length == 4);
  CHECK(b.max_run == 5);
  CHECK(b.max_smallest_letter_run == 5);

  const RunProfile c = run_profile(W("bbbb"));
  CHECK(c.run_count() == 1);
  CHECK(c.max_run == 4);
  CHECK(c.max_smallest_letter_run == 0);
}

TEST_CASE("block parameters from size", "[runs]") {
  const BlockParams p = BlockParams::for_size(100000, 2, 0.2);
  CHECK(p.min_run == 14);    // ceil(0.8 * log2(1e5))
  CHECK(p.min_block_len == 50);
  CHECK(p.max_run == 34);
  CHECK(p.min_separation == 133);
  CHECK_THAT(p.h_lo, Catch::Matchers::WithinAbs(2.5, 1e-9));
  CHECK_THAT(p.h_hi, Catch::Matchers::WithinAbs(22.5, 1e-9));
  CHECK_THROWS_AS(BlockParams::for_size(100, 2, 1.5), std::invalid_argument);
}

TEST_CASE("worked block decomposition", "[runs]") {
  const Word w = W("aaababaaabbb");
  const BlockParams p = small_params();
  const BlockDecomposition dec = decompose_blocks(w, p);
  REQUIRE(dec.blocks.size() == 3);
  CHECK(dec.blocks[0].kind == BlockKind::Long);
  CHECK(block_text(w, dec.blocks[0]) == "aaab");
  CHECK(dec.blocks[1].kind == BlockKind::Short);
  CHECK(block_text(w, dec.blocks[1]) == "ab");
  CHECK(dec.blocks[2].kind == BlockKind::Long);
  CHECK(block_text(w, dec.blocks[2]) == "aaabbb");
  CHECK(dec.long_count == 2);
  CHECK(dec.block_count() == 3);
  CHECK(dec.starts_with_long);
  CHECK(dec.interfering_runs == 0);
  REQUIRE(dec.second_smallest_index);
  CHECK(*dec.second_smallest_index == 2);
  REQUIRE(dec.second_smallest_distance);
  CHECK(*dec.second_smallest_distance == 0.5);

  // split length agrees: the right factor starts at the second smallest block
  CHECK(standard_right_factor(w).right_length() == 6);
  CHECK(1.0 - *dec.second_smallest_distance == 6.0 / 12.0);
}

TEST_CASE("decomposition without a qualifying opening", "[runs]") {
  const Word w = W("aaababaaabbb");
  BlockParams p = small_params();
  p.min_run = 4;  // beyond the longest run of the smallest letter
  const BlockDecomposition dec = decompose_blocks(w, p);
  CHECK(dec.long_count == 0);
  CHECK_FALSE(dec.starts_with_long);
  CHECK_FALSE(dec.second_smallest_index.has_value());
  CHECK_FALSE(dec.second_smallest_distance.has_value());
  const GoodWordReport g = classify_good(w, p);
  CHECK_FALSE(g.is_good());
  CHECK(g.max_run_a_low);
}

TEST_CASE("blocks partition the word", "[runs]") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 20 + rng.below(400);
    const unsigned q = trial % 2 ? 2 : 3;
    const Word w = sample_lyndon(n, q, rng);
    const BlockParams p = BlockParams::for_size(n, q, 0.25);
    const BlockDecomposition dec = decompose_blocks(w, p);
    std::size_t pos = 0;
    std::vector<Letter> joined;
    for (const Block& b : dec.blocks) {
      REQUIRE(b.start == pos);
      pos += b.length;
      const auto piece = w.view().subspan(b.start, b.length);
      joined.insert(joined.end(), piece.begin(), piece.end());
    }
    REQUIRE(pos == n);
    REQUIRE(Word(joined, w.alphabet()) == w);
  }
}

TEST_CASE("good word classification on the worked example", "[runs]") {
  const GoodWordReport g = classify_good(W("aaababaaabbb"), small_params());
  CHECK(g.is_good());
  CHECK(g.failed_conditions().empty());
}

TEST_CASE("threshold violations are reported per condition", "[runs]") {
  BlockParams p = small_params();
  p.max_run = 4;
  // aaaaab: run of five a's exceeds max_run
  const GoodWordReport g = classify_good(W("aaaaab"), p);
  CHECK(g.max_run_a_high);
  CHECK_FALSE(g.is_good());

  // all conditions evaluated, not short-circuited
  const GoodWordReport h = classify_good(W("ab"), p);
  CHECK(h.max_run_a_low);
  CHECK(h.max_run_low);
  CHECK(h.block_count);
}

TEST_CASE("block permutation on the worked example", "[runs]") {
  const Word w = W("aaababaaabbb");
  const BlockParams p = small_params();

  const std::vector<std::size_t> identity{1, 2};
  CHECK(permute_blocks(w, identity, p) == w);

  const std::vector<std::size_t> swapped{2, 1};
  const Word v = permute_blocks(w, swapped, p);
  CHECK(v.to_string() == "aaabaaabbbab");
  CHECK(is_lyndon(v));

  CHECK_THROWS_AS(permute_blocks(w, std::vector<std::size_t>{1}, p),
                  std::invalid_argument);
  CHECK_THROWS_AS(permute_blocks(w, std::vector<std::size_t>{1, 1}, p),
                  std::invalid_argument);
  CHECK_THROWS_AS(permute_blocks(w, std::vector<std::size_t>{0, 1}, p),
                  std::invalid_argument);
  CHECK_THROWS_AS(permute_blocks(W("ab"), std::vector<std::size_t>{}, p),
                  std::invalid_argument);
}

TEST_CASE("permutation invariance on sampled good words", "[runs]") {
  for (unsigned q : {2u, 3u}) {
    const std::size_t n = 2000;
    const BlockParams params = BlockParams::for_size(n, q, 0.25);
    Rng rng(900 + q);
    const auto words = sample_good_words(10, n, q, params, rng);
    for (const Word& w : words) {
      const BlockDecomposition dec = decompose_blocks(w, params);
      const auto family = block_multiset(w, dec);
      for (int trial = 0; trial < 10; ++trial) {
        const auto sigma = random_sigma(dec.block_count(), rng);
        const Word v = permute_blocks(w, sigma, params);
        REQUIRE(is_lyndon(v));
        REQUIRE(classify_good(v, params).is_good());
        const BlockDecomposition dec_v = decompose_blocks(v, params);
        REQUIRE(dec_v.block_count() == dec.block_count());
        REQUIRE(dec_v.long_count == dec.long_count);
        REQUIRE(block_multiset(v, dec_v) == family);
      }
    }
  }
}

TEST_CASE("block lengths on good words stay within the structural cap", "[runs]") {
  const std::size_t n = 2000;
  const BlockParams params = BlockParams::for_size(n, 2, 0.25);
  Rng rng(41);
  for (const Word& w : sample_good_words(25, n, 2, params, rng)) {
    const BlockDecomposition dec = decompose_blocks(w, params);
    for (const Block& b : dec.blocks)
      REQUIRE(b.length <= params.min_block_len + 2 * params.max_run);
  }
}

TEST_CASE("distance to the second smallest block matches the right factor", "[runs]") {
  const std::size_t n = 1000;
  const BlockParams params = BlockParams::for_size(n, 2, 0.25);
  Rng rng(321);
  std::size_t checked = 0;
  for (const Word& w : sample_good_words(60, n, 2, params, rng)) {
    const std::size_t r_len = standard_right_factor_length(w);
    const BlockDecomposition dec = decompose_blocks(w, params);
    REQUIRE(dec.second_smallest_offset.has_value());
    const double dn = second_smallest_distance(w, params);
    CHECK(dn > 0.0);
    CHECK(dn < 1.0);
    if (r_len != n - 1) {
      // right factor begins exactly at the second smallest block
      REQUIRE(r_len == n - *dec.second_smallest_offset);
      REQUIRE(1.0 - dn == Catch::Approx(static_cast<double>(r_len) / n).epsilon(1e-12));
      ++checked;
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("right-factor dichotomy on good words", "[runs]") {
  const std::size_t n = 1000;
  const BlockParams params = BlockParams::for_size(n, 2, 0.25);
  Rng rng(77);
  for (const Word& w : sample_good_words(80, n, 2, params, rng)) {
    const std::size_t r_len = standard_right_factor_length(w);
    const BlockDecomposition dec = decompose_blocks(w, params);
    const bool atom = r_len == n - 1;
    const bool at_second_smallest =
        dec.second_smallest_offset && r_len == n - *dec.second_smallest_offset;
    REQUIRE((atom || at_second_smallest));
    REQUIRE(!(atom && at_second_smallest));
  }
}

TEST_CASE("second smallest distance rejects non-good input", "[runs]") {
  CHECK_THROWS_AS(second_smallest_distance(W("ab"), small_params()),
                  std::invalid_argument);
}
