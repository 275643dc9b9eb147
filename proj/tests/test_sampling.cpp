#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <map>

#include "lyndon/counting.hpp"
#include "lyndon/factorize.hpp"
#include "lyndon/runs_blocks.hpp"
#include "lyndon/sampling.hpp"
#include "lyndon/stats.hpp"

using namespace lyndon;

namespace {

// 0.999 chi-square quantiles for the degrees of freedom used below.
constexpr double kChi2_999_df7 = 24.322;
constexpr double kChi2_999_df31 = 61.099;
constexpr double kChi2_999_df98 = 148.2;

std::uint64_t encode(const Word& w) {
  std::uint64_t code = 0;
  for (Letter c : w.letters()) code = code * w.alphabet().size() + c;
  return code;
}

// Two-sample homogeneity statistic over aligned count vectors.
double two_sample_chi_square(std::span<const std::uint64_t> a,
                             std::span<const std::uint64_t> b) {
  REQUIRE(a.size() == b.size());
  double total_a = 0, total_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total_a += static_cast<double>(a[i]);
    total_b += static_cast<double>(b[i]);
  }
  const double total = total_a + total_b;
  std::vector<double> expected_a(a.size()), expected_b(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double cell = static_cast<double>(a[i] + b[i]);
    expected_a[i] = cell * total_a / total;
    expected_b[i] = cell * total_b / total;
  }
  return chi_square(a, expected_a) + chi_square(b, expected_b);
}

}  // namespace

TEST_CASE("sampling is reproducible and streams are independent", "[sampling]") {
  Rng r1(42), r2(42);
  CHECK(sample_word(50, 2, r1) == sample_word(50, 2, r2));
  CHECK(sample_word_geometric(50, 3, r1) == sample_word_geometric(50, 3, r2));
  CHECK(sample_lyndon(50, 2, r1) == sample_lyndon(50, 2, r2));

  Rng s0(42, 0), s1(42, 1);
  CHECK(sample_word(50, 2, s0) != sample_word(50, 2, s1));
}

TEST_CASE("single letters are balanced", "[sampling]") {
  Rng rng(7);
  std::size_t zeros = 0;
  const std::size_t draws = 100000;
  for (std::size_t i = 0; i < draws; ++i)
    if (sample_word(1, 2, rng).letters()[0] == 0) ++zeros;
  const double freq = static_cast<double>(zeros) / static_cast<double>(draws);
  CHECK_THAT(freq, Catch::Matchers::WithinAbs(0.5, 0.01));
}

TEST_CASE("uniformity over all words of length 5", "[sampling]") {
  Rng rng(8);
  std::array<std::uint64_t, 32> counts{};
  const std::size_t draws = 320000;
  for (std::size_t i = 0; i < draws; ++i) ++counts[encode(sample_word(5, 2, rng))];
  std::vector<double> expected(32, static_cast<double>(draws) / 32.0);
  CHECK(chi_square(counts, expected) < kChi2_999_df31);
}

TEST_CASE("bounded draws are unbiased for odd alphabets", "[sampling]") {
  Rng rng(9);
  std::array<std::uint64_t, 3> counts{};
  for (std::size_t i = 0; i < 300000; ++i) ++counts[rng.below(3)];
  std::vector<double> expected(3, 100000.0);
  CHECK(chi_square(counts, expected) < 13.816);  // 0.999 quantile, df 2
}

TEST_CASE("geometric construction matches direct sampling in distribution",
          "[sampling]") {
  const std::size_t draws = 100000;
  Rng direct_rng(10), geo_rng(11);
  std::array<std::uint64_t, 8> direct{}, geo{};
  for (std::size_t i = 0; i < draws; ++i) {
    ++direct[encode(sample_word(3, 2, direct_rng))];
    ++geo[encode(sample_word_geometric(3, 2, geo_rng))];
  }
  CHECK(two_sample_chi_square(direct, geo) < kChi2_999_df7);
}

TEST_CASE("geometric construction: exact length and run balance", "[sampling]") {
  Rng rng(12);
  for (std::size_t n : {1ull, 2ull, 17ull, 1000ull})
    CHECK(sample_word_geometric(n, 3, rng).size() == n);

  // run count per letter concentrates at (q-1)/q
  const std::size_t n = 10000, draws = 10000;
  double mean = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    const Word w = sample_word_geometric(n, 2, rng);
    mean += static_cast<double>(run_profile(w).run_count()) / static_cast<double>(n);
  }
  mean /= static_cast<double>(draws);
  CHECK_THAT(mean, Catch::Matchers::WithinAbs(0.5, 0.01));
}

TEST_CASE("lyndon sampler hits only Lyndon words, uniformly", "[sampling]") {
  Rng rng(13);
  CHECK(sample_lyndon(2, 2, rng).to_string() == "ab");
  CHECK(sample_lyndon(2, 2, rng).to_string() == "ab");

  // support and uniformity over the 99 Lyndon words of length 10
  std::map<std::uint64_t, std::size_t> index;
  for_each_lyndon(10, 2, [&](const Word& w) {
    const std::size_t i = index.size();
    index[encode(w)] = i;
  });
  REQUIRE(index.size() == 99);
  std::vector<std::uint64_t> counts(99, 0);
  const std::size_t draws = 200000;
  for (std::size_t i = 0; i < draws; ++i) {
    const Word w = sample_lyndon(10, 2, rng);
    REQUIRE(is_lyndon(w));
    const auto it = index.find(encode(w));
    REQUIRE(it != index.end());
    ++counts[it->second];
  }
  std::vector<double> expected(99, static_cast<double>(draws) / 99.0);
  CHECK(chi_square(counts, expected) < kChi2_999_df98);
}

TEST_CASE("rejection rate matches the non-primitive mass", "[sampling]") {
  Rng rng(14);
  std::size_t rejections = 0;
  const std::size_t draws = 100000;
  for (std::size_t i = 0; i < draws; ++i) sample_lyndon(20, 2, rng, &rejections);
  const double mean = static_cast<double>(rejections) / static_cast<double>(draws);
  // 1036 of the 2^20 words are non-primitive; expected rejections per draw
  // are p/(1-p). Band is five standard errors, frozen from that estimate.
  const double p = 1036.0 / 1048576.0;
  CHECK_THAT(mean, Catch::Matchers::WithinAbs(p / (1 - p), 5e-4));
}

TEST_CASE("statistics transfer from uniform words to uniform Lyndon words",
          "[sampling]") {
  // Exact computation over all 2^16 words: for the events {max run of the
  // smallest letter >= k} on Lyndon words, the uniform-Lyndon probability and
  // the uniform-word probability of the rotation preimage differ by at most
  // 2^(-n/2+2).
  const std::size_t n = 16;
  const std::uint64_t total = 1ull << n;
  const auto lyndon_total = count_lyndon(n, 2).convert_to<double>();
  std::array<std::uint64_t, 18> lyndon_hits{};    // by k, over Lyndon words
  std::array<std::uint64_t, 18> preimage_hits{};  // by k, over primitive words
  std::vector<Letter> letters(n);
  for (std::uint64_t code = 0; code < total; ++code) {
    for (std::size_t i = 0; i < n; ++i) letters[i] = (code >> (n - 1 - i)) & 1;
    if (!detail::is_primitive(letters)) continue;
    const std::size_t shift = detail::least_rotation(letters);
    std::vector<Letter> rotated(letters.begin() + shift, letters.end());
    rotated.insert(rotated.end(), letters.begin(), letters.begin() + shift);
    const Word rho(rotated, Alphabet(2));
    const std::size_t max_a = run_profile(rho).max_smallest_letter_run;
    for (std::size_t k = 0; k <= max_a && k < 18; ++k) {
      ++preimage_hits[k];
      if (shift == 0) ++lyndon_hits[k];
    }
  }
  for (std::size_t k = 1; k <= 16; ++k) {
    const double lhs = static_cast<double>(lyndon_hits[k]) / lyndon_total;
    const double rhs = static_cast<double>(preimage_hits[k]) / static_cast<double>(total);
    CHECK(std::abs(lhs - rhs) <= std::pow(2.0, -static_cast<double>(n) / 2 + 2));
  }
}
