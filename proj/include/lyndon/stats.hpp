#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "lyndon/counting.hpp"
#include "lyndon/factorize.hpp"
#include "lyndon/runs_blocks.hpp"
#include "lyndon/sampling.hpp"
#include "lyndon/word.hpp"

namespace lyndon {

/// Limit law of the normalized right-factor length: an atom of mass 1/q at
/// 1 plus a uniform density of total mass (q-1)/q on [0, 1).
inline double limit_cdf(double x, unsigned q) {
  Alphabet check(q);
  if (x < 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return (static_cast<double>(q) - 1.0) / static_cast<double>(q) * x;
}

/// k-th moment of the limit law: 1/q + (q-1)/(q(k+1)).
inline double limit_moment(unsigned k, unsigned q) {
  Alphabet check(q);
  if (k == 0) throw std::invalid_argument("limit_moment: k must be >= 1");
  const double qd = static_cast<double>(q);
  return 1.0 / qd + (qd - 1.0) / (qd * static_cast<double>(k + 1));
}

/// One-sample Kolmogorov-Smirnov statistic against a cdf.
template <typename Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double m = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / m - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / m));
  }
  return d;
}

/// Pearson statistic sum (O-E)^2 / E.
inline double chi_square(std::span<const std::uint64_t> observed,
                         std::span<const double> expected) {
  if (observed.empty() || observed.size() != expected.size())
    throw std::invalid_argument("chi_square: size mismatch or empty input");
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0))
      throw std::invalid_argument("chi_square: expected counts must be positive");
    const double diff = static_cast<double>(observed[i]) - expected[i];
    stat += diff * diff / expected[i];
  }
  return stat;
}

/// Exact distribution of the right-factor length over all Lyndon words of
/// length n, tallied with the quadratic suffix-minimum oracle so that it
/// stays independent of the fast factorization path.
struct ExactDistribution {
  std::size_t n;
  unsigned q;
  BigInt word_count;
  std::map<std::size_t, BigRational> probability;  // split length -> mass

  BigRational atom() const {
    const auto it = probability.find(n - 1);
    return it == probability.end() ? BigRational(0) : it->second;
  }
  BigRational mean_normalized() const {
    BigRational mean = 0;
    for (const auto& [r, p] : probability) mean += BigRational(r) * p;
    return mean / BigRational(n);
  }
};

inline ExactDistribution exact_r_distribution(std::size_t n, unsigned q) {
  if (n < 2) throw std::invalid_argument("exact_r_distribution: n must be >= 2");
  const BigInt count = count_lyndon(n, q);
  if (count > 10'000'000)
    throw std::invalid_argument(
        "exact_r_distribution: more than 1e7 Lyndon words; use the Monte Carlo path");
  std::map<std::size_t, BigInt> tally;
  BigInt seen = 0;
  for_each_lyndon(n, q, [&](const Word& w) {
    ++tally[standard_right_factor_naive(w).right_length()];
    ++seen;
  });
  if (seen != count)
    throw std::logic_error("exact_r_distribution: enumeration disagrees with the count");
  ExactDistribution dist{n, q, count, {}};
  BigRational total = 0;
  for (const auto& [r, c] : tally) {
    dist.probability.emplace(r, BigRational(c, count));
    total += dist.probability.at(r);
  }
  if (total != 1) throw std::logic_error("exact_r_distribution: masses do not sum to 1");
  return dist;
}

/// One Monte Carlo sample row (for CSV export).
struct SampleRow {
  std::size_t right_length;
  bool is_atom;
  bool is_good;
  std::optional<double> dn;
};

struct EmpiricalReport {
  std::size_t n = 0;
  unsigned q = 0;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.2;
  unsigned workers = 1;

  double atom_freq = 0.0;          // fraction of draws with split length n-1
  double ks_continuous = 0.0;      // KS of the non-atom part against U[0,1)
  std::array<double, 4> moments{}; // first four moments of the normalized length
  double good_fraction = 0.0;
  std::size_t good_count = 0;
  std::optional<double> dn_ks;     // KS of the second-smallest-block position
  std::size_t dn_count = 0;
  std::size_t dn_mismatches = 0;        // good non-atom draws with split != complement
  std::size_t dichotomy_violations = 0; // atom flag vs Lyndon-tail disagreement
};

namespace detail {

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct McAccumulator {
  std::size_t atom_count = 0;
  std::size_t good_count = 0;
  std::size_t dn_mismatches = 0;
  std::size_t dichotomy_violations = 0;
  Kahan m1, m2, m3, m4;
  std::vector<double> continuous;
  std::vector<double> dn_values;
  std::vector<SampleRow> rows;
};

inline void montecarlo_worker(std::size_t n, unsigned q, std::size_t draws,
                              std::uint64_t seed, std::uint64_t stream,
                              const BlockParams& params, bool collect_rows,
                              McAccumulator& acc) {
  Rng rng(seed, stream);
  for (std::size_t it = 0; it < draws; ++it) {
    const Word w = sample_lyndon(n, q, rng);
    const std::size_t r_len = right_factor_length(w.view());
    const bool atom = r_len == n - 1;
    if (is_lyndon(w.view().subspan(1)) != atom) ++acc.dichotomy_violations;

    const double r = static_cast<double>(r_len) / static_cast<double>(n);
    acc.m1.add(r);
    acc.m2.add(r * r);
    acc.m3.add(r * r * r);
    acc.m4.add(r * r * r * r);
    if (atom)
      ++acc.atom_count;
    else
      acc.continuous.push_back(r);

    const RunProfile profile = run_profile(w);
    const BlockDecomposition dec = decompose_blocks(w, params);
    const GoodWordReport g = classify_good_full(profile, dec, params, w.view());
    std::optional<double> dn;
    if (g.is_good()) {
      ++acc.good_count;
      if (dec.second_smallest_offset) {
        dn = dec.second_smallest_distance;
        acc.dn_values.push_back(*dn);
        if (!atom && r_len != n - *dec.second_smallest_offset) ++acc.dn_mismatches;
      }
    }
    if (collect_rows) acc.rows.push_back(SampleRow{r_len, atom, g.is_good(), dn});
  }
}

}  // namespace detail

/// Monte Carlo distribution check over uniform Lyndon words. Deterministic
/// for a fixed (seed, workers) pair: each worker owns stream index t and a
/// fixed contiguous share of the draws, and aggregation is order-fixed.
inline EmpiricalReport montecarlo_r(std::size_t n, unsigned q, std::size_t samples,
                                    std::uint64_t seed, double epsilon = 0.2,
                                    unsigned workers = 1,
                                    std::vector<SampleRow>* rows = nullptr) {
  if (n < 4) throw std::invalid_argument("montecarlo_r: n must be >= 4");
  if (samples == 0) throw std::invalid_argument("montecarlo_r: samples must be >= 1");
  if (workers == 0) workers = 1;
  const BlockParams params = BlockParams::for_size(n, q, epsilon);

  std::vector<detail::McAccumulator> parts(workers);
  std::vector<std::size_t> share(workers, samples / workers);
  for (std::size_t t = 0; t < samples % workers; ++t) ++share[t];

  if (workers == 1) {
    detail::montecarlo_worker(n, q, samples, seed, 0, params, rows != nullptr, parts[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back(detail::montecarlo_worker, n, q, share[t], seed, t,
                        std::cref(params), rows != nullptr, std::ref(parts[t]));
    for (auto& th : pool) th.join();
  }

  EmpiricalReport report;
  report.n = n;
  report.q = q;
  report.sample_count = samples;
  report.seed = seed;
  report.epsilon = epsilon;
  report.workers = workers;

  detail::Kahan m1, m2, m3, m4;
  std::vector<double> continuous, dn_values;
  std::size_t atom_count = 0;
  for (const auto& part : parts) {
    atom_count += part.atom_count;
    report.good_count += part.good_count;
    report.dn_mismatches += part.dn_mismatches;
    report.dichotomy_violations += part.dichotomy_violations;
    m1.add(part.m1.sum);
    m2.add(part.m2.sum);
    m3.add(part.m3.sum);
    m4.add(part.m4.sum);
    continuous.insert(continuous.end(), part.continuous.begin(), part.continuous.end());
    dn_values.insert(dn_values.end(), part.dn_values.begin(), part.dn_values.end());
    if (rows) rows->insert(rows->end(), part.rows.begin(), part.rows.end());
  }
  const double count = static_cast<double>(samples);
  report.atom_freq = static_cast<double>(atom_count) / count;
  report.moments = {m1.sum / count, m2.sum / count, m3.sum / count, m4.sum / count};
  report.good_fraction = static_cast<double>(report.good_count) / count;
  report.dn_count = dn_values.size();
  const auto uniform01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
  if (!continuous.empty())
    report.ks_continuous = ks_statistic(std::move(continuous), uniform01);
  if (!dn_values.empty())
    report.dn_ks = ks_statistic(std::move(dn_values), uniform01);
  return report;
}

/// Qualitative tail checks for run statistics over uniform Lyndon words:
/// frequencies of an unusually short or long maximal run of the smallest
/// letter and of a large deviation of the run count from n(q-1)/q.
struct TailReport {
  std::size_t n = 0;
  unsigned q = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.2;
  double freq_max_a_run_below = 0.0;    // M^a < (1-eps) log_q n
  double freq_max_a_run_above = 0.0;    // M^a > 2 log_q n
  double freq_run_count_deviation = 0.0;// |N - n(q-1)/q| > n^0.6
  double mean_run_density = 0.0;        // mean N / n
};

inline TailReport tail_check_runs(std::size_t n, unsigned q, std::size_t samples,
                                  std::uint64_t seed, double epsilon = 0.2) {
  if (n < 2 || samples == 0)
    throw std::invalid_argument("tail_check_runs: need n >= 2 and samples >= 1");
  TailReport report{n, q, samples, seed, epsilon};
  const double log_q_n =
      std::log(static_cast<double>(n)) / std::log(static_cast<double>(q));
  const double lo = (1.0 - epsilon) * log_q_n;
  const double hi = 2.0 * log_q_n;
  const double run_mean =
      static_cast<double>(n) * (static_cast<double>(q) - 1.0) / static_cast<double>(q);
  const double deviation = std::pow(static_cast<double>(n), 0.6);
  Rng rng(seed, 0);
  std::size_t below = 0, above = 0, dev = 0;
  detail::Kahan density;
  for (std::size_t it = 0; it < samples; ++it) {
    const Word w = sample_lyndon(n, q, rng);
    const RunProfile profile = run_profile(w);
    const auto max_a = static_cast<double>(profile.max_smallest_letter_run);
    if (max_a < lo) ++below;
    if (max_a > hi) ++above;
    const double runs = static_cast<double>(profile.run_count());
    if (std::abs(runs - run_mean) > deviation) ++dev;
    density.add(runs / static_cast<double>(n));
  }
  const double count = static_cast<double>(samples);
  report.freq_max_a_run_below = static_cast<double>(below) / count;
  report.freq_max_a_run_above = static_cast<double>(above) / count;
  report.freq_run_count_deviation = static_cast<double>(dev) / count;
  report.mean_run_density = density.sum / count;
  return report;
}

}  // namespace lyndon
