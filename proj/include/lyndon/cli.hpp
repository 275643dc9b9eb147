#pragma once

#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lyndon/lyndon.hpp"

namespace lyndon::cli {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string big_str(const BigInt& v) { return v.str(); }

inline Json rational_json(const BigRational& v) {
  Json out;
  out["num"] = boost::multiprecision::numerator(v).str();
  out["den"] = boost::multiprecision::denominator(v).str();
  out["value"] = v.convert_to<double>();
  return out;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start)
        .count();
  }
};

inline Json metadata(const std::string& command, Json params, const Timer& timer,
                     std::optional<std::uint64_t> seed = std::nullopt,
                     unsigned workers = 1) {
  Json meta;
  meta["command"] = command;
  meta["version"] = kVersion;
  meta["params"] = std::move(params);
  if (seed) {
    meta["seed"] = *seed;
    meta["generator"] = Rng::kName;
  } else {
    meta["seed"] = nullptr;
    meta["generator"] = nullptr;
  }
  meta["workers"] = workers;
  meta["duration_ms"] = timer.elapsed_ms();
  return meta;
}

inline void emit_meta_comment(std::ostream& out, const Json& meta) {
  out << "# " << meta.dump() << "\n";
}

inline Json report_json(const EmpiricalReport& r) {
  Json out;
  out["n"] = r.n;
  out["q"] = r.q;
  out["samples"] = r.sample_count;
  out["atom_freq"] = r.atom_freq;
  out["ks_continuous"] = r.ks_continuous;
  out["moments"] = r.moments;
  out["good_fraction"] = r.good_fraction;
  out["good_count"] = r.good_count;
  out["dn_count"] = r.dn_count;
  if (r.dn_ks)
    out["dn_ks"] = *r.dn_ks;
  else
    out["dn_ks"] = nullptr;
  out["dn_mismatches"] = r.dn_mismatches;
  out["dichotomy_violations"] = r.dichotomy_violations;
  return out;
}

inline void emit_text_report(std::ostream& out, const Json& body) {
  std::size_t width = 0;
  for (auto it = body.begin(); it != body.end(); ++it)
    width = std::max(width, it.key().size());
  for (auto it = body.begin(); it != body.end(); ++it) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << it.key()
        << it.value().dump() << "\n";
  }
}

inline void emit_rows_csv(std::ostream& out, std::size_t n,
                          const std::vector<SampleRow>& rows) {
  out << "n,R,r,is_atom,is_good,d_n\n";
  for (const auto& row : rows) {
    out << n << ',' << row.right_length << ','
        << static_cast<double>(row.right_length) / static_cast<double>(n) << ','
        << (row.is_atom ? 1 : 0) << ',' << (row.is_good ? 1 : 0) << ',';
    if (row.dn) out << *row.dn;
    out << '\n';
  }
}

inline Json tree_json(const FactorizationTree& tree, int index) {
  const auto& node = tree.nodes()[static_cast<std::size_t>(index)];
  Json out;
  out["word"] = tree.text_at(index);
  out["height"] = node.height;
  if (node.left >= 0) {
    out["children"] = Json::array(
        {tree_json(tree, node.left), tree_json(tree, node.right)});
  }
  return out;
}

}  // namespace detail

/// Runs the command line tool on `args` (without the program name), writing
/// results to `out` and diagnostics to `err`. Returns the process exit code:
/// 0 on success, 2 on usage errors, 1 on internal failures.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  detail::Timer timer;

  CLI::App app{"Lyndon word toolkit: counting, factorization, block structure, "
               "sampling and distribution checks"};
  app.require_subcommand(1);

  std::string format = "json";
  app.add_option("--format", format, "Output format: json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();

  // Shared option storage.
  std::size_t n = 0;
  unsigned q = 2;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  double epsilon = 0.2;
  unsigned workers = 1;
  std::string word_text;
  std::string table_range;
  std::size_t count_draws = 1;
  bool want_lyndon = false, want_geometric = false, want_stats = false, want_csv = false;

  auto* cmd_count = app.add_subcommand("count", "Exact primitive/Lyndon counts and the atom mass");
  cmd_count->add_option("--n", n, "Word length");
  cmd_count->add_option("--q", q, "Alphabet size")->capture_default_str();
  cmd_count->add_option("--table", table_range, "Range n1..n2; emits CSV rows");

  auto* cmd_enum = app.add_subcommand("enumerate", "List all Lyndon words of length n");
  cmd_enum->add_option("--n", n, "Word length")->required();
  cmd_enum->add_option("--q", q, "Alphabet size")->capture_default_str();

  auto* cmd_factor = app.add_subcommand("factor", "Standard factorization of a Lyndon word");
  cmd_factor->add_option("word", word_text, "Input word")->required();
  cmd_factor->add_option("--q", q, "Alphabet size (default: inferred)");

  auto* cmd_tree = app.add_subcommand("tree", "Recursive standard factorization tree");
  cmd_tree->add_option("word", word_text, "Input word")->required();
  cmd_tree->add_option("--q", q, "Alphabet size (default: inferred)");

  auto* cmd_blocks = app.add_subcommand("blocks", "Long/short block decomposition");
  cmd_blocks->add_option("word", word_text, "Input word")->required();
  cmd_blocks->add_option("--epsilon", epsilon, "Threshold parameter in (0,1)")
      ->capture_default_str();
  cmd_blocks->add_option("--q", q, "Alphabet size (default: inferred)");

  auto* cmd_sample = app.add_subcommand("sample", "Draw random words");
  cmd_sample->add_option("--n", n, "Word length")->required();
  cmd_sample->add_option("--q", q, "Alphabet size")->capture_default_str();
  cmd_sample->add_option("--count", count_draws, "Number of draws")->capture_default_str();
  cmd_sample->add_option("--seed", seed, "RNG seed")->capture_default_str();
  cmd_sample->add_flag("--lyndon", want_lyndon, "Draw uniform Lyndon words");
  cmd_sample->add_flag("--geometric", want_geometric,
                       "Use the run-by-run geometric construction");
  cmd_sample->add_flag("--stats", want_stats, "Emit summary statistics instead of words");

  auto* cmd_exact = app.add_subcommand("exact-dist",
                                       "Exact right-factor distribution by enumeration");
  cmd_exact->add_option("--n", n, "Word length")->required();
  cmd_exact->add_option("--q", q, "Alphabet size")->capture_default_str();

  auto* cmd_limit = app.add_subcommand("limit-check",
                                       "Monte Carlo check of the limit distribution");
  cmd_limit->add_option("--n", n, "Word length")->required();
  cmd_limit->add_option("--q", q, "Alphabet size")->capture_default_str();
  cmd_limit->add_option("--samples", samples, "Number of draws")->required();
  cmd_limit->add_option("--seed", seed, "RNG seed")->capture_default_str();
  cmd_limit->add_option("--epsilon", epsilon, "Block threshold parameter")
      ->capture_default_str();
  cmd_limit->add_option("--workers", workers, "Parallel RNG streams")->capture_default_str();
  cmd_limit->add_flag("--csv", want_csv, "Emit per-sample CSV rows");

  auto* cmd_dn = app.add_subcommand("dn-check",
                                    "Monte Carlo check of the second-smallest-block position");
  cmd_dn->add_option("--n", n, "Word length")->required();
  cmd_dn->add_option("--q", q, "Alphabet size")->capture_default_str();
  cmd_dn->add_option("--samples", samples, "Number of draws")->required();
  cmd_dn->add_option("--seed", seed, "RNG seed")->capture_default_str();
  cmd_dn->add_option("--epsilon", epsilon, "Block threshold parameter")
      ->capture_default_str();
  cmd_dn->add_option("--workers", workers, "Parallel RNG streams")->capture_default_str();
  cmd_dn->add_flag("--csv", want_csv, "Emit per-sample CSV rows");

  auto* cmd_tails = app.add_subcommand("tails", "Run-statistics tail frequencies");
  cmd_tails->add_option("--n", n, "Word length")->required();
  cmd_tails->add_option("--q", q, "Alphabet size")->capture_default_str();
  cmd_tails->add_option("--samples", samples, "Number of draws")->required();
  cmd_tails->add_option("--seed", seed, "RNG seed")->capture_default_str();
  cmd_tails->add_option("--epsilon", epsilon, "Run threshold parameter")
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("lyndon");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  const auto emit_json = [&](Json body) {
    out << body.dump(2) << "\n";
  };

  try {
    if (cmd_count->parsed()) {
      if (!table_range.empty()) {
        const auto sep = table_range.find("..");
        if (sep == std::string::npos)
          throw std::invalid_argument("--table expects a range like 4..18");
        const std::size_t n1 = std::stoull(table_range.substr(0, sep));
        const std::size_t n2 = std::stoull(table_range.substr(sep + 2));
        if (n1 == 0 || n2 < n1) throw std::invalid_argument("--table range is empty");
        detail::emit_meta_comment(
            out, detail::metadata("count", {{"table", table_range}, {"q", q}}, timer));
        out << "n,q,primitive,lyndon,nonprimitive,atom_num,atom_den,atom\n";
        for (std::size_t m = n1; m <= n2; ++m) {
          const CountReport r = count_report(m, q);
          out << m << ',' << q << ',' << r.primitive_count.str() << ','
              << r.lyndon_count.str() << ',' << r.nonprimitive_count.str() << ',';
          if (m >= 2) {
            const BigRational a = atom_mass(m, q);
            out << boost::multiprecision::numerator(a).str() << ','
                << boost::multiprecision::denominator(a).str() << ','
                << a.convert_to<double>();
          } else {
            out << ",,";
          }
          out << '\n';
        }
        return 0;
      }
      if (n == 0) throw std::invalid_argument("count requires --n or --table");
      const CountReport r = count_report(n, q);
      Json body;
      body["meta"] = detail::metadata("count", {{"n", n}, {"q", q}}, timer);
      body["n"] = n;
      body["q"] = q;
      body["primitive_count"] = r.primitive_count.str();
      body["lyndon_count"] = r.lyndon_count.str();
      body["nonprimitive_count"] = r.nonprimitive_count.str();
      body["atom_mass"] = n >= 2 ? detail::rational_json(atom_mass(n, q)) : Json(nullptr);
      emit_json(body);
      return 0;
    }

    if (cmd_enum->parsed()) {
      if (format == "text" || format == "csv") {
        detail::emit_meta_comment(
            out, detail::metadata("enumerate", {{"n", n}, {"q", q}}, timer));
        for_each_lyndon(n, q, [&](const Word& w) { out << w.to_string() << "\n"; });
        return 0;
      }
      Json words = Json::array();
      for_each_lyndon(n, q, [&](const Word& w) { words.push_back(w.to_string()); });
      Json body;
      body["meta"] = detail::metadata("enumerate", {{"n", n}, {"q", q}}, timer);
      body["count"] = words.size();
      body["words"] = std::move(words);
      emit_json(body);
      return 0;
    }

    if (cmd_factor->parsed()) {
      const Word w = Word::from_string(word_text, cmd_factor->count("--q") ? q : 0);
      const StandardFactorization f = standard_right_factor(w);
      Json body;
      body["meta"] = detail::metadata(
          "factor", {{"word", word_text}, {"q", w.alphabet().size()}}, timer);
      body["word"] = w.to_string();
      body["u"] = f.left.to_string();
      body["v"] = f.right.to_string();
      body["R"] = f.right_length();
      body["r"] = static_cast<double>(f.right_length()) / static_cast<double>(w.size());
      emit_json(body);
      return 0;
    }

    if (cmd_tree->parsed()) {
      const Word w = Word::from_string(word_text, cmd_tree->count("--q") ? q : 0);
      const FactorizationTree tree = factorization_tree(w);
      // Unlike the other subcommands, the tree renders as indented text
      // unless JSON is requested explicitly.
      if (app.count("--format") > 0 && format == "json") {
        Json body;
        body["meta"] = detail::metadata(
            "tree", {{"word", word_text}, {"q", w.alphabet().size()}}, timer);
        body["height"] = tree.height();
        body["leaves"] = tree.leaf_count();
        body["tree"] = detail::tree_json(tree, tree.root());
        emit_json(body);
      } else {
        out << tree.to_text();
      }
      return 0;
    }

    if (cmd_blocks->parsed()) {
      const Word w = Word::from_string(word_text, cmd_blocks->count("--q") ? q : 0);
      if (!is_lyndon(w))
        throw std::invalid_argument("blocks: input word is not a Lyndon word");
      const BlockParams params =
          BlockParams::for_size(w.size(), w.alphabet().size(), epsilon);
      const BlockDecomposition dec = decompose_blocks(w, params);
      const GoodWordReport good = classify_good(w, params);
      Json body;
      body["meta"] = detail::metadata(
          "blocks",
          {{"word", word_text}, {"q", w.alphabet().size()}, {"epsilon", epsilon}}, timer);
      body["n"] = w.size();
      body["params"] = {{"epsilon", params.epsilon},
                        {"min_run", params.min_run},
                        {"min_block_len", params.min_block_len},
                        {"max_run", params.max_run},
                        {"min_separation", params.min_separation},
                        {"h_lo", params.h_lo},
                        {"h_hi", params.h_hi}};
      Json blocks = Json::array();
      for (const Block& b : dec.blocks) {
        std::string text;
        for (std::size_t i = 0; i < b.length; ++i)
          text.push_back(static_cast<char>('a' + w.letters()[b.start + i]));
        blocks.push_back({{"kind", b.kind == BlockKind::Long ? "long" : "short"},
                          {"start", b.start},
                          {"word", text}});
      }
      body["blocks"] = std::move(blocks);
      body["long_blocks"] = dec.long_count;
      body["total_blocks"] = dec.block_count();
      body["j0"] = dec.second_smallest_index ? Json(*dec.second_smallest_index) : Json(nullptr);
      body["d_n"] =
          dec.second_smallest_distance ? Json(*dec.second_smallest_distance) : Json(nullptr);
      body["good"] = good.is_good();
      body["failed_conditions"] = good.failed_conditions();
      emit_json(body);
      return 0;
    }

    if (cmd_sample->parsed()) {
      Rng rng(seed, 0);
      const Json params = {{"n", n},
                           {"q", q},
                           {"count", count_draws},
                           {"lyndon", want_lyndon},
                           {"geometric", want_geometric}};
      const auto draw = [&]() {
        if (want_lyndon) return sample_lyndon(n, q, rng);
        if (want_geometric) return sample_word_geometric(n, q, rng);
        return sample_word(n, q, rng);
      };
      if (want_stats) {
        lyndon::detail::Kahan run_density, max_a;
        for (std::size_t i = 0; i < count_draws; ++i) {
          const Word w = draw();
          const RunProfile profile = run_profile(w);
          run_density.add(static_cast<double>(profile.run_count()) /
                          static_cast<double>(n));
          max_a.add(static_cast<double>(profile.max_smallest_letter_run));
        }
        Json body;
        body["meta"] = detail::metadata("sample", params, timer, seed);
        body["mean_run_density"] = run_density.sum / static_cast<double>(count_draws);
        body["mean_max_smallest_letter_run"] =
            max_a.sum / static_cast<double>(count_draws);
        emit_json(body);
        return 0;
      }
      if (format == "json") {
        Json words = Json::array();
        for (std::size_t i = 0; i < count_draws; ++i) words.push_back(draw().to_string());
        Json body;
        body["meta"] = detail::metadata("sample", params, timer, seed);
        body["words"] = std::move(words);
        emit_json(body);
      } else {
        detail::emit_meta_comment(out, detail::metadata("sample", params, timer, seed));
        for (std::size_t i = 0; i < count_draws; ++i) out << draw().to_string() << "\n";
      }
      return 0;
    }

    if (cmd_exact->parsed()) {
      const ExactDistribution dist = exact_r_distribution(n, q);
      Json body;
      body["meta"] = detail::metadata("exact-dist", {{"n", n}, {"q", q}}, timer);
      body["n"] = n;
      body["q"] = q;
      body["word_count"] = dist.word_count.str();
      Json rows = Json::array();
      for (const auto& [r, p] : dist.probability) {
        Json row = detail::rational_json(p);
        row["R"] = r;
        rows.push_back(std::move(row));
      }
      body["distribution"] = std::move(rows);
      body["atom"] = detail::rational_json(dist.atom());
      body["mean_r"] = detail::rational_json(dist.mean_normalized());
      emit_json(body);
      return 0;
    }

    if (cmd_limit->parsed() || cmd_dn->parsed()) {
      const bool dn_view = cmd_dn->parsed();
      const char* name = dn_view ? "dn-check" : "limit-check";
      if (samples >= 10000)
        err << "# " << name << ": n=" << n << " samples=" << samples << " running...\n";
      std::vector<SampleRow> rows;
      const EmpiricalReport report = montecarlo_r(n, q, samples, seed, epsilon, workers,
                                                  want_csv ? &rows : nullptr);
      const Json meta = detail::metadata(
          name,
          {{"n", n}, {"q", q}, {"samples", samples}, {"epsilon", epsilon}}, timer, seed,
          workers);
      if (want_csv) {
        detail::emit_meta_comment(out, meta);
        detail::emit_rows_csv(out, n, rows);
        return 0;
      }
      Json result = detail::report_json(report);
      if (dn_view) {
        Json focused;
        focused["n"] = report.n;
        focused["q"] = report.q;
        focused["samples"] = report.sample_count;
        focused["good_fraction"] = report.good_fraction;
        focused["good_count"] = report.good_count;
        focused["dn_count"] = report.dn_count;
        focused["dn_ks"] = report.dn_ks ? Json(*report.dn_ks) : Json(nullptr);
        focused["dn_mismatches"] = report.dn_mismatches;
        result = std::move(focused);
      }
      if (format == "text") {
        detail::emit_meta_comment(out, meta);
        detail::emit_text_report(out, result);
      } else {
        Json body;
        body["meta"] = meta;
        body["report"] = std::move(result);
        emit_json(body);
      }
      return 0;
    }

    if (cmd_tails->parsed()) {
      if (samples >= 10000)
        err << "# tails: n=" << n << " samples=" << samples << " running...\n";
      const TailReport report = tail_check_runs(n, q, samples, seed, epsilon);
      Json result;
      result["n"] = report.n;
      result["q"] = report.q;
      result["samples"] = report.samples;
      result["freq_max_a_run_below"] = report.freq_max_a_run_below;
      result["freq_max_a_run_above"] = report.freq_max_a_run_above;
      result["freq_run_count_deviation"] = report.freq_run_count_deviation;
      result["mean_run_density"] = report.mean_run_density;
      const Json meta = detail::metadata(
          "tails", {{"n", n}, {"q", q}, {"samples", samples}, {"epsilon", epsilon}},
          timer, seed);
      if (format == "text") {
        detail::emit_meta_comment(out, meta);
        detail::emit_text_report(out, result);
      } else {
        Json body;
        body["meta"] = meta;
        body["report"] = std::move(result);
        emit_json(body);
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace lyndon::cli
