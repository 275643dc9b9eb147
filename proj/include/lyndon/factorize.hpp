#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lyndon/word.hpp"

namespace lyndon {

namespace detail {

// Duval's algorithm. Emits the factor ranges of the unique factorization of
// s into a lexicographically non-increasing product of Lyndon words.
inline std::vector<std::pair<std::size_t, std::size_t>> cfl_ranges(
    std::span<const Letter> s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = s.size();
  std::size_t k = 0;
  while (k < n) {
    std::size_t i = k, j = k + 1;
    while (j < n && s[i] <= s[j]) {
      i = (s[i] < s[j]) ? k : i + 1;
      ++j;
    }
    const std::size_t len = j - i;
    while (k <= i) {
      out.emplace_back(k, len);
      k += len;
    }
  }
  return out;
}

// Start of the last factor only; same scan as above without materializing.
inline std::size_t last_cfl_factor_start(std::span<const Letter> s) {
  const std::size_t n = s.size();
  std::size_t k = 0, last = 0;
  while (k < n) {
    std::size_t i = k, j = k + 1;
    while (j < n && s[i] <= s[j]) {
      i = (s[i] < s[j]) ? k : i + 1;
      ++j;
    }
    const std::size_t len = j - i;
    while (k <= i) {
      last = k;
      k += len;
    }
  }
  return last;
}

// Length of the standard right factor of a Lyndon word (precondition not
// re-checked here). The smallest proper suffix of w is the last factor of
// the Lyndon factorization of w without its first letter.
inline std::size_t right_factor_length(std::span<const Letter> s) {
  assert(s.size() >= 2);
  const std::size_t split = 1 + last_cfl_factor_start(s.subspan(1));
  return s.size() - split;
}

}  // namespace detail

/// w = left . right with both factors Lyndon and right the lexicographically
/// smallest proper suffix of w.
struct StandardFactorization {
  Word left;
  Word right;
  std::size_t right_length() const { return right.size(); }
};

namespace detail {

inline StandardFactorization make_factorization(const Word& w,
                                                std::size_t split) {
  const auto& s = w.letters();
  std::vector<Letter> u(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(split));
  std::vector<Letter> v(s.begin() + static_cast<std::ptrdiff_t>(split), s.end());
  return StandardFactorization{Word(std::move(u), w.alphabet()),
                               Word(std::move(v), w.alphabet())};
}

inline void require_factorizable(const Word& w) {
  if (w.size() < 2)
    throw std::invalid_argument("standard factorization needs length >= 2");
  if (!is_lyndon(w))
    throw std::invalid_argument("standard factorization: word is not Lyndon");
}

}  // namespace detail

/// Linear-time standard factorization.
inline StandardFactorization standard_right_factor(const Word& w) {
  detail::require_factorizable(w);
  const std::size_t r = detail::right_factor_length(w.view());
  auto f = detail::make_factorization(w, w.size() - r);
  assert(is_lyndon(f.left) && is_lyndon(f.right));
  return f;
}

/// Split length only; used by the Monte Carlo harness where the factor
/// contents are not needed. Precondition (Lyndon, n >= 2) is asserted.
inline std::size_t standard_right_factor_length(const Word& w) {
  assert(is_lyndon(w));
  return detail::right_factor_length(w.view());
}

/// Quadratic oracle: direct minimum over all n-1 proper suffixes.
inline StandardFactorization standard_right_factor_naive(const Word& w) {
  detail::require_factorizable(w);
  const auto s = w.view();
  std::size_t best = 1;
  for (std::size_t i = 2; i < s.size(); ++i) {
    if (detail::lex_compare(s.subspan(i), s.subspan(best)) < 0) best = i;
  }
  return detail::make_factorization(w, best);
}

/// Binary tree of recursive standard factorizations. Nodes reference ranges
/// of the root word; leaves are single letters (height 0).
class FactorizationTree {
 public:
  struct Node {
    std::size_t start = 0;
    std::size_t length = 0;
    int left = -1;   // index into nodes(), -1 for leaves
    int right = -1;
    std::size_t height = 0;
  };

  explicit FactorizationTree(Word w) : word_(std::move(w)) {
    if (!is_lyndon(word_))
      throw std::invalid_argument("factorization tree: word is not Lyndon");
    const auto s = word_.view();
    nodes_.push_back(Node{0, s.size()});
    // Explicit worklist; the tree can be a length-n chain.
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const int idx = stack.back();
      stack.pop_back();
      const Node node = nodes_[static_cast<std::size_t>(idx)];
      if (node.length == 1) continue;
      const auto sub = s.subspan(node.start, node.length);
      const std::size_t split = node.length - detail::right_factor_length(sub);
      const int l = static_cast<int>(nodes_.size());
      nodes_.push_back(Node{node.start, split});
      const int r = static_cast<int>(nodes_.size());
      nodes_.push_back(Node{node.start + split, node.length - split});
      nodes_[static_cast<std::size_t>(idx)].left = l;
      nodes_[static_cast<std::size_t>(idx)].right = r;
      stack.push_back(l);
      stack.push_back(r);
    }
    // Children are created after their parent, so one reverse sweep
    // resolves heights.
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      Node& node = nodes_[i];
      if (node.left >= 0)
        node.height = 1 + std::max(nodes_[static_cast<std::size_t>(node.left)].height,
                                   nodes_[static_cast<std::size_t>(node.right)].height);
    }
  }

  const Word& word() const { return word_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return 0; }
  std::size_t height() const { return nodes_[0].height; }
  std::size_t leaf_count() const {
    std::size_t leaves = 0;
    for (const Node& node : nodes_)
      if (node.left < 0) ++leaves;
    return leaves;
  }

  std::string text_at(int index) const {
    const Node& node = nodes_[static_cast<std::size_t>(index)];
    std::string out;
    out.reserve(node.length);
    for (std::size_t i = 0; i < node.length; ++i)
      out.push_back(static_cast<char>('a' + word_.letters()[node.start + i]));
    return out;
  }

  /// In-order leaf concatenation; equals the root word by construction.
  std::string leaves_text() const {
    std::string out;
    append_leaves(0, out);
    return out;
  }

  /// Indented rendering, two spaces per level.
  std::string to_text() const {
    std::string out;
    render(0, 0, out);
    return out;
  }

 private:
  void append_leaves(int index, std::string& out) const {
    const Node& node = nodes_[static_cast<std::size_t>(index)];
    if (node.left < 0) {
      out += text_at(index);
      return;
    }
    append_leaves(node.left, out);
    append_leaves(node.right, out);
  }

  void render(int index, int depth, std::string& out) const {
    const Node& node = nodes_[static_cast<std::size_t>(index)];
    out.append(static_cast<std::size_t>(2 * depth), ' ');
    out += text_at(index);
    out.push_back('\n');
    if (node.left >= 0) {
      render(node.left, depth + 1, out);
      render(node.right, depth + 1, out);
    }
  }

  Word word_;
  std::vector<Node> nodes_;
};

inline FactorizationTree factorization_tree(const Word& w) {
  return FactorizationTree(w);
}

/// Unique factorization of an arbitrary word into a non-increasing product
/// of Lyndon words (Duval, O(n)). A Lyndon word yields itself.
inline std::vector<Word> cfl_factorization(const Word& w) {
  std::vector<Word> out;
  for (const auto& [start, len] : detail::cfl_ranges(w.view())) {
    std::vector<Letter> piece(
        w.letters().begin() + static_cast<std::ptrdiff_t>(start),
        w.letters().begin() + static_cast<std::ptrdiff_t>(start + len));
    out.emplace_back(std::move(piece), w.alphabet());
  }
  return out;
}

/// Streams all Lyndon words of length exactly n over q letters in strictly
/// increasing lexicographic order (successor-based generation; memory-flat).
class LyndonEnumerator {
 public:
  LyndonEnumerator(std::size_t n, unsigned q) : n_(n), q_(q) {
    if (n == 0) throw std::invalid_argument("enumeration needs n >= 1");
    Alphabet check(q);  // validates q
    current_.reserve(n);
    current_.push_back(0);
    pending_first_ = true;
  }

  std::optional<Word> next() {
    for (;;) {
      if (done_) return std::nullopt;
      const bool emit = pending_first_ && current_.size() == n_;
      if (pending_first_) pending_first_ = false;
      if (emit) return Word(current_, Alphabet(q_));
      advance();
      if (done_) return std::nullopt;
      if (current_.size() == n_) return Word(current_, Alphabet(q_));
    }
  }

 private:
  void advance() {
    // Extend periodically to length n, then increment the last letter that
    // is not yet maximal. The result is the next Lyndon word of length <= n.
    std::vector<Letter> t;
    t.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) t.push_back(current_[i % current_.size()]);
    while (!t.empty() && t.back() == static_cast<Letter>(q_ - 1)) t.pop_back();
    if (t.empty()) {
      done_ = true;
      return;
    }
    ++t.back();
    current_ = std::move(t);
  }

  std::vector<Letter> current_;
  std::size_t n_;
  unsigned q_;
  bool done_ = false;
  bool pending_first_ = false;
};

template <typename F>
void for_each_lyndon(std::size_t n, unsigned q, F&& f) {
  LyndonEnumerator gen(n, q);
  while (auto w = gen.next()) f(*w);
}

}  // namespace lyndon
