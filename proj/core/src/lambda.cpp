#include "sqf/lambda.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <deque>
#include <new>
#include <thread>

#include "sqf/errors.hpp"
#include "sqf/text_io.hpp"

namespace sqf {

// Growable trie used during construction; finish() renumbers it canonically.
class LambdaBuilder {
 public:
  using Id = LambdaSet::Id;

  LambdaBuilder(PeriodBound p, int alphabet_size) : p_(p), alphabet_(alphabet_size) {
    add_node(LambdaSet::kNoChild, 0, 0);
  }

  void insert(std::span<const Letter> w) {
    Id node = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t slot = static_cast<std::size_t>(node) * alphabet_ + w[i];
      Id next = children_[slot];
      if (next == LambdaSet::kNoChild) {
        next = add_node(node, w[i], static_cast<std::uint8_t>(i + 1));
        children_[slot] = next;
      }
      node = next;
    }
  }

  LambdaSet finish() && {
    const std::size_t n = parent_.size();
    const std::size_t a = static_cast<std::size_t>(alphabet_);
    std::vector<Id> order;
    order.reserve(n);
    order.push_back(0);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const Id node = order[head];
      for (std::size_t c = 0; c < a; ++c) {
        const Id next = children_[node * a + c];
        if (next != LambdaSet::kNoChild) order.push_back(next);
      }
    }
    std::vector<Id> new_id(n);
    for (std::size_t i = 0; i < n; ++i) new_id[order[i]] = static_cast<Id>(i);

    LambdaSet out(p_, alphabet_);
    out.children_.assign(n * a, LambdaSet::kNoChild);
    out.parent_.resize(n);
    out.letter_.resize(n);
    out.depth_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Id old = order[i];
      out.parent_[i] = parent_[old] == LambdaSet::kNoChild ? LambdaSet::kNoChild
                                                           : new_id[parent_[old]];
      out.letter_[i] = letter_[old];
      out.depth_[i] = depth_[old];
      for (std::size_t c = 0; c < a; ++c) {
        const Id next = children_[old * a + c];
        if (next != LambdaSet::kNoChild) out.children_[i * a + c] = new_id[next];
      }
    }
    return out;
  }

 private:
  Id add_node(Id parent, Letter letter, std::uint8_t depth) {
    if (parent_.size() >= LambdaSet::kNoChild) throw ResourceError("Λ exceeds 2^32-1 nodes");
    parent_.push_back(parent);
    letter_.push_back(letter);
    depth_.push_back(depth);
    children_.resize(children_.size() + static_cast<std::size_t>(alphabet_), LambdaSet::kNoChild);
    return static_cast<Id>(parent_.size() - 1);
  }

  PeriodBound p_;
  int alphabet_;
  std::vector<Id> children_;
  std::vector<Id> parent_;
  std::vector<Letter> letter_;
  std::vector<std::uint8_t> depth_;
};

Word LambdaSet::word(Id node) const {
  Word w(depth_[node]);
  for (std::size_t i = w.size(); i > 0; --i) {
    w[i - 1] = letter_[node];
    node = parent_[node];
  }
  return w;
}

std::optional<LambdaSet::Id> LambdaSet::find(std::span<const Letter> w) const {
  Id node = root();
  for (Letter a : w) {
    if (a >= alphabet_) return std::nullopt;
    node = child(node, a);
    if (node == kNoChild) return std::nullopt;
  }
  return node;
}

std::size_t lambda_bytes_per_node(int alphabet_size) noexcept {
  return static_cast<std::size_t>(alphabet_size) * sizeof(LambdaSet::Id) + sizeof(LambdaSet::Id) +
         sizeof(Letter) + sizeof(std::uint8_t);
}

std::size_t LambdaSet::memory_bytes() const noexcept {
  return children_.capacity() * sizeof(Id) + parent_.capacity() * sizeof(Id) +
         letter_.capacity() + depth_.capacity();
}

LambdaSet LambdaSet::from_words(PeriodBound p, int alphabet_size, std::span<const Word> words) {
  check_alphabet(alphabet_size);
  LambdaBuilder builder(p, alphabet_size);
  for (const Word& w : words) {
    if (w.size() > p.max_prefix_length()) {
      throw InputError("word '" + to_string(w) + "' longer than 2p-1");
    }
    for (Letter a : w) {
      if (a >= alphabet_size) throw InputError("word '" + to_string(w) + "' leaves the alphabet");
    }
    builder.insert(w);
  }
  return std::move(builder).finish();
}

namespace {

// True when uu is a minimal square, given that u is square-free.
bool doubles_to_minimal_square(std::span<const Letter> u, Word& scratch) {
  const std::size_t n = u.size();
  scratch.assign(u.begin(), u.end());
  scratch.insert(scratch.end(), u.begin(), u.end());
  const std::span<const Letter> uu(scratch);
  for (std::size_t len = n + 1; len <= 2 * n; ++len) {
    const std::size_t max_period = len == 2 * n ? n - 1 : len / 2;
    if (square_suffix_period(uu.first(len), max_period)) return false;
  }
  return true;
}

// Depth-first enumeration of normalized square-free periods u.
class PeriodSearch {
 public:
  PeriodSearch(std::size_t max_length, int alphabet_size)
      : max_length_(max_length), alphabet_(alphabet_size) {}

  // Records every u (including the start) whose square is minimal; stops
  // descending at frontier_length and hands those words to the frontier.
  void run(Word& u, int distinct, std::size_t frontier_length, std::vector<Word>& periods,
           std::vector<Word>* frontier) {
    if (frontier != nullptr && u.size() == frontier_length) {
      frontier->push_back(u);
      return;
    }
    if (!u.empty() && doubles_to_minimal_square(u, scratch_)) periods.push_back(u);
    if (u.size() == max_length_) return;
    const int top = std::min(distinct, alphabet_ - 1);
    for (int a = 0; a <= top; ++a) {
      const auto letter = static_cast<Letter>(a);
      if (!u.empty() && u.back() == letter) continue;
      u.push_back(letter);
      if (!square_suffix_period(u, u.size() / 2)) {
        run(u, distinct + (a == distinct ? 1 : 0), frontier_length, periods, frontier);
      }
      u.pop_back();
    }
  }

 private:
  std::size_t max_length_;
  int alphabet_;
  Word scratch_;
};

int distinct_letters(std::span<const Letter> w) {
  int top = -1;
  for (Letter a : w) top = std::max<int>(top, a);
  return top + 1;
}

}  // namespace

LambdaSet build_lambda(PeriodBound p, int alphabet_size, unsigned threads) {
  check_alphabet(alphabet_size);
  threads = std::max(1U, threads);
  const auto max_period = static_cast<std::size_t>(p.value());
  try {
    // Split the search below a short common prefix; each frontier word owns
    // one output slot so the merge order never depends on scheduling.
    const std::size_t split_length = std::min<std::size_t>(max_period, 6);
    std::vector<Word> periods;
    std::vector<Word> frontier;
    {
      PeriodSearch search(max_period, alphabet_size);
      Word u;
      search.run(u, 0, split_length, periods, &frontier);
    }

    std::vector<std::vector<Word>> found(frontier.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      PeriodSearch search(max_period, alphabet_size);
      for (std::size_t i = next.fetch_add(1); i < frontier.size(); i = next.fetch_add(1)) {
        Word u = frontier[i];
        search.run(u, distinct_letters(u), 0, found[i], nullptr);
      }
    };
    if (threads == 1 || frontier.size() < 2) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    LambdaBuilder builder(p, alphabet_size);
    Word square;
    auto insert_prefixes = [&](const Word& u) {
      square.assign(u.begin(), u.end());
      square.insert(square.end(), u.begin(), u.end() - 1);
      builder.insert(square);
    };
    for (const Word& u : periods) insert_prefixes(u);
    for (const auto& group : found) {
      for (const Word& u : group) insert_prefixes(u);
    }
    return std::move(builder).finish();
  } catch (const std::bad_alloc&) {
    throw ResourceError("out of memory while building Λ for p=" + std::to_string(p.value()) +
                        " alphabet=" + std::to_string(alphabet_size));
  }
}

void validate_lambda(const LambdaSet& lambda) {
  const auto max_len = lambda.period().max_prefix_length();
  if (lambda.size() == 0 || lambda.length(lambda.root()) != 0) {
    throw VerificationError("Λ root is not the empty word");
  }
  Word previous;
  for (LambdaSet::Id id = 0; id < lambda.size(); ++id) {
    Word w = lambda.word(id);
    if (w.size() > max_len) throw VerificationError("Λ word longer than 2p-1: " + to_string(w));
    if (normalize(w, lambda.alphabet_size()) != w) {
      throw VerificationError("Λ word not normalized: " + to_string(w));
    }
    if (!is_square_free(w)) throw VerificationError("Λ word contains a square: " + to_string(w));
    if (id > 0 && (w.size() < previous.size() || (w.size() == previous.size() && w <= previous))) {
      throw VerificationError("Λ ids not in (length, lexicographic) order at id " +
                              std::to_string(id));
    }
    if (id > 0 && lambda.find(w) != id) {
      throw VerificationError("Λ trie lookup disagrees with id " + std::to_string(id));
    }
    previous = std::move(w);
  }
}

namespace {

// Walks the trie along the normalization of s.
std::optional<LambdaSet::Id> match_normalized(std::span<const Letter> s, const LambdaSet& lambda) {
  std::array<int, kMaxAlphabet> rename;
  rename.fill(-1);
  int next = 0;
  LambdaSet::Id node = lambda.root();
  for (Letter a : s) {
    if (rename[a] < 0) rename[a] = next++;
    node = lambda.child(node, static_cast<Letter>(rename[a]));
    if (node == LambdaSet::kNoChild) return std::nullopt;
  }
  return node;
}

}  // namespace

LambdaState classify(std::span<const Letter> w, const LambdaSet& lambda, bool validate) {
  for (Letter a : w) {
    if (a >= lambda.alphabet_size()) {
      throw InputError("letter " + std::to_string(a) + " outside alphabet of size " +
                       std::to_string(lambda.alphabet_size()));
    }
  }
  const auto p = static_cast<std::size_t>(lambda.period().value());
  if (validate) {
    if (auto sq = find_square(w, p)) {
      throw InputError("word " + to_string(w) + " has a square of period " +
                       std::to_string(sq->period) + " at position " + std::to_string(sq->start));
    }
  }
  const std::size_t longest = std::min(w.size(), lambda.period().max_prefix_length());
  for (std::size_t len = longest; len > 0; --len) {
    if (auto id = match_normalized(w.last(len), lambda)) return LambdaState{*id};
  }
  return LambdaState{lambda.root()};
}

std::optional<LambdaState> step(LambdaState s, Letter a, const LambdaSet& lambda) {
  if (a >= lambda.alphabet_size()) {
    throw InputError("letter " + std::to_string(a) + " outside alphabet");
  }
  Word w = lambda.word(s.id);
  w.push_back(a);
  if (square_suffix_period(w, static_cast<std::size_t>(lambda.period().value()))) {
    return std::nullopt;
  }
  return classify(w, lambda, false);
}

bool SuffixTracker::push(Letter a) {
  if (a >= lambda_->alphabet_size()) throw InputError("letter outside alphabet");
  Word extended = suffix_;
  extended.push_back(a);
  if (square_suffix_period(extended, static_cast<std::size_t>(lambda_->period().value()))) {
    return false;
  }
  state_ = classify(extended, *lambda_, false);
  const std::size_t keep = lambda_->length(state_.id);
  suffix_.assign(extended.end() - static_cast<std::ptrdiff_t>(keep), extended.end());
  return true;
}

std::string write_lambda(const LambdaSet& lambda) {
  std::string out = "lambda v1\np=" + std::to_string(lambda.period().value()) +
                    " alphabet=" + std::to_string(lambda.alphabet_size()) +
                    " count=" + std::to_string(lambda.size()) + "\n";
  out.reserve(out.size() + lambda.size() * 8);
  for (LambdaSet::Id id = 0; id < lambda.size(); ++id) {
    out += id == lambda.root() ? std::string("-") : to_string(lambda.word(id));
    out += '\n';
  }
  return out;
}

LambdaSet read_lambda(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.size() < 2 || lines[0] != "lambda v1") throw InputError("not a 'lambda v1' file");
  const PeriodBound p(static_cast<int>(header_int(lines[1], "p")));
  const int alphabet = static_cast<int>(header_int(lines[1], "alphabet"));
  const long long count = header_int(lines[1], "count");
  if (count < 1 || static_cast<std::size_t>(count) != lines.size() - 2) {
    throw InputError("Λ file count does not match its word lines");
  }
  std::vector<Word> words;
  words.reserve(static_cast<std::size_t>(count));
  for (std::size_t i = 2; i < lines.size(); ++i) {
    words.push_back(lines[i] == "-" ? Word{} : parse_word(lines[i]));
  }
  if (!words.front().empty()) throw InputError("Λ file must start with the empty word");
  LambdaSet lambda = LambdaSet::from_words(p, alphabet, words);
  if (lambda.size() != words.size()) {
    throw InputError("Λ file is not prefix-closed or has duplicates");
  }
  for (LambdaSet::Id id = 0; id < lambda.size(); ++id) {
    if (lambda.word(id) != words[id]) {
      throw InputError("Λ file is not in canonical order at line " + std::to_string(id + 3));
    }
  }
  return lambda;
}

std::uint64_t lambda_digest(const LambdaSet& lambda) { return fnv1a64(write_lambda(lambda)); }

}  // namespace sqf
