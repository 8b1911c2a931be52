#include "sqf/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>

#include "sqf/errors.hpp"

namespace sqf {

std::set<Word> brute_lambda(int p, int alphabet_size) {
  check_alphabet(alphabet_size);
  if (p < 1 || p > 6) throw ResourceError("brute_lambda guard: need 1 <= p <= 6");
  if (std::pow(static_cast<double>(alphabet_size), 2.0 * p) > 2.5e8) {
    throw ResourceError("brute_lambda guard: alphabet^(2p) too large");
  }
  std::set<Word> result{Word{}};
  for (int half = 1; half <= p; ++half) {
    const auto len = static_cast<std::size_t>(2 * half);
    Word w(len, 0);
    while (true) {
      if (is_minimal_square(w)) {
        const Word norm = normalize(w, alphabet_size);
        for (std::size_t k = 1; k < len; ++k) result.emplace(norm.begin(), norm.begin() + static_cast<std::ptrdiff_t>(k));
      }
      // Odometer over all words of this length.
      std::size_t i = len;
      while (i > 0 && w[i - 1] == alphabet_size - 1) w[--i] = 0;
      if (i == 0) break;
      ++w[i - 1];
    }
  }
  return result;
}

namespace {

void count_from(Word& w, std::size_t n, int alphabet_size, std::uint64_t& total) {
  if (w.size() == n) {
    ++total;
    return;
  }
  for (int a = 0; a < alphabet_size; ++a) {
    w.push_back(static_cast<Letter>(a));
    if (!square_suffix_period(w, w.size() / 2)) count_from(w, n, alphabet_size, total);
    w.pop_back();
  }
}

}  // namespace

std::uint64_t count_squarefree(int n, int alphabet_size) {
  check_alphabet(alphabet_size);
  if (n < 0) throw InputError("length must be non-negative");
  // Ternary allows n <= 25; larger alphabets scale down with (a-1)^(n-1).
  const double projected = alphabet_size * std::pow(alphabet_size - 1.0, std::max(0, n - 1));
  if (projected > 3.0 * std::pow(2.0, 24) + 0.5) {
    throw ResourceError("count_squarefree guard: n=" + std::to_string(n) + " too large for alphabet " +
                        std::to_string(alphabet_size));
  }
  std::uint64_t total = 0;
  Word w;
  w.reserve(static_cast<std::size_t>(n));
  count_from(w, static_cast<std::size_t>(n), alphabet_size, total);
  return total;
}

ListAssignment::ListAssignment(int alphabet_size, int list_size, std::vector<Mask> lists)
    : alphabet_(alphabet_size), list_size_(list_size), lists_(std::move(lists)) {
  check_alphabet(alphabet_size);
  if (list_size < 1 || list_size > alphabet_size) throw InputError("list size outside [1, alphabet]");
  const Mask universe = (Mask{1} << alphabet_size) - 1;
  for (Mask m : lists_) {
    if ((m & ~universe) != 0 || std::popcount(m) != list_size) {
      throw InputError("list " + mask_to_string(m) + " is not a " + std::to_string(list_size) +
                       "-subset of the alphabet");
    }
  }
}

ListAssignment ListAssignment::constant(int alphabet_size, Mask list, std::size_t length) {
  return ListAssignment(alphabet_size, std::popcount(list), std::vector<Mask>(length, list));
}

ListAssignment ListAssignment::random(int alphabet_size, int list_size, std::size_t length,
                                      std::mt19937_64& rng) {
  const auto choices = all_lists(alphabet_size, list_size);
  std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
  std::vector<Mask> lists(length);
  for (auto& m : lists) m = choices[pick(rng)];
  return ListAssignment(alphabet_size, list_size, std::move(lists));
}

std::vector<ListAssignment::Mask> all_lists(int alphabet_size, int list_size) {
  check_alphabet(alphabet_size);
  if (list_size < 1 || list_size > alphabet_size) throw InputError("list size outside [1, alphabet]");
  std::vector<ListAssignment::Mask> out;
  std::vector<int> pick(static_cast<std::size_t>(list_size));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    ListAssignment::Mask m = 0;
    for (int a : pick) m |= ListAssignment::Mask{1} << a;
    out.push_back(m);
    int i = list_size - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == alphabet_size - list_size + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < list_size; ++j) {
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

std::string mask_to_string(ListAssignment::Mask mask) {
  std::string s;
  for (int a = 0; a < kMaxAlphabet; ++a) {
    if ((mask >> a) & 1U) s.push_back(letter_to_char(static_cast<Letter>(a)));
  }
  return s;
}

namespace {

using Mask = ListAssignment::Mask;

// Lexicographically least list attaining the minimum: drop the largest
// contributions, and among equal ones drop the highest letters.
Mask choose_list(std::span<const mpz_class* const> values, int list_size) {
  const int letters = static_cast<int>(values.size());
  std::array<int, kMaxAlphabet> order{};
  std::iota(order.begin(), order.begin() + letters, 0);
  static const mpz_class kZero = 0;
  auto value = [&](int a) -> const mpz_class& {
    return values[static_cast<std::size_t>(a)] ? *values[static_cast<std::size_t>(a)] : kZero;
  };
  std::sort(order.begin(), order.begin() + letters, [&](int x, int y) {
    const int c = cmp(value(x), value(y));
    return c != 0 ? c > 0 : x > y;
  });
  Mask mask = (Mask{1} << letters) - 1;
  for (int i = 0; i < letters - list_size; ++i) mask &= ~(Mask{1} << order[static_cast<std::size_t>(i)]);
  return mask;
}

// Maps a list over normalized letters of context x back to actual letters:
// letters seen in x keep their first-occurrence image, fresh normalized
// letters take unused actual letters in increasing order.
Mask denormalize_mask(Mask normalized, std::span<const Letter> context, int alphabet_size) {
  std::array<int, kMaxAlphabet> actual{};
  actual.fill(-1);
  std::array<bool, kMaxAlphabet> used{};
  int distinct = 0;
  for (Letter a : context) {
    if (!used[a]) {
      used[a] = true;
      actual[static_cast<std::size_t>(distinct++)] = a;
    }
  }
  int fresh = 0;
  for (int b = distinct; b < alphabet_size; ++b) {
    while (used[static_cast<std::size_t>(fresh)]) ++fresh;
    actual[static_cast<std::size_t>(b)] = fresh++;
  }
  Mask out = 0;
  for (int b = 0; b < alphabet_size; ++b) {
    if ((normalized >> b) & 1U) out |= Mask{1} << actual[static_cast<std::size_t>(b)];
  }
  return out;
}

int distinct_count(std::span<const Letter> w) {
  int top = -1;
  for (Letter a : w) top = std::max<int>(top, a);
  return top + 1;
}

struct GameSetup {
  int n;
  int alphabet;
  int list_size;
  const GameOptions& options;

  mpz_class leaf_weight(LambdaSet::Id state) const {
    return options.certificate ? options.certificate->weights[state] : mpz_class(1);
  }
};

// Exact game: nodes are normalized square-free words.
class ExactGame {
 public:
  explicit ExactGame(const GameSetup& setup) : s_(setup), memo_(static_cast<std::size_t>(setup.n) + 1) {}

  const mpz_class& value(const Word& w, int remaining) {
    auto& table = memo_[static_cast<std::size_t>(remaining)];
    if (auto it = table.find(w); it != table.end()) return it->second;
    mpz_class result;
    if (remaining == 0) {
      result = s_.options.certificate ? s_.leaf_weight(classify(w, *s_.options.lambda, false).id)
                                      : mpz_class(1);
    } else {
      std::array<const mpz_class*, kMaxAlphabet> slots{};
      for_children(w, [&](int a, const Word* child) {
        slots[static_cast<std::size_t>(a)] = child ? &value(*child, remaining - 1) : nullptr;
      });
      result = min_over_lists(std::span(slots.data(), static_cast<std::size_t>(s_.alphabet)), s_.list_size);
    }
    return table.emplace(w, std::move(result)).first->second;
  }

  // fn(letter, child-or-nullptr) for every letter in normalized coordinates.
  template <typename Fn>
  void for_children(const Word& w, Fn&& fn) {
    const int distinct = distinct_count(w);
    Word child = w;
    child.push_back(0);
    for (int a = 0; a < s_.alphabet; ++a) {
      child.back() = static_cast<Letter>(std::min(a, distinct));
      const bool legal = !square_suffix_period(child, child.size() / 2);
      fn(a, legal ? &child : nullptr);
    }
  }

  Mask adversary_list(const Word& w, int remaining) {
    std::array<const mpz_class*, kMaxAlphabet> slots{};
    for_children(w, [&](int a, const Word* child) {
      slots[static_cast<std::size_t>(a)] = child ? &value(*child, remaining - 1) : nullptr;
    });
    return choose_list(std::span(slots.data(), static_cast<std::size_t>(s_.alphabet)), s_.list_size);
  }

 private:
  const GameSetup& s_;
  std::vector<std::map<Word, mpz_class>> memo_;
};

// Short-square game: nodes are Λ classes.
class ShortGame {
 public:
  explicit ShortGame(const GameSetup& setup) : s_(setup), lambda_(*setup.options.lambda) {
    const std::size_t states = lambda_.size();
    const auto a = static_cast<std::size_t>(s_.alphabet);
    next_.assign(states * a, TransitionGraph::kBlocked);
    for (std::size_t v = 0; v < states; ++v) {
      for (std::size_t c = 0; c < a; ++c) {
        if (auto t = step(LambdaState{static_cast<LambdaSet::Id>(v)}, static_cast<Letter>(c), lambda_)) {
          next_[v * a + c] = t->id;
        }
      }
    }
    values_.resize(static_cast<std::size_t>(s_.n) + 1);
    values_[0].resize(states);
    for (std::size_t v = 0; v < states; ++v) values_[0][v] = s_.leaf_weight(static_cast<LambdaSet::Id>(v));
    for (int r = 1; r <= s_.n; ++r) {
      auto& row = values_[static_cast<std::size_t>(r)];
      row.resize(states);
      for (std::size_t v = 0; v < states; ++v) {
        auto slots = child_values(static_cast<LambdaSet::Id>(v), r);
        row[v] = min_over_lists(std::span(slots.data(), a), s_.list_size);
      }
    }
  }

  const mpz_class& value(LambdaSet::Id v, int remaining) const {
    return values_[static_cast<std::size_t>(remaining)][v];
  }
  LambdaSet::Id target(LambdaSet::Id v, int a) const {
    return next_[static_cast<std::size_t>(v) * static_cast<std::size_t>(s_.alphabet) + static_cast<std::size_t>(a)];
  }
  std::array<const mpz_class*, kMaxAlphabet> child_values(LambdaSet::Id v, int remaining) const {
    std::array<const mpz_class*, kMaxAlphabet> slots{};
    for (int c = 0; c < s_.alphabet; ++c) {
      const auto t = target(v, c);
      slots[static_cast<std::size_t>(c)] = t == TransitionGraph::kBlocked ? nullptr : &value(t, remaining - 1);
    }
    return slots;
  }
  Mask adversary_list(LambdaSet::Id v, int remaining) const {
    auto slots = child_values(v, remaining);
    return choose_list(std::span(slots.data(), static_cast<std::size_t>(s_.alphabet)), s_.list_size);
  }

 private:
  const GameSetup& s_;
  const LambdaSet& lambda_;
  std::vector<LambdaSet::Id> next_;
  std::vector<std::vector<mpz_class>> values_;
};

void check_context(int alphabet_size, const GameOptions& options) {
  if (options.lambda && options.lambda->alphabet_size() != alphabet_size) {
    throw InputError("game alphabet differs from the Λ alphabet");
  }
  if (options.certificate) {
    if (!options.lambda) throw InputError("weighted game needs the certificate's Λ");
    if (options.certificate->lambda_digest != lambda_digest(*options.lambda) ||
        options.certificate->weights.size() != options.lambda->size()) {
      throw VerificationError("certificate does not belong to the supplied Λ");
    }
  }
}

}  // namespace

WeightedCount adversary_min_count(int n, int alphabet_size, int list_size,
                                  const GameOptions& options) {
  check_alphabet(alphabet_size);
  if (n < 0) throw InputError("game length must be non-negative");
  if (list_size < 1 || list_size > alphabet_size) throw InputError("list size outside [1, alphabet]");
  check_context(alphabet_size, options);
  const GameSetup setup{n, alphabet_size, list_size, options};
  WeightedCount out;

  if (options.mode == GameMode::kShortSquare) {
    if (!options.lambda) throw InputError("short-square game needs a Λ set");
    if (static_cast<double>(options.lambda->size()) * (n + 1) > 2e8) {
      throw ResourceError("short-square game guard: |Λ| * n too large");
    }
    const ShortGame game(setup);
    const LambdaSet& lambda = *options.lambda;
    out.total_weight = game.value(lambda.root(), n);

    std::map<LambdaSet::Id, mpz_class> level{{lambda.root(), 1}};
    for (int depth = 0; depth < n; ++depth) {
      std::map<LambdaSet::Id, mpz_class> next;
      for (const auto& [v, count] : level) {
        const Mask list = game.adversary_list(v, n - depth);
        for (int a = 0; a < alphabet_size; ++a) {
          if (!((list >> a) & 1U)) continue;
          const auto t = game.target(v, a);
          if (t != TransitionGraph::kBlocked) next[t] += count;
        }
      }
      level = std::move(next);
    }
    out.by_state = std::move(level);

    if (options.trace) {
      SuffixTracker tracker(lambda);
      for (int depth = 0; depth < n; ++depth) {
        const LambdaSet::Id v = tracker.state().id;
        const int remaining = n - depth;
        const Mask list = game.adversary_list(v, remaining);
        options.trace->push_back(denormalize_mask(list, tracker.suffix(), alphabet_size));
        int best = -1;
        for (int a = 0; a < alphabet_size; ++a) {
          const auto t = game.target(v, a);
          if (!((list >> a) & 1U) || t == TransitionGraph::kBlocked) continue;
          if (best < 0 || game.value(t, remaining - 1) > game.value(game.target(v, best), remaining - 1)) best = a;
        }
        if (best < 0) break;
        const Mask actual = denormalize_mask(Mask{1} << best, tracker.suffix(), alphabet_size);
        tracker.push(static_cast<Letter>(std::countr_zero(actual)));
      }
    }
    return out;
  }

  if (n > 16) throw ResourceError("exact game guard: n must be <= 16");
  ExactGame game(setup);
  out.total_weight = game.value(Word{}, n);

  std::map<Word, mpz_class> level{{Word{}, 1}};
  for (int depth = 0; depth < n; ++depth) {
    std::map<Word, mpz_class> next;
    for (const auto& [w, count] : level) {
      const Mask list = game.adversary_list(w, n - depth);
      game.for_children(w, [&](int a, const Word* child) {
        if (child && ((list >> a) & 1U)) next[*child] += count;
      });
    }
    level = std::move(next);
  }
  if (options.lambda) {
    for (const auto& [w, count] : level) out.by_state[classify(w, *options.lambda, false).id] += count;
  } else if (!level.empty()) {
    mpz_class words = 0;
    for (const auto& [w, count] : level) words += count;
    out.by_state[0] = words;
  }

  if (options.trace) {
    Word played;
    Word normal;
    for (int depth = 0; depth < n; ++depth) {
      const int remaining = n - depth;
      const Mask list = game.adversary_list(normal, remaining);
      options.trace->push_back(denormalize_mask(list, played, alphabet_size));
      int best = -1;
      Word best_child;
      game.for_children(normal, [&](int a, const Word* child) {
        if (!child || !((list >> a) & 1U)) return;
        if (best < 0 || game.value(*child, remaining - 1) > game.value(best_child, remaining - 1)) {
          best = a;
          best_child = *child;
        }
      });
      if (best < 0) break;
      const Mask actual = denormalize_mask(Mask{1} << best, played, alphabet_size);
      played.push_back(static_cast<Letter>(std::countr_zero(actual)));
      normal = std::move(best_child);
    }
  }
  return out;
}

namespace {

struct Entry {
  Word word;
  LambdaSet::Id state;
};

struct StepTotals {
  mpz_class short_free;
  mpz_class next_total;
};

// One step of the fixed-assignment enumeration: extends every word of level
// with the letters of list, keeping the square-free ones.
StepTotals extend(const LambdaSet& lambda, const WeightVector& weights, const std::vector<Entry>& level,
                  Mask list, int alphabet_size, std::vector<Entry>& next) {
  const auto p = static_cast<std::size_t>(lambda.period().value());
  const std::size_t window = lambda.period().max_prefix_length();
  StepTotals totals;
  next.clear();
  Word w;
  for (const Entry& e : level) {
    for (int a = 0; a < alphabet_size; ++a) {
      if (!((list >> a) & 1U)) continue;
      w = e.word;
      w.push_back(static_cast<Letter>(a));
      if (square_suffix_period(w, p)) continue;
      const std::span<const Letter> tail = std::span<const Letter>(w).last(std::min(window, w.size()));
      const LambdaSet::Id state = classify(tail, lambda, false).id;
      totals.short_free += weights[state];
      if (square_suffix_period(w, w.size() / 2)) continue;
      totals.next_total += weights[state];
      next.push_back(Entry{w, state});
    }
  }
  return totals;
}

void check_pair(const LambdaSet& lambda, const Certificate& cert) {
  if (cert.p != lambda.period().value() || cert.alphabet_size != lambda.alphabet_size() ||
      cert.weights.size() != lambda.size() || cert.lambda_digest != lambda_digest(lambda)) {
    throw VerificationError("certificate does not belong to the supplied Λ");
  }
}

// Empty string when both inequalities hold at this step.
std::string compare_step(const Certificate& cert, const std::optional<Rational>& beta,
                         const mpz_class& current, const StepTotals& totals) {
  if (totals.short_free * cert.alpha.get_den() < current * cert.alpha.get_num()) {
    return "short-square-free extensions weigh less than alpha times the current total";
  }
  if (beta && totals.next_total * beta->get_den() < current * beta->get_num()) {
    return "square-free total grew by less than beta";
  }
  return {};
}

}  // namespace

GrowthCheck check_weighted_growth(const LambdaSet& lambda, const Certificate& cert,
                                  const ListAssignment& assignment, int n_max,
                                  const std::optional<Rational>& beta) {
  check_pair(lambda, cert);
  if (n_max < 0 || assignment.length() < static_cast<std::size_t>(n_max)) {
    throw InputError("assignment shorter than n_max");
  }
  if (assignment.alphabet_size() != lambda.alphabet_size()) {
    throw InputError("assignment alphabet differs from the Λ alphabet");
  }
  GrowthCheck out;
  out.beta = beta;
  std::vector<Entry> level{Entry{Word{}, lambda.root()}};
  std::vector<Entry> next;
  out.counts.push_back(1);
  out.weighted.push_back(cert.weights[lambda.root()]);
  for (int n = 0; n < n_max; ++n) {
    const StepTotals totals = extend(lambda, cert.weights, level, assignment.list(static_cast<std::size_t>(n)),
                                     lambda.alphabet_size(), next);
    out.short_free_weighted.push_back(totals.short_free);
    if (std::string why = compare_step(cert, beta, out.weighted.back(), totals); !why.empty() && out.holds) {
      out.holds = false;
      out.failed_at = n;
      out.failure = std::move(why);
    }
    level.swap(next);
    out.counts.push_back(level.size());
    out.weighted.push_back(totals.next_total);
  }
  return out;
}

GrowthCheck check_weighted_growth(const LambdaSet& lambda, const Certificate& cert,
                                  const ListAssignment& assignment, int n_max) {
  return check_weighted_growth(lambda, cert, assignment, n_max,
                               search_beta(cert.alpha, cert.p, Rational(1, 1000)));
}

namespace {

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const LambdaSet& lambda, const Certificate& cert, int list_size, int n_max,
                   ExhaustiveGrowth& out)
      : lambda_(lambda), cert_(cert), lists_(all_lists(lambda.alphabet_size(), list_size)),
        n_max_(n_max), out_(out) {
    out_.min_counts.assign(static_cast<std::size_t>(n_max) + 1, UINT64_MAX);
  }

  void run(const std::vector<Entry>& level, const mpz_class& total, int depth) {
    auto& best = out_.min_counts[static_cast<std::size_t>(depth)];
    if (level.size() < best) {
      best = level.size();
      if (depth == n_max_) out_.worst = prefix_;
    }
    if (depth == n_max_) {
      ++out_.assignments;
      return;
    }
    std::vector<Entry> next;
    for (Mask list : lists_) {
      if (!out_.holds) return;
      const StepTotals totals = extend(lambda_, cert_.weights, level, list, lambda_.alphabet_size(), next);
      prefix_.push_back(list);
      if (std::string why = compare_step(cert_, out_.beta, total, totals); !why.empty()) {
        out_.holds = false;
        out_.counterexample = prefix_;
        out_.failure = std::move(why);
        return;
      }
      run(next, totals.next_total, depth + 1);
      prefix_.pop_back();
    }
  }

 private:
  const LambdaSet& lambda_;
  const Certificate& cert_;
  std::vector<Mask> lists_;
  int n_max_;
  ExhaustiveGrowth& out_;
  std::vector<Mask> prefix_;
};

}  // namespace

ExhaustiveGrowth check_weighted_growth_exhaustive(const LambdaSet& lambda, const Certificate& cert,
                                                  int list_size, int n_max,
                                                  const std::optional<Rational>& beta) {
  check_pair(lambda, cert);
  if (n_max < 0) throw InputError("n_max must be non-negative");
  ExhaustiveGrowth out;
  out.beta = beta;
  ExhaustiveSearch search(lambda, cert, list_size, n_max, out);
  search.run({Entry{Word{}, lambda.root()}}, cert.weights[lambda.root()], 0);
  return out;
}

}  // namespace sqf
