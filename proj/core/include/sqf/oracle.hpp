#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sqf/bounds.hpp"
#include "sqf/lambda.hpp"
#include "sqf/weights.hpp"

namespace sqf {

/// Λ re-derived with no trie: every word of length <= 2p is tested for being a
/// minimal square of period <= p, then normalized proper prefixes are collected.
std::set<Word> brute_lambda(int p, int alphabet_size);

/// Number of square-free words of length n, by exhaustive depth-first search.
std::uint64_t count_squarefree(int n, int alphabet_size);

/// Letter subsets, one per position, each of exactly list_size letters.
class ListAssignment {
 public:
  using Mask = std::uint32_t;

  ListAssignment(int alphabet_size, int list_size, std::vector<Mask> lists);

  /// Every list identical.
  static ListAssignment constant(int alphabet_size, Mask list, std::size_t length);
  static ListAssignment random(int alphabet_size, int list_size, std::size_t length,
                               std::mt19937_64& rng);

  int alphabet_size() const noexcept { return alphabet_; }
  int list_size() const noexcept { return list_size_; }
  std::size_t length() const noexcept { return lists_.size(); }
  Mask list(std::size_t position) const { return lists_.at(position); }

 private:
  int alphabet_;
  int list_size_;
  std::vector<Mask> lists_;
};

/// All masks with exactly list_size of the first alphabet_size bits set, in
/// lexicographic order of their sorted letter sequences.
std::vector<ListAssignment::Mask> all_lists(int alphabet_size, int list_size);

/// Sorted letters of a mask, e.g. "013".
std::string mask_to_string(ListAssignment::Mask mask);

enum class GameMode {
  kShortSquare,  ///< only squares of period <= p are forbidden; key is the Λ class
  kExact,        ///< all squares forbidden; key is the normalized word (tiny n)
};

struct GameOptions {
  GameMode mode = GameMode::kExact;
  /// Needed for kShortSquare, for weights, and to fill WeightedCount::by_state.
  const LambdaSet* lambda = nullptr;
  /// When set, a word of length n weighs C_{Λ(word)} instead of 1.
  const Certificate* certificate = nullptr;
  /// Receives the adversary's lists along the line where the player always
  /// takes the most valuable letter (smallest letter on ties).
  std::vector<ListAssignment::Mask>* trace = nullptr;
};

struct WeightedCount {
  /// Words of length n reachable under the adversary's strategy, per class.
  std::map<LambdaSet::Id, mpz_class> by_state;
  /// Minimax value: sum of the weights of those words.
  mpz_class total_weight;
};

/// Value of the game where, before each letter, an adversary picks a list of
/// list_size letters minimizing the eventual (weighted) number of valid words
/// of length n. Ties go to the lexicographically least list.
WeightedCount adversary_min_count(int n, int alphabet_size, int list_size,
                                  const GameOptions& options = {});

/// Per-length data gathered while enumerating a fixed list assignment.
struct GrowthCheck {
  bool holds = true;
  /// Beta used for the square-free comparison; nullopt when none exists.
  std::optional<Rational> beta;
  /// |S_n| and its weighted total, n = 0..n_max.
  std::vector<std::uint64_t> counts;
  std::vector<mpz_class> weighted;
  /// Weighted total of one-letter extensions of S_n avoiding squares of
  /// period <= p, n = 0..n_max-1.
  std::vector<mpz_class> short_free_weighted;
  /// First n where an inequality failed, and which one.
  int failed_at = -1;
  std::string failure;
};

/// Enumerates S_1..S_{n_max} for a fixed assignment and checks, for every n,
///   weight of short-square-free extensions of S_n >= alpha * Ŝ_n
/// and, when beta is given, Ŝ_{n+1} >= beta * Ŝ_n. Λ must match the certificate.
GrowthCheck check_weighted_growth(const LambdaSet& lambda, const Certificate& cert,
                                  const ListAssignment& assignment, int n_max,
                                  const std::optional<Rational>& beta);

/// Same, with beta = search_beta(cert.alpha, cert.p, 1/1000).
GrowthCheck check_weighted_growth(const LambdaSet& lambda, const Certificate& cert,
                                  const ListAssignment& assignment, int n_max);

struct ExhaustiveGrowth {
  bool holds = true;
  std::optional<Rational> beta;
  std::uint64_t assignments = 0;
  /// Smallest |S_n| over all assignments, n = 0..n_max.
  std::vector<std::uint64_t> min_counts;
  /// One assignment attaining min_counts[n_max].
  std::vector<ListAssignment::Mask> worst;
  /// Prefix of a failing assignment, empty when everything holds.
  std::vector<ListAssignment::Mask> counterexample;
  std::string failure;
};

/// check_weighted_growth over every assignment of length n_max at once,
/// sharing work between assignments with a common prefix.
ExhaustiveGrowth check_weighted_growth_exhaustive(const LambdaSet& lambda, const Certificate& cert,
                                                  int list_size, int n_max,
                                                  const std::optional<Rational>& beta);

}  // namespace sqf
