#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqf/words.hpp"

namespace sqf {

/// Prefix-closed set of normalized proper prefixes of minimal squares of period
/// at most p, stored as an array trie.
///
/// Node ids are breadth-first by (length, lexicographic order), so the root
/// (the empty word) is id 0 and ids are identical for equal sets. Each node owns
/// a fixed block of alphabet_size child slots.
class LambdaSet {
 public:
  using Id = std::uint32_t;
  static constexpr Id kNoChild = std::numeric_limits<Id>::max();

  /// Builds the canonical trie holding exactly the given words plus their prefixes.
  static LambdaSet from_words(PeriodBound p, int alphabet_size, std::span<const Word> words);

  PeriodBound period() const noexcept { return p_; }
  int alphabet_size() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return parent_.size(); }
  Id root() const noexcept { return 0; }

  Id child(Id node, Letter a) const noexcept {
    return children_[static_cast<std::size_t>(node) * static_cast<std::size_t>(alphabet_) + a];
  }
  Id parent(Id node) const noexcept { return parent_[node]; }
  Letter last_letter(Id node) const noexcept { return letter_[node]; }
  std::size_t length(Id node) const noexcept { return depth_[node]; }

  /// The word spelled from the root to node.
  Word word(Id node) const;
  /// Exact lookup; the argument must already be normalized to match.
  std::optional<Id> find(std::span<const Letter> w) const;

  /// Bytes held by the node arrays.
  std::size_t memory_bytes() const noexcept;

 private:
  LambdaSet(PeriodBound p, int alphabet_size) : p_(p), alphabet_(alphabet_size) {}
  friend class LambdaBuilder;

  PeriodBound p_;
  int alphabet_;
  std::vector<Id> children_;
  std::vector<Id> parent_;
  std::vector<Letter> letter_;
  std::vector<std::uint8_t> depth_;
};

/// Bytes per trie node for a given alphabet, used for memory projections.
std::size_t lambda_bytes_per_node(int alphabet_size) noexcept;

/// Enumerates minimal squares of period <= p over the alphabet and stores their
/// normalized proper prefixes. Result is independent of the thread count.
LambdaSet build_lambda(PeriodBound p, int alphabet_size, unsigned threads = 1);

/// Checks every structural invariant of a Λ set; throws VerificationError.
void validate_lambda(const LambdaSet& lambda);

/// Class of a word: id of the longest element of Λ equal to a normalized suffix.
struct LambdaState {
  LambdaSet::Id id = 0;
  auto operator<=>(const LambdaState&) const = default;
};

/// Longest suffix of w that normalizes into Λ. With validate set, w must contain
/// no square of period <= p or an InputError is thrown.
LambdaState classify(std::span<const Letter> w, const LambdaSet& lambda, bool validate = true);

/// Appends letter a to the representative word of s. Returns nullopt (blocked)
/// when this closes a square of period <= p.
std::optional<LambdaState> step(LambdaState s, Letter a, const LambdaSet& lambda);

/// Follows the class of a growing word in actual letters, keeping only the
/// suffix that realizes the current class.
class SuffixTracker {
 public:
  explicit SuffixTracker(const LambdaSet& lambda) : lambda_(&lambda) {}

  LambdaState state() const noexcept { return state_; }
  std::span<const Letter> suffix() const noexcept { return suffix_; }

  /// Appends a; returns false and leaves the tracker untouched when blocked.
  bool push(Letter a);

 private:
  const LambdaSet* lambda_;
  LambdaState state_{};
  Word suffix_;
};

/// Canonical text form:
///   lambda v1
///   p=<int> alphabet=<int> count=<int>
///   one word per line in id order, the empty word written as "-".
std::string write_lambda(const LambdaSet& lambda);
LambdaSet read_lambda(std::string_view text);

/// FNV-1a digest of write_lambda(lambda).
std::uint64_t lambda_digest(const LambdaSet& lambda);

}  // namespace sqf
