#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "sqf/lambda.hpp"

namespace sqf {

/// Arc to a target class with the number of letters that reach it.
struct Arc {
  LambdaSet::Id target = 0;
  std::uint32_t multiplicity = 0;
  bool operator==(const Arc&) const = default;
};

/// Letter-transition multigraph over the ids of a Λ set.
///
/// letter_map(v)[a] is the class of (representative of v)·a, or kBlocked when
/// that word ends in a square of period <= p. Arcs aggregate letters with
/// equal targets; the per-letter map is kept because every letter contributes
/// separately to the list minimum.
class TransitionGraph {
 public:
  using Id = LambdaSet::Id;
  static constexpr Id kBlocked = std::numeric_limits<Id>::max();

  TransitionGraph(PeriodBound p, int alphabet_size, std::uint64_t lambda_digest,
                  std::vector<Id> letter_map);

  PeriodBound period() const noexcept { return p_; }
  std::size_t vertex_count() const noexcept { return offsets_.size() - 1; }
  int alphabet_size() const noexcept { return alphabet_; }
  std::uint64_t lambda_digest() const noexcept { return digest_; }

  std::span<const Id> letter_map(Id v) const noexcept {
    return {letters_.data() + static_cast<std::size_t>(v) * alphabet_,
            static_cast<std::size_t>(alphabet_)};
  }
  std::span<const Arc> arcs(Id v) const noexcept {
    return {arcs_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t arc_count() const noexcept { return arcs_.size(); }

  bool operator==(const TransitionGraph&) const = default;

 private:
  PeriodBound p_;
  int alphabet_;
  std::uint64_t digest_;
  std::vector<Id> letters_;
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
};

/// Runs step() for every (vertex, letter) pair. Parallel over vertex ranges;
/// the result does not depend on the thread count.
TransitionGraph build_graph(const LambdaSet& lambda, unsigned threads = 1);

/// Minimum over lists l of the given size of the sum of contributions of the
/// letters in l; equals the total minus the (alphabet - list_size) largest
/// contributions. Blocked letters contribute 0 and are passed as nullptr.
mpz_class min_over_lists(std::span<const mpz_class* const> contributions, int list_size);

/// min_over_lists applied to the weights of v's per-letter targets.
mpz_class min_list_sum(const TransitionGraph& g, TransitionGraph::Id v,
                       std::span<const mpz_class> weights, int list_size);

/// Text form:
///   graph v1
///   vertices=<int> alphabet=<int>
///   "<id>: t_0 ... t_{k-1}" per vertex, "x" for a blocked letter.
std::string write_graph(const TransitionGraph& g);
/// The text form carries no digest or period; both come from the source Λ.
TransitionGraph read_graph(std::string_view text, const LambdaSet& source);

}  // namespace sqf
