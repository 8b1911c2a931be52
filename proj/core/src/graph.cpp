#include "sqf/graph.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "parallel.hpp"
#include "sqf/errors.hpp"
#include "sqf/text_io.hpp"

namespace sqf {

TransitionGraph::TransitionGraph(PeriodBound p, int alphabet_size, std::uint64_t lambda_digest,
                                 std::vector<Id> letter_map)
    : p_(p), alphabet_(alphabet_size), digest_(lambda_digest), letters_(std::move(letter_map)) {
  check_alphabet(alphabet_size);
  const auto a = static_cast<std::size_t>(alphabet_);
  if (letters_.size() % a != 0) throw InputError("letter map size is not a multiple of the alphabet");
  const std::size_t n = letters_.size() / a;
  offsets_.reserve(n + 1);
  offsets_.push_back(0);
  std::vector<Id> targets;
  for (std::size_t v = 0; v < n; ++v) {
    targets.clear();
    for (std::size_t c = 0; c < a; ++c) {
      const Id t = letters_[v * a + c];
      if (t == kBlocked) continue;
      if (t >= n) throw InputError("arc target " + std::to_string(t) + " out of range");
      targets.push_back(t);
    }
    std::sort(targets.begin(), targets.end());
    for (std::size_t i = 0; i < targets.size();) {
      std::size_t j = i;
      while (j < targets.size() && targets[j] == targets[i]) ++j;
      arcs_.push_back(Arc{targets[i], static_cast<std::uint32_t>(j - i)});
      i = j;
    }
    offsets_.push_back(arcs_.size());
  }
}

TransitionGraph build_graph(const LambdaSet& lambda, unsigned threads) {
  const std::size_t n = lambda.size();
  const auto a = static_cast<std::size_t>(lambda.alphabet_size());
  std::vector<TransitionGraph::Id> letters(n * a, TransitionGraph::kBlocked);
  detail::parallel_blocks(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      for (std::size_t c = 0; c < a; ++c) {
        auto next = step(LambdaState{static_cast<LambdaSet::Id>(v)}, static_cast<Letter>(c), lambda);
        if (next) letters[v * a + c] = next->id;
      }
    }
  });
  return TransitionGraph(lambda.period(), lambda.alphabet_size(), lambda_digest(lambda),
                         std::move(letters));
}

mpz_class min_over_lists(std::span<const mpz_class* const> contributions, int list_size) {
  const auto letters = static_cast<int>(contributions.size());
  if (list_size < 1 || list_size > letters) {
    throw InputError("list size " + std::to_string(list_size) + " not in [1, " +
                     std::to_string(letters) + "]");
  }
  std::vector<const mpz_class*> live;
  live.reserve(contributions.size());
  mpz_class total = 0;
  for (const mpz_class* c : contributions) {
    if (c == nullptr) continue;
    live.push_back(c);
    total += *c;
  }
  const auto drop = static_cast<std::size_t>(letters - list_size);
  if (drop == 0) return total;
  if (drop >= live.size()) return 0;
  auto greater = [](const mpz_class* x, const mpz_class* y) { return *x > *y; };
  if (drop == 1) {
    total -= **std::min_element(live.begin(), live.end(), greater);
    return total;
  }
  std::partial_sort(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(drop), live.end(), greater);
  for (std::size_t i = 0; i < drop; ++i) total -= *live[i];
  return total;
}

mpz_class min_list_sum(const TransitionGraph& g, TransitionGraph::Id v,
                       std::span<const mpz_class> weights, int list_size) {
  std::array<const mpz_class*, kMaxAlphabet> slots{};
  const auto targets = g.letter_map(v);
  for (std::size_t c = 0; c < targets.size(); ++c) {
    slots[c] = targets[c] == TransitionGraph::kBlocked ? nullptr : &weights[targets[c]];
  }
  return min_over_lists(std::span(slots.data(), targets.size()), list_size);
}

std::string write_graph(const TransitionGraph& g) {
  std::string out = "graph v1\nvertices=" + std::to_string(g.vertex_count()) +
                    " alphabet=" + std::to_string(g.alphabet_size()) + "\n";
  for (TransitionGraph::Id v = 0; v < g.vertex_count(); ++v) {
    out += std::to_string(v);
    out += ':';
    for (TransitionGraph::Id t : g.letter_map(v)) {
      out += ' ';
      out += t == TransitionGraph::kBlocked ? std::string("x") : std::to_string(t);
    }
    out += '\n';
  }
  return out;
}

TransitionGraph read_graph(std::string_view text, const LambdaSet& source) {
  const auto lines = split_lines(text);
  if (lines.size() < 2 || lines[0] != "graph v1") throw InputError("not a 'graph v1' file");
  const long long vertices = header_int(lines[1], "vertices");
  const int alphabet = static_cast<int>(header_int(lines[1], "alphabet"));
  if (alphabet != source.alphabet_size() || static_cast<std::size_t>(vertices) != source.size()) {
    throw VerificationError("graph header does not match its source Λ");
  }
  if (vertices < 1 || static_cast<std::size_t>(vertices) != lines.size() - 2) {
    throw InputError("graph vertex count does not match its lines");
  }
  std::vector<TransitionGraph::Id> letters;
  letters.reserve(static_cast<std::size_t>(vertices) * static_cast<std::size_t>(alphabet));
  for (std::size_t v = 0; v < static_cast<std::size_t>(vertices); ++v) {
    std::string_view line = lines[v + 2];
    const std::string prefix = std::to_string(v) + ":";
    if (line.substr(0, prefix.size()) != prefix) {
      throw InputError("graph line " + std::to_string(v + 3) + " does not start with '" + prefix + "'");
    }
    line.remove_prefix(prefix.size());
    int seen = 0;
    while (!line.empty()) {
      if (line.front() != ' ') throw InputError("graph line " + std::to_string(v + 3) + " malformed");
      line.remove_prefix(1);
      const std::size_t end = std::min(line.find(' '), line.size());
      const std::string_view token = line.substr(0, end);
      line.remove_prefix(end);
      if (token == "x") {
        letters.push_back(TransitionGraph::kBlocked);
      } else {
        TransitionGraph::Id t = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), t);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
          throw InputError("bad target '" + std::string(token) + "'");
        }
        letters.push_back(t);
      }
      ++seen;
    }
    if (seen != alphabet) throw InputError("graph line " + std::to_string(v + 3) + " has wrong arity");
  }
  return TransitionGraph(source.period(), alphabet, lambda_digest(source), std::move(letters));
}

}  // namespace sqf
