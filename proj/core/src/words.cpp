#include "sqf/words.hpp"

#include <algorithm>
#include <array>

#include "sqf/errors.hpp"

namespace sqf {

PeriodBound::PeriodBound(int p) : p_(p) {
  if (p < 1) throw InputError("period bound must be >= 1, got " + std::to_string(p));
  // Prefix lengths are stored in one byte.
  if (p > 127) throw InputError("period bound too large: " + std::to_string(p));
}

void check_alphabet(int alphabet_size) {
  if (alphabet_size < 2 || alphabet_size > kMaxAlphabet) {
    throw InputError("alphabet size must be in [2, " + std::to_string(kMaxAlphabet) +
                     "], got " + std::to_string(alphabet_size));
  }
}

Word normalize(std::span<const Letter> w, int alphabet_size) {
  check_alphabet(alphabet_size);
  std::array<int, kMaxAlphabet> rename;
  rename.fill(-1);
  int next = 0;
  Word out;
  out.reserve(w.size());
  for (Letter a : w) {
    if (a >= alphabet_size) {
      throw InputError("letter " + std::to_string(a) + " outside alphabet of size " +
                       std::to_string(alphabet_size));
    }
    if (rename[a] < 0) rename[a] = next++;
    out.push_back(static_cast<Letter>(rename[a]));
  }
  return out;
}

namespace {

bool repeats_at(std::span<const Letter> w, std::size_t start, std::size_t period) {
  return std::equal(w.begin() + start, w.begin() + start + period, w.begin() + start + period);
}

}  // namespace

std::optional<Square> find_square(std::span<const Letter> w, std::size_t max_period) {
  const std::size_t n = w.size();
  for (std::size_t start = 0; start < n; ++start) {
    const std::size_t limit = std::min(max_period, (n - start) / 2);
    for (std::size_t period = 1; period <= limit; ++period) {
      if (repeats_at(w, start, period)) return Square{start, period};
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> square_suffix_period(std::span<const Letter> w,
                                                std::size_t max_period) {
  const std::size_t n = w.size();
  const std::size_t limit = std::min(max_period, n / 2);
  for (std::size_t period = 1; period <= limit; ++period) {
    if (repeats_at(w, n - 2 * period, period)) return period;
  }
  return std::nullopt;
}

bool is_square_free(std::span<const Letter> w) {
  return !find_square(w, w.size()).has_value();
}

bool is_minimal_square(std::span<const Letter> w) {
  const std::size_t n = w.size();
  if (n == 0 || n % 2 != 0 || !repeats_at(w, 0, n / 2)) return false;
  // Every proper factor sits inside w minus its first or its last letter.
  return is_square_free(w.first(n - 1)) && is_square_free(w.last(n - 1));
}

char letter_to_char(Letter a) {
  if (a < 10) return static_cast<char>('0' + a);
  if (a < kMaxAlphabet) return static_cast<char>('a' + (a - 10));
  throw InputError("letter " + std::to_string(a) + " has no text encoding");
}

Letter char_to_letter(char c) {
  if (c >= '0' && c <= '9') return static_cast<Letter>(c - '0');
  if (c >= 'a' && c < 'a' + (kMaxAlphabet - 10)) return static_cast<Letter>(10 + (c - 'a'));
  throw InputError(std::string("invalid letter character '") + c + "'");
}

std::string to_string(std::span<const Letter> w) {
  std::string s;
  s.reserve(w.size());
  for (Letter a : w) s.push_back(letter_to_char(a));
  return s;
}

Word parse_word(std::string_view text) {
  Word w;
  w.reserve(text.size());
  for (char c : text) w.push_back(char_to_letter(c));
  return w;
}

}  // namespace sqf
