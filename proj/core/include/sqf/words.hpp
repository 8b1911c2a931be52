#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sqf {

using Letter = std::uint8_t;
using Word = std::vector<Letter>;

/// Largest alphabet expressible in the base-36 word encoding (digits 0-9, a-k).
inline constexpr int kMaxAlphabet = 21;

/// Maximum square period treated as "short".
class PeriodBound {
 public:
  explicit PeriodBound(int p);
  int value() const noexcept { return p_; }
  bool operator==(const PeriodBound&) const = default;
  /// Longest word that can occur in the prefix set for this bound.
  std::size_t max_prefix_length() const noexcept { return 2 * static_cast<std::size_t>(p_) - 1; }

 private:
  int p_;
};

/// Occurrence of a factor uu with |u| = period, starting at index start.
struct Square {
  std::size_t start = 0;
  std::size_t period = 0;
  auto operator<=>(const Square&) const = default;
};

/// Throws InputError unless 2 <= alphabet_size <= kMaxAlphabet.
void check_alphabet(int alphabet_size);

/// Renames letters in order of first occurrence to 0, 1, 2, ...
Word normalize(std::span<const Letter> w, int alphabet_size);

/// Leftmost, then shortest, square with period in [1, max_period].
std::optional<Square> find_square(std::span<const Letter> w, std::size_t max_period);

/// Shortest square that is a suffix of w with period <= max_period.
std::optional<std::size_t> square_suffix_period(std::span<const Letter> w, std::size_t max_period);

bool is_square_free(std::span<const Letter> w);

/// w = uu with u non-empty and every proper factor of w square-free.
bool is_minimal_square(std::span<const Letter> w);

char letter_to_char(Letter a);
Letter char_to_letter(char c);

/// Base-36 text form; the empty word is "".
std::string to_string(std::span<const Letter> w);
Word parse_word(std::string_view text);

}  // namespace sqf
