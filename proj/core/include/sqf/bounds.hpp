#pragma once

#include <optional>
#include <string>

#include "sqf/weights.hpp"

namespace sqf {

/// alpha - 1/(beta^(p-1) (beta-1)) - beta, exactly. beta must exceed 1.
Rational beta_main_margin(const Rational& alpha, int p, const Rational& beta);

/// Condition for the weighted growth bound: alpha - beta^(1-p)/(beta-1) >= beta.
bool check_beta_main(const Rational& alpha, int p, const Rational& beta);

/// Largest beta = 1 + j/D (D = floor(1/precision)) satisfying check_beta_main,
/// or nullopt when no grid point does. The margin is concave in beta, so the
/// maximizer and the right end of the feasible interval are both found by
/// bisection on the grid.
std::optional<Rational> search_beta(const Rational& alpha, int p, const Rational& precision);

/// Outcome of an inequality that involves sqrt(3).
enum class Verdict { kHolds, kFails, kIndeterminate };

/// 1 + sqrt(3) - 1/(beta (beta-1)) >= beta, decided with
/// 17320508/10^7 < sqrt(3) < 17320509/10^7.
Verdict beta_four_verdict(const Rational& beta);
/// kHolds only; indeterminate collapses to false.
bool check_beta_four(const Rational& beta);

struct GrowthBound {
  Rational beta;
  /// C_ε / max_w C_w; the count of valid words of length n is at least this
  /// times beta^n, and by submultiplicativity at least beta^n.
  Rational multiplicative_constant;
};

/// Throws VerificationError if the certificate fails against g, InputError if
/// beta does not satisfy check_beta_main for the certificate's alpha and p.
GrowthBound growth_bound(const TransitionGraph& g, const Certificate& cert, const Rational& beta);

/// How to treat the n = 1 row of the size estimate, where (k-1)^(n-2) has a
/// negative exponent. k = 1 terms are always 0.
enum class CellConvention {
  kInclusive,  ///< n = 1 contributes 1/(k-1)/(k-2)!
  kStrict,     ///< n = 1 row dropped
};

/// sum_{n=1..p} sum_{k=1..s} n (k-1)^(n-2) / (k-2)!
Rational estimate_lambda_size(int p, int s, CellConvention cells = CellConvention::kInclusive);

/// Decimal expansion rounded half-up to the given number of places.
std::string decimal_approx(const Rational& q, int places = 6);
/// "<num>/<den> (~<decimal>, approximate)"
std::string format_rational(const Rational& q);

/// Parses "a/b", "a" or a plain decimal such as "1.295" exactly.
Rational parse_rational(const std::string& text);

}  // namespace sqf
