#include "sqf/bounds.hpp"

#include "sqf/errors.hpp"

namespace sqf {

namespace {

Rational power(const Rational& base, int exponent) {
  Rational result = 1;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

void require_beta_above_one(const Rational& beta) {
  if (beta <= 1) throw InputError("beta must be > 1, got " + beta.get_str());
}

}  // namespace

Rational beta_main_margin(const Rational& alpha, int p, const Rational& beta) {
  require_beta_above_one(beta);
  if (p < 1) throw InputError("p must be >= 1");
  Rational correction = power(beta, p - 1) * (beta - 1);
  correction = 1 / correction;
  return alpha - correction - beta;
}

bool check_beta_main(const Rational& alpha, int p, const Rational& beta) {
  return sgn(beta_main_margin(alpha, p, beta)) >= 0;
}

std::optional<Rational> search_beta(const Rational& alpha, int p, const Rational& precision) {
  if (precision <= 0) throw InputError("precision must be positive");
  if (p < 1) throw InputError("p must be >= 1");
  mpz_class denom;
  Rational inverse = 1 / precision;
  mpz_fdiv_q(denom.get_mpz_t(), inverse.get_num_mpz_t(), inverse.get_den_mpz_t());
  if (denom < 1) denom = 1;

  // The margin is below alpha - beta, so only beta < alpha can qualify.
  Rational span = (alpha - 1) * denom;
  mpz_class last;
  mpz_fdiv_q(last.get_mpz_t(), span.get_num_mpz_t(), span.get_den_mpz_t());
  if (last < 1) return std::nullopt;

  auto grid = [&](const mpz_class& j) { return Rational(denom + j, denom); };
  auto margin = [&](const mpz_class& j) {
    Rational beta = grid(j);
    beta.canonicalize();
    return beta_main_margin(alpha, p, beta);
  };

  mpz_class lo = 1;
  mpz_class hi = last;
  while (lo < hi) {
    mpz_class mid = (lo + hi) / 2;
    if (margin(mid) < margin(mid + 1)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (margin(lo) < 0) return std::nullopt;

  // Largest feasible grid point to the right of the maximizer.
  hi = last;
  while (lo < hi) {
    mpz_class mid = (lo + hi + 1) / 2;
    if (margin(mid) >= 0) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  Rational beta = grid(lo);
  beta.canonicalize();
  return beta;
}

Verdict beta_four_verdict(const Rational& beta) {
  require_beta_above_one(beta);
  static const Rational kSqrt3Low(17320508, 10000000);
  static const Rational kSqrt3High(17320509, 10000000);
  const Rational penalty = 1 / (beta * (beta - 1));
  if (1 + kSqrt3Low - penalty >= beta) return Verdict::kHolds;
  if (1 + kSqrt3High - penalty < beta) return Verdict::kFails;
  return Verdict::kIndeterminate;
}

bool check_beta_four(const Rational& beta) { return beta_four_verdict(beta) == Verdict::kHolds; }

GrowthBound growth_bound(const TransitionGraph& g, const Certificate& cert, const Rational& beta) {
  if (!verify_certificate(g, cert)) {
    throw VerificationError("growth_bound: certificate does not verify");
  }
  if (!check_beta_main(cert.alpha, cert.p, beta)) {
    throw InputError("growth_bound: beta " + beta.get_str() + " fails the hypothesis for alpha " +
                     cert.alpha.get_str() + " and p=" + std::to_string(cert.p));
  }
  mpz_class largest = 0;
  for (const mpz_class& c : cert.weights) {
    if (c > largest) largest = c;
  }
  Rational constant(cert.weights[0], largest);
  constant.canonicalize();
  return GrowthBound{beta, constant};
}

Rational estimate_lambda_size(int p, int s, CellConvention cells) {
  if (p < 1 || s < 2) throw InputError("estimate_lambda_size needs p >= 1 and s >= 2");
  Rational total = 0;
  for (int n = 1; n <= p; ++n) {
    if (n == 1 && cells == CellConvention::kStrict) continue;
    mpz_class factorial = 1;  // (k-2)!
    for (int k = 2; k <= s; ++k) {
      if (k > 2) factorial *= k - 2;
      Rational base(k - 1);
      Rational term = n == 1 ? Rational(1) / base : power(base, n - 2);
      total += n * term / factorial;
    }
  }
  return total;
}

std::string decimal_approx(const Rational& q, int places) {
  mpz_class scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = sgn(q) < 0;
  Rational scaled = abs(q) * scale + Rational(1, 2);
  mpz_class digits;
  mpz_fdiv_q(digits.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  const mpz_class whole = digits / scale;
  std::string frac = mpz_class(digits % scale).get_str();
  if (places > 0) frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
  std::string out = negative && digits != 0 ? "-" : "";
  out += whole.get_str();
  if (places > 0) out += "." + frac;
  return out;
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str() + " (~" + decimal_approx(q) +
         ", approximate)";
}

Rational parse_rational(const std::string& text) {
  try {
    if (text.empty()) throw std::invalid_argument("empty");
    const std::size_t dot = text.find('.');
    if (dot != std::string::npos) {
      const std::string whole = text.substr(0, dot);
      const std::string frac = text.substr(dot + 1);
      if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument(text);
      }
      mpz_class scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      const bool negative = !whole.empty() && whole[0] == '-';
      mpz_class w = whole.empty() || whole == "-" ? mpz_class(0) : mpz_class(whole);
      Rational q(abs(w) * scale + mpz_class(frac), scale);
      q.canonicalize();
      return negative ? Rational(-q) : q;
    }
    Rational q(text);
    if (q.get_den() == 0) throw std::invalid_argument(text);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw InputError("not a rational number: '" + text + "'");
  }
}

}  // namespace sqf
