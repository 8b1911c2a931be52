#include <gtest/gtest.h>

#include "sqf/bounds.hpp"
#include "sqf/errors.hpp"
#include "sqf/oracle.hpp"

namespace sqf {
namespace {

Rational Q(long n, long d = 1) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

TEST(BetaMain, Examples) {
  EXPECT_TRUE(check_beta_main(Q(13948, 10721), 21, Q(5, 4)));
  EXPECT_FALSE(check_beta_main(Q(2), 2, Q(3, 2)));
  EXPECT_EQ(beta_main_margin(Q(2), 2, Q(3, 2)), Q(2, 3) - Q(3, 2));
  for (long j = 1; j <= 2000; ++j) {
    ASSERT_FALSE(check_beta_main(Q(1295, 1000), 21, Q(1) + Q(j, 10000))) << j;
  }
  EXPECT_THROW(check_beta_main(Q(2), 3, Q(1)), InputError);
  EXPECT_THROW(check_beta_main(Q(2), 3, Q(1, 2)), InputError);
}

TEST(BetaMain, MonotoneInAlpha) {
  for (int p : {2, 5, 21}) {
    for (long b = 1001; b <= 1600; b += 37) {
      const Rational beta = Q(b, 1000);
      bool seen = false;
      for (long a = 1000; a <= 2000; a += 25) {
        const bool now = check_beta_main(Q(a, 1000), p, beta);
        ASSERT_TRUE(now || !seen) << "p=" << p << " beta=" << b << " alpha=" << a;
        seen = seen || now;
      }
    }
  }
}

TEST(SearchBeta, Examples) {
  const auto reference = search_beta(Q(13948, 10721), 21, Q(1, 1000));
  ASSERT_TRUE(reference);
  EXPECT_GE(*reference, Q(5, 4));
  EXPECT_FALSE(search_beta(Q(1295, 1000), 21, Q(1, 1000)));
  const auto generous = search_beta(Q(3), 5, Q(1, 100));
  ASSERT_TRUE(generous);
  EXPECT_GE(*generous, Q(2));
  EXPECT_TRUE(check_beta_main(Q(3), 5, *generous));
}

TEST(SearchBeta, LargestFeasibleGridPoint) {
  for (long a : {1250L, 1301L, 1400L, 1618L, 2000L, 3000L}) {
    for (int p : {3, 8, 21}) {
      const Rational alpha = Q(a, 1000);
      const auto beta = search_beta(alpha, p, Q(1, 1000));
      // Independent linear scan of the whole grid.
      std::optional<Rational> best;
      for (long j = 1; Q(1) + Q(j, 1000) <= alpha; ++j) {
        if (check_beta_main(alpha, p, Q(1) + Q(j, 1000))) best = Q(1) + Q(j, 1000);
      }
      ASSERT_EQ(beta, best) << "alpha=" << a << " p=" << p;
      if (beta) {
        // Everything between the optimum and beta also holds.
        for (Rational b = *beta; b > Q(1); b -= Q(1, 1000)) {
          if (!check_beta_main(alpha, p, b)) {
            for (Rational c = b; c > Q(1); c -= Q(1, 1000)) ASSERT_FALSE(check_beta_main(alpha, p, c));
            break;
          }
        }
      }
    }
  }
}

TEST(BetaFour, Examples) {
  EXPECT_TRUE(check_beta_four(Q(49, 20)));
  EXPECT_EQ(beta_four_verdict(Q(49, 20)), Verdict::kHolds);
  EXPECT_FALSE(check_beta_four(Q(14, 5)));
  EXPECT_EQ(beta_four_verdict(Q(14, 5)), Verdict::kFails);
  EXPECT_TRUE(check_beta_four(Q(2)));
  EXPECT_THROW(check_beta_four(Q(1)), InputError);
}

TEST(BetaFour, SoundAgainstTighterRoot) {
  // sqrt(3) lies in [17320508075/10^10, 17320508076/10^10].
  const Rational lo(mpz_class("17320508075"), mpz_class("10000000000"));
  const Rational hi(mpz_class("17320508076"), mpz_class("10000000000"));
  auto margin = [](const Rational& root, const Rational& b) -> Rational { return Q(1) + root - Q(1) / (b * (b - 1)) - b; };
  for (long j = 1; j < 3000; ++j) {
    const Rational b = Q(1) + Q(j, 1000);
    const Verdict v = beta_four_verdict(b);
    if (v == Verdict::kHolds) ASSERT_GE(margin(lo, b), 0) << j;
    if (v == Verdict::kFails) ASSERT_LT(margin(hi, b), 0) << j;
  }
}

TEST(GrowthBound, UniformWeights) {
  const TransitionGraph g(PeriodBound(5), 4, 0, {0, 0, 0, 0});
  const Certificate cert{5, 4, 3, WeightVector{7}, Q(3), 0};
  const GrowthBound b = growth_bound(g, cert, Q(2));
  EXPECT_EQ(b.beta, Q(2));
  EXPECT_EQ(b.multiplicative_constant, Q(1));
  EXPECT_THROW(growth_bound(g, cert, Q(3)), InputError);
  const Certificate bad{5, 4, 3, WeightVector{7}, Q(4), 0};
  EXPECT_THROW(growth_bound(g, bad, Q(2)), VerificationError);
}

TEST(GrowthBound, RatioOfRootToLargestWeight) {
  // Root feeds a self-looping vertex through every letter.
  const TransitionGraph g(PeriodBound(5), 4, 0, {1, 1, 1, 1, 1, 1, 1, 1});
  const Certificate cert{5, 4, 3, WeightVector{6, 9}, Q(3), 0};
  const GrowthBound b = growth_bound(g, cert, Q(2));
  EXPECT_EQ(b.multiplicative_constant, Q(2, 3));
}

// Direct transcription of the double sum with the same cell conventions.
Rational reference_estimate(int p, int s, bool strict) {
  Rational total = 0;
  for (int n = strict ? 2 : 1; n <= p; ++n) {
    for (int k = 2; k <= s; ++k) {
      mpz_class fact = 1;
      for (int i = 2; i <= k - 2; ++i) fact *= i;
      mpz_class power;
      mpz_pow_ui(power.get_mpz_t(), mpz_class(k - 1).get_mpz_t(), static_cast<unsigned long>(n >= 2 ? n - 2 : 0));
      Rational term = Rational(mpz_class(n) * power, fact);
      if (n == 1) term = Rational(mpz_class(n), mpz_class(k - 1) * fact);
      total += term;
    }
  }
  total.canonicalize();
  return total;
}

TEST(Estimate, Examples) {
  EXPECT_EQ(estimate_lambda_size(1, 2), Q(1));
  EXPECT_EQ(estimate_lambda_size(1, 2, CellConvention::kStrict), Q(0));
  const Rational ceiling = Q(34) * Rational(mpz_class("100000000000000"));
  EXPECT_LE(estimate_lambda_size(21, 21), ceiling);
  EXPECT_LE(estimate_lambda_size(21, 21, CellConvention::kStrict), ceiling);
}

TEST(Estimate, MatchesDirectSum) {
  for (int p = 1; p <= 21; p += 4) {
    for (int s = 2; s <= 21; s += 3) {
      ASSERT_EQ(estimate_lambda_size(p, s), reference_estimate(p, s, false));
      ASSERT_EQ(estimate_lambda_size(p, s, CellConvention::kStrict), reference_estimate(p, s, true));
    }
  }
}

TEST(Estimate, MonotoneInP) {
  for (int s = 2; s <= 21; ++s) {
    for (int p = 1; p < 21; ++p) {
      ASSERT_LE(estimate_lambda_size(p, s), estimate_lambda_size(p + 1, s));
      ASSERT_LE(estimate_lambda_size(p, s, CellConvention::kStrict),
                estimate_lambda_size(p + 1, s, CellConvention::kStrict));
    }
  }
}

TEST(Estimate, BoundsBruteForceSize) {
  for (int p = 2; p <= 5; ++p) {
    for (int s : {3, 4, 5}) {
      const auto size = static_cast<long>(brute_lambda(p, s).size());
      EXPECT_GE(estimate_lambda_size(p, s), Q(size)) << "p=" << p << " s=" << s;
      EXPECT_GE(estimate_lambda_size(p, s, CellConvention::kStrict), Q(size)) << "p=" << p << " s=" << s;
    }
  }
}

TEST(Estimate, TooSmallAtPeriodOne) {
  // {ε, "0"} has two words but the n = 1 row sums to less than 2.
  for (int s : {3, 4, 5}) {
    ASSERT_EQ(brute_lambda(1, s).size(), 2U);
    EXPECT_LT(estimate_lambda_size(1, s), Q(2));
    EXPECT_GE(estimate_lambda_size(1, s), Q(1));
  }
}

TEST(Estimate, BadArguments) {
  EXPECT_THROW(estimate_lambda_size(0, 3), InputError);
  EXPECT_THROW(estimate_lambda_size(3, 1), InputError);
}

TEST(Format, DecimalAndParse) {
  EXPECT_EQ(decimal_approx(Q(13948, 10721)), "1.300998");
  EXPECT_EQ(decimal_approx(Q(2, 3)), "0.666667");
  EXPECT_EQ(decimal_approx(Q(-1, 8), 2), "-0.13");
  EXPECT_EQ(format_rational(Q(5, 4)), "5/4 (~1.250000, approximate)");
  EXPECT_EQ(parse_rational("13948/10721"), Q(13948, 10721));
  EXPECT_EQ(parse_rational("1.295"), Q(259, 200));
  EXPECT_EQ(parse_rational("3"), Q(3));
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("abc"), InputError);
}

}  // namespace
}  // namespace sqf
