#include <gtest/gtest.h>

#include <filesystem>

#include "sqf/errors.hpp"
#include "sqf/text_io.hpp"
#include "sqf/weights.hpp"
#include "support/temp_dir.hpp"

namespace sqf {
namespace {

Word W(const char* s) { return parse_word(s); }

TransitionGraph graph_for(int p, int A = 4) { return build_graph(build_lambda(PeriodBound(p), A)); }

WeightVector fill(std::size_t n, long value) { return WeightVector(n, mpz_class(value)); }

// A single vertex whose letters all loop back with the given pattern.
TransitionGraph single_vertex(int A, std::vector<TransitionGraph::Id> map, int p = 5) {
  return TransitionGraph(PeriodBound(p), A, 0, std::move(map));
}

TEST(Iterate, Examples) {
  const TransitionGraph g = graph_for(2);
  const WeightVector unit = fill(g.vertex_count(), 1);
  const WeightVector next = iterate(g, unit, 3);
  EXPECT_EQ(next[0], 3);
  EXPECT_EQ(next, (WeightVector{3, 2, 2, 1}));
  EXPECT_EQ(unit, fill(4, 1));
  EXPECT_EQ(iterate(g, fill(4, 0), 3), fill(4, 0));

  const auto B = TransitionGraph::kBlocked;
  const TransitionGraph dead = single_vertex(4, {B, B, B, B});
  EXPECT_EQ(iterate(dead, fill(1, 9), 3), fill(1, 0));
}

TEST(Iterate, ThreadCountDoesNotMatter) {
  const TransitionGraph g = graph_for(8);
  WeightVector c(g.vertex_count());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<unsigned long>((i * 7919) % 1000 + 1);
  const WeightVector one = iterate(g, c, 3, 1);
  for (unsigned t : {2U, 3U, 8U}) ASSERT_EQ(iterate(g, c, 3, t), one);
}

TEST(Renormalize, Examples) {
  EXPECT_EQ(renormalize(WeightVector{2, 4}, 100000), (WeightVector{66666, 133333}));
  EXPECT_EQ(renormalize(WeightVector{100000, 100000, 100000}, 100000), fill(3, 100000));
  for (long k : {1L, 3L, 17L}) EXPECT_EQ(renormalize(fill(2, k * 100000), 100000), fill(2, 100000));
  EXPECT_THROW(renormalize(fill(3, 0), 100000), InputError);
}

TEST(ComputeAlpha, Examples) {
  const TransitionGraph g = graph_for(2);
  // Unit weights: (3, 2, 2, 1) over (1, 1, 1, 1).
  EXPECT_EQ(compute_alpha(g, fill(4, 1), 3), Rational(1));
  // Every letter loops to the only vertex: growth is list_size.
  const TransitionGraph loop = single_vertex(3, {0, 0, 0});
  EXPECT_EQ(compute_alpha(loop, fill(1, 5), 2), Rational(2));
  // Zero weights are skipped.
  EXPECT_EQ(compute_alpha(g, WeightVector{1, 1, 1, 0}, 3), Rational(1));
}

TEST(Verify, Examples) {
  const TransitionGraph g = graph_for(2);
  Certificate cert{2, 4, 3, fill(4, 5), Rational(1), g.lambda_digest()};
  EXPECT_TRUE(verify_certificate(g, cert));
  cert.alpha = Rational(1000001, 1000000);
  EXPECT_FALSE(verify_certificate(g, cert));
  EXPECT_EQ(find_violation(g, cert), std::optional<TransitionGraph::Id>(3));

  Certificate zero_root{2, 4, 3, WeightVector{0, 1, 1, 1}, Rational(0), g.lambda_digest()};
  EXPECT_FALSE(verify_certificate(g, zero_root));

  Certificate wrong_size{2, 4, 3, fill(3, 5), Rational(1), g.lambda_digest()};
  EXPECT_THROW(verify_certificate(g, wrong_size), VerificationError);
  Certificate wrong_digest{2, 4, 3, fill(4, 5), Rational(1), g.lambda_digest() ^ 1U};
  EXPECT_THROW(verify_certificate(g, wrong_digest), VerificationError);
}

TEST(FixedPoint, OneIterationByHand) {
  // Uniform start iterates to (3,2,2,1)e5, renormalized to (3,2,2,1)e5/2.
  // Next growths: 2, 2, 3/2 (at "01"), 2.
  const TransitionGraph g = graph_for(2);
  FixedPointOptions options;
  options.iterations = 1;
  const Certificate cert = run_fixed_point(g, options);
  EXPECT_EQ(cert.weights, (WeightVector{150000, 100000, 100000, 50000}));
  EXPECT_EQ(cert.alpha, Rational(3, 2));
}

TEST(FixedPoint, PinnedValues) {
  const Certificate c2 = run_fixed_point(graph_for(2));
  EXPECT_EQ(c2.alpha, Rational(288243, 178145));
  const Certificate c3 = run_fixed_point(graph_for(3));
  EXPECT_EQ(c3.alpha, Rational(13489, 9204));
}

TEST(FixedPoint, AlwaysVerifies) {
  for (int p = 1; p <= 7; ++p) {
    const TransitionGraph g = graph_for(p);
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
      FixedPointOptions options;
      options.seed = seed;
      options.iterations = 1 + static_cast<int>(seed % 40);
      const Certificate cert = run_fixed_point(g, options);
      ASSERT_TRUE(verify_certificate(g, cert)) << "p=" << p << " seed=" << seed;
      ASSERT_GT(cert.weights[0], 0);
      ASSERT_EQ(cert.alpha, compute_alpha(g, cert.weights, 3));
    }
  }
}

TEST(FixedPoint, ThreadCountDoesNotMatter) {
  const TransitionGraph g = graph_for(7);
  const Certificate one = run_fixed_point(g);
  for (unsigned t : {2U, 4U}) {
    FixedPointOptions options;
    options.threads = t;
    ASSERT_EQ(run_fixed_point(g, options), one);
  }
}

TEST(CertificateText, InlineRoundTrip) {
  const TransitionGraph g = graph_for(4);
  const Certificate cert = run_fixed_point(g);
  const std::string text = write_certificate(cert);
  EXPECT_EQ(read_certificate(text), cert);
  EXPECT_NE(text.find("lambda_digest=" + to_hex16(g.lambda_digest())), std::string::npos);
}

TEST(CertificateText, ExternalWeights) {
  testing::TempDir dir;
  const TransitionGraph g = graph_for(3);
  const Certificate cert = run_fixed_point(g);
  write_file(dir.path() / "w.txt", write_weights(cert.weights, cert.lambda_digest));
  const std::string text = write_certificate(cert, "w.txt");
  EXPECT_EQ(read_certificate(text, dir.path()), cert);

  write_file(dir.path() / "w.txt", write_weights(cert.weights, cert.lambda_digest ^ 0xffU));
  EXPECT_THROW(read_certificate(text, dir.path()), VerificationError);
}

TEST(WeightsText, RoundTripAndErrors) {
  const WeightVector c{1, 22, 333};
  std::uint64_t digest = 0;
  EXPECT_EQ(read_weights(write_weights(c, 0xabcU), &digest), c);
  EXPECT_EQ(digest, 0xabcU);
  EXPECT_THROW(read_weights("weights v1\ncount=2 lambda_digest=0000000000000abc\n1\n"), InputError);
  EXPECT_THROW(read_weights("weights v1\ncount=1 lambda_digest=0000000000000abc\n-4\n"), InputError);
}

}  // namespace
}  // namespace sqf
