#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "sqf/graph.hpp"

namespace sqf {

/// One non-negative coefficient per Λ id.
using WeightVector = std::vector<mpz_class>;
/// Always canonical (lowest terms, positive denominator).
using Rational = mpq_class;

/// Coefficients and α claimed to satisfy  α·C_v <= min over lists of the
/// weighted extension sum, for every v, with C_ε > 0.
struct Certificate {
  int p = 0;
  int alphabet_size = 0;
  int list_size = 0;
  WeightVector weights;
  Rational alpha;
  std::uint64_t lambda_digest = 0;

  bool operator==(const Certificate&) const = default;
};

/// One synchronous update: c'(v) = min_list_sum(v, c). The input is not touched;
/// each thread writes a disjoint block of the output.
WeightVector iterate(const TransitionGraph& g, const WeightVector& c, int list_size,
                     unsigned threads = 1);

/// floor(c(v) * target_avg * n / sum(c)). Throws InputError on an all-zero vector.
WeightVector renormalize(const WeightVector& c, const mpz_class& target_avg);

/// Minimum growth min_list_sum(v, c) / c(v) over vertices with c(v) > 0.
Rational compute_alpha(const TransitionGraph& g, const WeightVector& c, int list_size,
                       unsigned threads = 1);

/// First vertex breaking α·C_v <= min_list_sum(v, C). Throws VerificationError
/// when the certificate does not belong to g (dimension, period, alphabet, digest).
std::optional<TransitionGraph::Id> find_violation(const TransitionGraph& g, const Certificate& cert,
                                                  unsigned threads = 1);

/// C_ε > 0 and no violation. Integer arithmetic only.
bool verify_certificate(const TransitionGraph& g, const Certificate& cert, unsigned threads = 1);

struct FixedPointOptions {
  int iterations = 50;
  mpz_class target_avg = 100000;
  int list_size = 3;
  unsigned threads = 1;
  /// 0 starts from the constant vector target_avg; any other value draws a
  /// pseudo-random start in [1, 2*target_avg] from this seed.
  std::uint64_t seed = 0;
};

/// Alternates iterate and renormalize, then takes α from the final vector.
/// The returned certificate has passed verify_certificate.
Certificate run_fixed_point(const TransitionGraph& g, const FixedPointOptions& options = {});

/// Text form:
///   weights v1
///   count=<int> lambda_digest=<hex>
///   one decimal integer per line in id order.
std::string write_weights(const WeightVector& c, std::uint64_t lambda_digest);
WeightVector read_weights(std::string_view text, std::uint64_t* lambda_digest = nullptr);

/// Text form:
///   certificate v1
///   p=<int> alphabet=<int> list_size=<int>
///   alpha=<num>/<den>
///   lambda_digest=<hex>
///   weights=inline        (weights follow, one per line)
///   weights=<path>        (weights v1 file, relative to the certificate)
std::string write_certificate(const Certificate& cert);
std::string write_certificate(const Certificate& cert, const std::filesystem::path& weights_path);
Certificate read_certificate(std::string_view text, const std::filesystem::path& base_dir = {});

}  // namespace sqf
