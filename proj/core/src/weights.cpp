#include "sqf/weights.hpp"

#include <random>

#include "parallel.hpp"
#include "sqf/errors.hpp"
#include "sqf/text_io.hpp"

namespace sqf {

namespace {

void check_size(const TransitionGraph& g, const WeightVector& c) {
  if (c.size() != g.vertex_count()) {
    throw VerificationError("weight vector has " + std::to_string(c.size()) +
                            " entries, graph has " + std::to_string(g.vertex_count()) + " vertices");
  }
}

mpz_class parse_nonnegative(std::string_view text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string_view::npos) {
    throw InputError("not a non-negative integer: '" + std::string(text) + "'");
  }
  return mpz_class(std::string(text));
}

}  // namespace

WeightVector iterate(const TransitionGraph& g, const WeightVector& c, int list_size,
                     unsigned threads) {
  check_size(g, c);
  WeightVector next(c.size());
  detail::parallel_blocks(c.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      next[v] = min_list_sum(g, static_cast<TransitionGraph::Id>(v), c, list_size);
    }
  });
  return next;
}

WeightVector renormalize(const WeightVector& c, const mpz_class& target_avg) {
  if (target_avg <= 0) throw InputError("renormalization target must be positive");
  mpz_class total = 0;
  for (const mpz_class& x : c) total += x;
  if (total == 0) throw InputError("cannot renormalize an all-zero weight vector");
  const mpz_class scale = target_avg * static_cast<unsigned long>(c.size());
  WeightVector out(c.size());
  for (std::size_t v = 0; v < c.size(); ++v) {
    mpz_class num = c[v] * scale;
    mpz_fdiv_q(out[v].get_mpz_t(), num.get_mpz_t(), total.get_mpz_t());
  }
  return out;
}

namespace {

WeightVector all_min_list_sums(const TransitionGraph& g, const WeightVector& c, int list_size,
                               unsigned threads) {
  return iterate(g, c, list_size, threads);
}

}  // namespace

Rational compute_alpha(const TransitionGraph& g, const WeightVector& c, int list_size,
                       unsigned threads) {
  check_size(g, c);
  const WeightVector next = all_min_list_sums(g, c, list_size, threads);
  std::optional<Rational> best;
  for (std::size_t v = 0; v < c.size(); ++v) {
    if (c[v] <= 0) continue;
    Rational growth(next[v], c[v]);
    growth.canonicalize();
    if (!best || growth < *best) best = std::move(growth);
  }
  if (!best) throw InputError("compute_alpha: no vertex has positive weight");
  return *best;
}

namespace {

void check_belongs(const TransitionGraph& g, const Certificate& cert) {
  if (cert.p != g.period().value() || cert.alphabet_size != g.alphabet_size()) {
    throw VerificationError("certificate parameters (p=" + std::to_string(cert.p) + ", alphabet=" +
                            std::to_string(cert.alphabet_size) + ") do not match the graph");
  }
  if (cert.lambda_digest != g.lambda_digest()) {
    throw VerificationError("lambda digest mismatch: certificate " + to_hex16(cert.lambda_digest) +
                            ", graph " + to_hex16(g.lambda_digest()));
  }
  check_size(g, cert.weights);
}

}  // namespace

std::optional<TransitionGraph::Id> find_violation(const TransitionGraph& g, const Certificate& cert,
                                                  unsigned threads) {
  check_belongs(g, cert);
  const WeightVector next = all_min_list_sums(g, cert.weights, cert.list_size, threads);
  const mpz_class& num = cert.alpha.get_num();
  const mpz_class& den = cert.alpha.get_den();
  for (std::size_t v = 0; v < next.size(); ++v) {
    if (cert.weights[v] < 0 || num * cert.weights[v] > den * next[v]) {
      return static_cast<TransitionGraph::Id>(v);
    }
  }
  return std::nullopt;
}

bool verify_certificate(const TransitionGraph& g, const Certificate& cert, unsigned threads) {
  check_belongs(g, cert);
  if (cert.weights.empty() || cert.weights[0] <= 0) return false;
  return !find_violation(g, cert, threads).has_value();
}

Certificate run_fixed_point(const TransitionGraph& g, const FixedPointOptions& options) {
  if (options.iterations < 1) throw InputError("iterations must be >= 1");
  if (options.target_avg <= 0) throw InputError("renormalization target must be positive");
  const std::size_t n = g.vertex_count();

  WeightVector c(n, options.target_avg);
  if (options.seed != 0) {
    if (!options.target_avg.fits_ulong_p()) throw InputError("target too large for a seeded start");
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<unsigned long> dist(1, 2 * options.target_avg.get_ui());
    for (auto& x : c) x = dist(rng);
  }

  for (int it = 1; it <= options.iterations; ++it) {
    c = iterate(g, c, options.list_size, options.threads);
    if (c[0] == 0) {
      throw VerificationError("iteration " + std::to_string(it) +
                              " produced a zero weight at live vertex 0 (the empty word)");
    }
    c = renormalize(c, options.target_avg);
    if (c[0] == 0) {
      throw VerificationError("renormalization after iteration " + std::to_string(it) +
                              " rounded vertex 0 (the empty word) to zero");
    }
  }

  Certificate cert;
  cert.p = g.period().value();
  cert.alphabet_size = g.alphabet_size();
  cert.list_size = options.list_size;
  cert.alpha = compute_alpha(g, c, options.list_size, options.threads);
  cert.weights = std::move(c);
  cert.lambda_digest = g.lambda_digest();
  if (auto bad = find_violation(g, cert, options.threads)) {
    throw VerificationError("certificate fails at vertex " + std::to_string(*bad));
  }
  return cert;
}

std::string write_weights(const WeightVector& c, std::uint64_t lambda_digest) {
  std::string out = "weights v1\ncount=" + std::to_string(c.size()) +
                    " lambda_digest=" + to_hex16(lambda_digest) + "\n";
  for (const mpz_class& x : c) {
    out += x.get_str();
    out += '\n';
  }
  return out;
}

WeightVector read_weights(std::string_view text, std::uint64_t* lambda_digest) {
  const auto lines = split_lines(text);
  if (lines.size() < 2 || lines[0] != "weights v1") throw InputError("not a 'weights v1' file");
  const long long count = header_int(lines[1], "count");
  const std::uint64_t digest = parse_hex16(header_field(lines[1], "lambda_digest"));
  if (count < 0 || static_cast<std::size_t>(count) != lines.size() - 2) {
    throw InputError("weights file count does not match its lines");
  }
  WeightVector c;
  c.reserve(static_cast<std::size_t>(count));
  for (std::size_t i = 2; i < lines.size(); ++i) c.push_back(parse_nonnegative(lines[i]));
  if (lambda_digest != nullptr) *lambda_digest = digest;
  return c;
}

namespace {

std::string certificate_header(const Certificate& cert) {
  return "certificate v1\np=" + std::to_string(cert.p) + " alphabet=" +
         std::to_string(cert.alphabet_size) + " list_size=" + std::to_string(cert.list_size) +
         "\nalpha=" + cert.alpha.get_num().get_str() + "/" + cert.alpha.get_den().get_str() +
         "\nlambda_digest=" + to_hex16(cert.lambda_digest) + "\n";
}

std::string_view expect_prefix(std::string_view line, std::string_view prefix) {
  if (line.substr(0, prefix.size()) != prefix) {
    throw InputError("expected '" + std::string(prefix) + "...', got '" + std::string(line) + "'");
  }
  return line.substr(prefix.size());
}

}  // namespace

std::string write_certificate(const Certificate& cert) {
  std::string out = certificate_header(cert) + "weights=inline\n";
  for (const mpz_class& x : cert.weights) {
    out += x.get_str();
    out += '\n';
  }
  return out;
}

std::string write_certificate(const Certificate& cert, const std::filesystem::path& weights_path) {
  return certificate_header(cert) + "weights=" + weights_path.generic_string() + "\n";
}

Certificate read_certificate(std::string_view text, const std::filesystem::path& base_dir) {
  const auto lines = split_lines(text);
  if (lines.size() < 5 || lines[0] != "certificate v1") {
    throw InputError("not a 'certificate v1' file");
  }
  Certificate cert;
  cert.p = static_cast<int>(header_int(lines[1], "p"));
  cert.alphabet_size = static_cast<int>(header_int(lines[1], "alphabet"));
  cert.list_size = static_cast<int>(header_int(lines[1], "list_size"));

  const std::string_view alpha = expect_prefix(lines[2], "alpha=");
  const std::size_t slash = alpha.find('/');
  if (slash == std::string_view::npos) throw InputError("alpha must be written as num/den");
  const mpz_class num = mpz_class(std::string(alpha.substr(0, slash)));
  const mpz_class den = parse_nonnegative(alpha.substr(slash + 1));
  if (den == 0) throw InputError("alpha has a zero denominator");
  cert.alpha = Rational(num, den);
  cert.alpha.canonicalize();

  cert.lambda_digest = parse_hex16(expect_prefix(lines[3], "lambda_digest="));
  const std::string_view source = expect_prefix(lines[4], "weights=");
  if (source == "inline") {
    cert.weights.reserve(lines.size() - 5);
    for (std::size_t i = 5; i < lines.size(); ++i) cert.weights.push_back(parse_nonnegative(lines[i]));
  } else {
    if (lines.size() != 5) throw InputError("external weights path followed by extra lines");
    std::filesystem::path path(source);
    if (path.is_relative()) path = base_dir / path;
    std::uint64_t digest = 0;
    cert.weights = read_weights(read_file(path), &digest);
    if (digest != cert.lambda_digest) {
      throw VerificationError("lambda digest mismatch between certificate (" +
                              to_hex16(cert.lambda_digest) + ") and weights file (" +
                              to_hex16(digest) + ")");
    }
  }
  return cert;
}

}  // namespace sqf
