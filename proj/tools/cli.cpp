#include "cli.hpp"

#include <sys/resource.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>

#include "sqf/bounds.hpp"
#include "sqf/errors.hpp"
#include "sqf/graph.hpp"
#include "sqf/lambda.hpp"
#include "sqf/oracle.hpp"
#include "sqf/text_io.hpp"
#include "sqf/weights.hpp"

namespace sqf::cli {

namespace fs = std::filesystem;

void RunConfig::check() const {
  PeriodBound{p};
  check_alphabet(alphabet_size);
  if (list_size < 2 || list_size > alphabet_size) {
    throw InputError("--list-size must be in [2, alphabet]");
  }
  if (iterations < 1) throw InputError("--iterations must be >= 1");
  if (parse_rational(norm_target) <= 0 || parse_rational(norm_target).get_den() != 1) {
    throw InputError("--norm-target must be a positive integer");
  }
  if (threads < 1) throw InputError("--threads must be >= 1");
}

namespace {

std::string stem(const RunConfig& cfg) {
  return "p" + std::to_string(cfg.p) + "_a" + std::to_string(cfg.alphabet_size);
}

}  // namespace

fs::path RunConfig::lambda_path() const { return out_dir / ("lambda_" + stem(*this) + ".txt"); }
fs::path RunConfig::graph_path() const { return out_dir / ("graph_" + stem(*this) + ".txt"); }
fs::path RunConfig::weights_path() const {
  return out_dir / ("weights_" + stem(*this) + "_l" + std::to_string(list_size) + ".txt");
}
fs::path RunConfig::certificate_path() const {
  return out_dir / ("certificate_" + stem(*this) + "_l" + std::to_string(list_size) + ".txt");
}

unsigned parse_threads(const std::string& text) {
  if (text == "auto") return std::max(1U, std::thread::hardware_concurrency());
  try {
    std::size_t used = 0;
    const long value = std::stol(text, &used);
    if (used != text.size() || value < 1 || value > 4096) throw std::invalid_argument(text);
    return static_cast<unsigned>(value);
  } catch (const std::exception&) {
    throw InputError("--threads expects 'auto' or a positive integer, got '" + text + "'");
  }
}

std::uint64_t parse_bytes(const std::string& text) {
  if (text.empty()) throw InputError("empty byte count");
  std::uint64_t scale = 1;
  std::string digits = text;
  switch (text.back()) {
    case 'K': case 'k': scale = 1ULL << 10; digits.pop_back(); break;
    case 'M': case 'm': scale = 1ULL << 20; digits.pop_back(); break;
    case 'G': case 'g': scale = 1ULL << 30; digits.pop_back(); break;
    default: break;
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError("bad byte count '" + text + "'");
  }
  return std::stoull(digits) * scale;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

long peak_rss_kib() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss;
}

// Refuses builds whose estimated trie size exceeds the memory budget.
void guard_memory(const RunConfig& cfg, int p, int alphabet_size, std::ostream& out) {
  const Rational nodes = estimate_lambda_size(p, alphabet_size);
  // The growable trie and the canonical copy coexist briefly.
  const Rational bytes = nodes * 2 * static_cast<unsigned long>(lambda_bytes_per_node(alphabet_size));
  if (bytes > Rational(mpz_class(std::to_string(cfg.max_mem)))) {
    const std::string projection = "projected |Λ| <= " + decimal_approx(nodes, 0) + " nodes, about " +
                                   decimal_approx(bytes / (1 << 20), 0) + " MiB";
    if (!cfg.allow_large) {
      throw ResourceError(projection + ", above --max-mem " + std::to_string(cfg.max_mem >> 20) +
                          " MiB; pass --allow-large to proceed");
    }
    out << "warning: " << projection << " (--allow-large given)\n";
  }
}

LambdaSet obtain_lambda(const RunConfig& cfg, std::ostream& out) {
  const fs::path path = cfg.lambda_path();
  if (fs::exists(path)) {
    LambdaSet lambda = read_lambda(read_file(path));
    if (lambda.period().value() != cfg.p || lambda.alphabet_size() != cfg.alphabet_size) {
      throw VerificationError(path.string() + " does not match --period/--alphabet");
    }
    if (cfg.validate) validate_lambda(lambda);
    out << "loaded " << path.string() << " (" << lambda.size() << " words)\n";
    return lambda;
  }
  guard_memory(cfg, cfg.p, cfg.alphabet_size, out);
  LambdaSet lambda = build_lambda(PeriodBound(cfg.p), cfg.alphabet_size, cfg.threads);
  if (cfg.validate) validate_lambda(lambda);
  write_file(path, write_lambda(lambda));
  out << "built Λ for p=" << cfg.p << " alphabet=" << cfg.alphabet_size << " (" << lambda.size()
      << " words) -> " << path.string() << "\n";
  return lambda;
}

// With --validate, compares every letter transition against direct classification.
void cross_check_graph(const LambdaSet& lambda, const TransitionGraph& g) {
  for (LambdaSet::Id v = 0; v < lambda.size(); ++v) {
    const Word w = lambda.word(v);
    for (int a = 0; a < lambda.alphabet_size(); ++a) {
      Word ext = w;
      ext.push_back(static_cast<Letter>(a));
      const auto target = g.letter_map(v)[static_cast<std::size_t>(a)];
      const bool blocked = find_square(ext, static_cast<std::size_t>(lambda.period().value())).has_value();
      if (blocked != (target == TransitionGraph::kBlocked) ||
          (!blocked && classify(ext, lambda).id != target)) {
        throw VerificationError("graph transition mismatch at vertex " + std::to_string(v) +
                                " letter " + std::to_string(a));
      }
    }
  }
}

TransitionGraph obtain_graph(const RunConfig& cfg, const LambdaSet& lambda) {
  TransitionGraph g = build_graph(lambda, cfg.threads);
  if (cfg.validate) cross_check_graph(lambda, g);
  return g;
}

FixedPointOptions fixed_point_options(const RunConfig& cfg) {
  FixedPointOptions options;
  options.iterations = cfg.iterations;
  options.target_avg = mpz_class(cfg.norm_target);
  options.list_size = cfg.list_size;
  options.threads = cfg.threads;
  options.seed = cfg.seed_vector;
  return options;
}

}  // namespace

int cmd_build(const RunConfig& cfg, std::ostream& out) {
  cfg.check();
  guard_memory(cfg, cfg.p, cfg.alphabet_size, out);
  const auto start = std::chrono::steady_clock::now();
  const LambdaSet lambda = build_lambda(PeriodBound(cfg.p), cfg.alphabet_size, cfg.threads);
  const double build_seconds = seconds_since(start);
  if (cfg.validate) validate_lambda(lambda);
  const std::string text = write_lambda(lambda);
  write_file(cfg.lambda_path(), text);
  out << "p=" << cfg.p << " alphabet=" << cfg.alphabet_size << " count=" << lambda.size() << "\n"
      << "trie bytes=" << lambda.memory_bytes() << " peak_rss_kib=" << peak_rss_kib() << "\n"
      << "wall_seconds=" << build_seconds << "\n"
      << "lambda_digest=" << to_hex16(fnv1a64(text)) << "\n"
      << "wrote " << cfg.lambda_path().string() << "\n";
  return kOk;
}

int cmd_graph(const RunConfig& cfg, std::ostream& out) {
  cfg.check();
  const LambdaSet lambda = obtain_lambda(cfg, out);
  const TransitionGraph g = obtain_graph(cfg, lambda);
  write_file(cfg.graph_path(), write_graph(g));
  out << "vertices=" << g.vertex_count() << " arcs=" << g.arc_count() << "\n"
      << "wrote " << cfg.graph_path().string() << "\n";
  return kOk;
}

int cmd_iterate(const RunConfig& cfg, std::ostream& out) {
  cfg.check();
  const LambdaSet lambda = obtain_lambda(cfg, out);
  const TransitionGraph g = obtain_graph(cfg, lambda);
  const auto start = std::chrono::steady_clock::now();
  const Certificate cert = run_fixed_point(g, fixed_point_options(cfg));
  write_file(cfg.weights_path(), write_weights(cert.weights, cert.lambda_digest));
  out << "iterations=" << cfg.iterations << " wall_seconds=" << seconds_since(start) << "\n"
      << "alpha=" << format_rational(cert.alpha) << "\n"
      << "wrote " << cfg.weights_path().string() << "\n";
  return kOk;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  cfg.check();
  const LambdaSet lambda = obtain_lambda(cfg, out);
  const TransitionGraph g = obtain_graph(cfg, lambda);
  const Certificate cert = run_fixed_point(g, fixed_point_options(cfg));
  const std::string text = write_certificate(cert);
  write_file(cfg.certificate_path(), text);
  if (cfg.validate) {
    const Certificate reread = read_certificate(read_file(cfg.certificate_path()));
    if (reread != cert || !verify_certificate(g, reread, cfg.threads)) {
      throw VerificationError("certificate did not survive a write/read/verify round trip");
    }
  }
  out << "p=" << cert.p << " alphabet=" << cert.alphabet_size << " list_size=" << cert.list_size
      << " vertices=" << g.vertex_count() << "\n"
      << "alpha=" << format_rational(cert.alpha) << "\n"
      << "lambda_digest=" << to_hex16(cert.lambda_digest) << "\n"
      << "certificate verified (exact integer arithmetic)\n"
      << "wrote " << cfg.certificate_path().string() << "\n";
  return kOk;
}

int cmd_verify(const RunConfig& base, const fs::path& certificate, std::ostream& out) {
  const Certificate cert = read_certificate(read_file(certificate), certificate.parent_path());
  RunConfig cfg = base;
  cfg.p = cert.p;
  cfg.alphabet_size = cert.alphabet_size;
  cfg.list_size = cert.list_size;
  cfg.check();
  const LambdaSet lambda = obtain_lambda(cfg, out);
  const TransitionGraph g = obtain_graph(cfg, lambda);
  if (cert.weights.empty() || cert.weights[0] <= 0) {
    out << "FAILED: weight of the empty word is not positive\n";
    return kVerificationFailed;
  }
  if (auto bad = find_violation(g, cert, cfg.threads)) {
    out << "FAILED at vertex " << *bad << " (word " << to_string(lambda.word(*bad)) << ")\n";
    return kVerificationFailed;
  }
  out << "certificate OK: alpha=" << format_rational(cert.alpha) << " over " << g.vertex_count()
      << " vertices\n";
  return kOk;
}

int cmd_bound(const RunConfig& cfg, const BoundRequest& request, std::ostream& out) {
  if (request.four_lists) {
    if (!request.beta) throw InputError("--four-lists needs --beta");
    const Rational beta = parse_rational(*request.beta);
    const Verdict v = beta_four_verdict(beta);
    out << "lists of size 4, beta=" << format_rational(beta) << ": "
        << (v == Verdict::kHolds ? "condition holds"
                                 : v == Verdict::kFails ? "condition fails" : "indeterminate (treated as fails)")
        << "\n";
    if (v == Verdict::kHolds) out << "count of square-free words >= (" << beta.get_str() << ")^n\n";
    return kOk;
  }

  std::optional<Certificate> cert;
  Rational alpha;
  int p = cfg.p;
  if (request.certificate) {
    cert = read_certificate(read_file(*request.certificate), request.certificate->parent_path());
    alpha = cert->alpha;
    p = cert->p;
  }
  if (cfg.alpha_override) alpha = parse_rational(*cfg.alpha_override);
  if (!cert && !cfg.alpha_override) throw InputError("bound needs --certificate or --alpha-override");
  out << "alpha=" << format_rational(alpha) << " p=" << p << "\n";

  std::optional<Rational> beta;
  if (request.beta) {
    const Rational candidate = parse_rational(*request.beta);
    const bool holds = check_beta_main(alpha, p, candidate);
    out << "beta=" << format_rational(candidate) << ": " << (holds ? "condition holds" : "condition fails")
        << " (margin " << format_rational(beta_main_margin(alpha, p, candidate)) << ")\n";
    if (holds) beta = candidate;
  } else {
    beta = search_beta(alpha, p, parse_rational(request.precision));
  }
  if (!beta) {
    out << "no beta found\n";
    return kOk;
  }
  out << "beta=" << format_rational(*beta) << "\n";
  if (cert && !cfg.alpha_override) {
    RunConfig sub = cfg;
    sub.p = cert->p;
    sub.alphabet_size = cert->alphabet_size;
    sub.list_size = cert->list_size;
    const LambdaSet lambda = obtain_lambda(sub, out);
    const TransitionGraph g = obtain_graph(sub, lambda);
    const GrowthBound bound = growth_bound(g, *cert, *beta);
    out << "weighted constant C_eps/max C=" << format_rational(bound.multiplicative_constant) << "\n";
  }
  out << "count of square-free words >= (" << beta->get_str() << ")^n\n";
  return kOk;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  const auto cells = cfg.strict_cells ? CellConvention::kStrict : CellConvention::kInclusive;
  const Rational value = estimate_lambda_size(cfg.p, cfg.alphabet_size, cells);
  out << "estimate p=" << cfg.p << " s=" << cfg.alphabet_size
      << (cfg.strict_cells ? " (strict cells)" : " (inclusive cells)") << ": " << format_rational(value)
      << "\n";
  return kOk;
}

namespace {

std::optional<Certificate> load_certificate(const std::optional<fs::path>& path) {
  if (!path) return std::nullopt;
  return read_certificate(read_file(*path), path->parent_path());
}

}  // namespace

int cmd_oracle(const RunConfig& base, const OracleRequest& request, std::ostream& out) {
  RunConfig cfg = base;
  const std::optional<Certificate> cert = load_certificate(request.certificate);
  if (cert) {
    cfg.p = cert->p;
    cfg.alphabet_size = cert->alphabet_size;
    cfg.list_size = cert->list_size;
  }
  cfg.check();

  if (request.what == "lambda") {
    const auto brute = brute_lambda(cfg.p, cfg.alphabet_size);
    const LambdaSet lambda = build_lambda(PeriodBound(cfg.p), cfg.alphabet_size, cfg.threads);
    std::set<Word> built;
    for (LambdaSet::Id id = 0; id < lambda.size(); ++id) built.insert(lambda.word(id));
    out << "brute_lambda p=" << cfg.p << " alphabet=" << cfg.alphabet_size << ": " << brute.size()
        << " words; build_lambda: " << lambda.size() << " words; "
        << (brute == built ? "identical" : "DIFFERENT") << "\n";
    return brute == built ? kOk : kVerificationFailed;
  }
  if (request.what == "count") {
    out << "square-free words of length " << request.length << " over " << cfg.alphabet_size
        << " letters: " << count_squarefree(request.length, cfg.alphabet_size) << "\n";
    return kOk;
  }

  std::optional<LambdaSet> lambda;
  if (cert || !request.exact) lambda = obtain_lambda(cfg, out);

  if (request.what == "game") {
    GameOptions options;
    options.mode = request.exact ? GameMode::kExact : GameMode::kShortSquare;
    options.lambda = lambda ? &*lambda : nullptr;
    options.certificate = cert ? &*cert : nullptr;
    std::vector<ListAssignment::Mask> trace;
    if (request.trace) options.trace = &trace;
    const WeightedCount result = adversary_min_count(request.length, cfg.alphabet_size, cfg.list_size, options);
    out << (request.exact ? "exact" : "short-square") << " game n=" << request.length
        << " alphabet=" << cfg.alphabet_size << " list_size=" << cfg.list_size
        << (cert ? " weighted" : " unweighted") << ": value=" << result.total_weight.get_str() << "\n";
    for (const auto& [state, count] : result.by_state) {
      out << "  class " << state;
      if (lambda) out << " (" << (state == 0 ? std::string("-") : to_string(lambda->word(state))) << ")";
      out << ": " << count.get_str() << "\n";
    }
    if (request.trace) {
      std::string text;
      for (auto mask : trace) text += mask_to_string(mask) + "\n";
      write_file(*request.trace, text);
      out << "wrote trace " << request.trace->string() << "\n";
    }
    return kOk;
  }

  if (request.what == "growth") {
    if (!cert) throw InputError("oracle growth needs --certificate");
    const auto beta = search_beta(cert->alpha, cert->p, Rational(1, 1000));
    out << "beta=" << (beta ? format_rational(*beta) : std::string("none (alpha-only check)")) << "\n";
    bool ok = true;
    if (request.exhaustive) {
      const auto result = check_weighted_growth_exhaustive(*lambda, *cert, cfg.list_size, request.length, beta);
      out << "exhaustive n<=" << request.length << ": " << result.assignments << " assignments, "
          << (result.holds ? "holds" : "FAILS: " + result.failure) << "\n";
      out << "min |S_n|:";
      for (auto c : result.min_counts) out << " " << c;
      out << "\n";
      ok = ok && result.holds;
    }
    if (request.random_assignments > 0) {
      std::mt19937_64 rng(request.seed);
      int failures = 0;
      for (int i = 0; i < request.random_assignments; ++i) {
        const auto assignment = ListAssignment::random(cfg.alphabet_size, cfg.list_size,
                                                       static_cast<std::size_t>(request.length), rng);
        if (!check_weighted_growth(*lambda, *cert, assignment, request.length, beta).holds) ++failures;
      }
      out << "random n=" << request.length << ": " << request.random_assignments << " assignments, "
          << failures << " failures\n";
      ok = ok && failures == 0;
    }
    return ok ? kOk : kVerificationFailed;
  }
  throw InputError("unknown oracle query '" + request.what + "'");
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Square-free words under list assignments: Λ construction, weight certificates, bounds"};
  app.require_subcommand(1);

  RunConfig cfg;
  if (const char* env = std::getenv("SQF_OUT_DIR"); env && *env) cfg.out_dir = env;
  std::string threads = "1";
  std::string max_mem = "8G";
  std::string out_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-p,--period", cfg.p, "Maximum short-square period")->capture_default_str();
    sub->add_option("--alphabet", cfg.alphabet_size, "Alphabet size")->capture_default_str();
    sub->add_option("--list-size", cfg.list_size, "Size of each list")->capture_default_str();
    sub->add_option("--iterations", cfg.iterations, "Fixed-point iterations")->capture_default_str();
    sub->add_option("--norm-target", cfg.norm_target, "Average weight kept by renormalization")
        ->capture_default_str();
    sub->add_option("--out-dir", out_dir, "Artifact directory (fallback: $SQF_OUT_DIR, then .)");
    sub->add_flag("--validate", cfg.validate, "Re-check every invariant of computed artifacts");
    sub->add_option("--threads", threads, "Worker threads or 'auto'")->capture_default_str();
    sub->add_option("--max-mem", max_mem, "Memory budget for Λ construction (K/M/G suffix)")
        ->capture_default_str();
    sub->add_flag("--allow-large", cfg.allow_large, "Ignore the memory budget");
    sub->add_option("--alpha-override", cfg.alpha_override, "Use this alpha instead of the certificate's");
    sub->add_option("--seed-vector", cfg.seed_vector, "0: uniform start; otherwise seed of a random start");
    sub->add_flag("--strict-cells", cfg.strict_cells, "Drop the n=1 row of the size estimate");
  };

  auto* build = app.add_subcommand("build", "Construct Λ and write its canonical text file");
  auto* graph = app.add_subcommand("graph", "Build the letter-transition multigraph");
  auto* iterate_cmd = app.add_subcommand("iterate", "Run the fixed-point iteration and write weights");
  auto* certify = app.add_subcommand("certify", "Compute and verify a certificate");
  auto* verify = app.add_subcommand("verify", "Re-verify a certificate file");
  auto* bound = app.add_subcommand("bound", "Search beta and report the exponential lower bound");
  auto* estimate = app.add_subcommand("estimate", "Crude upper bound on |Λ|");
  auto* oracle = app.add_subcommand("oracle", "Brute-force ground truth");
  for (auto* sub : {build, graph, iterate_cmd, certify, verify, bound, estimate, oracle}) add_common(sub);

  fs::path verify_path;
  verify->add_option("certificate", verify_path, "Certificate file")->required();

  BoundRequest bound_request;
  std::string bound_cert;
  bound->add_option("--certificate", bound_cert, "Certificate file");
  bound->add_option("--beta", bound_request.beta, "Check this beta instead of searching");
  bound->add_option("--precision", bound_request.precision, "Search grid spacing")->capture_default_str();
  bound->add_flag("--four-lists", bound_request.four_lists, "Check the lists-of-size-4 condition for --beta");

  OracleRequest oracle_request;
  std::string oracle_cert;
  std::string oracle_trace;
  oracle->add_option("what", oracle_request.what, "lambda | count | game | growth")
      ->required()
      ->check(CLI::IsMember({"lambda", "count", "game", "growth"}));
  oracle->add_option("-n,--length", oracle_request.length, "Word length");
  oracle->add_option("--certificate", oracle_cert, "Certificate providing weights and Λ parameters");
  oracle->add_flag("--exact", oracle_request.exact, "Forbid all squares (game keyed by whole word)");
  oracle->add_option("--trace", oracle_trace, "Write the adversary's lists to this file");
  oracle->add_option("--random", oracle_request.random_assignments, "Random assignments to check");
  oracle->add_option("--seed", oracle_request.seed, "Seed for random assignments");
  oracle->add_flag("--exhaustive", oracle_request.exhaustive, "Check every assignment of the given length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.threads = parse_threads(threads);
    cfg.max_mem = parse_bytes(max_mem);
    if (!bound_cert.empty()) bound_request.certificate = fs::path(bound_cert);
    if (!oracle_cert.empty()) oracle_request.certificate = fs::path(oracle_cert);
    if (!oracle_trace.empty()) oracle_request.trace = fs::path(oracle_trace);

    if (*build) return cmd_build(cfg, out);
    if (*graph) return cmd_graph(cfg, out);
    if (*iterate_cmd) return cmd_iterate(cfg, out);
    if (*certify) return cmd_certify(cfg, out);
    if (*verify) return cmd_verify(cfg, verify_path, out);
    if (*bound) return cmd_bound(cfg, bound_request, out);
    if (*estimate) return cmd_estimate(cfg, out);
    if (*oracle) return cmd_oracle(cfg, oracle_request, out);
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const ResourceError& e) {
    err << "resource guard: " << e.what() << "\n";
    return kResourceGuard;
  } catch (const InputError& e) {
    err << "bad input: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::bad_alloc&) {
    err << "resource guard: out of memory\n";
    return kResourceGuard;
  }
  return kBadInput;
}

}  // namespace sqf::cli
