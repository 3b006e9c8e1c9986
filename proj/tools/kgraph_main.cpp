#include "kgraph/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace kgraph;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRefused = 3;

struct RunConfig {
  std::string input;
  std::string et;    // e^beta, rational or float
  double beta = 0.0;
  bool has_et = false, has_beta = false;
  std::string algebra = "nt";
  std::string f_spec;
  bool has_f = false;
  std::string weights_csv;
  bool json = false;
  double tol = kCompareTol;

  // eval / oracle extras
  std::string tau_csv, degree_csv, vertex_label;
  int k = 0, kmax = 50;
};

std::vector<double> parse_csv_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_csv_ints(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

ColorSet parse_color_set(const std::string& spec, int num_colors) {
  if (spec == "all") return ColorSet::full(num_colors);
  if (spec.empty()) return ColorSet::empty(num_colors);
  std::vector<int> members;
  for (int i : parse_csv_ints(spec)) {
    if (i < 1 || i > num_colors)
      throw std::invalid_argument("colour index out of range: " + std::to_string(i));
    members.push_back(i - 1);
  }
  return ColorSet::of(num_colors, members);
}

// "5", "16/9" parse exactly; anything with a '.' or exponent is a float.
kms::Beta parse_beta(const RunConfig& cfg) {
  if (cfg.has_beta) return kms::Beta::from_value(cfg.beta);
  const std::string& s = cfg.et;
  if (s.find_first_of(".eE") == std::string::npos) {
    try {
      const auto slash = s.find('/');
      BigInt num(slash == std::string::npos ? s : s.substr(0, slash));
      BigInt den(slash == std::string::npos ? std::string("1") : s.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("--et: zero denominator");
      return kms::Beta::from_exact_exp(BigRat(num, den));
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("--et: cannot parse '" + s + "' as a rational");
    }
  }
  return kms::Beta::from_exp(std::stod(s));
}

std::optional<KGraphSkeleton> load(const RunConfig& cfg, int& exit_code) {
  auto result = load_skeleton(cfg.input);
  if (std::holds_alternative<ValidationReport>(result)) {
    const auto& rep = std::get<ValidationReport>(result);
    if (cfg.json)
      std::cout << report::dump(report::to_json(rep));
    else
      std::cout << report::text(rep);
    exit_code = kExitValidation;
    return std::nullopt;
  }
  KGraphSkeleton g = std::get<KGraphSkeleton>(std::move(result));
  if (!cfg.weights_csv.empty()) g = g.with_weights(parse_csv_doubles(cfg.weights_csv));
  exit_code = kExitOk;
  return g;
}

kms::Algebra parse_algebra(const std::string& a) {
  if (a == "nt") return kms::Algebra::Toeplitz;
  if (a == "no") return kms::Algebra::CuntzKrieger;
  throw std::invalid_argument("--algebra must be nt or no");
}

int cmd_validate(const RunConfig& cfg) {
  int code = kExitOk;
  auto g = load(cfg, code);
  if (!g) return code;
  ValidationReport ok;
  if (cfg.json)
    std::cout << report::dump(report::to_json(ok));
  else
    std::cout << report::text(ok);
  return kExitOk;
}

int cmd_spectrum(const RunConfig& cfg) {
  int code = kExitOk;
  auto g = load(cfg, code);
  if (!g) return code;
  if (cfg.json)
    std::cout << report::dump(report::spectrum_json(*g));
  else
    std::cout << report::spectrum_text(*g);
  return kExitOk;
}

int cmd_transitions(const RunConfig& cfg) {
  int code = kExitOk;
  auto g = load(cfg, code);
  if (!g) return code;
  const auto t = spectral::transition_set(*g);
  if (cfg.json)
    std::cout << report::dump(report::to_json(*g, t));
  else
    std::cout << report::text(*g, t);
  return kExitOk;
}

int cmd_diagram(const RunConfig& cfg) {
  int code = kExitOk;
  auto g = load(cfg, code);
  if (!g) return code;
  const auto d = kms::phase_diagram(*g, parse_algebra(cfg.algebra));
  if (cfg.json)
    std::cout << report::dump(report::diagram_json(*g, d));
  else
    std::cout << report::diagram_text(*g, d);
  return kExitOk;
}

int cmd_simplex(const RunConfig& cfg) {
  int code = kExitOk;
  auto g = load(cfg, code);
  if (!g) return code;
  const kms::Beta beta = parse_beta(cfg);
  const kms::Algebra algebra = parse_algebra(cfg.algebra);
  std::vector<kms::SubharmonicSimplex> parts;
  if (cfg.has_f) {
    const ColorSet f = parse_color_set(cfg.f_spec, g->num_colors());
    if (f.is_full()) {
      parts.push_back(kms::finite_simplex(*g, beta, algebra));
    } else {
      // Proper-F parts live only on the transition set; report the provable
      // emptiness off transitions instead of enumerating.
      bool at_transition = false;
      for (const auto& e : spectral::transition_set(*g).values)
        if (e.subharmonic && std::abs(beta.exp_value - e.lambda) <=
                                 cfg.tol * std::max(1.0, e.lambda))
          at_transition = true;
      if (at_transition) {
        auto all = kms::geq_simplex(*g, beta, algebra, cfg.tol);
        for (auto& part : all)
          if (part.f == f) parts.push_back(std::move(part));
      } else {
        kms::SubharmonicSimplex part;
        part.f = f;
        part.beta = beta;
        part.algebra = algebra;
        part.kind = f.is_empty() ? kms::SimplexKind::Infinite : kms::SimplexKind::Subharmonic;
        part.reason = kms::EmptyReason::OffTransition;
        parts.push_back(std::move(part));
      }
    }
  } else {
    parts = kms::geq_simplex(*g, beta, algebra, cfg.tol);
  }
  if (cfg.json)
    std::cout << report::dump(report::simplex_json(*g, beta, parts, algebra));
  else
    std::cout << report::simplex_text(*g, beta, parts, algebra);
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg) {
  int code = kExitOk;
  auto g = load(cfg, code);
  if (!g) return code;
  const kms::Beta beta = parse_beta(cfg);
  const ColorSet f = parse_color_set(cfg.f_spec, g->num_colors());
  TraceVector tau(parse_csv_doubles(cfg.tau_csv));
  if (tau.size() != g->num_vertices())
    throw std::invalid_argument("--tau must list one value per vertex");
  Multidegree degree(parse_csv_ints(cfg.degree_csv));
  int vertex = -1;
  for (int v = 0; v < g->num_vertices(); ++v)
    if (g->label(v) == cfg.vertex_label) vertex = v;
  if (vertex < 0) throw std::invalid_argument("unknown vertex label: " + cfg.vertex_label);

  kms::check_tr_membership(*g, tau, beta, f);
  const kms::KMSVector kv = kms::kms_vector(*g, tau, beta, f);
  const double value = kms::evaluate_state(*g, kv, degree, vertex);
  if (cfg.json)
    std::cout << report::dump(report::eval_json(*g, kv, degree, vertex, value));
  else
    std::cout << report::format_g(value) << "\n";
  return kExitOk;
}

int cmd_oracle(const RunConfig& cfg, const std::string& sub) {
  int code = kExitOk;
  auto g = load(cfg, code);
  if (!g) return code;
  const ColorSet f = parse_color_set(cfg.f_spec, g->num_colors());
  if (sub == "path-count") {
    const BigInt b = oracle::path_count(*g, cfg.k, f);
    if (cfg.json) {
      report::json out;
      out["k"] = cfg.k;
      out["count"] = b.str();
      std::cout << report::dump(out);
    } else {
      std::cout << b.str() << "\n";
    }
    return kExitOk;
  }
  if (sub == "entropy-estimate") {
    const auto s = oracle::entropy_estimate(*g, f, cfg.kmax);
    if (cfg.json)
      std::cout << report::dump(report::series_json(s));
    else
      std::cout << "estimate after k=" << cfg.kmax << ": " << report::format_g(s.limit_estimate)
                << (s.converged ? " (converged)" : "") << "\n";
    return kExitOk;
  }
  if (sub == "c-partial") {
    TraceVector tau(parse_csv_doubles(cfg.tau_csv));
    if (tau.size() != g->num_vertices())
      throw std::invalid_argument("--tau must list one value per vertex");
    const kms::Beta beta = parse_beta(cfg);
    const auto s = oracle::c_partial(*g, tau, beta.value, f, cfg.kmax);
    if (cfg.json)
      std::cout << report::dump(report::series_json(s));
    else
      std::cout << "partial sum after k=" << cfg.kmax << ": "
                << report::format_g(s.limit_estimate)
                << (s.converged ? " (converged)" : " (not converged)") << "\n";
    return kExitOk;
  }
  if (sub == "brute-simplex") {
    const kms::Beta beta = parse_beta(cfg);
    if (!beta.exact_exp)
      throw std::invalid_argument("brute-simplex requires an exact --et value");
    const auto traces = oracle::brute_simplex(*g, *beta.exact_exp, f);
    if (cfg.json) {
      report::json out;
      out["exp_beta"] = report::number(beta.exp_value);
      report::json gens = report::json::array();
      for (const auto& t : traces) {
        report::json vec = report::json::array();
        for (double v : t.values) vec.push_back(report::snap12(v));
        gens.push_back(std::move(vec));
      }
      out["generators"] = std::move(gens);
      std::cout << report::dump(out);
    } else {
      std::cout << traces.size() << " generator(s)\n";
    }
    return kExitOk;
  }
  throw std::invalid_argument("unknown oracle subcommand: " + sub);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"KMS phase diagrams of finite higher-rank graph algebras"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd, bool needs_beta) {
    cmd->add_option("input", cfg.input, "graph file (JSON)")->required();
    cmd->add_flag("--json", cfg.json, "emit a JSON report");
    cmd->add_option("--weights", cfg.weights_csv, "override weights, s1,...,sN");
    cmd->add_option("--tol", cfg.tol, "comparison tolerance override");
    if (needs_beta) {
      auto* et = cmd->add_option("--et", cfg.et, "e^beta, rational (exact) or float");
      auto* beta = cmd->add_option("--beta", cfg.beta, "beta (float)");
      et->excludes(beta);
      beta->excludes(et);
    }
  };

  auto* validate = app.add_subcommand("validate", "check a graph file");
  add_common(validate, false);

  auto* spectrum = app.add_subcommand("spectrum", "per-colour Perron data and entropies");
  add_common(spectrum, false);

  auto* transitions = app.add_subcommand("transitions", "the transition set");
  add_common(transitions, false);

  auto* diagram = app.add_subcommand("diagram", "full phase diagram");
  add_common(diagram, false);
  diagram->add_option("--algebra", cfg.algebra, "nt (Toeplitz) or no (Cuntz-Krieger)");

  auto* simplex = app.add_subcommand("simplex", "equilibrium simplex at one beta");
  add_common(simplex, true);
  simplex->add_option("--algebra", cfg.algebra, "nt or no");
  simplex->add_option("--F", cfg.f_spec, "restrict to one colour set: i,j | '' | all");

  auto* eval = app.add_subcommand("eval", "evaluate the induced state on a monomial");
  add_common(eval, true);
  eval->add_option("--F", cfg.f_spec, "colour set of the subharmonic part")->required();
  eval->add_option("--tau", cfg.tau_csv, "trace vector, one value per vertex")->required();
  eval->add_option("--degree", cfg.degree_csv, "multidegree n1,...,nN")->required();
  eval->add_option("--vertex", cfg.vertex_label, "source vertex label")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "independent brute-force checks");
  oracle_cmd->require_subcommand(1);
  std::vector<CLI::App*> oracle_subs;
  auto* path_count = oracle_cmd->add_subcommand("path-count", "count paths of length k on F");
  add_common(path_count, false);
  path_count->add_option("--k", cfg.k, "path length")->required();
  path_count->add_option("--F", cfg.f_spec, "colour set");
  auto* entropy_est = oracle_cmd->add_subcommand("entropy-estimate", "(1/k) log B_k series");
  add_common(entropy_est, false);
  entropy_est->add_option("--F", cfg.f_spec, "colour set");
  entropy_est->add_option("--kmax", cfg.kmax, "series length");
  auto* c_partial = oracle_cmd->add_subcommand("c-partial", "partial sums of the c constant");
  add_common(c_partial, true);
  c_partial->add_option("--F", cfg.f_spec, "colour set");
  c_partial->add_option("--tau", cfg.tau_csv, "trace vector")->required();
  c_partial->add_option("--kmax", cfg.kmax, "series length");
  auto* brute = oracle_cmd->add_subcommand("brute-simplex", "exhaustive Tr recomputation");
  add_common(brute, true);
  brute->add_option("--F", cfg.f_spec, "colour set");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  cfg.has_et = simplex->count("--et") || eval->count("--et") ||
               c_partial->count("--et") || brute->count("--et");
  cfg.has_beta = simplex->count("--beta") || eval->count("--beta") ||
                 c_partial->count("--beta") || brute->count("--beta");
  if ((simplex->parsed() || eval->parsed() ||
       oracle_cmd->got_subcommand("c-partial") || oracle_cmd->got_subcommand("brute-simplex")) &&
      !cfg.has_et && !cfg.has_beta) {
    std::cerr << "exactly one of --et / --beta is required\n";
    return kExitUsage;
  }
  cfg.has_f = simplex->count("--F") > 0;

  try {
    if (app.got_subcommand(validate)) return cmd_validate(cfg);
    if (app.got_subcommand(spectrum)) return cmd_spectrum(cfg);
    if (app.got_subcommand(transitions)) return cmd_transitions(cfg);
    if (app.got_subcommand(diagram)) return cmd_diagram(cfg);
    if (app.got_subcommand(simplex)) return cmd_simplex(cfg);
    if (app.got_subcommand(eval)) return cmd_eval(cfg);
    if (app.got_subcommand(oracle_cmd)) {
      for (const char* name : {"path-count", "entropy-estimate", "c-partial", "brute-simplex"})
        if (oracle_cmd->got_subcommand(name)) return cmd_oracle(cfg, name);
    }
  } catch (const DimensionTooLargeError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const BudgetExceededError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const TauNotInSimplexError& e) {
    std::cerr << "tau rejected (" << e.criterion << "): " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error [" << e.kind() << "]: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
