#include "kgraph/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace kgraph::report {

double snap12(double x) {
  if (x == 0.0) return 0.0;  // normalize -0.0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string format_g(double x) {
  if (x == 0.0) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

json number(double x) { return snap12(x); }

json number(const LogValue& v) {
  if (!v.finite()) return nullptr;
  return snap12(v.value());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

json labels_of(const KGraphSkeleton& g, const VertexSet& w) {
  json out = json::array();
  for (int v : w.indices()) out.push_back(g.label(v));
  return out;
}

json vector_json(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(snap12(v));
  return out;
}

json colors_json(const ColorSet& f) {
  json out = json::array();
  for (int i : f.members()) out.push_back(i + 1);
  return out;
}

json weights_json(const KGraphSkeleton& g) {
  json out = json::array();
  for (double s : g.weights()) out.push_back(snap12(s));
  return out;
}

std::string vector_text(const KGraphSkeleton& g, const TraceVector& t) {
  // Deltas print by vertex name, general vectors as a bracketed list.
  const auto supp = t.support().indices();
  if (supp.size() == 1 && std::abs(t.values[supp[0]] - 1.0) <= kCompareTol)
    return "d_" + g.label(supp[0]);
  std::ostringstream os;
  os << "[";
  for (int v = 0; v < t.size(); ++v) {
    if (v) os << " ";
    os << format_g(t.values[v]);
  }
  os << "]";
  return os.str();
}

std::string part_label(const kms::SubharmonicSimplex& part) {
  switch (part.kind) {
    case kms::SimplexKind::Finite: return "finite type";
    case kms::SimplexKind::Infinite: return "infinite type";
    case kms::SimplexKind::Subharmonic: {
      std::ostringstream os;
      os << "F={";
      bool first = true;
      for (int i : part.f.members()) {
        if (!first) os << ",";
        os << (i + 1);
        first = false;
      }
      os << "} subharmonic";
      return os.str();
    }
  }
  return "?";
}

std::string part_text(const KGraphSkeleton& g, const kms::SubharmonicSimplex& part) {
  std::ostringstream os;
  os << part_label(part) << ": ";
  if (part.empty()) {
    os << "empty";
    if (part.reason != kms::EmptyReason::None) os << " (" << to_string(part.reason) << ")";
  } else {
    os << "{ ";
    for (const TraceVector& t : part.generators) os << vector_text(g, t) << " ";
    os << "}";
  }
  return os.str();
}

}  // namespace

json to_json(const ValidationReport& r) {
  json out;
  out["valid"] = r.ok();
  json list = json::array();
  for (const Violation& v : r.violations) {
    json item;
    item["kind"] = to_string(v.kind);
    if (v.color_i >= 0) item["color_i"] = v.color_i + 1;
    if (v.color_j >= 0) item["color_j"] = v.color_j + 1;
    if (v.row >= 0) item["row"] = v.row;
    if (v.col >= 0) item["col"] = v.col;
    item["detail"] = v.detail;
    list.push_back(std::move(item));
  }
  out["violations"] = std::move(list);
  return out;
}

json to_json(const KGraphSkeleton& g, const spectral::TransitionSet& t) {
  json out;
  out["weights"] = weights_json(g);
  json values = json::array();
  for (const auto& e : t.values) {
    json item;
    item["lambda"] = number(e.lambda);
    item["beta"] = number(e.beta);
    item["witness"] = g.label(e.witness);
    item["exact"] = e.exact;
    if (e.exact) item["exact_value"] = e.exact_value.str();
    item["subharmonic"] = e.subharmonic;
    values.push_back(std::move(item));
  }
  out["values"] = std::move(values);
  out["max_lambda"] = number(t.max_lambda);
  return out;
}

json to_json(const KGraphSkeleton& g, const spectral::EntropyReport& e) {
  json out;
  out["weights"] = weights_json(g);
  json strong = json::array();
  for (const auto& [f, h] : e.strong) {
    json item;
    item["F"] = colors_json(f);
    item["value"] = number(h);
    strong.push_back(std::move(item));
  }
  out["strong"] = std::move(strong);
  if (e.tracial) out["tracial"] = number(*e.tracial);
  out["lower_critical"] = number(e.lower_critical);
  out["weighted"] = e.weighted;
  return out;
}

json spectrum_json(const KGraphSkeleton& g) {
  json out;
  out["vertices"] = json(g.vertex_labels());
  out["colors"] = g.num_colors();
  out["weights"] = weights_json(g);
  json per_color = json::array();
  for (int i = 0; i < g.num_colors(); ++i) {
    const spectral::PerronResult p = spectral::perron_root(g.matrix(i));
    json item;
    item["color"] = i + 1;
    item["rho"] = number(p.rho);
    item["exact"] = p.is_exact_integer;
    if (p.is_exact_integer) item["exact_value"] = p.exact_value.str();
    item["lower"] = number(p.lower);
    item["upper"] = number(p.upper);
    json roots = json::array();
    for (double r : p.component_roots) roots.push_back(snap12(r));
    item["component_roots"] = std::move(roots);
    per_color.push_back(std::move(item));
  }
  out["per_color"] = std::move(per_color);
  out["rho"] = number(spectral::rho_graph(g));
  std::vector<ColorSet> requested;
  for (int i = 0; i < g.num_colors(); ++i) requested.push_back(ColorSet::of(g.num_colors(), {i}));
  requested.push_back(g.all_colors());
  out["entropy"] = to_json(g, spectral::entropy_report(g, requested));
  return out;
}

json part_json(const KGraphSkeleton&, const kms::SubharmonicSimplex& part) {
  json out;
  out["F"] = colors_json(part.f);
  out["kind"] = to_string(part.kind);
  json gens = json::array();
  for (const TraceVector& t : part.generators) gens.push_back(vector_json(t.values));
  out["generators"] = std::move(gens);
  out["reason_if_empty"] =
      part.empty() && part.reason != kms::EmptyReason::None ? json(to_string(part.reason)) : json(nullptr);
  return out;
}

json simplex_json(const KGraphSkeleton& g, const kms::Beta& beta,
                  const std::vector<kms::SubharmonicSimplex>& parts, kms::Algebra algebra) {
  json out;
  out["beta"] = number(beta.value);
  out["exp_beta"] = number(beta.exp_value);
  out["algebra"] = to_string(algebra);
  out["weights"] = weights_json(g);
  out["representation"] = "extreme-points";  // each simplex is their convex hull
  json list = json::array();
  for (const auto& part : parts) list.push_back(part_json(g, part));
  out["parts"] = std::move(list);
  out["beta_c_prime"] = number(spectral::lower_critical(g));
  out["beta_c"] = number(spectral::strong_entropy(g, g.all_colors()));
  return out;
}

json diagram_json(const KGraphSkeleton& g, const kms::PhaseDiagram& d) {
  json out;
  out["algebra"] = to_string(d.algebra);
  out["weights"] = weights_json(g);
  out["representation"] = "extreme-points";
  if (!g.unit_weights()) out["weighted_convention"] = "log-scale";
  out["beta_c_prime"] = number(d.beta_c_prime);
  out["beta_c"] = number(d.beta_c);
  out["transition_set"] = to_json(g, d.transitions)["values"];
  json points = json::array();
  for (const auto& p : d.points) {
    json item;
    item["lambda"] = number(p.transition.lambda);
    item["beta"] = number(p.transition.beta);
    item["positive_beta"] = p.positive_beta;
    json parts = json::array();
    for (const auto& part : p.parts) parts.push_back(part_json(g, part));
    item["parts"] = std::move(parts);
    points.push_back(std::move(item));
  }
  out["points"] = std::move(points);
  json intervals = json::array();
  for (const auto& iv : d.intervals) {
    json item;
    item["beta_lo"] = number(iv.beta_lo);
    item["beta_hi"] = iv.beta_hi ? json(snap12(*iv.beta_hi)) : json(nullptr);
    item["finite_generators"] = labels_of(g, iv.finite_generators);
    intervals.push_back(std::move(item));
  }
  out["intervals"] = std::move(intervals);
  return out;
}

json eval_json(const KGraphSkeleton& g, const kms::KMSVector& kv, const Multidegree& n,
               int vertex, double value) {
  json out;
  out["beta"] = number(kv.beta.value);
  out["exp_beta"] = number(kv.beta.exp_value);
  out["F"] = colors_json(kv.f);
  json deg = json::array();
  for (int e : n.entries) deg.push_back(e);
  out["degree"] = std::move(deg);
  out["vertex"] = g.label(vertex);
  out["value"] = number(value);
  out["m"] = vector_json(kv.m);
  out["c"] = number(kv.c);
  out["subgraph"] = labels_of(g, kv.subgraph);
  return out;
}

json series_json(const oracle::SeriesTrace& s) {
  json out;
  json terms = json::array();
  for (const auto& [k, v] : s.terms) {
    json item;
    item["k"] = k;
    item["value"] = number(v);
    terms.push_back(std::move(item));
  }
  out["terms"] = std::move(terms);
  out["limit_estimate"] = number(s.limit_estimate);
  out["converged"] = s.converged;
  return out;
}

std::string text(const ValidationReport& r) {
  std::ostringstream os;
  if (r.ok()) {
    os << "valid\n";
  } else {
    os << r.violations.size() << " violation(s):\n";
    for (const Violation& v : r.violations)
      os << "  [" << to_string(v.kind) << "] " << v.detail << "\n";
  }
  return os.str();
}

std::string text(const KGraphSkeleton& g, const spectral::TransitionSet& t) {
  std::ostringstream os;
  os << "transition set:";
  for (const auto& e : t.values) os << " " << format_g(e.lambda);
  os << "\n";
  for (const auto& e : t.values) {
    os << "  lambda = " << format_g(e.lambda);
    if (e.exact) os << " (exact " << e.exact_value.str() << ")";
    os << ", beta = " << (e.beta.finite() ? format_g(e.beta.value()) : "-inf");
    os << ", witness " << g.label(e.witness);
    os << (e.subharmonic ? ", subharmonic transition" : ", below 1: no transition") << "\n";
  }
  return os.str();
}

std::string spectrum_text(const KGraphSkeleton& g) {
  std::ostringstream os;
  os << g.num_vertices() << " vertices, " << g.num_colors() << " colours, weights:";
  for (double s : g.weights()) os << " " << format_g(s);
  os << "\n";
  for (int i = 0; i < g.num_colors(); ++i) {
    const spectral::PerronResult p = spectral::perron_root(g.matrix(i));
    os << "  colour " << (i + 1) << ": rho = " << format_g(p.rho);
    if (p.is_exact_integer) os << " (exact)";
    os << ", component roots:";
    for (double r : p.component_roots) os << " " << format_g(r);
    os << "\n";
  }
  os << "rho = " << format_g(spectral::rho_graph(g)) << "\n";
  const LogValue h = spectral::strong_entropy(g, g.all_colors());
  os << "strong entropy = " << (h.finite() ? format_g(h.value()) : "-inf") << "\n";
  os << "lower critical = " << format_g(spectral::lower_critical(g)) << "\n";
  return os.str();
}

std::string simplex_text(const KGraphSkeleton& g, const kms::Beta& beta,
                         const std::vector<kms::SubharmonicSimplex>& parts,
                         kms::Algebra algebra) {
  std::ostringstream os;
  os << "gauge-invariant equilibrium simplex at beta = " << format_g(beta.value)
     << " (e^beta = " << format_g(beta.exp_value) << ") for "
     << (algebra == kms::Algebra::Toeplitz ? "the Toeplitz algebra" : "the Cuntz-Krieger quotient")
     << "\n";
  for (const auto& part : parts) os << "  " << part_text(g, part) << "\n";
  return os.str();
}

std::string diagram_text(const KGraphSkeleton& g, const kms::PhaseDiagram& d) {
  std::ostringstream os;
  os << "phase diagram ("
     << (d.algebra == kms::Algebra::Toeplitz ? "Toeplitz" : "Cuntz-Krieger") << "): "
     << g.num_vertices() << " vertices, " << g.num_colors() << " colours\n";
  os << "weights:";
  for (double s : g.weights()) os << " " << format_g(s);
  if (!g.unit_weights()) os << "  (log-scale weighted convention)";
  os << "\n";
  os << "beta_c' = " << format_g(d.beta_c_prime) << "\n";
  os << "beta_c  = " << (d.beta_c.finite() ? format_g(d.beta_c.value()) : "-inf") << "\n";
  os << "transitions:";
  for (const auto& e : d.transitions.values)
    if (e.subharmonic) os << " log(" << format_g(e.lambda) << ")";
  os << "\n";

  // Walk intervals and points from the top down, the way the case list reads.
  struct Row {
    double sort_key;
    std::string line;
  };
  std::vector<Row> rows;
  for (const auto& iv : d.intervals) {
    std::ostringstream line;
    line << "* beta in (" << format_g(iv.beta_lo) << ", "
         << (iv.beta_hi ? format_g(*iv.beta_hi) : std::string("+inf")) << (iv.beta_hi ? "]" : ")")
         << ": finite type ";
    if (iv.finite_generators.empty()) {
      line << "empty";
    } else {
      line << "{ ";
      for (int v : iv.finite_generators.indices()) line << "d_" << g.label(v) << " ";
      line << "}";
    }
    rows.push_back({iv.beta_hi ? *iv.beta_hi : std::numeric_limits<double>::infinity(),
                    line.str()});
  }
  for (const auto& p : d.points) {
    std::ostringstream line;
    const double beta = p.transition.beta.finite() ? p.transition.beta.value() : 0.0;
    line << "* beta = log(" << format_g(p.transition.lambda) << ") = " << format_g(beta);
    if (!p.positive_beta) {
      line << ": outside beta > 0, no equilibrium point";
    } else {
      line << ":";
      for (const auto& part : p.parts) line << "\n    " << part_text(g, part);
    }
    rows.push_back({beta, line.str()});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.sort_key > b.sort_key;
  });
  for (const auto& r : rows) os << r.line << "\n";
  if (d.beta_c_prime > 0.0)
    os << "* beta in (0, " << format_g(d.beta_c_prime) << "): empty\n";
  return os.str();
}

}  // namespace kgraph::report
