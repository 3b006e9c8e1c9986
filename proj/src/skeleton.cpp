#include "kgraph/skeleton.hpp"

#include <json.hpp>

#include <deque>
#include <fstream>
#include <sstream>

namespace kgraph {

std::string to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::ParseError: return "ParseError";
    case Violation::Kind::NonSquare: return "NonSquare";
    case Violation::Kind::DimensionMismatch: return "DimensionMismatch";
    case Violation::Kind::NegativeEntry: return "NegativeEntry";
    case Violation::Kind::NonCommuting: return "NonCommuting";
    case Violation::Kind::NonpositiveWeight: return "NonpositiveWeight";
  }
  return "Unknown";
}

KGraphSkeleton KGraphSkeleton::with_weights(std::vector<double> weights) const {
  if (static_cast<int>(weights.size()) != num_colors())
    throw std::invalid_argument("with_weights: need one weight per colour");
  for (double s : weights)
    if (!(s > 0.0)) throw std::invalid_argument("with_weights: weights must be positive");
  KGraphSkeleton g = *this;
  g.weights_ = std::move(weights);
  return g;
}

std::variant<KGraphSkeleton, ValidationReport> validate_skeleton(const RawSkeleton& raw) {
  ValidationReport report;
  const int n_colors = raw.num_colors;
  if (n_colors <= 0 || static_cast<int>(raw.matrices.size()) != n_colors) {
    report.violations.push_back({Violation::Kind::ParseError, -1, -1, -1, -1,
                                 "number of matrices does not match colour count"});
    return report;
  }

  int dim = -1;
  for (int i = 0; i < n_colors; ++i) {
    const IntMatrix& m = raw.matrices[i];
    if (!m.square()) {
      std::ostringstream os;
      os << "matrix " << (i + 1) << " is " << m.rows() << "x" << m.cols();
      report.violations.push_back({Violation::Kind::NonSquare, i, -1, -1, -1, os.str()});
      continue;
    }
    if (dim < 0) dim = m.rows();
    if (m.rows() != dim) {
      std::ostringstream os;
      os << "matrix " << (i + 1) << " has dimension " << m.rows() << ", expected " << dim;
      report.violations.push_back(
          {Violation::Kind::DimensionMismatch, i, -1, -1, -1, os.str()});
    }
  }
  if (!report.ok()) return report;

  if (static_cast<int>(raw.vertex_labels.size()) != dim) {
    report.violations.push_back({Violation::Kind::ParseError, -1, -1, -1, -1,
                                 "vertex list length does not match matrix dimension"});
    return report;
  }

  for (int i = 0; i < n_colors; ++i)
    for (int t = 0; t < dim; ++t)
      for (int s = 0; s < dim; ++s)
        if (raw.matrices[i].at(t, s) < 0) {
          std::ostringstream os;
          os << "matrix " << (i + 1) << " entry (" << raw.vertex_labels[t] << ","
             << raw.vertex_labels[s] << ") = " << raw.matrices[i].at(t, s);
          report.violations.push_back({Violation::Kind::NegativeEntry, i, -1, t, s, os.str()});
        }

  // Exact integer commutation check, every violated pair reported with the
  // first offending entry.
  for (int i = 0; i < n_colors; ++i)
    for (int j = i + 1; j < n_colors; ++j) {
      const IntMatrix ij = raw.matrices[i] * raw.matrices[j];
      const IntMatrix ji = raw.matrices[j] * raw.matrices[i];
      for (int t = 0; t < dim && true; ++t) {
        bool found = false;
        for (int s = 0; s < dim; ++s)
          if (ij.at(t, s) != ji.at(t, s)) {
            std::ostringstream os;
            os << "colours (" << (i + 1) << "," << (j + 1) << ") do not commute: entry ("
               << raw.vertex_labels[t] << "," << raw.vertex_labels[s]
               << ") differs: " << ij.at(t, s) << " vs " << ji.at(t, s);
            report.violations.push_back(
                {Violation::Kind::NonCommuting, i, j, t, s, os.str()});
            found = true;
            break;
          }
        if (found) break;
      }
    }

  std::vector<double> weights = raw.weights;
  if (weights.empty()) weights.assign(n_colors, 1.0);
  if (static_cast<int>(weights.size()) != n_colors) {
    report.violations.push_back({Violation::Kind::ParseError, -1, -1, -1, -1,
                                 "weights length does not match colour count"});
  } else {
    for (int i = 0; i < n_colors; ++i)
      if (!(weights[i] > 0.0)) {
        std::ostringstream os;
        os << "weight for colour " << (i + 1) << " is " << weights[i];
        report.violations.push_back(
            {Violation::Kind::NonpositiveWeight, i, -1, -1, -1, os.str()});
      }
  }

  if (!report.ok()) return report;

  KGraphSkeleton g;
  g.labels_ = raw.vertex_labels;
  g.matrices_ = raw.matrices;
  g.weights_ = std::move(weights);
  return g;
}

IntMatrix degree_matrix(const KGraphSkeleton& g, const Multidegree& n) {
  if (n.num_colors() != g.num_colors())
    throw std::invalid_argument("degree_matrix: multidegree has wrong length");
  if (!n.valid()) throw std::invalid_argument("degree_matrix: negative entry");
  IntMatrix result = IntMatrix::identity(g.num_vertices());
  for (int i = 0; i < g.num_colors(); ++i)
    if (n.entries[i] > 0) result = result * g.matrix(i).pow(n.entries[i]);
  return result;
}

VertexSet forward_closure(const KGraphSkeleton& g, const VertexSet& seed,
                          const ColorSet& colors) {
  if (seed.empty()) throw EmptyInputError();
  VertexSet closed = seed;
  std::deque<int> frontier;
  for (int v : seed.indices()) frontier.push_back(v);
  while (!frontier.empty()) {
    const int s = frontier.front();
    frontier.pop_front();
    for (int i : colors.members())
      for (int t = 0; t < g.num_vertices(); ++t)
        if (!closed.contains(t) && g.matrix(i).at(t, s) != 0) {
          closed.insert(t);
          frontier.push_back(t);
        }
  }
  return closed;
}

KGraphSkeleton restrict_to(const KGraphSkeleton& g, const VertexSet& w) {
  for (int i = 0; i < g.num_colors(); ++i)
    for (int s : w.indices())
      for (int t = 0; t < g.num_vertices(); ++t)
        if (!w.contains(t) && g.matrix(i).at(t, s) != 0) {
          std::ostringstream os;
          os << "edge of colour " << (i + 1) << " leaves the set: " << g.label(s) << " -> "
             << g.label(t);
          throw NotForwardClosedError(i, s, t, os.str());
        }

  RawSkeleton raw;
  raw.num_colors = g.num_colors();
  for (int v : w.indices()) raw.vertex_labels.push_back(g.label(v));
  for (int i = 0; i < g.num_colors(); ++i) raw.matrices.push_back(g.matrix(i).submatrix(w));
  raw.weights = g.weights();
  auto result = validate_skeleton(raw);
  // Commutation descends to sink subgraphs; a failure here is a logic error.
  if (std::holds_alternative<ValidationReport>(result))
    throw std::logic_error("restrict_to: restricted matrices failed re-validation");
  return std::get<KGraphSkeleton>(std::move(result));
}

VertexSet f_sources(const KGraphSkeleton& g, const ColorSet& f) {
  if (f.is_empty()) throw EmptyColorSetError();
  VertexSet out(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    bool source = true;
    for (int i : f.members())
      if (!g.matrix(i).row_is_zero(v)) {
        source = false;
        break;
      }
    if (source) out.insert(v);
  }
  return out;
}

VertexSet eventual_f_sources(const KGraphSkeleton& g, const ColorSet& f) {
  if (f.is_empty()) throw EmptyColorSetError();
  IntMatrix prod = IntMatrix::identity(g.num_vertices());
  for (int i : f.members()) prod = prod * g.matrix(i);
  const IntMatrix d = prod.pow(g.num_vertices());
  VertexSet out(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v)
    if (d.row_is_zero(v)) out.insert(v);
  return out;
}

VertexSet f_tracing(const KGraphSkeleton& g, const ColorSet& f) {
  if (f.is_empty()) throw EmptyColorSetError();
  const VertexSet sources = f_sources(g, f);
  if (sources.empty()) return g.all_vertices();
  const VertexSet touched = forward_closure(g, sources, f.complement());
  return touched.complement();
}

namespace {

std::variant<RawSkeleton, ValidationReport> parse_json(const nlohmann::json& j,
                                                       const std::string& origin) {
  ValidationReport report;
  auto fail = [&](const std::string& msg) {
    report.violations.push_back(
        {Violation::Kind::ParseError, -1, -1, -1, -1, origin + ": " + msg});
    return report;
  };

  if (!j.is_object()) return fail("top level must be an object");
  if (!j.contains("colors") || !j["colors"].is_number_integer())
    return fail("field 'colors' must be an integer");
  if (!j.contains("vertices") || !j["vertices"].is_array())
    return fail("field 'vertices' must be an array of labels");
  if (!j.contains("matrices") || !j["matrices"].is_array())
    return fail("field 'matrices' must be an array of matrices");

  RawSkeleton raw;
  raw.num_colors = j["colors"].get<int>();
  if (raw.num_colors <= 0) return fail("'colors' must be positive");
  for (const auto& v : j["vertices"]) {
    if (!v.is_string()) return fail("vertex labels must be strings");
    raw.vertex_labels.push_back(v.get<std::string>());
  }
  if (raw.vertex_labels.empty()) return fail("vertex list is empty");

  const auto& mats = j["matrices"];
  if (static_cast<int>(mats.size()) != raw.num_colors)
    return fail("'matrices' must hold one matrix per colour");
  for (int i = 0; i < raw.num_colors; ++i) {
    const auto& rows = mats[i];
    if (!rows.is_array() || rows.empty()) return fail("matrix must be a nonempty 2d array");
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows[0].size());
    IntMatrix m(r, c);
    for (int t = 0; t < r; ++t) {
      if (!rows[t].is_array() || static_cast<int>(rows[t].size()) != c) {
        std::ostringstream os;
        os << "matrix " << (i + 1) << " row " << t << " has ragged length";
        return fail(os.str());
      }
      for (int s = 0; s < c; ++s) {
        const auto& e = rows[t][s];
        if (!e.is_number_integer()) {
          std::ostringstream os;
          os << "matrix " << (i + 1) << " entry [" << t << "][" << s
             << "] is not an integer";
          return fail(os.str());
        }
        m.at(t, s) = BigInt(e.get<long long>());
      }
    }
    raw.matrices.push_back(std::move(m));
  }

  if (j.contains("weights")) {
    if (!j["weights"].is_array()) return fail("'weights' must be an array of numbers");
    for (const auto& w : j["weights"]) {
      if (!w.is_number()) return fail("'weights' must be an array of numbers");
      raw.weights.push_back(w.get<double>());
    }
  }
  return raw;
}

}  // namespace

std::variant<RawSkeleton, ValidationReport> parse_raw_skeleton(const std::string& text,
                                                               const std::string& origin) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    ValidationReport report;
    report.violations.push_back(
        {Violation::Kind::ParseError, -1, -1, -1, -1, origin + ": malformed JSON"});
    return report;
  }
  return parse_json(j, origin);
}

std::variant<KGraphSkeleton, ValidationReport> load_skeleton(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ValidationReport report;
    report.violations.push_back(
        {Violation::Kind::ParseError, -1, -1, -1, -1, path + ": cannot open file"});
    return report;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto raw = parse_raw_skeleton(buffer.str(), path);
  if (std::holds_alternative<ValidationReport>(raw))
    return std::get<ValidationReport>(std::move(raw));
  return validate_skeleton(std::get<RawSkeleton>(raw));
}

}  // namespace kgraph
