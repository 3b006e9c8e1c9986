#pragma once

#include "kgraph/kms.hpp"
#include "kgraph/oracle.hpp"
#include "kgraph/spectral.hpp"

#include <json.hpp>

#include <string>

namespace kgraph::report {

using json = nlohmann::ordered_json;

/// Doubles are snapped through "%.12g" before serialization so reports are
/// reproducible byte for byte.
double snap12(double x);
std::string format_g(double x);
json number(double x);
json number(const LogValue& v);  // null for -inf

json to_json(const ValidationReport& r);
json to_json(const KGraphSkeleton& g, const spectral::TransitionSet& t);
json to_json(const KGraphSkeleton& g, const spectral::EntropyReport& e);
json spectrum_json(const KGraphSkeleton& g);
json part_json(const KGraphSkeleton& g, const kms::SubharmonicSimplex& part);
json simplex_json(const KGraphSkeleton& g, const kms::Beta& beta,
                  const std::vector<kms::SubharmonicSimplex>& parts, kms::Algebra algebra);
json diagram_json(const KGraphSkeleton& g, const kms::PhaseDiagram& d);
json eval_json(const KGraphSkeleton& g, const kms::KMSVector& kv, const Multidegree& n,
               int vertex, double value);
json series_json(const oracle::SeriesTrace& s);

std::string text(const ValidationReport& r);
std::string text(const KGraphSkeleton& g, const spectral::TransitionSet& t);
std::string spectrum_text(const KGraphSkeleton& g);
std::string simplex_text(const KGraphSkeleton& g, const kms::Beta& beta,
                         const std::vector<kms::SubharmonicSimplex>& parts,
                         kms::Algebra algebra);
std::string diagram_text(const KGraphSkeleton& g, const kms::PhaseDiagram& d);

std::string dump(const json& j);

}  // namespace kgraph::report
