#pragma once

// JSON, CSV and plain-text renderings of the library's report types.
//
// JSON objects keep insertion order so that identical inputs produce
// byte-identical output. The only nondeterministic field anywhere is
// "elapsed_ms".
//
// CSV output flattens a JSON document into rows with the fixed header
//   schema,command,key,value
// where key is the dotted path to a leaf ("report.value_num",
// "terms.0.slots.1").

#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "nilprob/bias.hpp"
#include "nilprob/groups.hpp"
#include "nilprob/stats.hpp"
#include "nilprob/structure.hpp"

namespace nilprob::serialize {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kCsvHeader = "schema,command,key,value";

Json to_json(const Rational& r);
Json to_json(const fieldlin::FpVector& v);
Json to_json(const stats::StatReport& r);
Json to_json(const structure::SeriesReport& r);
Json to_json(const structure::ProbeWitness& w);
Json to_json(const structure::NeumannResult& r);
Json to_json(const structure::RadiusReport& r);
Json to_json(const bias::DenseMultilinear& m);
Json to_json(const bias::StructuredExpression& e);
Json to_json(const bias::VerifyResult& r);

inline Json element_json(const groups::GroupElement& g) { return groups::format_group_element(g); }
inline Json element_json(groups::Index i) { return i; }

std::string mode_name(stats::CoverMode mode);
std::string mode_name(bias::Mode mode);

template <class E>
Json to_json(const stats::CoveringWitness<E>& w) {
  Json S = Json::array();
  for (const auto& s : w.S) S.push_back(element_json(s));
  Json j;
  j["n"] = w.n;
  j["S"] = std::move(S);
  j["mode"] = mode_name(w.mode);
  j["checked"] = w.checked;
  j["verified"] = w.verified();
  j["verified_fraction"] = to_json(w.verified_fraction);
  j["counterexample"] = w.counterexample ? element_json(*w.counterexample) : Json(nullptr);
  return j;
}

template <class E>
Json to_json(const stats::MinimalCover<E>& c) {
  Json j;
  j["witness"] = to_json(c.witness);
  j["size"] = c.witness.S.size();
  j["greedy_size"] = c.greedy_size;
  j["exact_size"] = c.exact_size ? Json(*c.exact_size) : Json(nullptr);
  j["ball_classes"] = c.ball_classes;
  return j;
}

/// Writes a JSON value with two-space indentation and a trailing newline.
void write_json(std::ostream& os, const Json& j);
/// Header plus one row per leaf of j.
void write_csv(std::ostream& os, std::string_view command, const Json& j);
/// "key: value" per leaf, same flattening as CSV.
void write_text(std::ostream& os, const Json& j);

}  // namespace nilprob::serialize
