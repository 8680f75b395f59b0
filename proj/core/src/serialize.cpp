#include "nilprob/serialize.hpp"

#include <functional>

namespace nilprob::serialize {

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const fieldlin::FpVector& v) {
  Json out = Json::array();
  for (auto c : v.coords()) out.push_back(static_cast<int>(c));
  return out;
}

Json to_json(const stats::StatReport& r) {
  Json j;
  j["statistic"] = r.statistic;
  if (r.kind == stats::StatReport::Kind::exact) {
    j["kind"] = "exact";
    j["value_num"] = r.exact ? r.exact->num() : 0;
    j["value_den"] = r.exact ? r.exact->den() : 1;
    j["value"] = r.estimate;
    j["samples"] = r.samples;
  } else {
    j["kind"] = "monte_carlo";
    j["estimate"] = r.estimate;
    j["ci_low"] = r.ci_low.value_or(0.0);
    j["ci_high"] = r.ci_high.value_or(1.0);
    j["confidence"] = r.confidence;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
  }
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

Json to_json(const structure::SeriesReport& r) {
  Json j;
  j["kind"] = structure::kind_name(r.kind);
  j["orders"] = r.orders();
  j["stabilized_at"] = r.stabilized_at;
  return j;
}

Json to_json(const structure::ProbeWitness& w) {
  Json basis = Json::array();
  for (const auto& v : w.H_basis) basis.push_back(to_json(v));
  Json j;
  j["codim"] = w.codim;
  j["H_basis"] = std::move(basis);
  j["found"] = w.found();
  if (w.witness) {
    const auto& [x, y, z, wv] = *w.witness;
    j["witness"] = {{"x", to_json(x)}, {"y", to_json(y)}, {"z", to_json(z)}, {"w", to_json(wv)}};
    j["bracket"] = static_cast<int>(w.bracket.value);
  } else {
    j["reason"] = w.reason;
  }
  return j;
}

Json to_json(const structure::NeumannResult& r) {
  Json j;
  j["C"] = r.C;
  j["hypothesis_probability"] = to_json(r.hypothesis_probability);
  j["hypothesis_holds"] = r.hypothesis_holds;
  if (!r.hypothesis_holds) return j;
  j["X"] = r.X;
  j["X_B"] = r.X_B;
  j["H"] = r.H;
  j["K"] = r.K;
  j["index_H"] = r.index_H;
  j["index_K"] = r.index_K;
  j["D"] = r.D;
  j["commutators"] = r.commutators;
  j["separation"] = r.separation;
  j["centers"] = r.centers;
  j["balls"] = r.balls;
  return j;
}

Json to_json(const structure::RadiusReport& r) {
  Json j;
  j["radius"] = r.radius;
  j["bound"] = r.bound;
  j["generated_order"] = r.generated_order;
  j["within_bound"] = r.within_bound();
  return j;
}

Json to_json(const bias::DenseMultilinear& m) {
  Json j;
  j["dims"] = m.dims();
  j["codim"] = m.codim();
  Json c = Json::array();
  for (auto v : m.coeffs()) c.push_back(static_cast<int>(v));
  j["coeffs"] = std::move(c);
  return j;
}

Json to_json(const bias::StructuredExpression& e) {
  Json terms = Json::array();
  for (const auto& t : e.terms()) {
    Json inners = Json::array();
    for (const auto& in : t.inners) {
      Json ij = to_json(in.map);
      ij["slots"] = in.slots;
      inners.push_back(std::move(ij));
    }
    Json tj;
    tj["slots"] = t.index_set();
    tj["free_slots"] = t.free_slots;
    tj["inner_coeffs"] = std::move(inners);
    tj["outer_coeffs"] = to_json(t.outer);
    terms.push_back(std::move(tj));
  }
  Json j;
  j["p"] = e.p();
  j["dims"] = e.dims();
  j["codim"] = e.codim();
  j["layout"] = "row-major, output coordinate first, then slots in order";
  j["rank"] = e.rank();
  j["terms"] = std::move(terms);
  return j;
}

Json to_json(const bias::VerifyResult& r) {
  Json j;
  j["verified"] = r.verified;
  j["mode"] = mode_name(r.mode);
  j["points"] = r.points;
  if (r.counterexample) {
    Json ce = Json::array();
    for (const auto& v : *r.counterexample) ce.push_back(to_json(v));
    j["counterexample"] = std::move(ce);
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

std::string mode_name(stats::CoverMode mode) {
  return mode == stats::CoverMode::exhaustive ? "exhaustive" : "sampled";
}

std::string mode_name(bias::Mode mode) { return mode == bias::Mode::exhaustive ? "exhaustive" : "sampled"; }

void write_json(std::ostream& os, const Json& j) { os << j.dump(2) << '\n'; }

namespace {

void flatten(const Json& j, const std::string& prefix,
             const std::function<void(const std::string&, const std::string&)>& emit) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), emit);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), emit);
    if (j.empty()) emit(prefix, "[]");
  } else if (j.is_string()) {
    emit(prefix, j.get<std::string>());
  } else {
    emit(prefix, j.dump());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_csv(std::ostream& os, std::string_view command, const Json& j) {
  os << kCsvHeader << '\n';
  const auto cmd = csv_field(std::string(command));
  flatten(j, "", [&](const std::string& key, const std::string& value) {
    os << kSchemaVersion << ',' << cmd << ',' << csv_field(key) << ',' << csv_field(value) << '\n';
  });
}

void write_text(std::ostream& os, const Json& j) {
  flatten(j, "", [&](const std::string& key, const std::string& value) { os << key << ": " << value << '\n'; });
}

}  // namespace nilprob::serialize
