#include "nilprob/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "nilprob/algebra.hpp"
#include "nilprob/bias.hpp"
#include "nilprob/error.hpp"
#include "nilprob/fieldlin.hpp"
#include "nilprob/groups.hpp"
#include "nilprob/serialize.hpp"
#include "nilprob/stats.hpp"
#include "nilprob/structure.hpp"

namespace nilprob::cli {

using serialize::Json;

namespace {

/// Carries the partial report so the counterexample still reaches the output.
class VerificationFailure : public std::runtime_error {
 public:
  VerificationFailure(const std::string& what, Json report) : std::runtime_error(what), report_(std::move(report)) {}
  const Json& report() const noexcept { return report_; }

 private:
  Json report_;
};

std::string format_name(Format f) {
  switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    case Format::text: return "text";
  }
  return "json";
}

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  if (c.table) {
    j["table"] = *c.table;
  } else {
    j["p"] = c.p;
    j["n"] = c.n;
    j["form"] = c.form ? *c.form : "hyperbolic:" + std::to_string(c.p) + ":" + std::to_string(c.n);
  }
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["caps"] = {{"exact", c.caps.exact}, {"pairs", c.caps.pairs}, {"orbit", c.caps.orbit},
               {"exhaustive", c.caps.exhaustive}};
  j["threads"] = c.threads;
  j["format"] = format_name(c.format);
  return j;
}

algebra::ParamsPtr family_params(const RunConfig& c) {
  if (c.form) return algebra::make_params(fieldlin::load_form(*c.form));
  fieldlin::require_supported_prime(c.p);
  if (c.n < 1) throw InvalidArgument("--n must be at least 1");
  return algebra::make_params(fieldlin::hyperbolic_form(c.p, c.n));
}

Json family_info(const groups::AlgebraGroup& G) {
  Json j;
  j["source"] = "family";
  j["p"] = G.p();
  j["dim_V"] = G.params()->d();
  j["log_p_order"] = G.dimension();
  j["order"] = G.order_fits() ? Json(G.order()) : Json(nullptr);
  return j;
}

Json table_info(const groups::TableGroup& G, const std::string& path) {
  Json j;
  j["source"] = "table";
  j["path"] = path;
  j["order"] = G.order();
  return j;
}

/// Calls fn(group, info) with the group chosen by the config.
template <class Fn>
auto with_group(const RunConfig& c, Fn&& fn) {
  if (c.table) {
    const auto G = groups::load_cayley_table(*c.table);
    return fn(G, table_info(G, *c.table));
  }
  const groups::AlgebraGroup G(family_params(c), c.caps.orbit);
  return fn(G, family_info(G));
}

// ---------------------------------------------------------------------------

Json cmd_family(const RunConfig& c) {
  const auto params = family_params(c);
  const groups::AlgebraGroup G(params, c.caps.orbit);
  Json j;
  j["group"] = family_info(G);
  j["generators"] = G.generators().size();

  // Upper bound: R5 = 0 in the grading, so every 5-fold commutator of
  // elements of 1 + L1 is trivial. Lower bound: an explicit nontrivial
  // 4-fold commutator.
  const std::vector<fieldlin::FpVector> V = [&] {
    std::vector<fieldlin::FpVector> out;
    for (std::size_t i = 0; i < params->d(); ++i) out.push_back(fieldlin::FpVector::unit(params->p(), params->d(), i));
    return out;
  }();
  const auto probe = structure::class3_subspace_probe(*params, V);
  bool witness_nontrivial = false;
  if (probe.found()) {
    std::vector<groups::GroupElement> elems;
    for (const auto& v : *probe.witness) elems.emplace_back(algebra::AlgebraElement::from_r1(params, v));
    const auto comm = groups::long_commutator(G, std::span<const groups::GroupElement>(elems));
    witness_nontrivial = !comm.is_identity();
    j["witness_commutator"] = groups::format_group_element(comm);
  }
  j["witness"] = serialize::to_json(probe);

  std::optional<std::size_t> exact_class;
  if (G.order_fits() && G.order() <= structure::kDefaultSeriesCap) {
    exact_class = structure::nilpotency_class(groups::to_table_group(G, structure::kDefaultSeriesCap));
  }
  const std::size_t cls = exact_class ? *exact_class : (witness_nontrivial ? 4 : 0);
  j["class"] = cls;
  j["class_method"] = exact_class ? "lower_central_series" : "grading_bound_and_witness";
  if (cls != 4) throw VerificationFailure("family group does not have class 4", j);
  return j;
}

Json cmd_stat(const RunConfig& c, unsigned k) {
  return with_group(c, [&](const auto& G, Json info) {
    Json j;
    j["group"] = std::move(info);
    j["mode"] = c.exact ? "exact" : "monte_carlo";
    stats::StatReport r;
    if (c.exact) {
      const stats::ExactOptions opts{c.caps.exact, c.threads};
      r = k == 1 ? stats::d1_exact(G, opts) : stats::d2_exact(G, opts);
    } else {
      r = stats::dk_monte_carlo(G, k, c.samples, c.seed, c.threads);
    }
    j["report"] = serialize::to_json(r);
    return j;
  });
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

Json cmd_cover(const RunConfig& c) {
  if (c.n_bound < 1) throw InvalidArgument("cover: --n-bound must be at least 1");
  return with_group(c, [&](const auto& G, Json info) {
    using E = typename std::decay_t<decltype(G)>::element_type;
    Json j;
    j["group"] = std::move(info);
    if (c.minimal) {
      const auto m = stats::covering_minimal_S(G, c.n_bound, c.caps.pairs);
      j["minimal"] = serialize::to_json(m);
      if (!m.witness.verified()) throw VerificationFailure("minimal cover failed its own certificate", j);
      return j;
    }
    std::vector<E> S;
    if (c.s_spec == "identity") {
      S.push_back(G.identity());
    } else {
      for (const auto& line : read_lines(c.s_spec)) {
        if constexpr (std::is_same_v<E, groups::Index>) {
          const auto v = std::stoull(line);
          if (v >= G.order()) throw InvalidArgument("S element out of range: " + line);
          S.push_back(static_cast<groups::Index>(v));
        } else {
          S.push_back(groups::parse_group_element(G.params(), line));
        }
      }
    }
    stats::CoverOptions opts;
    opts.mode = c.sampled ? stats::CoverMode::sampled : stats::CoverMode::exhaustive;
    opts.pair_cap = c.caps.pairs;
    opts.samples = c.samples;
    opts.seed = c.seed;
    const auto w = stats::covering_check(G, c.n_bound, std::span<const E>(S), opts);
    j["witness"] = serialize::to_json(w);
    if (!w.verified()) throw VerificationFailure("covering condition fails", j);
    return j;
  });
}

Json cmd_probe(const RunConfig& c) {
  const auto params = family_params(c);
  const auto p = params->p();
  const auto d = params->d();
  Json j;
  j["p"] = p;
  j["dim_V"] = d;
  if (!c.exhaustive_hyperplanes) {
    std::vector<fieldlin::FpVector> V;
    for (std::size_t i = 0; i < d; ++i) V.push_back(fieldlin::FpVector::unit(p, d, i));
    const auto w = structure::class3_subspace_probe(*params, V);
    j["probe"] = serialize::to_json(w);
    if (!w.found()) throw VerificationFailure("no quadruple-bracket witness in V", j);
    return j;
  }
  const auto hs = fieldlin::hyperplanes(p, d);
  const bool applicable = 2 * 1 + 1 < d;
  std::size_t found = 0;
  Json results = Json::array();
  for (const auto& H : hs) {
    const auto w = structure::class3_subspace_probe(*params, H);
    found += w.found();
    results.push_back(serialize::to_json(w));
  }
  j["mode"] = "exhaustive";
  j["hyperplanes"] = hs.size();
  j["applicable"] = applicable;
  j["witnessed"] = found;
  j["results"] = std::move(results);
  if (applicable && found != hs.size()) throw VerificationFailure("some hyperplane has no witness", j);
  return j;
}

Json cmd_series(const RunConfig& c) {
  if (!c.table) throw InvalidArgument("series requires --table");
  const auto G = groups::load_cayley_table(*c.table);
  Json j;
  j["group"] = table_info(G, *c.table);
  j["lower_central"] = serialize::to_json(structure::lower_central_series(G));
  j["upper_central"] = serialize::to_json(structure::upper_central_series(G));
  j["derived"] = serialize::to_json(structure::derived_series(G));
  const auto cls = structure::nilpotency_class(G);
  const auto dl = structure::derived_length(G);
  const auto engel = structure::engel_degree(G);
  j["nilpotency_class"] = cls ? Json(*cls) : Json(nullptr);
  j["derived_length"] = dl ? Json(*dl) : Json(nullptr);
  j["engel_degree"] = engel ? Json(*engel) : Json(nullptr);
  if (c.baer_s > 0 || c.baer_t > 0) {
    const auto [a, b] = structure::baer_indices(G, c.baer_s, c.baer_t);
    j["baer"] = {{"s", c.baer_s}, {"t", c.baer_t}, {"index_gamma_s", a}, {"index_gamma_s1", b}};
  }
  return j;
}

Json cmd_neumann(const RunConfig& c) {
  if (!c.table) throw InvalidArgument("neumann requires --table");
  const auto G = groups::load_cayley_table(*c.table);
  structure::Seminorm norm;
  if (c.norm == "discrete") {
    norm = structure::discrete_norm(G);
  } else if (c.norm == "conjugacy") {
    norm = structure::conjugacy_class_norm(G);
  } else {
    throw InvalidArgument("--norm must be discrete or conjugacy");
  }
  Json j;
  j["group"] = table_info(G, *c.table);
  j["norm"] = norm.name;
  j["result"] = serialize::to_json(structure::neumann_extract(G, norm, c.C));
  return j;
}

Json cmd_bias(const RunConfig& c) {
  if (c.verify_quad == c.trilinear_bound) {
    throw InvalidArgument("bias: give exactly one of --verify-quad and --trilinear-bound");
  }
  const auto params = family_params(c);
  bias::EvalOptions opts;
  opts.mode = c.sampled ? bias::Mode::sampled : bias::Mode::exhaustive;
  opts.cap = c.caps.exhaustive;
  opts.samples = c.samples;
  opts.seed = c.seed;
  opts.threads = c.threads;
  Json j;
  j["p"] = params->p();
  j["dim_V"] = params->d();
  if (c.verify_quad) {
    const auto expr = bias::family_quad_expression(params);
    const auto r = bias::verify_expression(expr, bias::lie4_map(params), opts);
    j["expression"] = serialize::to_json(expr);
    j["verification"] = serialize::to_json(r);
    if (!r.verified) throw VerificationFailure("quadrilinear certificate has a counterexample", j);
    return j;
  }
  const auto expr = bias::family_tri_expression(params);
  const auto bound = bias::trilinear_lower_bound(expr);
  const auto report = bias::bias_probability(bias::lie3_map(params), opts);
  j["expression"] = serialize::to_json(expr);
  j["lower_bound"] = serialize::to_json(bound);
  j["bias"] = serialize::to_json(report);
  const bool ok = report.exact ? *report.exact >= bound : report.ci_high.value_or(1.0) >= bound.to_double();
  j["consistent"] = ok;
  if (!ok) throw VerificationFailure("bias below the certified lower bound", j);
  return j;
}

Json dispatch(const RunConfig& c) {
  if (c.command == "family") return cmd_family(c);
  if (c.command == "d1") return cmd_stat(c, 1);
  if (c.command == "d2") return cmd_stat(c, 2);
  if (c.command == "cover") return cmd_cover(c);
  if (c.command == "probe-class3") return cmd_probe(c);
  if (c.command == "series") return cmd_series(c);
  if (c.command == "neumann") return cmd_neumann(c);
  if (c.command == "bias") return cmd_bias(c);
  throw InvalidArgument("unknown command: " + c.command);
}

void emit(const RunConfig& c, const Json& doc, std::ostream& os) {
  switch (c.format) {
    case Format::json: serialize::write_json(os, doc); break;
    case Format::csv: serialize::write_csv(os, c.command, doc); break;
    case Format::text: serialize::write_text(os, doc); break;
  }
}

}  // namespace

unsigned resolve_threads(std::optional<unsigned> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("NILPROB_THREADS")) {
    try {
      const auto v = std::stoul(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Json doc;
  doc["schema"] = serialize::kSchemaVersion;
  doc["config"] = config_json(config);
  int code = kOk;
  try {
    doc["result"] = dispatch(config);
    doc["status"] = "ok";
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    doc["result"] = e.report();
    doc["status"] = "verification_failed";
    doc["message"] = e.what();
    code = kVerificationFailed;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (config.output) {
    std::ofstream file(*config.output);
    if (!file) {
      err << "error: cannot write " << *config.output << '\n';
      return kUsage;
    }
    emit(config, doc, file);
  } else {
    emit(config, doc, out);
  }
  return code;
}

ParseResult parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nilpotency statistics, covering checks and structural probes for finite groups", "nilprob"};
  app.require_subcommand(1);

  RunConfig c;
  std::optional<unsigned> threads;
  std::string format = "json";

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--samples", c.samples, "Monte Carlo / sampled-mode sample count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "RNG seed (default 1852402800)");
    sub->add_option("--threads", threads, "worker threads (else NILPROB_THREADS, else all cores)");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--output", c.output, "write the report to this file instead of stdout");
    sub->add_option("--cap", c.caps.exact, "group-order cap for exact statistics (0: default)");
    sub->add_option("--pair-cap", c.caps.pairs, "|G|^2 cap for exhaustive commutator enumeration");
    sub->add_option("--orbit-cap", c.caps.orbit, "conjugacy orbit cap");
    sub->add_option("--exhaustive-cap", c.caps.exhaustive, "domain-size cap for exhaustive bias checks");
  };
  const auto add_family = [&](CLI::App* sub) {
    sub->add_flag("--family", c.family, "use the algebra family group (default unless --table)");
    sub->add_option("--p", c.p, "prime (2, 3, 5 or 7)");
    sub->add_option("--n", c.n, "family parameter: dim V = 2n for the hyperbolic form");
    sub->add_option("--form", c.form, "form file or hyperbolic:p:n");
  };
  const auto add_table = [&](CLI::App* sub) {
    sub->add_option("--table", c.table, "Cayley table file")->check(CLI::ExistingFile);
  };

  auto* family = app.add_subcommand("family", "build the family group and report order and class");
  add_family(family);
  add_common(family);

  for (const char* name : {"d1", "d2"}) {
    auto* sub = app.add_subcommand(name, std::string("degree of nilpotency statistic ") + name);
    add_family(sub);
    add_table(sub);
    add_common(sub);
    auto* ex = sub->add_flag("--exact", "exact value (default)");
    auto* mc = sub->add_flag("--mc", "Monte Carlo estimate with a 99% interval");
    ex->excludes(mc);
    sub->callback([&c, mc] { c.exact = mc->count() == 0; });
  }

  auto* cover = app.add_subcommand("cover", "check Comm(G, G) within B S with B = {x : |x^G| <= n-bound}");
  add_family(cover);
  add_table(cover);
  add_common(cover);
  cover->add_option("--n-bound", c.n_bound, "class-size bound defining B")->required();
  auto* s_opt = cover->add_option("--s", c.s_spec, "'identity' (default)");
  auto* s_file = cover->add_option("--s-file", c.s_spec, "file with one element of S per line");
  auto* minimal = cover->add_flag("--minimal", c.minimal, "search for a small S among commutators");
  s_opt->excludes(s_file);
  minimal->excludes(s_opt)->excludes(s_file);
  std::string cover_mode = "exhaustive";
  cover->add_option("--mode", cover_mode, "exhaustive or sampled")->check(CLI::IsMember({"exhaustive", "sampled"}));

  auto* probe = app.add_subcommand("probe-class3", "search for a nonzero quadruple bracket");
  add_family(probe);
  add_common(probe);
  probe->add_flag("--exhaustive-hyperplanes", c.exhaustive_hyperplanes, "run the probe on every hyperplane of V");

  auto* series = app.add_subcommand("series", "central and derived series, Engel degree, Baer indices");
  add_table(series);
  add_common(series);
  series->add_option("--s", c.baer_s, "Baer index s (with --t)");
  series->add_option("--t", c.baer_t, "Baer index t (with --s)");

  auto* neumann = app.add_subcommand("neumann", "constructive extraction for an invariant seminorm");
  add_table(neumann);
  add_common(neumann);
  neumann->add_option("--norm", c.norm, "discrete or conjugacy")->check(CLI::IsMember({"discrete", "conjugacy"}));
  neumann->add_option("--C", c.C, "commutator norm threshold (>= 1)");

  auto* bias = app.add_subcommand("bias", "multilinear bias certificates for the family");
  add_family(bias);
  add_common(bias);
  bias->add_flag("--verify-quad", c.verify_quad, "verify the rank-p^4 expression for the quadruple bracket");
  bias->add_flag("--trilinear-bound", c.trilinear_bound, "compare P(triple bracket = 0) with the certified bound");
  std::string bias_mode = "exhaustive";
  bias->add_option("--mode", bias_mode, "exhaustive or sampled")->check(CLI::IsMember({"exhaustive", "sampled"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? kOk : kUsage};
  }

  c.command = app.get_subcommands().front()->get_name();
  c.threads = resolve_threads(threads);
  c.format = format == "csv" ? Format::csv : format == "text" ? Format::text : Format::json;
  if (c.command == "cover") c.sampled = cover_mode == "sampled";
  if (c.command == "bias") c.sampled = bias_mode == "sampled";
  if (c.table && c.family) {
    err << "error: --family and --table are mutually exclusive\n";
    return {std::nullopt, kUsage};
  }
  if (c.command == "neumann" && !(c.C >= 1.0)) {
    err << "error: --C must be at least 1\n";
    return {std::nullopt, kUsage};
  }
  if ((c.baer_s > 0) != (c.baer_t > 0)) {
    err << "error: --s and --t go together\n";
    return {std::nullopt, kUsage};
  }
  return {c, kOk};
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto parsed = parse_args(argc, argv, out, err);
  if (!parsed.config) return parsed.exit_code;
  return run(*parsed.config, out, err);
}

}  // namespace nilprob::cli
