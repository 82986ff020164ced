#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "tfpack/errors.hpp"

namespace tfpack::cli {

using tfpack::to_json;

namespace {

const std::set<std::string> kModes = {"gen",         "certify",        "pack-pseudo", "pack-random",
                                      "pack-bootstrap", "bounds",      "verify"};

bool is_pack(const std::string& mode) { return mode.rfind("pack-", 0) == 0; }

template <typename T>
constexpr bool kIsOptional = false;
template <typename T>
constexpr bool kIsOptional<std::optional<T>> = true;

// One configurable key: JSON reader plus CLI binding into a staging config.
struct Field {
  std::string key;
  std::function<void(RunConfig&, const Json&)> from_json;
  std::function<void(RunConfig&, const RunConfig&)> copy;
  std::function<Json(const RunConfig&)> to_json;
  std::function<CLI::Option*(CLI::App&, RunConfig&, const std::string&)> bind;
};

template <typename T>
Field field(std::string key, T RunConfig::*member, std::string help) {
  Field f;
  f.key = key;
  f.from_json = [member, key](RunConfig& c, const Json& j) {
    try {
      if constexpr (kIsOptional<T>) {
        if (j.is_null()) {
          c.*member = std::nullopt;
        } else {
          c.*member = j.get<typename T::value_type>();
        }
      } else {
        c.*member = j.get<T>();
      }
    } catch (const Json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  };
  f.copy = [member](RunConfig& dst, const RunConfig& src) { dst.*member = src.*member; };
  f.to_json = [member](const RunConfig& c) -> Json {
    if constexpr (kIsOptional<T>) {
      return (c.*member) ? Json(*(c.*member)) : Json(nullptr);
    } else {
      return Json(c.*member);
    }
  };
  f.bind = [member, help](CLI::App& app, RunConfig& staged, const std::string& flag) {
    if constexpr (std::is_same_v<T, bool>) {
      return app.add_flag(flag, staged.*member, help);
    } else {
      return app.add_option(flag, staged.*member, help);
    }
  };
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = {
      field("mode", &RunConfig::mode, "run mode"),
      field("n", &RunConfig::n, "vertex count of the generated host graph"),
      field("t", &RunConfig::t, "template tree size"),
      field("tau", &RunConfig::tau, "bootstrap block count"),
      field("p", &RunConfig::p, "edge probability"),
      field("epsilon", &RunConfig::epsilon, "regularity parameter in (0,1)"),
      field("seed", &RunConfig::seed, "master seed"),
      field("scale", &RunConfig::scale, "multiplier on the number of blow-ups r"),
      field("r_override", &RunConfig::r_override, "exact number of blow-ups"),
      field("slack", &RunConfig::slack, "ratio required for a growth condition to pass"),
      field("threads", &RunConfig::threads, "worker threads"),
      field("graph", &RunConfig::graph, "edge-list input file"),
      field("tree", &RunConfig::tree, "tree file"),
      field("tree_shape", &RunConfig::tree_shape, "built-in tree when no file: path | star"),
      field("factors", &RunConfig::factors, "factor file to verify"),
      field("out", &RunConfig::out, "JSON report path (stdout if empty)"),
      field("graph_out", &RunConfig::graph_out, "gen: edge-list output path"),
      field("factors_out", &RunConfig::factors_out, "factor file output path"),
      field("csv", &RunConfig::csv, "per-blow-up CSV output path"),
      field("kappa_csv", &RunConfig::kappa_csv, "appearance-count histogram CSV path"),
      field("sweep_r", &RunConfig::sweep_r, "r_override values for a coverage sweep"),
      field("sweep_csv", &RunConfig::sweep_csv, "coverage sweep CSV path"),
      field("bipartite_nu", &RunConfig::bipartite_nu, "gen: side size of B(nu,nu,p)"),
      field("strict", &RunConfig::strict, "certify: check non-super-edge pairs too"),
      field("blowup", &RunConfig::blowup, "certify: certify one random prime blow-up"),
      field("outer_r_override", &RunConfig::outer_r_override, "bootstrap: outer r"),
      field("outer_scale", &RunConfig::outer_scale, "bootstrap: outer r scale"),
      field("C", &RunConfig::C, "bootstrap: edge-probability constant"),
      field("mu", &RunConfig::mu, "bounds: binomial mean"),
      field("perm_n", &RunConfig::perm_n, "bounds: permutation length"),
      field("lipschitz", &RunConfig::lipschitz, "bounds: per-transposition change C"),
      field("deviation", &RunConfig::deviation, "bounds: deviation t"),
      field("perm_denominator", &RunConfig::perm_denominator, "bounds: n | n-1"),
      field("eta", &RunConfig::eta, "bounds: pair regularity eta"),
      field("d", &RunConfig::d, "bounds: pair density d"),
      field("nu", &RunConfig::nu, "bounds: pair side size"),
  };
  return all;
}

std::string flag_name(const std::string& key) {
  std::string flag = key;
  for (char& c : flag)
    if (c == '_') c = '-';
  return "--" + flag;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

TreeTemplate load_tree(const RunConfig& c) {
  if (!c.tree.empty()) return read_tree(std::filesystem::path(c.tree));
  if (c.tree_shape == "path") return TreeTemplate::path(c.t);
  if (c.tree_shape == "star") return TreeTemplate::star(c.t);
  throw ConfigError("unknown tree_shape '" + c.tree_shape + "'");
}

Graph load_graph(const RunConfig& c) {
  if (!c.graph.empty()) return read_edge_list(std::filesystem::path(c.graph));
  return generate_gnp(c.n, c.p, RandomStream::derive_key(c.seed, "host", 0));
}

Json envelope(const RunConfig& c) {
  Json report;
  report["mode"] = c.mode;
  report["config"] = to_json(c);
  return report;
}

void finish(Json& report, const RunConfig& c) {
  report["seed"] = c.seed;
  report["version"] = kVersion;
}

void emit(const Json& report, const RunConfig& c) {
  const std::string text = report.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text(c.out, text);
  }
}

PackingResult run_pack(const RunConfig& c, const Graph& g, const TreeTemplate& tree,
                       std::optional<std::size_t> r_override) {
  const bool generated = c.graph.empty();
  std::optional<double> density = generated ? std::optional<double>(c.p) : std::nullopt;
  if (c.mode == "pack-bootstrap") {
    BootstrapPlan plan =
        make_bootstrap_plan(g.num_vertices(), tree.size(), *c.tau, c.epsilon, c.slack, c.C);
    plan.outer_r_override = c.outer_r_override;
    plan.outer_scale = c.outer_scale;
    return pack_bootstrap(g, tree, plan, c.epsilon, c.seed, c.threads, density);
  }
  PackOptions options;
  options.r_override = r_override;
  options.scale = c.scale;
  options.threads = c.threads;
  options.density = density;
  return c.mode == "pack-random" ? pack_random(g, tree, c.epsilon, c.seed, options)
                                 : pack_pseudo(g, tree, c.epsilon, c.seed, options);
}

std::string per_blowup_csv(const PackingResult& r) {
  std::ostringstream out;
  out << "index,pair_index,part_a,part_b,pair_edges,matchings,factors,target,target_vacuous\n";
  for (const auto& row : r.per_blowup) {
    for (std::size_t k = 0; k < row.pairs.size(); ++k) {
      out << row.index << ',' << k << ',' << row.pairs[k].first << ',' << row.pairs[k].second
          << ',' << row.pair_edges[k] << ',' << row.matching_counts[k] << ',' << row.factors
          << ',' << row.target << ',' << (row.target_vacuous ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

Json execute_pack(RunConfig c) {
  TreeTemplate tree = load_tree(c);
  Graph g = load_graph(c);
  c.n = g.num_vertices();
  c.t = tree.size();
  validate(c);

  Json report = envelope(c);
  report["feasibility"] =
      c.n >= 2 ? to_json(check_feasibility(c.n, c.p, c.epsilon, c.slack)) : Json(nullptr);
  PackingResult result = run_pack(c, g, tree, c.r_override);
  coverage_of(result, g);  // throws if anything fails re-verification
  const Json fields_json = result_fields(result);
  for (auto& [key, value] : fields_json.items()) report[key] = value;
  if (c.mode == "pack-bootstrap") {
    BootstrapPlan plan = make_bootstrap_plan(c.n, c.t, *c.tau, c.epsilon, c.slack, c.C);
    plan.outer_r_override = c.outer_r_override;
    plan.outer_scale = c.outer_scale;
    report["bootstrap_plan"] = to_json(plan);
  }

  if (!c.factors_out.empty()) {
    std::ostringstream out;
    write_factors(out, result.factors, tree.size());
    write_text(c.factors_out, out.str());
  }
  if (!c.csv.empty()) write_text(c.csv, per_blowup_csv(result));
  if (!c.kappa_csv.empty() && result.kappa) {
    std::ostringstream out;
    out << "appearances,edges\n";
    for (auto [count, edges] : result.kappa->histogram) out << count << ',' << edges << '\n';
    write_text(c.kappa_csv, out.str());
  }
  if (!c.sweep_r.empty()) {
    if (c.mode == "pack-bootstrap") throw ConfigError("sweep_r applies to pack-pseudo/pack-random");
    Json sweep = Json::array();
    std::ostringstream out;
    out << "r,factors,covered_edges,total_edges,coverage\n";
    for (std::size_t r : c.sweep_r) {
      PackingResult run = run_pack(c, g, tree, r);
      const double cov = boost::rational_cast<double>(run.coverage);
      out << r << ',' << run.factors.size() << ',' << run.covered_edges << ','
          << run.total_edges << ',' << cov << '\n';
      sweep.push_back(Json{{"r", r},
                           {"factors", run.factors.size()},
                           {"covered_edges", run.covered_edges},
                           {"coverage", to_json(run.coverage)}});
    }
    report["sweep"] = sweep;
    if (!c.sweep_csv.empty()) write_text(c.sweep_csv, out.str());
  }
  finish(report, c);
  return report;
}

Json execute_gen(const RunConfig& c) {
  Graph g = c.bipartite_nu
                ? generate_bipartite(*c.bipartite_nu, c.p, RandomStream::derive_key(c.seed, "host", 0))
                : generate_gnp(c.n, c.p, RandomStream::derive_key(c.seed, "host", 0));
  if (!c.graph_out.empty()) write_edge_list(g, std::filesystem::path(c.graph_out));
  Json report = envelope(c);
  report["vertices"] = g.num_vertices();
  report["edges"] = g.num_edges();
  finish(report, c);
  return report;
}

Json execute_certify(RunConfig c) {
  Graph g = load_graph(c);
  c.n = g.num_vertices();
  Json report = envelope(c);
  report["regularity"] = to_json(certify_regular(g, c.epsilon, c.p));
  report["feasibility"] =
      c.n >= 2 ? to_json(check_feasibility(c.n, c.p, c.epsilon, c.slack)) : Json(nullptr);
  if (c.blowup) {
    TreeTemplate tree = load_tree(c);
    RandomStream rng(c.seed, "layout", 0);
    PermutationLayout layout = random_layout(c.n, tree.size(), rng);
    BlowupGraph b = build_blowup(g, layout, tree, true);
    auto reports = certify_blowup(b, c.epsilon, c.p, c.strict);
    report["blowup"] = Json{{"sigma", std::vector<Vertex>(layout.sigma().begin(), layout.sigma().end())},
                            {"regular", all_ok(reports)},
                            {"pairs", to_json(reports)}};
  }
  finish(report, c);
  return report;
}

Json execute_bounds(const RunConfig& c) {
  Json report = envelope(c);
  if (c.mu) report["chernoff_tail"] = to_json(chernoff_tail(*c.mu, c.epsilon));
  if (c.perm_n && c.deviation) {
    PermutationDenominator mode;
    if (c.perm_denominator == "n") {
      mode = PermutationDenominator::kN;
    } else if (c.perm_denominator == "n-1") {
      mode = PermutationDenominator::kNMinusOne;
    } else {
      throw ConfigError("perm_denominator must be n or n-1");
    }
    report["permutation_tail"] = to_json(permutation_tail(*c.perm_n, c.lipschitz, *c.deviation, mode));
  }
  if (c.eta && c.d && c.nu) {
    report["fk_pseudo_target"] =
        fk_pseudo_target(*c.eta, *c.d, static_cast<std::size_t>(*c.nu));
  }
  if (c.nu) {
    RandomPairDelta delta = fk_random_delta(*c.nu, c.p);
    report["fk_random_delta"] = Json{{"value", delta.value}, {"vacuous", delta.vacuous}};
  }
  if (c.n >= 2 && c.t >= 2 && c.n % c.t == 0) {
    report["r_value"] = r_value(c.epsilon, c.t, c.n, c.scale);
    report["kappa"] = kappa_target(c.epsilon, c.n);
    report["crossing_probability"] = to_json(crossing_probability(c.t, c.n));
  }
  finish(report, c);
  return report;
}

Json execute_verify(RunConfig c) {
  if (c.graph.empty() || c.factors.empty()) throw ConfigError("verify needs graph and factors");
  Graph g = read_edge_list(std::filesystem::path(c.graph));
  TreeTemplate tree = load_tree(c);
  c.n = g.num_vertices();
  c.t = tree.size();
  std::ifstream in(c.factors);
  if (!in) throw IoError("cannot open " + c.factors);
  std::vector<TFactor> factors = read_factors(in);

  Json report = envelope(c);
  Json violations = Json::array();
  std::string first;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    Verdict v = verify_tfactor(g, tree, factors[i]);
    if (v.ok()) continue;
    Json row{{"factor", i}, {"violation", to_string(v.violation)}, {"copy", v.copy}};
    if (v.vertex) row["vertex"] = *v.vertex;
    if (v.edge) row["edge"] = Json::array({v.edge->u, v.edge->v});
    row["message"] = v.message;
    if (first.empty()) first = "factor " + std::to_string(i) + ": " + to_string(v.violation) + ": " + v.message;
    violations.push_back(row);
  }
  auto shared = find_shared_edge(factors);
  if (shared && first.empty()) {
    first = "edge (" + std::to_string(shared->u) + "," + std::to_string(shared->v) +
            ") appears in two factors";
  }
  report["factors_count"] = factors.size();
  report["violations"] = violations;
  report["shared_edge"] = shared ? Json::array({shared->u, shared->v}) : Json(nullptr);
  report["valid"] = first.empty();
  finish(report, c);
  if (!first.empty()) {
    emit(report, c);
    throw VerificationError(first);
  }
  return report;
}

}  // namespace

Json to_json(const RunConfig& config) {
  Json out;
  for (const Field& f : fields()) out[f.key] = f.to_json(config);
  return out;
}

void apply_json(RunConfig& config, const Json& object) {
  if (!object.is_object()) throw ConfigError("config must be a flat JSON object");
  for (auto& [key, value] : object.items()) {
    bool known = false;
    for (const Field& f : fields()) {
      if (f.key == key) {
        f.from_json(config, value);
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }
}

std::optional<RunConfig> parse_command_line(int argc, char** argv, std::ostream& out) {
  RunConfig staged;
  CLI::App app{"Edge-disjoint tree-factor packing in random and pseudo-random graphs"};
  std::string config_path;
  app.add_option("mode", staged.mode, "gen | certify | pack-pseudo | pack-random | pack-bootstrap | bounds | verify");
  app.add_option("--config", config_path, "flat key-value JSON config; flags override it");
  std::vector<std::pair<const Field*, CLI::Option*>> bound;
  for (const Field& f : fields()) {
    if (f.key == "mode") continue;
    bound.emplace_back(&f, f.bind(app, staged, flag_name(f.key)));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig config;
  if (const char* env = std::getenv("TFPACK_SEED")) {
    try {
      config.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("TFPACK_SEED is not an unsigned integer");
    }
  }
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open config " + config_path);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
    apply_json(config, j);
  }
  if (!staged.mode.empty()) config.mode = staged.mode;
  for (auto [f, opt] : bound)
    if (opt->count() > 0) f->copy(config, staged);
  return config;
}

void validate(const RunConfig& c) {
  if (!kModes.count(c.mode)) throw ConfigError("unknown mode '" + c.mode + "'");
  if (!(c.p >= 0.0 && c.p <= 1.0)) throw ConfigError("p must lie in [0,1]");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
  if (!(c.scale > 0.0)) throw ConfigError("scale must be positive");
  if (!(c.outer_scale > 0.0)) throw ConfigError("outer_scale must be positive");
  if (!(c.slack > 0.0)) throw ConfigError("slack must be positive");
  if (c.threads == 0) throw ConfigError("threads must be at least 1");
  if (c.t == 0) throw ConfigError("t must be positive");
  if (is_pack(c.mode) || (c.mode == "certify" && c.blowup)) {
    if (c.t < 2) throw ConfigError("t must be at least 2");
    if (c.n % c.t != 0) throw DivisibilityError(c.t, c.n);
  }
  if (c.mode == "pack-bootstrap" && !c.tau) throw ConfigError("pack-bootstrap needs tau");
  if (c.tau) {
    if (*c.tau == 0) throw ConfigError("tau must be positive");
    if (*c.tau % c.t != 0) throw DivisibilityError(c.t, *c.tau);
    if (c.n % *c.tau != 0) throw DivisibilityError(*c.tau, c.n);
  }
}

Json execute(const RunConfig& config) {
  validate(config);
  if (is_pack(config.mode)) return execute_pack(config);
  if (config.mode == "gen") return execute_gen(config);
  if (config.mode == "certify") return execute_certify(config);
  if (config.mode == "bounds") return execute_bounds(config);
  return execute_verify(config);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto fail = [&](ExitCode code, const char* category, const std::string& message) {
    err << Json{{"error", category}, {"message", message}}.dump() << '\n';
    return static_cast<int>(code);
  };
  try {
    Json report = execute(config);
    if (config.out.empty()) {
      out << report.dump(2) << '\n';
    } else {
      write_text(config.out, report.dump(2) + "\n");
    }
    return static_cast<int>(ExitCode::kOk);
  } catch (const ConfigError& e) {
    return fail(ExitCode::kConfig, "config", e.what());
  } catch (const DivisibilityError& e) {
    return fail(ExitCode::kDivisibility, "divisibility", e.what());
  } catch (const ParseError& e) {
    return fail(ExitCode::kIo, "parse", e.what());
  } catch (const IoError& e) {
    return fail(ExitCode::kIo, "io", e.what());
  } catch (const VerificationError& e) {
    return fail(ExitCode::kVerification, "verification", e.what());
  } catch (const InvalidArgument& e) {
    return fail(ExitCode::kConfig, "config", e.what());
  } catch (const std::exception& e) {
    return fail(ExitCode::kInternal, "internal", e.what());
  }
}

}  // namespace tfpack::cli
