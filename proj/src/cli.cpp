#include "demon/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "demon/error.hpp"
#include "demon/spec_io.hpp"
#include "demon/truth_table.hpp"

namespace demon {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

SpecInput spec_input_from_json(const json& j) {
  if (j.is_object() && j.contains("ltl")) {
    if (!j.at("ltl").is_string()) throw ParseError("'ltl' must be a string");
    return SpecInput::from_ltl(parse_ltl(j.at("ltl").get<std::string>()));
  }
  if (is_decentralized_json(j)) throw ParseError("a decentralized specification cannot be simulated directly");
  return SpecInput::from_spec(spec_from_json(j));
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string format_number(double x) {
  std::ostringstream ss;
  ss << std::setprecision(10) << x;
  return ss.str();
}

std::vector<std::string> summary_fields(const SimRun& run) {
  Summary s = summarize(run.metrics);
  return {to_string(run.verdict), std::to_string(run.stop_round), run.timed_out ? "1" : "0",
          format_number(s.delay),  format_number(s.msgs),          format_number(s.data),
          format_number(s.s_crit), std::to_string(s.s_max),        format_number(s.conv)};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* kCsvHeader = "spec,trace,algorithm,verdict,stop_round,timed_out,delay,msgs,data,s_crit,s_max,conv\n";

}  // namespace

SpecInput load_spec_input(const fs::path& path) {
  if (path.extension() == ".ltl") return SpecInput::from_ltl(parse_ltl(read_text(path)));
  return spec_input_from_json(read_json_file(path));
}

std::vector<std::pair<std::string, TraceGenConfig>> expand_generators(const json& j) {
  std::vector<json> entries;
  if (j.is_array())
    entries.assign(j.begin(), j.end());
  else
    entries.push_back(j);
  std::vector<std::pair<std::string, TraceGenConfig>> out;
  std::set<std::string> prefixes;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const json& e = entries[k];
    if (!e.is_object()) throw ParseError("generator entry must be an object");
    TraceGenConfig cfg = trace_config_from_json(e);
    std::size_t count = 1;
    std::string prefix;
    try {
      count = e.value("count", std::size_t{1});
      prefix = e.value("name", to_json(cfg).at("distribution").get<std::string>());
    } catch (const json::exception& ex) {
      throw ParseError(std::string("generator entry: ") + ex.what());
    }
    if (!prefixes.insert(prefix).second) prefix += "_" + std::to_string(k);
    for (std::size_t i = 0; i < count; ++i) {
      TraceGenConfig c = cfg;
      c.seed = cfg.seed + i;
      std::ostringstream name;
      name << prefix << "_" << std::setw(3) << std::setfill('0') << i;
      out.emplace_back(name.str(), c);
    }
  }
  return out;
}

ExperimentConfig experiment_from_json(const json& j, const fs::path& base) {
  if (!j.is_object()) throw ParseError("experiment configuration must be an object");
  ExperimentConfig cfg;
  if (j.contains("specs")) {
    const json& js = j.at("specs");
    if (!js.is_array()) throw ParseError("'specs' must be an array");
    for (std::size_t i = 0; i < js.size(); ++i) {
      const json& s = js[i];
      if (s.is_string()) {
        fs::path p = resolve(base, s.get<std::string>());
        cfg.specs.push_back({p.stem().string(), load_spec_input(p)});
      } else if (s.is_object() && s.contains("file")) {
        fs::path p = resolve(base, s.at("file").get<std::string>());
        cfg.specs.push_back({s.value("name", p.stem().string()), load_spec_input(p)});
      } else if (s.is_object() && s.contains("ltl")) {
        cfg.specs.push_back({s.value("name", "ltl" + std::to_string(i)), spec_input_from_json(s)});
      } else {
        throw ParseError("spec entry must be a path, {file} or {ltl}");
      }
    }
  }
  if (j.contains("traces")) {
    const json& jt = j.at("traces");
    if (!jt.is_array()) throw ParseError("'traces' must be an array");
    for (const auto& t : jt) {
      if (!t.is_string()) throw ParseError("trace entry must be a path");
      fs::path p = resolve(base, t.get<std::string>());
      cfg.traces.push_back({p.stem().string(), p, std::nullopt});
    }
  }
  if (j.contains("trace_dir")) {
    fs::path dir = resolve(base, j.at("trace_dir").get<std::string>());
    if (!fs::is_directory(dir)) throw ParseError("trace directory " + dir.string() + " does not exist");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) cfg.traces.push_back({p.stem().string(), p, std::nullopt});
  }
  if (j.contains("generate"))
    for (auto& [name, g] : expand_generators(j.at("generate"))) cfg.traces.push_back({name, std::nullopt, g});
  if (j.contains("algorithms")) {
    const json& ja = j.at("algorithms");
    if (!ja.is_array()) throw ParseError("'algorithms' must be an array");
    for (const auto& a : ja) {
      if (!a.is_string()) throw ParseError("algorithm must be a string");
      cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
  }
  if (j.contains("system")) {
    const json& sys = j.at("system");
    cfg.system = graph_from_json(sys.is_string() ? read_json_file(resolve(base, sys.get<std::string>())) : sys);
  }
  if (j.contains("sim")) {
    cfg.sim = j.at("sim");
    sim_config_from_json(cfg.sim);
  }
  if (j.contains("output")) cfg.output = resolve(base, j.at("output").get<std::string>());
  if (cfg.specs.empty()) throw ParseError("experiment needs at least one spec");
  if (cfg.traces.empty()) throw ParseError("experiment needs at least one trace source");
  if (cfg.algorithms.empty()) throw ParseError("experiment needs at least one algorithm");
  return cfg;
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = kCsvHeader;
  for (const auto& r : rows) {
    std::vector<std::string> f = {csv_field(r.spec), csv_field(r.trace), to_string(r.algorithm)};
    auto s = summary_fields(r.run);
    f.insert(f.end(), s.begin(), s.end());
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out += ',';
      out += f[i];
    }
    out += '\n';
  }
  return out;
}

json rows_to_json(const std::vector<ExperimentRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json j = to_json(r.run);
    j["spec"] = r.spec;
    j["trace"] = r.trace;
    out.push_back(j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct SimFlags {
  CLI::Option* algorithm = nullptr;
  CLI::Option* comm_delay = nullptr;
  CLI::Option* active = nullptr;
  CLI::Option* slack = nullptr;
  CLI::Option* seed = nullptr;
  std::string algorithm_name = "orch";
  Round delay = 1;
  std::size_t initial_active = 1;
  Round timeout_slack = 5;
  std::uint64_t seed_value = 0;

  void add(CLI::App* app) {
    algorithm = app->add_option("--algorithm", algorithm_name, "orch, migr, migrr or chor");
    comm_delay = app->add_option("--comm-delay", delay, "Rounds between sending and delivery");
    active = app->add_option("--active", initial_active, "Initially active migration monitors");
    slack = app->add_option("--timeout-slack", timeout_slack, "Rounds simulated after the trace ends");
    seed = app->add_option("--seed", seed_value, "Seed recorded with the run");
  }

  SimConfig apply(SimConfig cfg) const {
    if (*algorithm) cfg.algorithm = parse_algorithm(algorithm_name);
    if (*comm_delay) cfg.comm_delay = delay;
    if (*active) cfg.initial_active = initial_active;
    if (*slack) cfg.timeout_slack = timeout_slack;
    if (*seed) cfg.seed = seed_value;
    validate(cfg);
    return cfg;
  }
};

int cmd_gen_traces(const fs::path& config, const fs::path& outdir, std::ostream& out, std::ostream& err) {
  auto gens = expand_generators(read_json_file(config));
  fs::create_directories(outdir);
  for (const auto& [name, cfg] : gens) {
    fs::path p = outdir / (name + ".csv");
    store(generate(cfg), p);
    out << p.string() << "\n";
  }
  err << "wrote " << gens.size() << " trace files\n";
  return 0;
}

std::string state_list(const Specification& a, const std::set<StateId>& qs) {
  std::string s;
  for (StateId q : qs) s += (s.empty() ? "" : " ") + a.name(q);
  return s;
}

int check_validate(const fs::path& path, std::ostream& out) {
  json j = read_json_file(path);
  std::map<std::string, Specification> specs;
  if (is_decentralized_json(j)) {
    DecentralizedSpec d = decentralized_from_json(j);
    specs = d.monitors;
  } else {
    specs.emplace("", spec_from_json(j));
  }
  bool ok = true;
  for (const auto& [id, a] : specs) {
    ValidationReport r = validate(a);
    std::string where = id.empty() ? "" : id + ": ";
    for (const auto& [q, i, k] : r.overlapping)
      out << where << "overlap at " << a.name(q) << " between transitions " << i << " and " << k << "\n";
    for (StateId q : r.incomplete) out << where << "incomplete at " << a.name(q) << "\n";
    ok = ok && r.ok();
  }
  out << (ok ? "valid" : "invalid") << "\n";
  return ok ? 0 : 1;
}

int check_monitorability(const std::optional<fs::path>& path, const std::string& ltl, std::ostream& out) {
  auto report = [&](const std::string& where, const Specification& a) {
    MonitorabilityResult r = ca_monitorable(a);
    if (!r.monitorable) {
      std::set<StateId> missing;
      for (StateId q = 0; q < a.size(); ++q)
        if (!r.marked.count(q)) missing.insert(q);
      out << where << "cannot reach a final verdict from: " << state_list(a, missing) << "\n";
    }
    return r.monitorable;
  };
  bool ok = true;
  if (!path) {
    ok = report("", synthesize(parse_ltl(ltl)));
  } else {
    json j = path->extension() == ".ltl" ? json{{"ltl", read_text(*path)}} : read_json_file(*path);
    if (is_decentralized_json(j)) {
      DecentralizedSpec d = decentralized_from_json(j);
      for (const auto& [id, a] : d.monitors) ok = report(id + ": ", a) && ok;
      if (has_cycle(mdg(d))) {
        out << "monitor dependencies are cyclic\n";
        ok = false;
      }
    } else {
      SpecInput in = spec_input_from_json(j);
      ok = report("", in.automaton ? *in.automaton : synthesize(*in.formula));
    }
  }
  out << (ok ? "monitorable" : "not monitorable") << "\n";
  return ok ? 0 : 1;
}

int check_compatibility(const fs::path& path, bool count, std::ostream& out) {
  json j = read_json_file(path);
  if (!j.is_object() || !j.contains("network") || !j.contains("system"))
    throw ParseError("compatibility input needs 'network' and 'system'");
  Graph net = graph_from_json(j.at("network"));
  Graph sys = graph_from_json(j.at("system"));
  Assignment constraint;
  if (j.contains("constraint")) {
    try {
      constraint = j.at("constraint").get<Assignment>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("constraint: ") + e.what());
    }
  }
  CompatibilityResult r = compatible(net, sys, constraint, count);
  if (r.compatible) {
    out << "compatible\n";
    for (const auto& [m, c] : r.assignment) out << m << " -> " << c << "\n";
  } else {
    for (const auto& [m, c] : constraint)
      if (!net.nodes.count(m)) out << "constraint names unknown monitor " << m << "\n";
    out << "incompatible\n";
  }
  if (count) out << "solutions " << r.solutions << "\n";
  return r.compatible ? 0 : 1;
}

int cmd_run(const SimConfig& cfg, const SpecInput& input, const std::string& spec_name, const fs::path& trace_path,
            const Graph& system, const std::string& format, const std::optional<fs::path>& metrics_path,
            std::ostream& out) {
  DecentralizedTrace tr = load(trace_path);
  ExperimentRow row{spec_name, trace_path.stem().string(), cfg.algorithm, simulate(cfg, input, system, tr)};
  if (format == "json")
    out << to_json(row.run).dump(2) << "\n";
  else
    out << rows_to_csv({row});
  if (metrics_path) write_text(*metrics_path, to_json(row.run.metrics).dump(2) + "\n");
  return 0;
}

int cmd_experiment(const fs::path& config, const SimFlags& flags, std::optional<fs::path> output,
                   const std::string& format, bool strict, std::size_t jobs, std::ostream& out, std::ostream& err) {
  ExperimentConfig ex = experiment_from_json(read_json_file(config), config.parent_path());
  SimConfig base = flags.apply(sim_config_from_json(ex.sim));
  if (!output) output = ex.output;
  if (*flags.algorithm) ex.algorithms = {base.algorithm};

  std::vector<std::optional<DecentralizedTrace>> traces;
  for (const auto& src : ex.traces) {
    if (src.generated) {
      traces.push_back(generate(*src.generated));
      continue;
    }
    try {
      traces.push_back(load(*src.file));
    } catch (const Error& e) {
      if (strict) throw;
      err << "warning: skipping trace " << src.name << ": " << e.what() << "\n";
      traces.push_back(std::nullopt);
    }
  }

  struct Task {
    std::size_t spec, trace, algorithm;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < ex.specs.size(); ++s)
    for (std::size_t t = 0; t < ex.traces.size(); ++t)
      if (traces[t])
        for (std::size_t a = 0; a < ex.algorithms.size(); ++a) tasks.push_back({s, t, a});

  std::vector<std::optional<ExperimentRow>> results(tasks.size());
  std::vector<std::string> failures(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      SimConfig cfg = base;
      cfg.algorithm = ex.algorithms[task.algorithm];
      try {
        SimRun run = simulate(cfg, ex.specs[task.spec].input, ex.system, *traces[task.trace]);
        results[i] = ExperimentRow{ex.specs[task.spec].name, ex.traces[task.trace].name, cfg.algorithm, std::move(run)};
      } catch (const Error& e) {
        failures[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < std::max<std::size_t>(1, jobs); ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<ExperimentRow> rows;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (results[i]) {
      rows.push_back(std::move(*results[i]));
      continue;
    }
    std::string what = ex.specs[tasks[i].spec].name + " / " + ex.traces[tasks[i].trace].name + " / " +
                       to_string(ex.algorithms[tasks[i].algorithm]) + ": " + failures[i];
    if (strict) throw InvalidParameters(what);
    err << "warning: skipping run " << what << "\n";
  }
  std::string text = format == "json" ? rows_to_json(rows).dump(2) + "\n" : rows_to_csv(rows);
  if (output) {
    write_text(*output, text);
    err << "wrote " << rows.size() << " rows to " << output->string() << "\n";
  } else {
    out << text;
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decentralized monitoring simulator"};
  app.name(args.empty() ? "demon" : args.front());
  app.require_subcommand(1);

  std::string config, outdir;
  auto* gen = app.add_subcommand("gen-traces", "Generate synthetic traces as CSV files");
  gen->add_option("config", config, "Generator configuration (JSON)")->required();
  gen->add_option("outdir", outdir, "Output directory")->required();

  std::string mode, check_path, check_ltl;
  bool count = false;
  auto* check = app.add_subcommand("check", "Static checks: validate, monitorability, compatibility");
  check->add_option("mode", mode, "validate | monitorability | compatibility")
      ->required()
      ->check(CLI::IsMember({"validate", "monitorability", "compatibility"}));
  auto* check_file = check->add_option("input", check_path, "Specification or compatibility input");
  auto* check_ltl_opt = check->add_option("--ltl", check_ltl, "Formula instead of a file (monitorability)");
  check->add_flag("--count", count, "Count every compatible assignment");

  std::string spec_path, ltl, trace_path, system_path, format = "csv", metrics_path;
  SimFlags run_flags;
  auto* run = app.add_subcommand("run", "Run one monitoring simulation");
  auto* run_spec = run->add_option("--spec", spec_path, "Automaton JSON or .ltl file");
  auto* run_ltl = run->add_option("--ltl", ltl, "Formula text");
  run_spec->excludes(run_ltl);
  run->add_option("--trace", trace_path, "Trace CSV")->required();
  auto* run_system = run->add_option("--system", system_path, "System graph JSON");
  run_flags.add(run);
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* run_metrics = run->add_option("--metrics", metrics_path, "Write per-round metrics JSON here");

  std::string ex_config, ex_output, ex_format = "csv";
  bool strict = false;
  std::size_t jobs = 1;
  SimFlags ex_flags;
  auto* experiment = app.add_subcommand("experiment", "Run every spec x trace x algorithm combination");
  experiment->add_option("config", ex_config, "Experiment configuration (JSON)")->required();
  auto* ex_output_opt = experiment->add_option("--output", ex_output, "Output file (default: config or stdout)");
  ex_flags.add(experiment);
  experiment->add_option("--format", ex_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  experiment->add_flag("--strict", strict, "Fail on missing traces or failed runs");
  experiment->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!load_exact_atom_threshold_from_env())
      err << "warning: ignoring DEMON_EXACT_ATOMS (expected an integer up to " << TruthTable::kMaxVars << ")\n";
    if (*gen) return cmd_gen_traces(config, outdir, out, err);
    if (*check) {
      if (mode == "monitorability") {
        if (!*check_file && !*check_ltl_opt) throw ParseError("monitorability needs a file or --ltl");
        return check_monitorability(*check_file ? std::optional<fs::path>(check_path) : std::nullopt, check_ltl, out);
      }
      if (!*check_file) throw ParseError(mode + " needs an input file");
      return mode == "validate" ? check_validate(check_path, out) : check_compatibility(check_path, count, out);
    }
    if (*run) {
      if (!*run_spec && !*run_ltl) throw ParseError("run needs --spec or --ltl");
      SpecInput input = *run_spec ? load_spec_input(spec_path) : SpecInput::from_ltl(parse_ltl(ltl));
      std::string name = *run_spec ? fs::path(spec_path).stem().string() : "ltl";
      Graph system = *run_system ? graph_from_json(read_json_file(system_path)) : Graph{};
      return cmd_run(run_flags.apply({}), input, name, trace_path, system, format,
                     *run_metrics ? std::optional<fs::path>(metrics_path) : std::nullopt, out);
    }
    if (*experiment)
      return cmd_experiment(ex_config, ex_flags, *ex_output_opt ? std::optional<fs::path>(ex_output) : std::nullopt,
                            ex_format, strict, jobs, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace demon
