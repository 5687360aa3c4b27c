#include "demon/traces.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "demon/error.hpp"

namespace demon {

void validate(const TraceGenConfig& cfg) {
  if (cfg.components == 0) throw InvalidParameters("at least one component required");
  switch (cfg.distribution) {
    case Distribution::Normal:
      if (!std::isfinite(cfg.param1) || !(cfg.param2 > 0) || !std::isfinite(cfg.param2))
        throw InvalidParameters("normal needs a finite mean and a positive variance");
      break;
    case Distribution::Binomial:
      if (!(cfg.param1 >= 1) || !(cfg.param2 >= 0 && cfg.param2 <= 1))
        throw InvalidParameters("binomial needs n >= 1 and p in [0,1]");
      break;
    case Distribution::Beta:
      if (!(cfg.param1 > 0) || !(cfg.param2 > 0) || !std::isfinite(cfg.param1) || !std::isfinite(cfg.param2))
        throw InvalidParameters("beta needs positive alpha and beta");
      break;
  }
}

std::string component_name(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "C" + std::to_string(i);
}

std::string ap_name(std::size_t component, std::size_t i) {
  std::string c = component_name(component);
  for (char& ch : c) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return c + std::to_string(i);
}

DecentralizedTrace generate(const TraceGenConfig& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::string> comps;
  for (std::size_t c = 0; c < cfg.components; ++c) comps.push_back(component_name(c));
  DecentralizedTrace tr(comps, cfg.length);

  std::normal_distribution<double> normal(cfg.param1, std::sqrt(cfg.param2));
  std::bernoulli_distribution bernoulli(cfg.distribution == Distribution::Binomial ? cfg.param2 : 0.5);
  std::gamma_distribution<double> gamma_a(cfg.distribution == Distribution::Beta ? cfg.param1 : 1.0, 1.0);
  std::gamma_distribution<double> gamma_b(cfg.distribution == Distribution::Beta ? cfg.param2 : 1.0, 1.0);
  auto draw = [&]() {
    switch (cfg.distribution) {
      case Distribution::Normal: return normal(rng) > 0.5;
      case Distribution::Binomial: return bernoulli(rng);
      case Distribution::Beta: {
        double x = gamma_a(rng);
        double y = gamma_b(rng);
        return x + y > 0 && x / (x + y) > 0.5;
      }
    }
    return false;
  };
  for (Round t = 1; t <= cfg.length; ++t)
    for (std::size_t c = 0; c < cfg.components; ++c)
      for (std::size_t i = 0; i < cfg.aps_per_component; ++i) tr.observe(t, comps[c], ap_name(c, i), draw());
  return tr;
}

void store(const DecentralizedTrace& tr, std::ostream& out) {
  out << "t,component,ap,value\n";
  for (Round t = 1; t <= tr.length(); ++t)
    for (const auto& c : tr.components())
      for (const auto& [ap, v] : tr.event(t, c).obs) out << t << ',' << c << ',' << ap << ',' << (v ? 1 : 0) << '\n';
}

void store(const DecentralizedTrace& tr, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  store(tr, out);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  return true;
}

}  // namespace

DecentralizedTrace load(std::istream& in) {
  DecentralizedTrace tr;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::map<std::string, std::string> owner;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv(line);
    if (!header) {
      if (f != std::vector<std::string>{"t", "component", "ap", "value"})
        throw ParseError("expected header t,component,ap,value", lineno);
      header = true;
      continue;
    }
    if (f.size() != 4) throw ParseError("expected 4 fields", lineno);
    Round t = 0;
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(f[0], &used);
      if (used != f[0].size() || v == 0 || v > 10000000UL) throw std::invalid_argument("round");
      t = static_cast<Round>(v);
    } catch (const std::exception&) {
      throw ParseError("bad round '" + f[0] + "'", lineno);
    }
    if (!valid_name(f[1])) throw ParseError("bad component '" + f[1] + "'", lineno);
    if (!valid_name(f[2])) throw ParseError("bad proposition '" + f[2] + "'", lineno);
    if (f[3] != "0" && f[3] != "1") throw ParseError("bad value '" + f[3] + "'", lineno);
    auto [it, fresh] = owner.emplace(f[2], f[1]);
    if (!fresh && it->second != f[1])
      throw ConflictingObservation("proposition '" + f[2] + "' observed by " + it->second + " and " + f[1]);
    bool value = f[3] == "1";
    const Event& prev = tr.event(t, f[1]);
    auto old = prev.obs.find(f[2]);
    if (old != prev.obs.end() && old->second != value)
      throw ConflictingObservation("contradicting rows for '" + f[2] + "' at round " + f[0]);
    tr.observe(t, f[1], f[2], value);
  }
  if (!header) throw ParseError("missing header", lineno == 0 ? 1 : lineno);
  return tr;
}

DecentralizedTrace load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return load(in);
}

namespace {

Distribution parse_distribution(const std::string& s) {
  if (s == "normal") return Distribution::Normal;
  if (s == "binomial") return Distribution::Binomial;
  if (s == "beta") return Distribution::Beta;
  throw ParseError("unknown distribution '" + s + "'");
}

const char* distribution_name(Distribution d) {
  switch (d) {
    case Distribution::Normal: return "normal";
    case Distribution::Binomial: return "binomial";
    case Distribution::Beta: return "beta";
  }
  return "";
}

}  // namespace

TraceGenConfig trace_config_from_json(const nlohmann::json& j) {
  TraceGenConfig cfg;
  try {
    cfg.components = j.value("components", cfg.components);
    cfg.aps_per_component = j.value("aps_per_component", cfg.aps_per_component);
    cfg.length = j.value("length", cfg.length);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("distribution")) cfg.distribution = parse_distribution(j.at("distribution").get<std::string>());
    if (j.contains("params")) {
      const auto& p = j.at("params");
      if (!p.is_array() || p.size() != 2) throw ParseError("'params' must hold two numbers");
      cfg.param1 = p[0].get<double>();
      cfg.param2 = p[1].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("trace configuration: ") + e.what());
  }
  try {
    validate(cfg);
  } catch (const InvalidParameters& e) {
    throw ParseError(e.what());
  }
  return cfg;
}

nlohmann::json to_json(const TraceGenConfig& cfg) {
  return {{"components", cfg.components},
          {"aps_per_component", cfg.aps_per_component},
          {"length", cfg.length},
          {"distribution", distribution_name(cfg.distribution)},
          {"params", {cfg.param1, cfg.param2}},
          {"seed", cfg.seed}};
}

}  // namespace demon
