#include "demon/engine.hpp"

#include <algorithm>
#include <cctype>

#include "demon/error.hpp"

namespace demon {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Orch: return "orch";
    case Algorithm::Migr: return "migr";
    case Algorithm::Migrr: return "migrr";
    case Algorithm::Chor: return "chor";
  }
  return "";
}

Algorithm parse_algorithm(const std::string& s) {
  std::string l;
  for (char c : s) l += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (l == "orch") return Algorithm::Orch;
  if (l == "migr") return Algorithm::Migr;
  if (l == "migrr") return Algorithm::Migrr;
  if (l == "chor") return Algorithm::Chor;
  throw ParseError("unknown algorithm '" + s + "'");
}

std::string to_string(Message::Kind k) {
  switch (k) {
    case Message::Kind::Mem: return "mem";
    case Message::Kind::Ehe: return "ehe";
    case Message::Kind::Verdict: return "verdict";
    case Message::Kind::Kill: return "kill";
  }
  return "";
}

void validate(const SimConfig& cfg) {
  if (cfg.comm_delay < 1) throw InvalidParameters("comm_delay must be at least 1");
  if (cfg.initial_active < 1) throw InvalidParameters("initial_active must be at least 1");
  if (cfg.sizes.char_bytes == 0 || cfg.sizes.int_bytes == 0 || cfg.sizes.verdict_bytes == 0)
    throw InvalidParameters("size model entries must be positive");
}

SimConfig sim_config_from_json(const nlohmann::json& j, SimConfig base) {
  try {
    if (j.contains("algorithm")) base.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    base.comm_delay = j.value("comm_delay", base.comm_delay);
    base.initial_active = j.value("initial_active", base.initial_active);
    base.timeout_slack = j.value("timeout_slack", base.timeout_slack);
    base.seed = j.value("seed", base.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("simulation configuration: ") + e.what());
  }
  try {
    validate(base);
  } catch (const InvalidParameters& e) {
    throw ParseError(e.what());
  }
  return base;
}

nlohmann::json to_json(const SimConfig& cfg) {
  return {{"algorithm", to_string(cfg.algorithm)},
          {"comm_delay", cfg.comm_delay},
          {"initial_active", cfg.initial_active},
          {"timeout_slack", cfg.timeout_slack},
          {"seed", cfg.seed}};
}

SpecInput SpecInput::from_spec(Specification a) {
  SpecInput in;
  in.automaton = std::make_shared<const Specification>(std::move(a));
  return in;
}

SpecInput SpecInput::from_ltl(Ltl f) {
  SpecInput in;
  in.formula = std::move(f);
  return in;
}

// ---------------------------------------------------------------------------
// Setup

namespace {

Graph complete_graph(const std::vector<std::string>& nodes) {
  Graph g;
  g.nodes.insert(nodes.begin(), nodes.end());
  for (const auto& a : nodes)
    for (const auto& b : nodes)
      if (a != b) g.add_edge(a, b);
  return g;
}

}  // namespace

Network setup(const SimConfig& cfg, const SpecInput& input, const Graph& system,
              const std::vector<std::string>& components, const ApOwner& owner) {
  validate(cfg);
  if (components.empty()) throw InvalidParameters("no components");
  Network net;
  if (cfg.algorithm == Algorithm::Chor) {
    if (!input.formula) throw InvalidParameters("choreography needs a formula");
    MonitorTree tree = net_chor(*input.formula, owner);
    net.chor = chor_network(tree, owner);
    for (const auto& m : tree.all()) {
      net.graph.nodes.insert(m.id);
      net.placement[m.id] = m.component;
    }
    for (const auto& [child, parent] : tree.edges) net.graph.add_edge(child, parent);
  } else {
    net.automaton = input.automaton ? input.automaton
                                    : std::make_shared<const Specification>(synthesize(*input.formula));
    if (cfg.algorithm == Algorithm::Orch) {
      const std::string& main = components.front();
      for (const auto& c : components) {
        net.graph.nodes.insert(c);
        net.placement[c] = c;
        if (c != main) net.graph.add_edge(c, main);
      }
    } else {
      net.graph = complete_graph(components);
      for (const auto& c : components) net.placement[c] = c;
    }
  }
  for (const auto& [id, c] : net.placement) net.monitors.push_back({id, c});

  Graph sys = system.nodes.empty() && system.edges.empty() ? complete_graph(components) : system;
  for (const auto& [id, c] : net.placement)
    if (!sys.nodes.count(c))
      throw IncompatiblePlacement("monitor '" + id + "' placed on '" + c + "', which is not in the system graph");
  if (!verify_compatible(net.placement, compute_reach(net.graph), compute_reach(sys)))
    throw IncompatiblePlacement("monitor network does not fit the system graph");
  return net;
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

class Context {
 public:
  Context(Round t, const SimConfig& cfg, MetricsRecord& rec, std::vector<Message>& out,
          std::map<std::string, Round>& known)
      : t(t), cfg_(cfg), rec_(rec), out_(out), known_(known) {}

  const Round t;
  EvalStats stats;

  void send(const std::string& from, const std::string& component, Message m) {
    m.from = from;
    m.sent_at = t;
    std::size_t bytes = 0;
    switch (m.kind) {
      case Message::Kind::Mem: bytes = size_of(m.memory, cfg_.sizes); break;
      case Message::Kind::Ehe: bytes = size_of(*m.ehe, cfg_.sizes); break;
      case Message::Kind::Verdict: bytes = verdict_message_size(from, cfg_.sizes); break;
      case Message::Kind::Kill: bytes = kill_message_size(from, cfg_.sizes); break;
    }
    MonitorCounters& c = rec_.at(t, from, component);
    ++c.messages;
    c.bytes += bytes;
    rec_.messages.push_back({t, to_string(m.kind), from, m.to, bytes});
    out_.push_back(std::move(m));
  }

  /// The states up to round r became known; one delay sample per new round.
  void resolved(const std::string& key, Round r) {
    auto [it, fresh] = known_.emplace(key, 0);
    for (Round k = it->second + 1; k <= r; ++k) rec_.delays.push_back(t - k);
    it->second = std::max(it->second, r);
  }

  void rebase(const std::string& key, Round r) { known_[key] = r; }

  void collected(const EHE& p, Round r) {
    if (p.empty()) return;
    rec_.gc.push_back({t, r, p.size(), p.max_round() - p.min_round() + 1, p.automaton().size()});
  }

  void report(Verdict v) {
    if (!verdict) verdict = v;
  }

  std::optional<Verdict> verdict;

 private:
  const SimConfig& cfg_;
  MetricsRecord& rec_;
  std::vector<Message>& out_;
  std::map<std::string, Round>& known_;
};

class Process {
 public:
  Process(std::string id, std::string component) : id_(std::move(id)), component_(std::move(component)) {}
  virtual ~Process() = default;

  const std::string& id() const { return id_; }
  const std::string& component() const { return component_; }
  bool halted() const { return halted_; }
  virtual bool active() const { return false; }

  virtual void step(Context& ctx, const Event& obs, const std::vector<const Message*>& inbox) = 0;

 protected:
  void send(Context& ctx, Message m) { ctx.send(id_, component_, std::move(m)); }

  std::string id_;
  std::string component_;
  bool halted_ = false;
};

// Entries at round r copied to r + 1 (no observation at r + 1).
EHE stay(const EHE& p, Round r) {
  EHE out = p;
  for (auto it = p.entries().lower_bound({r, 0}); it != p.entries().end() && it->first.t == r; ++it)
    out.set(r + 1, it->first.q, it->second);
  return out;
}

// ----- Orchestration

class OrchForwarder : public Process {
 public:
  OrchForwarder(std::string id, std::string component, std::string main)
      : Process(std::move(id), std::move(component)), main_(std::move(main)) {}

  void step(Context& ctx, const Event& obs, const std::vector<const Message*>&) override {
    Message m;
    m.kind = Message::Kind::Mem;
    m.to = main_;
    m.round = ctx.t;
    m.memory = mem_from_event(obs, Encoder::timestamp(ctx.t));
    send(ctx, std::move(m));
  }

 private:
  std::string main_;
};

class OrchMain : public Process {
 public:
  OrchMain(std::string id, std::string component, std::shared_ptr<const Specification> a, std::size_t forwarders)
      : Process(std::move(id), std::move(component)), p_(EHE::init(a)), forwarders_(forwarders) {}

  void step(Context& ctx, const Event& obs, const std::vector<const Message*>& inbox) override {
    const Specification& a = p_.automaton();
    if (ctx.t == 1 && is_final(a.verdict(a.initial()))) {
      ctx.report(a.verdict(a.initial()));
      return;
    }
    m_.merge(mem_from_event(obs, Encoder::timestamp(ctx.t)));
    ++received_[ctx.t];
    if (!obs.empty()) observed_.insert(ctx.t);
    for (const Message* msg : inbox) {
      if (msg->kind != Message::Kind::Mem) continue;
      m_.merge(msg->memory);
      ++received_[msg->round];
      if (!msg->memory.empty()) observed_.insert(msg->round);
    }
    // Only complete rounds: own observations plus every forwarder's memory.
    while (kn_ < ctx.t) {
      Round r = kn_ + 1;
      auto it = received_.find(r);
      if (it == received_.end() || it->second < forwarders_ + 1) break;
      EHE next = observed_.count(r) ? mov(p_, r - 1, r) : stay(p_, r - 1);
      auto q = sreach(next, m_, r, &ctx.stats);
      if (!q) break;
      kn_ = r;
      received_.erase(it);
      observed_.erase(r);
      ctx.resolved(id_, r);
      p_ = drop_resolved_at(next, {r, *q});
      ctx.collected(p_, r);
      m_.purge_before(r + 1);
      Verdict v = a.verdict(*q);
      if (is_final(v)) {
        ctx.report(v);
        return;
      }
    }
  }

 private:
  EHE p_;
  Memory m_;
  std::size_t forwarders_;
  Round kn_ = 0;
  std::map<Round, std::size_t> received_;
  std::set<Round> observed_;
};

// ----- Migration

struct MigrationShared {
  std::vector<std::string> components;
  std::map<std::string, std::string> monitor_of;
  ApOwner owner;
  bool round_robin = false;
};

// Owner of the earliest (round, proposition) atom of p, if any has an owner.
std::optional<std::string> earliest_obligation(const EHE& p, const ApOwner& owner) {
  std::optional<std::pair<Round, std::string>> best;
  for (const auto& [k, e] : p.entries()) {
    for (const Atom& a : atoms_of(e)) {
      if (a.kind != AtomKind::Timed || !owner.count(a.name)) continue;
      auto key = std::make_pair(a.t, a.name);
      if (!best || key < *best) best = key;
    }
  }
  if (!best) return std::nullopt;
  return owner.at(best->second);
}

class MigrationMonitor : public Process {
 public:
  MigrationMonitor(std::string id, std::string component, const MigrationShared& shared)
      : Process(std::move(id), std::move(component)), shared_(shared) {}

  void activate(EHE p) {
    p_ = std::move(p);
    active_ = true;
  }

  bool active() const override { return active_; }

  void step(Context& ctx, const Event& obs, const std::vector<const Message*>& inbox) override {
    m_.merge(mem_from_event(obs, Encoder::timestamp(ctx.t)));
    if (!obs.empty()) last_obs_ = ctx.t;
    for (const Message* msg : inbox) {
      if (msg->kind != Message::Kind::Ehe) continue;
      if (active_) {
        p_ = merge(*p_, *msg->ehe);
      } else {
        p_ = *msg->ehe;
        active_ = true;
      }
    }
    if (!active_) return;

    Round end = p_->max_round();
    if (last_obs_ > end) p_ = mov(*p_, end, last_obs_);
    if (auto r = last_resolved(*p_, m_, &ctx.stats)) {
      ctx.resolved("ehe", r->t);
      Verdict v = p_->automaton().verdict(r->q);
      if (is_final(v)) {
        ctx.report(v);
        return;
      }
      p_ = drop_resolved_at(*p_, *r);
      ctx.collected(*p_, r->t);
    }

    EHE carried = inc(*p_, m_, &ctx.stats);
    std::string target = component_;
    if (shared_.round_robin) {
      const auto& cs = shared_.components;
      auto it = std::find(cs.begin(), cs.end(), component_);
      target = (it == cs.end() || std::next(it) == cs.end()) ? cs.front() : *std::next(it);
    } else if (auto c = earliest_obligation(carried, shared_.owner)) {
      target = *c;
    }
    if (target == component_) {
      p_ = std::move(carried);
      return;
    }
    Message m;
    m.kind = Message::Kind::Ehe;
    m.to = shared_.monitor_of.at(target);
    m.ehe = std::make_shared<const EHE>(std::move(carried));
    send(ctx, std::move(m));
    active_ = false;
    p_.reset();
  }

 private:
  const MigrationShared& shared_;
  bool active_ = false;
  std::optional<EHE> p_;
  Memory m_;
  Round last_obs_ = 0;
};

// ----- Choreography

class ChorMonitor : public Process {
 public:
  ChorMonitor(std::string id, std::string component, std::shared_ptr<const Specification> a, bool root,
              std::set<std::string> refs, std::set<std::string> corefs)
      : Process(std::move(id), std::move(component)),
        a_(std::move(a)),
        root_(root),
        refs_(std::move(refs)),
        corefs_(std::move(corefs)),
        p_(EHE::init(a_)) {}

  void step(Context& ctx, const Event& obs, const std::vector<const Message*>& inbox) override {
    m_.merge(mem_from_event(obs, Encoder::timestamp(ctx.t)));
    if (!obs.empty()) last_obs_ = ctx.t;
    for (const Message* msg : inbox) {
      if (msg->kind == Message::Kind::Kill) {
        kills_.insert(msg->from);
      } else if (msg->kind == Message::Kind::Verdict) {
        if (msg->round >= anchor_) m_.set(Atom::monref(msg->round, msg->from), msg->verdict);
      }
    }
    if (!root_ && !refs_.empty() && kills_ == refs_) {
      kill_children(ctx);
      halted_ = true;
      return;
    }
    // Instances anchored at rounds up to t, one after the other.
    while (anchor_ <= ctx.t) {
      Round end = p_.max_round();
      if (last_obs_ > end) p_ = mov(p_, end, last_obs_);
      auto r = last_resolved(p_, m_, &ctx.stats);
      if (!r) break;
      ctx.resolved(id_, r->t);
      Verdict v = a_->verdict(r->q);
      if (!is_final(v)) {
        p_ = drop_resolved_at(p_, *r);
        ctx.collected(p_, r->t);
        break;
      }
      if (root_) {
        ctx.report(v);
        kill_children(ctx);
        halted_ = true;
        return;
      }
      for (const auto& ref : refs_) {
        if (kills_.count(ref)) continue;
        Message m;
        m.kind = Message::Kind::Verdict;
        m.to = ref;
        m.round = anchor_;
        m.verdict = v;
        send(ctx, std::move(m));
      }
      // Respawn at the next round.
      ++anchor_;
      p_ = EHE(a_);
      p_.set(anchor_ - 1, a_->initial(), Expr::top());
      ctx.rebase(id_, anchor_ - 1);
      kills_.clear();
      m_.purge_before(anchor_);
    }
  }

 private:
  void kill_children(Context& ctx) {
    for (const auto& c : corefs_) {
      Message m;
      m.kind = Message::Kind::Kill;
      m.to = c;
      send(ctx, std::move(m));
    }
  }

  std::shared_ptr<const Specification> a_;
  bool root_;
  std::set<std::string> refs_;
  std::set<std::string> corefs_;
  std::set<std::string> kills_;
  EHE p_;
  Memory m_;
  Round anchor_ = 1;
  Round last_obs_ = 0;
};

std::vector<std::string> run_components(const Graph& system, const DecentralizedTrace& tr, const ApOwner& owner) {
  std::set<std::string> all(system.nodes.begin(), system.nodes.end());
  all.insert(tr.components().begin(), tr.components().end());
  for (const auto& kv : owner) all.insert(kv.second);
  return {all.begin(), all.end()};
}

}  // namespace

SimRun simulate(const SimConfig& cfg, const SpecInput& input, const Graph& system, const DecentralizedTrace& tr,
                const std::optional<ApOwner>& owner_in) {
  ApOwner owner = ap_owner(tr);
  if (owner_in)
    for (const auto& kv : *owner_in) owner[kv.first] = kv.second;
  std::vector<std::string> comps = run_components(system, tr, owner);
  Network net = setup(cfg, input, system, comps, owner);

  MigrationShared shared;
  std::vector<std::unique_ptr<Process>> procs;
  switch (cfg.algorithm) {
    case Algorithm::Orch: {
      const std::string& main = comps.front();
      for (const auto& c : comps) {
        if (c == main)
          procs.push_back(std::make_unique<OrchMain>(c, c, net.automaton, comps.size() - 1));
        else
          procs.push_back(std::make_unique<OrchForwarder>(c, c, main));
      }
      break;
    }
    case Algorithm::Migr:
    case Algorithm::Migrr: {
      shared.components = comps;
      shared.owner = owner;
      shared.round_robin = cfg.algorithm == Algorithm::Migrr;
      for (const auto& c : comps) shared.monitor_of[c] = c;
      std::vector<std::string> first;
      if (!shared.round_robin) {
        // Owners of the round-1 obligations, earliest first.
        EHE start = mov(EHE::init(net.automaton), 0, 1);
        std::set<std::pair<Round, std::string>> atoms;
        for (const auto& [k, e] : start.entries())
          for (const Atom& a : atoms_of(e))
            if (a.kind == AtomKind::Timed && owner.count(a.name)) atoms.emplace(a.t, a.name);
        for (const auto& [t, ap] : atoms) {
          const std::string& c = owner.at(ap);
          if (std::find(first.begin(), first.end(), c) == first.end()) first.push_back(c);
        }
      }
      for (const auto& c : comps)
        if (std::find(first.begin(), first.end(), c) == first.end()) first.push_back(c);
      first.resize(std::min(first.size(), cfg.initial_active));
      for (const auto& c : comps) {
        auto m = std::make_unique<MigrationMonitor>(c, c, shared);
        if (std::find(first.begin(), first.end(), c) != first.end()) m->activate(EHE::init(net.automaton));
        procs.push_back(std::move(m));
      }
      break;
    }
    case Algorithm::Chor: {
      const ChorNetwork& chor = *net.chor;
      for (const auto& info : net.monitors) {
        auto a = std::make_shared<const Specification>(chor.spec.monitor(info.id));
        procs.push_back(std::make_unique<ChorMonitor>(info.id, info.component, a, info.id == chor.spec.root,
                                                      chor.refs.at(info.id), chor.corefs.at(info.id)));
      }
      break;
    }
  }
  std::sort(procs.begin(), procs.end(), [](const auto& a, const auto& b) { return a->id() < b->id(); });

  SimRun run;
  run.algorithm = cfg.algorithm;
  MetricsRecord& rec = run.metrics;
  rec.components = comps;
  std::map<std::string, Round> known;
  std::vector<std::pair<Round, Message>> pending;
  Round horizon = std::max<Round>(1, tr.length() + cfg.timeout_slack);
  std::optional<Verdict> verdict;
  Round t = 1;
  for (; t <= horizon; ++t) {
    std::vector<Message> out;
    Context ctx(t, cfg, rec, out, known);
    std::map<std::string, std::vector<const Message*>> inbox;
    std::vector<std::pair<Round, Message>> later;
    std::vector<Message> due;
    for (auto& [at, m] : pending) {
      if (at <= t)
        due.push_back(std::move(m));
      else
        later.emplace_back(at, std::move(m));
    }
    std::stable_sort(due.begin(), due.end(), [](const Message& a, const Message& b) { return a.from < b.from; });
    for (const Message& m : due) inbox[m.to].push_back(&m);
    for (auto& p : procs) {
      rec.at(t, p->id(), p->component());
      if (p->halted()) continue;
      ctx.stats = EvalStats{};
      p->step(ctx, tr.event(t, p->component()), inbox[p->id()]);
      MonitorCounters& c = rec.at(t, p->id(), p->component());
      c.simplifications += ctx.stats.simplifications;
      c.evaluations += ctx.stats.evaluations;
    }
    if (cfg.algorithm == Algorithm::Migr || cfg.algorithm == Algorithm::Migrr) {
      std::size_t n = 0;
      for (const auto& p : procs) n += p->active() ? 1 : 0;
      rec.active.push_back(n);
    }
    pending = std::move(later);
    for (Message& m : out) pending.emplace_back(t + cfg.comm_delay, std::move(m));
    if (ctx.verdict) {
      verdict = ctx.verdict;
      break;
    }
  }
  run.verdict = verdict.value_or(Verdict::Unknown);
  run.timed_out = !verdict;
  run.stop_round = verdict ? t : horizon;
  rec.run_length = run.stop_round;
  rec.verdict = run.verdict;
  rec.rounds.resize(run.stop_round);
  return run;
}

nlohmann::json to_json(const SimRun& run) {
  return {{"algorithm", to_string(run.algorithm)},
          {"verdict", to_string(run.verdict)},
          {"stop_round", run.stop_round},
          {"timed_out", run.timed_out},
          {"summary", to_json(summarize(run.metrics))}};
}

}  // namespace demon
