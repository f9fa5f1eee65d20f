#include "rapidlearn.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rapidlearn/harness.hpp"

using namespace rapidlearn;

struct rl_task {
  symbolic::PlanningTask task;
};

struct rl_plan {
  planner::Plan plan;
  std::vector<std::string> names;
  std::size_t expanded = 0;
};

struct rl_results {
  std::vector<harness::RunRecord> records;
  std::vector<std::string> discoveries;  // joined, parallel to records
  void refresh() {
    discoveries.clear();
    for (const auto& r : records) {
      std::string s;
      for (std::size_t i = 0; i < r.discoveries.size(); ++i) s += (i ? ";" : "") + r.discoveries[i];
      discoveries.push_back(std::move(s));
    }
  }
};

struct rl_stats {
  std::vector<harness::Aggregate> groups;
};

namespace {

thread_local std::string g_error;

rl_status fail(rl_status s, std::string msg) {
  g_error = std::move(msg);
  return s;
}

template <class F>
rl_status guard(F&& f) {
  try {
    g_error.clear();
    return f();
  } catch (const Error& e) {
    return fail(static_cast<rl_status>(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(RL_E_INTERNAL, e.what());
  } catch (...) {
    return fail(RL_E_INTERNAL, "unknown exception");
  }
}

std::string read_file(const char* path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::Io, std::string("cannot open '") + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

#define RL_REQUIRE(cond, what) \
  if (!(cond)) return fail(RL_E_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* rl_status_name(rl_status s) {
  if (s == RL_OK) return "Ok";
  if (s == RL_E_INTERNAL) return "Internal";
  return error_code_name(static_cast<ErrorCode>(s));
}

const char* rl_last_error(void) { return g_error.c_str(); }

const char* rl_version(void) { return "0.1.0"; }

rl_status rl_task_parse(const char* domain_text, const char* problem_text, const char* novelty, rl_task** out) {
  RL_REQUIRE(domain_text && problem_text && out, "null argument");
  return guard([&] {
    symbolic::Domain d = symbolic::parse_domain(domain_text);
    if (novelty && *novelty) d = novelty::patch_domain(d, novelty::find_novelty(novelty));
    auto dp = std::make_shared<const symbolic::Domain>(std::move(d));
    *out = new rl_task{symbolic::parse_problem(problem_text, dp)};
    return RL_OK;
  });
}

rl_status rl_task_load(const char* domain_path, const char* problem_path, const char* novelty, rl_task** out) {
  RL_REQUIRE(domain_path && problem_path && out, "null argument");
  std::string d, p;
  rl_status s = guard([&] {
    d = read_file(domain_path);
    p = read_file(problem_path);
    return RL_OK;
  });
  if (s != RL_OK) return s;
  return rl_task_parse(d.c_str(), p.c_str(), novelty, out);
}

size_t rl_task_operator_count(const rl_task* task) { return task ? task->task.operators->size() : 0; }

void rl_task_free(rl_task* task) { delete task; }

rl_status rl_plan_search(const rl_task* task, size_t node_budget, rl_plan** out, int* found) {
  RL_REQUIRE(task && out && found, "null argument");
  return guard([&] {
    planner::SearchConfig cfg;
    if (node_budget) cfg.node_budget = node_budget;
    auto r = planner::search(task->task, cfg);
    if (r.status == planner::SearchStatus::Timeout)
      return fail(RL_E_PLANNER_TIMEOUT, "node budget of " + std::to_string(cfg.node_budget) + " expansions exhausted");
    auto* p = new rl_plan;
    p->plan = std::move(r.plan);
    p->names = p->plan.names();
    p->expanded = r.expanded;
    *found = r.status == planner::SearchStatus::Found ? 1 : 0;
    *out = p;
    return RL_OK;
  });
}

size_t rl_plan_length(const rl_plan* plan) { return plan ? plan->names.size() : 0; }

const char* rl_plan_step(const rl_plan* plan, size_t i) {
  return plan && i < plan->names.size() ? plan->names[i].c_str() : nullptr;
}

size_t rl_plan_expanded(const rl_plan* plan) { return plan ? plan->expanded : 0; }

rl_status rl_plan_validate(const rl_task* task, const rl_plan* plan, int* valid) {
  RL_REQUIRE(task && plan && valid, "null argument");
  return guard([&] {
    *valid = planner::validate(plan->plan, task->task).ok ? 1 : 0;
    return RL_OK;
  });
}

void rl_plan_free(rl_plan* plan) { delete plan; }

size_t rl_novelty_count(void) { return novelty::list_novelties().size(); }

const char* rl_novelty_id(size_t i) {
  const auto& all = novelty::list_novelties();
  return i < all.size() ? all[i].id.c_str() : nullptr;
}

const char* rl_novelty_description(size_t i) {
  const auto& all = novelty::list_novelties();
  return i < all.size() ? all[i].description.c_str() : nullptr;
}

void rl_run_options_init(rl_run_options* o) {
  if (!o) return;
  *o = rl_run_options{};
  o->scenario = "ATB-easy";
  o->strategy = "kge-ucb";
  o->workers = 1;
  o->eval_episodes = 100;
  o->eval_budget = 300;
}

rl_status rl_run(const rl_run_options* o, rl_results** out) {
  RL_REQUIRE(o && out && o->scenario && o->strategy, "null argument");
  RL_REQUIRE(o->seeds && o->seed_count > 0, "at least one seed is required");
  return guard([&] {
    harness::ExperimentConfig cfg;
    cfg.scenario = o->scenario;
    if (cfg.scenario != "none") novelty::find_novelty(cfg.scenario);
    cfg.strategy = learner::parse_strategy(o->strategy);
    cfg.seeds.assign(o->seeds, o->seeds + o->seed_count);
    if (o->out_dir) cfg.out_dir = o->out_dir;
    cfg.workers = o->workers > 0 ? o->workers : 1;
    if (o->eval_episodes > 0) cfg.eval_episodes = o->eval_episodes;
    if (o->eval_budget > 0) cfg.eval_budget = o->eval_budget;
    cfg.discovery.max_timesteps = o->max_timesteps;
    if (o->max_episodes) cfg.discovery.e_max = o->max_episodes;
    if (o->optimizer) cfg.discovery.update.optimizer = learner::parse_optimizer(o->optimizer);
    if (o->learning_rate > 0) cfg.discovery.update.learning_rate = o->learning_rate;
    auto* r = new rl_results;
    r->records = harness::run_experiment(cfg);
    r->refresh();
    *out = r;
    return RL_OK;
  });
}

size_t rl_results_count(const rl_results* r) { return r ? r->records.size() : 0; }

rl_status rl_results_get(const rl_results* r, size_t i, rl_record* out) {
  RL_REQUIRE(r && out, "null argument");
  RL_REQUIRE(i < r->records.size(), "record index out of range");
  const auto& x = r->records[i];
  *out = rl_record{x.scenario.c_str(), x.strategy.c_str(),      x.seed,
                   x.time_to_adapt,    x.converged ? 1 : 0,      x.post_novelty_success,
                   r->discoveries[i].c_str(), x.wall_clock,      x.error.c_str()};
  return RL_OK;
}

rl_status rl_results_write(const rl_results* r, const char* path) {
  RL_REQUIRE(r && path, "null argument");
  return guard([&] {
    harness::write_results_file(path, r->records);
    return RL_OK;
  });
}

rl_status rl_results_read(const char* path, rl_results** out) {
  RL_REQUIRE(path && out, "null argument");
  return guard([&] {
    auto* r = new rl_results;
    try {
      r->records = harness::read_results_file(path);
    } catch (...) {
      delete r;
      throw;
    }
    r->refresh();
    *out = r;
    return RL_OK;
  });
}

rl_status rl_results_append(rl_results* dst, const rl_results* src) {
  RL_REQUIRE(dst && src, "null argument");
  dst->records.insert(dst->records.end(), src->records.begin(), src->records.end());
  dst->refresh();
  return RL_OK;
}

rl_results* rl_results_new(void) { return new rl_results; }

void rl_results_free(rl_results* r) { delete r; }

rl_status rl_stats_compute(const rl_results* r, rl_stats** out) {
  RL_REQUIRE(r && out, "null argument");
  return guard([&] {
    *out = new rl_stats{harness::aggregate(r->records)};
    return RL_OK;
  });
}

size_t rl_stats_group_count(const rl_stats* s) { return s ? s->groups.size() : 0; }

rl_status rl_stats_group(const rl_stats* s, size_t i, rl_group* out) {
  RL_REQUIRE(s && out, "null argument");
  RL_REQUIRE(i < s->groups.size(), "group index out of range");
  const auto& g = s->groups[i];
  *out = rl_group{g.scenario.c_str(),     g.strategy.c_str(), g.runs,          g.converged,
                  g.time_to_adapt.mean,   g.time_to_adapt.sd, g.success.mean,  g.success.sd};
  return RL_OK;
}

void rl_stats_free(rl_stats* s) { delete s; }

rl_status rl_welch_ttest(const double* a, size_t na, const double* b, size_t nb, double* t, double* df, double* p) {
  RL_REQUIRE((a || na == 0) && (b || nb == 0) && t && df && p, "null argument");
  return guard([&] {
    auto r = harness::welch_ttest(std::vector<double>(a, a + na), std::vector<double>(b, b + nb));
    *t = r.t;
    *df = r.df;
    *p = r.p;
    return RL_OK;
  });
}

rl_status rl_curve_emit(const char* in_dir, const char* out_file, uint64_t bin) {
  RL_REQUIRE(in_dir && out_file, "null argument");
  return guard([&] {
    harness::emit_learning_curve(in_dir, out_file, bin ? bin : 500);
    return RL_OK;
  });
}

rl_status rl_executor_eval(const char* const* paths, size_t count, const char* scenario, int episodes, int budget,
                           uint64_t seed, double* success) {
  RL_REQUIRE(paths && count > 0 && success, "null argument");
  return guard([&] {
    std::vector<bridge::Executor> xs;
    for (size_t i = 0; i < count; ++i) xs.push_back(bridge::load_executor(paths[i]));
    std::string id = scenario ? scenario : xs.front().meta.scenario;
    if (id.empty()) throw Error(ErrorCode::InvalidArgument, "executor file names no scenario; pass one explicitly");
    auto sc = bridge::Scenario::make(id);
    world::World probe(sc.config);
    bridge::ExecutorRegistry registry;
    for (auto& x : xs) {
      if (x.entities != probe.entities())
        throw Error(ErrorCode::ExecutorMismatch, "executor '" + x.id + "' does not match scenario " + id);
      registry.add(std::make_shared<const bridge::Executor>(std::move(x)));
    }
    *success = harness::evaluate(sc, registry, episodes > 0 ? episodes : 100, budget > 0 ? budget : 300, seed);
    return RL_OK;
  });
}

}  // extern "C"
