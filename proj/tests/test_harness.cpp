#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "rapidlearn/harness.hpp"

using namespace rapidlearn;
using namespace rapidlearn::harness;
namespace fs = std::filesystem;

namespace {

RunRecord rec(std::uint64_t seed, std::uint64_t tta, bool conv, double succ, const std::string& strat = "kge-ucb") {
  RunRecord r;
  r.scenario = "ATB-easy";
  r.strategy = strat;
  r.seed = seed;
  r.time_to_adapt = tta;
  r.converged = conv;
  r.post_novelty_success = succ;
  return r;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("rl_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentConfig small(const std::string& scenario, std::vector<std::uint64_t> seeds) {
  ExperimentConfig c;
  c.scenario = scenario;
  c.seeds = std::move(seeds);
  c.discovery.max_timesteps = 20000;
  c.eval_episodes = 10;
  return c;
}

void same_outcome(const RunRecord& a, const RunRecord& b) {
  CHECK(a.seed == b.seed);
  CHECK(a.time_to_adapt == b.time_to_adapt);
  CHECK(a.converged == b.converged);
  CHECK(a.post_novelty_success == b.post_novelty_success);
  CHECK(a.discoveries == b.discoveries);
  CHECK(a.error == b.error);
}

void expect_code(ErrorCode code, const std::function<void()>& f) {
  try {
    f();
    FAIL("expected " << error_code_name(code));
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("aggregate means and sample deviations") {
  auto g = aggregate({rec(0, 10, true, 1.0), rec(1, 20, true, 0.5), rec(2, 30, true, 0.0)});
  REQUIRE(g.size() == 1);
  CHECK(g[0].time_to_adapt.mean == doctest::Approx(20.0));
  CHECK(g[0].time_to_adapt.sd == doctest::Approx(10.0));
  CHECK(g[0].success.mean == doctest::Approx(0.5));
  CHECK(g[0].success.sd == doctest::Approx(0.5));
  CHECK(g[0].runs == 3);

  auto one = aggregate({rec(0, 10, true, 1.0)});
  CHECK(one[0].time_to_adapt.sd == 0.0);
  CHECK_FALSE(one[0].time_to_adapt.sd_defined());
}

TEST_CASE("unconverged runs stay out of time to adapt") {
  auto g = aggregate({rec(0, 1000, true, 1.0), rec(1, 3000, true, 1.0), rec(2, 150000, false, 0.2)});
  REQUIRE(g.size() == 1);
  CHECK(g[0].time_to_adapt.mean == doctest::Approx(2000.0));
  CHECK(g[0].time_to_adapt.n == 2);
  CHECK(g[0].converged == 2);
  CHECK(g[0].did_not_converge() == 1);
  CHECK(g[0].success.n == 3);
}

TEST_CASE("aggregate groups by strategy and skips errored runs") {
  auto bad = rec(9, 0, false, 0.0);
  bad.error = "boom";
  auto g = aggregate({rec(0, 10, true, 1.0, "eg"), rec(0, 20, true, 1.0, "kge-ucb"), bad});
  REQUIRE(g.size() == 2);
  CHECK(g[0].strategy == "eg");
  CHECK(g[1].strategy == "kge-ucb");
  CHECK(g[1].runs == 1);
  expect_code(ErrorCode::EmptyGroup, [] { aggregate({}); });
  expect_code(ErrorCode::EmptyGroup, [&] { aggregate({bad}); });
}

// Reference values computed independently with scipy.stats.ttest_ind(equal_var=False).
TEST_CASE("Welch t-test against reference values") {
  auto r = welch_ttest({0.9, 0.92, 0.95, 0.97, 0.96}, {0.5, 0.55, 0.52, 0.58, 0.54});
  CHECK(r.t == doctest::Approx(21.366058938799917).epsilon(1e-9));
  CHECK(r.p == doctest::Approx(2.4712926967841426e-08).epsilon(1e-6));
  CHECK(r.p < 0.001);

  auto s = welch_ttest({12000, 15000, 9000, 20000, 11000, 14000}, {30000, 25000, 41000, 28000, 35000});
  CHECK(s.t == doctest::Approx(-5.677319244302934).epsilon(1e-9));
  CHECK(s.df == doctest::Approx(6.364574858207459).epsilon(1e-9));
  CHECK(s.p == doctest::Approx(0.0010503857087293175).epsilon(1e-6));

  auto same = welch_ttest({1, 2, 3}, {1, 2, 3});
  CHECK(same.t == doctest::Approx(0.0));
  CHECK(same.p == doctest::Approx(1.0));

  expect_code(ErrorCode::DegenerateVariance, [] { welch_ttest({1.0}, {1.0, 2.0}); });
  expect_code(ErrorCode::DegenerateVariance, [] { welch_ttest({2, 2, 2}, {5, 5}); });
}

TEST_CASE("results file round trip") {
  auto a = rec(4, 1234, true, 0.98);
  a.discoveries = {"break", "crafttree_tap"};
  a.wall_clock = 1.5;
  auto b = rec(5, 150000, false, 0.1, "eg");
  b.error = "budget exhausted";
  std::stringstream ss;
  write_results(ss, {a, b});
  CHECK(ss.str().rfind(kResultsHeader, 0) == 0);
  auto back = read_results(ss);
  REQUIRE(back.size() == 2);
  same_outcome(back[0], a);
  same_outcome(back[1], b);
  CHECK(back[1].strategy == "eg");
  CHECK(back[0].wall_clock == doctest::Approx(1.5));

  std::stringstream junk("not a results file\n1,2,3\n");
  expect_code(ErrorCode::Parse, [&] { read_results(junk); });
  std::stringstream truncated(std::string(kResultsHeader) + "\n" +
                              "scenario,strategy,seed,time_to_adapt,converged,post_novelty_success,discoveries,"
                              "wall_clock_s,error\nATB-easy,eg,x\n");
  expect_code(ErrorCode::Parse, [&] { read_results(truncated); });
}

TEST_CASE("learning curve from hand-written logs") {
  auto dir = scratch("curve");
  fs::create_directories(dir / "logs");
  {
    std::ofstream f(dir / "logs" / training_log_name("SP", "eg", 0, 0));
    f << "episode,steps,return,done,epsilon,rho,converged\n0,100,-100,0,0.3,0,0\n1,100,901,1,0.3,0,0\n";
  }
  {
    std::ofstream f(dir / "logs" / training_log_name("SP", "eg", 1, 0));
    f << "episode,steps,return,done,epsilon,rho,converged\n0,200,801,1,0.3,0,0\n";
  }
  auto pts = learning_curve(dir.string(), 100);
  REQUIRE(pts.size() == 3);
  // Seed 0: success rate 0 after 100 steps, 0.5 after 200. Seed 1: 1 after 200.
  CHECK(pts[0].timesteps == 0);
  CHECK(pts[0].mean_success == 0.0);
  CHECK(pts[1].timesteps == 100);
  CHECK(pts[1].mean_success == 0.0);
  CHECK(pts[2].timesteps == 200);
  CHECK(pts[2].mean_success == doctest::Approx(0.75));
  CHECK(pts[2].runs == 2);
}

TEST_CASE("empty logs give a header-only curve; a missing directory is an error") {
  auto dir = scratch("curve_empty");
  fs::create_directories(dir / "logs");
  auto out = dir / "curve.csv";
  emit_learning_curve(dir.string(), out.string());
  std::ifstream f(out);
  std::string all((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(all == "scenario,strategy,timesteps,mean_success,sd_success,runs\n");

  auto none = scratch("curve_missing");
  expect_code(ErrorCode::Io, [&] { learning_curve(none.string()); });
}

TEST_CASE("learning curves from real runs of two strategies") {
  auto dir = scratch("curve_runs");
  for (auto strat : {learner::Strategy::KgeUab, learner::Strategy::EG}) {
    auto cfg = small("ATB-easy", {0, 1});
    cfg.strategy = strat;
    cfg.out_dir = dir.string();
    cfg.eval_episodes = 2;
    run_experiment(cfg);
  }
  auto pts = learning_curve(dir.string(), 500);
  std::map<std::string, std::vector<CurvePoint>> by;
  for (const auto& p : pts) by[p.strategy].push_back(p);
  REQUIRE(by.size() == 2);
  for (const auto& [name, series] : by) {
    CAPTURE(name);
    REQUIRE_FALSE(series.empty());
    for (std::size_t i = 0; i < series.size(); ++i) {
      CHECK(series[i].timesteps == 500 * i);
      CHECK(series[i].runs == 2);
      CHECK(series[i].mean_success >= 0.0);
      CHECK(series[i].mean_success <= 1.0);
    }
  }
}

TEST_CASE("a converged run ends its curve at or above the win threshold") {
  auto dir = scratch("curve_converged");
  auto cfg = small("ATB-easy", {0});
  cfg.out_dir = dir.string();
  cfg.eval_episodes = 2;
  auto r = run_experiment(cfg);
  REQUIRE(r.size() == 1);
  REQUIRE(r[0].converged);
  auto pts = learning_curve(dir.string(), 100, static_cast<std::size_t>(cfg.discovery.delta_G));
  REQUIRE_FALSE(pts.empty());
  CHECK(pts.back().mean_success >= cfg.discovery.eta / 100.0);
  CHECK(fs::exists(dir / "executors" / "ATB-easy__kge-ucb__0__break.json"));
}

TEST_CASE("runs are deterministic and independent of worker count") {
  auto cfg = small("ATB-easy", {0, 1, 2});
  auto a = run_experiment(cfg);
  cfg.workers = 2;
  auto b = run_experiment(cfg);
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 3);
  for (std::size_t i = 0; i < a.size(); ++i) same_outcome(a[i], b[i]);

  // Serialized results match byte for byte once the clock column is zeroed.
  for (auto& r : a) r.wall_clock = 0;
  for (auto& r : b) r.wall_clock = 0;
  std::stringstream sa, sb;
  write_results(sa, a);
  write_results(sb, b);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("seed order does not change per-seed outcomes") {
  auto fwd = run_experiment(small("SP", {1, 2, 3}));
  auto rev = run_experiment(small("SP", {3, 1, 2}));
  REQUIRE(rev.size() == 3);
  CHECK(rev[0].seed == 3);
  same_outcome(fwd[0], rev[1]);
  same_outcome(fwd[1], rev[2]);
  same_outcome(fwd[2], rev[0]);
}

TEST_CASE("a failing seed is isolated") {
  auto cfg = small("SP", {0, 1, 2});
  cfg.workers = 2;
  cfg.on_seed_start = [](std::uint64_t seed) {
    if (seed == 1) throw std::runtime_error("injected failure");
  };
  auto r = run_experiment(cfg);
  REQUIRE(r.size() == 3);
  CHECK(r[0].error.empty());
  CHECK(r[1].error.find("injected failure") != std::string::npos);
  CHECK(r[2].error.empty());
  CHECK(r[0].discoveries == std::vector<std::string>{"break"});
  auto g = aggregate(r);
  CHECK(g[0].runs == 2);
}

TEST_CASE("one seed gives one record") {
  auto r = run_experiment(small("ATB-easy", {7}));
  REQUIRE(r.size() == 1);
  CHECK(r[0].seed == 7);
  CHECK(r[0].scenario == "ATB-easy");
  CHECK(r[0].strategy == "kge-ucb");
}

TEST_CASE("without a novelty nothing is learned and every episode succeeds") {
  ExperimentConfig cfg;
  cfg.scenario = "none";
  cfg.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  cfg.eval_episodes = 20;
  auto r = run_experiment(cfg);
  REQUIRE(r.size() == 10);
  for (const auto& x : r) {
    CAPTURE(x.seed);
    CHECK(x.error.empty());
    CHECK(x.time_to_adapt == 0);
    CHECK(x.discoveries.empty());
    CHECK(x.post_novelty_success == 1.0);
  }
}
