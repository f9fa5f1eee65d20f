#include "rapidlearn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

namespace rapidlearn::harness {

namespace fs = std::filesystem;

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a * 0x9E3779B97F4A7C15ULL + b + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string join(const std::vector<std::string>& xs, char sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

// Commas and newlines would break the row.
std::string clean(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::string training_log_name(const std::string& scenario, const std::string& strategy, std::uint64_t seed,
                              std::size_t k) {
  return scenario + "__" + strategy + "__" + std::to_string(seed) + "__" + std::to_string(k) + ".csv";
}

double evaluate(const bridge::Scenario& sc, const bridge::ExecutorRegistry& registry, int episodes, int budget,
                std::uint64_t seed) {
  if (episodes <= 0) throw Error(ErrorCode::InvalidArgument, "evaluation needs at least one episode");
  world::WorldConfig wc = sc.config;
  wc.horizon = budget;
  bridge::ExecutorRegistry fixed = registry;  // no discoveries during evaluation
  int wins = 0;
  for (int k = 0; k < episodes; ++k) {
    world::World w(wc);
    w.reset(mix(seed, static_cast<std::uint64_t>(k) + 1));
    wins += bridge::execute_plan(w, sc, fixed, {}).success ? 1 : 0;
  }
  return static_cast<double>(wins) / static_cast<double>(episodes);
}

RunRecord run_seed(const ExperimentConfig& cfg, const bridge::Scenario& sc, std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  RunRecord r;
  r.scenario = cfg.scenario;
  r.strategy = learner::strategy_name(cfg.strategy);
  r.seed = seed;
  try {
    if (cfg.on_seed_start) cfg.on_seed_start(seed);
    world::World w(sc.config);
    w.reset(mix(seed, 0));
    bridge::ExecutorRegistry registry;
    auto report = discovery::rapid_learn(w, sc, registry, cfg.strategy, cfg.discovery, mix(seed, 1));
    r.time_to_adapt = report.timesteps();
    r.converged = report.all_converged();
    for (const auto& d : report.discoveries) r.discoveries.push_back(d.executor->operator_name);
    r.post_novelty_success = evaluate(sc, registry, cfg.eval_episodes, cfg.eval_budget, mix(seed, 2));
    if (!cfg.out_dir.empty()) {
      fs::create_directories(fs::path(cfg.out_dir) / "logs");
      fs::create_directories(fs::path(cfg.out_dir) / "executors");
      for (std::size_t k = 0; k < report.discoveries.size(); ++k) {
        const auto& d = report.discoveries[k];
        std::ofstream log(fs::path(cfg.out_dir) / "logs" / training_log_name(r.scenario, r.strategy, seed, k));
        discovery::write_training_header(log);
        for (const auto& rec : d.log) discovery::write_training_record(log, rec);
        std::string op = d.executor->operator_name;
        std::replace(op.begin(), op.end(), ' ', '_');
        bridge::save_executor(*d.executor, (fs::path(cfg.out_dir) / "executors" /
                                            (r.scenario + "__" + r.strategy + "__" + std::to_string(seed) + "__" +
                                             op + ".json"))
                                               .string());
      }
    }
  } catch (const std::exception& e) {
    r.error = clean(e.what());
  }
  r.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) throw Error(ErrorCode::InvalidArgument, "no seeds given");
  const bridge::Scenario sc = bridge::Scenario::make(cfg.scenario, cfg.world);
  std::vector<RunRecord> out(cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) out[i] = run_seed(cfg, sc, cfg.seeds[i]);
  };
  int n = std::max(1, std::min<int>(cfg.workers, static_cast<int>(cfg.seeds.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

void write_results(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kResultsHeader << "\n";
  out << "scenario,strategy,seed,time_to_adapt,converged,post_novelty_success,discoveries,wall_clock_s,error\n";
  for (const auto& r : records) {
    std::ostringstream succ, wall;
    succ.precision(6);
    succ << r.post_novelty_success;
    wall.precision(4);
    wall << std::fixed << r.wall_clock;
    out << r.scenario << ',' << r.strategy << ',' << r.seed << ',' << r.time_to_adapt << ',' << (r.converged ? 1 : 0)
        << ',' << succ.str() << ',' << join(r.discoveries, ';') << ',' << wall.str() << ',' << clean(r.error) << "\n";
  }
}

std::vector<RunRecord> read_results(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader)
    throw Error(ErrorCode::Parse, "results file does not start with '" + std::string(kResultsHeader) + "'");
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "results file has no column header");
  std::vector<RunRecord> out;
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 9) throw ParseError("results row has " + std::to_string(f.size()) + " fields", lineno, 1);
    try {
      RunRecord r;
      r.scenario = f[0];
      r.strategy = f[1];
      r.seed = std::stoull(f[2]);
      r.time_to_adapt = std::stoull(f[3]);
      r.converged = f[4] == "1";
      r.post_novelty_success = std::stod(f[5]);
      if (!f[6].empty()) r.discoveries = split(f[6], ';');
      r.wall_clock = std::stod(f[7]);
      r.error = f[8];
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("malformed number in results row", lineno, 1);
    }
  }
  return out;
}

void write_results_file(const std::string& path, const std::vector<RunRecord>& records) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  write_results(f, records);
}

std::vector<RunRecord> read_results_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return read_results(f);
}

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.n = xs.size();
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double v = 0.0;
    for (double x : xs) v += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(v / static_cast<double>(xs.size() - 1));
  }
  return s;
}

std::vector<Aggregate> aggregate(const std::vector<RunRecord>& records) {
  std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) {
    if (r.error.empty()) groups[{r.scenario, r.strategy}].push_back(&r);
  }
  if (groups.empty()) throw Error(ErrorCode::EmptyGroup, "no successful runs to aggregate");
  std::vector<Aggregate> out;
  for (const auto& [key, rs] : groups) {
    Aggregate a;
    a.scenario = key.first;
    a.strategy = key.second;
    a.runs = rs.size();
    std::vector<double> tta, succ;
    for (const auto* r : rs) {
      // Unconverged runs count toward success but not time-to-adapt.
      if (r->converged) tta.push_back(static_cast<double>(r->time_to_adapt));
      succ.push_back(r->post_novelty_success);
      a.converged += r->converged ? 1 : 0;
    }
    a.time_to_adapt = summarize(tta);
    a.success = summarize(succ);
    out.push_back(a);
  }
  return out;
}

TTest welch_ttest(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw Error(ErrorCode::DegenerateVariance, "each group needs at least two values");
  Summary sa = summarize(a), sb = summarize(b);
  double va = sa.sd * sa.sd / static_cast<double>(sa.n);
  double vb = sb.sd * sb.sd / static_cast<double>(sb.n);
  if (va + vb <= 0.0) throw Error(ErrorCode::DegenerateVariance, "both groups have zero variance");
  TTest r;
  r.t = (sa.mean - sb.mean) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) /
         (va * va / static_cast<double>(sa.n - 1) + vb * vb / static_cast<double>(sb.n - 1));
  boost::math::students_t dist(r.df);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  return r;
}

std::vector<CurvePoint> learning_curve(const std::string& in_dir, std::uint64_t bin, std::size_t window) {
  if (bin == 0 || window == 0) throw Error(ErrorCode::InvalidArgument, "bin and window must be positive");
  fs::path logs = fs::path(in_dir) / "logs";
  if (!fs::is_directory(logs)) throw Error(ErrorCode::Io, "no logs directory under '" + in_dir + "'");

  // (scenario, strategy, seed) -> discovery index -> rows of (steps, success)
  using Key = std::tuple<std::string, std::string, std::uint64_t>;
  std::map<Key, std::map<std::size_t, std::vector<std::pair<int, bool>>>> runs;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(logs)) {
    if (e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::string stem = p.stem().string();
    std::vector<std::string> parts;
    for (std::size_t pos = 0;;) {
      auto nx = stem.find("__", pos);
      parts.push_back(stem.substr(pos, nx == std::string::npos ? std::string::npos : nx - pos));
      if (nx == std::string::npos) break;
      pos = nx + 2;
    }
    if (parts.size() != 4) continue;
    std::ifstream f(p);
    std::string line;
    std::getline(f, line);
    auto& rows = runs[{parts[0], parts[1], std::stoull(parts[2])}][std::stoull(parts[3])];
    while (std::getline(f, line)) {
      auto c = split(line, ',');
      if (c.size() < 4) throw Error(ErrorCode::Parse, "malformed training log " + p.string());
      rows.push_back({std::stoi(c[1]), c[3] == "1"});
    }
  }

  // Per run: (cumulative timesteps, rolling success) after each episode.
  std::map<std::pair<std::string, std::string>, std::vector<std::vector<std::pair<std::uint64_t, double>>>> series;
  for (const auto& [key, discoveries] : runs) {
    std::vector<std::pair<std::uint64_t, double>> pts;
    std::uint64_t total = 0;
    for (const auto& [k, rows] : discoveries) {
      std::vector<bool> hist;
      for (const auto& [steps, ok] : rows) {
        total += static_cast<std::uint64_t>(steps);
        hist.push_back(ok);
        std::size_t n = std::min(window, hist.size());
        double rate = static_cast<double>(std::count(hist.end() - static_cast<std::ptrdiff_t>(n), hist.end(), true)) /
                      static_cast<double>(n);
        pts.push_back({total, rate});
      }
    }
    series[{std::get<0>(key), std::get<1>(key)}].push_back(std::move(pts));
  }

  std::vector<CurvePoint> out;
  for (const auto& [key, all] : series) {
    std::uint64_t horizon = 0;
    for (const auto& pts : all) {
      if (!pts.empty()) horizon = std::max(horizon, pts.back().first);
    }
    for (std::uint64_t g = 0; g <= horizon + bin - 1; g += bin) {
      std::vector<double> vals;
      for (const auto& pts : all) {
        double v = 0.0;
        for (const auto& [ts, rate] : pts) {
          if (ts > g) break;
          v = rate;
        }
        vals.push_back(v);
      }
      Summary s = summarize(vals);
      out.push_back({key.first, key.second, g, s.mean, s.sd, s.n});
    }
  }
  return out;
}

void emit_learning_curve(const std::string& in_dir, const std::string& out_file, std::uint64_t bin) {
  auto pts = learning_curve(in_dir, bin);
  std::ofstream f(out_file);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + out_file + "'");
  f << "scenario,strategy,timesteps,mean_success,sd_success,runs\n";
  for (const auto& p : pts)
    f << p.scenario << ',' << p.strategy << ',' << p.timesteps << ',' << p.mean_success << ',' << p.sd_success << ','
      << p.runs << "\n";
}

}  // namespace rapidlearn::harness
