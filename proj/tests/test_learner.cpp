#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "rapidlearn/learner.hpp"

using namespace rapidlearn;
using namespace rapidlearn::learner;

TEST_CASE("UCB bias matches the direct formula") {
  auto b = bias_ucb({0.5, 0.5}, {true, false}, {1.0, 1.0}, 3, 0.0005);
  REQUIRE(b.size() == 2);
  CHECK(std::fabs(b[0] - 0.500524) < 1e-6);
  CHECK(std::fabs(b[1] - 0.499476) < 1e-6);
  // Uniform probabilities with equal counts: the argmax lands in delta.
  auto u = bias_ucb({0.25, 0.25, 0.25, 0.25}, {false, false, true, false}, {4, 4, 4, 4}, 10, 0.0005);
  CHECK(argmax(u) == 2);
}

TEST_CASE("UAB examples") {
  auto a = bias_uab({0.5, 0.5}, {true, false}, 2.0);
  CHECK(a[0] == doctest::Approx(0.75));
  CHECK(a[1] == doctest::Approx(0.25));
  auto b = bias_uab({0.2, 0.3, 0.5}, {false, false, true}, 2.0);
  CHECK(b[0] == doctest::Approx(0.1));
  CHECK(b[1] == doctest::Approx(0.15));
  CHECK(b[2] == doctest::Approx(0.75));
  CHECK_THROWS_AS(bias_uab({0.5, 0.5}, {false, false}, 2.0), Error);
}

TEST_CASE("UAB keeps a distribution on 1000 random inputs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(2, 30);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = len(rng);
    std::vector<double> p(static_cast<std::size_t>(n));
    for (auto& x : p) x = u(rng) + 1e-6;
    double z = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= z;
    std::vector<bool> delta(p.size());
    bool any = false;
    for (std::size_t i = 0; i < p.size(); ++i) any |= (delta[i] = u(rng) < 0.3);
    if (!any) delta[static_cast<std::size_t>(trial) % p.size()] = true;
    double mu = 1.1 + 4.0 * u(rng);

    auto q = bias_uab(p, delta, mu);
    double sum = std::accumulate(q.begin(), q.end(), 0.0);
    CHECK(std::fabs(sum - 1.0) < 1e-9);

    // Oracle from the update rule with the delta mass sum_delta.
    double sd = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (delta[i]) sd += p[i];
    for (std::size_t i = 0; i < p.size(); ++i) {
      double want = delta[i] ? (mu - 1.0 + sd) * p[i] / (mu * sd) : p[i] / mu;
      CHECK(std::fabs(q[i] - want) < 1e-12);
    }
  }
}

TEST_CASE("full exploration under UAB always picks the biased action") {
  ExplorationState e(Strategy::KgeUab, {true, false}, 1.0, 0.0005, 2.0);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) CHECK(select_action({0.5, 0.5}, e, rng) == 0);
  CHECK(e.t == 201);
  CHECK(e.counts[0] == doctest::Approx(201.0));
}

TEST_CASE("EG exploration is uniform") {
  ExplorationState e(Strategy::EG, {false, false, false, false}, 1.0, 0.0005, 2.0);
  std::mt19937_64 rng(7);
  std::vector<int> hist(4, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++hist[select_action({0.97, 0.01, 0.01, 0.01}, e, rng)];
  for (int h : hist) CHECK(std::fabs(h / static_cast<double>(draws) - 0.25) <= 0.02);
}

TEST_CASE("selection is a function of the rng stream") {
  std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  for (Strategy k : {Strategy::KgeUcb, Strategy::KgeUab, Strategy::EG}) {
    ExplorationState a(k, {true, false, false, false}, 0.3, 0.0005, 2.0);
    ExplorationState b = a;
    std::mt19937_64 r1(99), r2(99);
    for (int i = 0; i < 500; ++i) CHECK(select_action(p, a, r1) == select_action(p, b, r2));
  }
}

TEST_CASE("REINFORCE gradient agrees with central finite differences") {
  std::mt19937_64 rng(31337);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> steps(2, 12);
  UpdateConfig cfg;
  cfg.normalize_returns = false;
  cfg.gamma = 0.95;
  for (int instance = 0; instance < 20; ++instance) {
    const std::size_t in = 5 + static_cast<std::size_t>(instance % 4), out = 3 + static_cast<std::size_t>(instance % 3);
    Policy pi = Policy::random(in, out, rng, 0.5, 6);
    EpisodeBuffer buf;
    int n = steps(rng);
    std::uniform_int_distribution<std::size_t> act(0, out - 1);
    for (int t = 0; t < n; ++t) {
      std::vector<double> s(in);
      for (auto& x : s) x = g(rng);
      buf.append(s, act(rng), g(rng) * 10.0, t == n - 1);
    }
    auto grad = reinforce_gradient(pi, buf, cfg);
    auto G = returns_to_go(buf, cfg.gamma);
    auto objective = [&](const Policy& p) {
      double j = 0.0;
      for (std::size_t t = 0; t < buf.size(); ++t) j += G[t] * p.log_prob(buf.states[t], buf.actions[t]);
      return j;
    };
    std::vector<double> fd(pi.parameter_count());
    const double h = 1e-6;
    for (std::size_t k = 0; k < fd.size(); ++k) {
      Policy plus = pi, minus = pi;
      plus.mutable_params()[k] += h;
      minus.mutable_params()[k] -= h;
      fd[k] = (objective(plus) - objective(minus)) / (2 * h);
    }
    double diff = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < fd.size(); ++k) {
      diff = std::max(diff, std::fabs(grad[k] - fd[k]));
      scale = std::max(scale, std::fabs(fd[k]));
    }
    CAPTURE(instance);
    CHECK(diff / scale < 1e-4);
  }
}

TEST_CASE("returns to go restart after a done flag") {
  EpisodeBuffer b;
  b.append({0}, 0, 1.0, false);
  b.append({0}, 0, 2.0, true);
  b.append({0}, 0, 4.0, true);
  auto r = returns_to_go(b, 0.5);
  CHECK(r[0] == doctest::Approx(2.0));
  CHECK(r[1] == doctest::Approx(2.0));
  CHECK(r[2] == doctest::Approx(4.0));
}

TEST_CASE("update raises the log-probability of a rewarded action") {
  std::mt19937_64 rng(5);
  Policy pi = Policy::random(3, 2, rng);
  std::vector<double> s{1.0, -1.0, 0.5};
  double before = pi.probs(s)[1];
  for (int i = 0; i < 20; ++i) {
    EpisodeBuffer b;
    b.append(s, 1, 10.0, false);
    b.append(s, 0, -10.0, true);
    UpdateConfig cfg;
    cfg.learning_rate = 0.05;
    update_network(pi, b, cfg);
    CHECK(b.empty());
  }
  CHECK(pi.probs(s)[1] > before);
  EpisodeBuffer empty;
  CHECK_THROWS_AS(update_network(pi, empty, {}), Error);
}

TEST_CASE("probabilities reject a wrong observation size") {
  Policy pi(4, 3);
  CHECK_THROWS_AS(pi.probs({1.0, 2.0}), Error);
}

TEST_CASE("decay schedule") {
  const double rate = std::log(0.01) / 2000.0;
  CHECK(decayed(0.3, 0.05, rate, 0) == doctest::Approx(0.3));
  CHECK(decayed(0.3, 0.05, rate, 2000) == doctest::Approx(0.05 + 0.25 * 0.01));
  double prev = 1.0;
  for (std::uint64_t n = 0; n < 20000; n += 97) {
    double v = decayed(0.3, 0.05, rate, n);
    CHECK(v <= prev);
    CHECK(v >= 0.05);
    prev = v;
  }
}

TEST_CASE("strategy and optimizer names") {
  CHECK(parse_strategy("kge-ucb") == Strategy::KgeUcb);
  CHECK(std::string(strategy_name(Strategy::EG)) == "eg");
  CHECK(parse_optimizer("adam") == OptimizerKind::Adam);
  CHECK_THROWS_AS(parse_strategy("greedy"), Error);
}
