#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rapidlearn/error.hpp"

namespace rapidlearn::learner {

enum class Strategy { KgeUcb, KgeUab, EG };

const char* strategy_name(Strategy k);        // "kge-ucb", "kge-uab", "eg"
Strategy parse_strategy(const std::string& s);  // throws InvalidArgument

// Single tanh hidden layer with a softmax head.
class Policy {
 public:
  Policy() = default;
  Policy(std::size_t inputs, std::size_t outputs, std::size_t hidden = 24);

  // Weights drawn from uniform(-scale, scale).
  static Policy random(std::size_t inputs, std::size_t outputs, std::mt19937_64& rng, double scale = 0.1,
                       std::size_t hidden = 24);

  std::size_t inputs() const { return in_; }
  std::size_t outputs() const { return out_; }
  std::size_t hidden() const { return hid_; }
  std::size_t parameter_count() const { return params_.size(); }

  // Throws DimensionMismatch.
  std::vector<double> probs(const std::vector<double>& obs) const;

  // d log pi(action | obs) / d theta, added into `grad` scaled by `weight`.
  void accumulate_log_prob_grad(const std::vector<double>& obs, std::size_t action, double weight,
                                std::vector<double>& grad) const;

  double log_prob(const std::vector<double>& obs, std::size_t action) const;

  const std::vector<double>& params() const { return params_; }
  std::vector<double>& mutable_params() { return params_; }
  void set_params(std::vector<double> p);

 private:
  // Layout: W1 [hid x in], b1 [hid], W2 [out x hid], b2 [out].
  std::size_t w1() const { return 0; }
  std::size_t b1() const { return hid_ * in_; }
  std::size_t w2() const { return b1() + hid_; }
  std::size_t b2() const { return w2() + out_ * hid_; }
  void forward(const std::vector<double>& obs, std::vector<double>& h, std::vector<double>& p) const;

  std::size_t in_ = 0, hid_ = 0, out_ = 0;
  std::vector<double> params_;
};

// +c*sqrt(ln t / N) inside delta, minus outside. Not renormalized.
std::vector<double> bias_ucb(const std::vector<double>& probs, const std::vector<bool>& delta,
                             const std::vector<double>& counts, std::uint64_t t, double c);

// Shifts mass toward delta; result still sums to one. Throws EmptyBiasSet.
std::vector<double> bias_uab(const std::vector<double>& probs, const std::vector<bool>& delta, double mu);

std::size_t argmax(const std::vector<double>& v);

struct ExplorationState {
  Strategy strategy = Strategy::KgeUcb;
  std::vector<bool> delta;
  std::vector<double> counts;  // start at 1
  std::uint64_t t = 1;
  double epsilon = 0.3;
  double c = 0.0005;
  double mu = 2.0;
  // Draw the non-exploring action from pi instead of taking its argmax.
  bool sample_exploit = true;

  ExplorationState() = default;
  ExplorationState(Strategy k, std::vector<bool> delta_mask, double eps, double c_ucb, double mu_uab);
};

// Explores with probability epsilon (bias + argmax for the guided
// strategies, uniform draw for EG), otherwise follows pi (a draw, or the
// argmax when sample_exploit is off). Updates counts and t.
std::size_t select_action(const std::vector<double>& probs, ExplorationState& expl, std::mt19937_64& rng);

struct EpisodeBuffer {
  std::vector<std::vector<double>> states;
  std::vector<std::size_t> actions;
  std::vector<double> rewards;
  std::vector<bool> dones;

  void append(std::vector<double> s, std::size_t a, double r, bool done);
  std::size_t size() const { return actions.size(); }
  bool empty() const { return actions.empty(); }
  void clear();
};

enum class OptimizerKind { Sgd, RmsProp, Adam };

const char* optimizer_name(OptimizerKind k);
OptimizerKind parse_optimizer(const std::string& s);  // throws InvalidArgument

struct UpdateConfig {
  double learning_rate = 1e-3;
  double gamma = 0.98;
  bool normalize_returns = true;
  OptimizerKind optimizer = OptimizerKind::Sgd;
  double rms_decay = 0.99;
  double adam_beta1 = 0.9, adam_beta2 = 0.999;
  double opt_eps = 1e-8;
};

// Per-parameter state for gradient ascent steps.
class Optimizer {
 public:
  explicit Optimizer(const UpdateConfig& cfg = {}) : cfg_(cfg) {}
  void ascend(std::vector<double>& params, const std::vector<double>& grad);

 private:
  UpdateConfig cfg_;
  std::vector<double> m_, v_;
  std::uint64_t t_ = 0;
};

// Discounted returns-to-go; a done flag ends the episode.
std::vector<double> returns_to_go(const EpisodeBuffer& buffer, double gamma);

// Ascent direction sum_t G_t grad log pi(a_t | s_t).
std::vector<double> reinforce_gradient(const Policy& policy, const EpisodeBuffer& buffer, const UpdateConfig& cfg);

// theta += lr * gradient; clears the buffer. Throws EmptyBuffer.
void update_network(Policy& policy, EpisodeBuffer& buffer, const UpdateConfig& cfg);
// Same, stepping through a stateful optimizer.
void update_network(Policy& policy, EpisodeBuffer& buffer, const UpdateConfig& cfg, Optimizer& opt);

// value_min + (value_max - value_min) * exp(episodes * rate)
double decayed(double value_max, double value_min, double rate, std::uint64_t episodes);

}  // namespace rapidlearn::learner
