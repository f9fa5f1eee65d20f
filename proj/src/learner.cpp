#include "rapidlearn/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rapidlearn::learner {

const char* strategy_name(Strategy k) {
  switch (k) {
    case Strategy::KgeUcb: return "kge-ucb";
    case Strategy::KgeUab: return "kge-uab";
    case Strategy::EG: return "eg";
  }
  return "?";
}

Strategy parse_strategy(const std::string& s) {
  if (s == "kge-ucb") return Strategy::KgeUcb;
  if (s == "kge-uab") return Strategy::KgeUab;
  if (s == "eg") return Strategy::EG;
  throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + s + "' (expected kge-ucb, kge-uab or eg)");
}

Policy::Policy(std::size_t inputs, std::size_t outputs, std::size_t hidden)
    : in_(inputs), hid_(hidden), out_(outputs), params_(hidden * inputs + hidden + outputs * hidden + outputs, 0.0) {
  if (inputs == 0 || outputs == 0 || hidden == 0)
    throw Error(ErrorCode::InvalidArgument, "policy dimensions must be positive");
}

Policy Policy::random(std::size_t inputs, std::size_t outputs, std::mt19937_64& rng, double scale,
                      std::size_t hidden) {
  Policy p(inputs, outputs, hidden);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto& w : p.params_) w = u(rng);
  return p;
}

void Policy::set_params(std::vector<double> p) {
  if (p.size() != params_.size())
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(params_.size()) + " parameters, got " +
                                                  std::to_string(p.size()));
  params_ = std::move(p);
}

void Policy::forward(const std::vector<double>& obs, std::vector<double>& h, std::vector<double>& p) const {
  if (obs.size() != in_)
    throw Error(ErrorCode::DimensionMismatch,
                "observation has " + std::to_string(obs.size()) + " values, policy expects " + std::to_string(in_));
  h.assign(hid_, 0.0);
  const double* W1 = params_.data() + w1();
  const double* B1 = params_.data() + b1();
  for (std::size_t j = 0; j < hid_; ++j) {
    double z = B1[j];
    const double* row = W1 + j * in_;
    for (std::size_t i = 0; i < in_; ++i) z += row[i] * obs[i];
    h[j] = std::tanh(z);
  }
  p.assign(out_, 0.0);
  const double* W2 = params_.data() + w2();
  const double* B2 = params_.data() + b2();
  for (std::size_t k = 0; k < out_; ++k) {
    double z = B2[k];
    const double* row = W2 + k * hid_;
    for (std::size_t j = 0; j < hid_; ++j) z += row[j] * h[j];
    p[k] = z;
  }
  double m = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (auto& v : p) {
    v = std::exp(v - m);
    sum += v;
  }
  for (auto& v : p) v /= sum;
}

std::vector<double> Policy::probs(const std::vector<double>& obs) const {
  std::vector<double> h, p;
  forward(obs, h, p);
  return p;
}

double Policy::log_prob(const std::vector<double>& obs, std::size_t action) const {
  return std::log(probs(obs).at(action));
}

void Policy::accumulate_log_prob_grad(const std::vector<double>& obs, std::size_t action, double weight,
                                      std::vector<double>& grad) const {
  if (grad.size() != params_.size()) grad.assign(params_.size(), 0.0);
  std::vector<double> h, p;
  forward(obs, h, p);
  // dlogp/dz2 = onehot - p
  std::vector<double> dz2(out_);
  for (std::size_t k = 0; k < out_; ++k) dz2[k] = weight * ((k == action ? 1.0 : 0.0) - p[k]);
  const double* W2 = params_.data() + w2();
  std::vector<double> dh(hid_, 0.0);
  for (std::size_t k = 0; k < out_; ++k) {
    if (dz2[k] == 0.0) continue;
    double* gW2 = grad.data() + w2() + k * hid_;
    const double* row = W2 + k * hid_;
    for (std::size_t j = 0; j < hid_; ++j) {
      gW2[j] += dz2[k] * h[j];
      dh[j] += dz2[k] * row[j];
    }
    grad[b2() + k] += dz2[k];
  }
  for (std::size_t j = 0; j < hid_; ++j) {
    double dz1 = dh[j] * (1.0 - h[j] * h[j]);
    if (dz1 == 0.0) continue;
    double* gW1 = grad.data() + w1() + j * in_;
    for (std::size_t i = 0; i < in_; ++i) gW1[i] += dz1 * obs[i];
    grad[b1() + j] += dz1;
  }
}

std::vector<double> bias_ucb(const std::vector<double>& probs, const std::vector<bool>& delta,
                             const std::vector<double>& counts, std::uint64_t t, double c) {
  if (delta.size() != probs.size() || counts.size() != probs.size())
    throw Error(ErrorCode::DimensionMismatch, "bias_ucb: mismatched vector sizes");
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "bias_ucb: t must be at least 1");
  std::vector<double> out = probs;
  double lt = std::log(static_cast<double>(t));
  for (std::size_t a = 0; a < out.size(); ++a) {
    if (counts[a] < 1.0) throw Error(ErrorCode::InvalidArgument, "bias_ucb: counts must be at least 1");
    double bonus = c * std::sqrt(lt / counts[a]);
    out[a] += delta[a] ? bonus : -bonus;
  }
  return out;
}

std::vector<double> bias_uab(const std::vector<double>& probs, const std::vector<bool>& delta, double mu) {
  if (delta.size() != probs.size()) throw Error(ErrorCode::DimensionMismatch, "bias_uab: mismatched vector sizes");
  double mass = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    if (delta[a]) mass += probs[a];
  }
  if (mass <= 0.0) throw Error(ErrorCode::EmptyBiasSet, "bias_uab: biased actions carry no probability mass");
  std::vector<double> out(probs.size());
  for (std::size_t a = 0; a < probs.size(); ++a)
    out[a] = delta[a] ? (mu - 1.0 + mass) * probs[a] / (mu * mass) : probs[a] / mu;
  return out;
}

std::size_t argmax(const std::vector<double>& v) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "argmax of an empty vector");
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

ExplorationState::ExplorationState(Strategy k, std::vector<bool> delta_mask, double eps, double c_ucb,
                                   double mu_uab)
    : strategy(k), delta(std::move(delta_mask)), counts(delta.size(), 1.0), epsilon(eps), c(c_ucb), mu(mu_uab) {}

std::size_t select_action(const std::vector<double>& probs, ExplorationState& expl, std::mt19937_64& rng) {
  if (expl.counts.size() != probs.size()) expl.counts.assign(probs.size(), 1.0);
  if (expl.delta.size() != probs.size()) throw Error(ErrorCode::DimensionMismatch, "select_action: bias mask size");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t a;
  if (u(rng) < expl.epsilon) {
    switch (expl.strategy) {
      case Strategy::KgeUcb:
        a = argmax(bias_ucb(probs, expl.delta, expl.counts, expl.t, expl.c));
        break;
      case Strategy::KgeUab:
        a = argmax(bias_uab(probs, expl.delta, expl.mu));
        break;
      case Strategy::EG:
      default:
        a = std::uniform_int_distribution<std::size_t>(0, probs.size() - 1)(rng);
        break;
    }
  } else if (expl.sample_exploit) {
    a = std::discrete_distribution<std::size_t>(probs.begin(), probs.end())(rng);
  } else {
    a = argmax(probs);
  }
  expl.counts[a] += 1.0;
  expl.t += 1;
  return a;
}

void EpisodeBuffer::append(std::vector<double> s, std::size_t a, double r, bool done) {
  states.push_back(std::move(s));
  actions.push_back(a);
  rewards.push_back(r);
  dones.push_back(done);
}

void EpisodeBuffer::clear() {
  states.clear();
  actions.clear();
  rewards.clear();
  dones.clear();
}

std::vector<double> returns_to_go(const EpisodeBuffer& b, double gamma) {
  std::vector<double> g(b.size(), 0.0);
  double run = 0.0;
  for (std::size_t i = b.size(); i-- > 0;) {
    if (b.dones[i]) run = 0.0;
    run = b.rewards[i] + gamma * run;
    g[i] = run;
  }
  return g;
}

std::vector<double> reinforce_gradient(const Policy& policy, const EpisodeBuffer& b, const UpdateConfig& cfg) {
  std::vector<double> grad(policy.parameter_count(), 0.0);
  std::vector<double> g = returns_to_go(b, cfg.gamma);
  if (cfg.normalize_returns && g.size() >= 2) {
    double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    double var = 0.0;
    for (double v : g) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / static_cast<double>(g.size()));
    for (double& v : g) v = (v - mean) / (sd + 1e-8);
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (g[i] == 0.0) continue;
    policy.accumulate_log_prob_grad(b.states[i], b.actions[i], g[i], grad);
  }
  return grad;
}

void update_network(Policy& policy, EpisodeBuffer& buffer, const UpdateConfig& cfg) {
  if (buffer.empty()) throw Error(ErrorCode::EmptyBuffer, "update_network called with an empty buffer");
  UpdateConfig plain = cfg;
  plain.optimizer = OptimizerKind::Sgd;
  Optimizer opt(plain);
  update_network(policy, buffer, plain, opt);
}

const char* optimizer_name(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Sgd: return "sgd";
    case OptimizerKind::RmsProp: return "rmsprop";
    case OptimizerKind::Adam: return "adam";
  }
  return "?";
}

OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "sgd") return OptimizerKind::Sgd;
  if (s == "rmsprop") return OptimizerKind::RmsProp;
  if (s == "adam") return OptimizerKind::Adam;
  throw Error(ErrorCode::InvalidArgument, "unknown optimizer '" + s + "' (expected sgd, rmsprop or adam)");
}

void Optimizer::ascend(std::vector<double>& p, const std::vector<double>& g) {
  if (g.size() != p.size()) throw Error(ErrorCode::DimensionMismatch, "gradient size does not match parameters");
  const double lr = cfg_.learning_rate;
  if (cfg_.optimizer == OptimizerKind::Sgd) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += lr * g[i];
    return;
  }
  if (v_.size() != p.size()) {
    v_.assign(p.size(), 0.0);
    m_.assign(p.size(), 0.0);
    t_ = 0;
  }
  ++t_;
  if (cfg_.optimizer == OptimizerKind::RmsProp) {
    const double rho = cfg_.rms_decay;
    for (std::size_t i = 0; i < p.size(); ++i) {
      v_[i] = rho * v_[i] + (1.0 - rho) * g[i] * g[i];
      p[i] += lr * g[i] / (std::sqrt(v_[i]) + cfg_.opt_eps);
    }
    return;
  }
  const double b1 = cfg_.adam_beta1, b2 = cfg_.adam_beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < p.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * g[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * g[i] * g[i];
    p[i] += lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + cfg_.opt_eps);
  }
}

void update_network(Policy& policy, EpisodeBuffer& buffer, const UpdateConfig& cfg, Optimizer& opt) {
  if (buffer.empty()) throw Error(ErrorCode::EmptyBuffer, "update_network called with an empty buffer");
  opt.ascend(policy.mutable_params(), reinforce_gradient(policy, buffer, cfg));
  buffer.clear();
}

double decayed(double value_max, double value_min, double rate, std::uint64_t episodes) {
  return value_min + (value_max - value_min) * std::exp(static_cast<double>(episodes) * rate);
}

}  // namespace rapidlearn::learner
