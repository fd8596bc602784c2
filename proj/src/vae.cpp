#include "windregime/vae.hpp"

#include "windregime/error.hpp"
#include "windregime/log.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

namespace wr {

using ad::Var;

void VAEConfig::validate() const {
  if (p < 2) throw Error(ErrorCode::InvalidArgument, "VAE period length must be >= 2");
  if (conv1_channels < 1 || conv2_channels < 1 || hidden < 1) {
    throw Error(ErrorCode::InvalidArgument, "VAE layer sizes must be positive");
  }
  if (!(beta_start < beta_end) || beta_start < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "beta schedule requires 0 <= beta_start < beta_end");
  }
  if (max_epochs < 1 || batch_size < 1 || !(learning_rate > 0.0) || weight_decay < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "invalid VAE optimiser settings");
  }
  if (!(anneal_fraction > 0.0 && anneal_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "anneal_fraction must be in (0, 1]");
  }
  if (validation_fraction < 0.0 || validation_fraction >= 1.0) {
    throw Error(ErrorCode::InvalidArgument, "validation_fraction must be in [0, 1)");
  }
}

double beta_at_epoch(const VAEConfig& config, int epoch) {
  const int ramp = std::max(2, static_cast<int>(std::ceil(config.anneal_fraction * config.max_epochs)));
  if (epoch >= ramp - 1) return config.beta_end;
  const double t = static_cast<double>(std::max(epoch, 0)) / static_cast<double>(ramp - 1);
  return config.beta_start + (config.beta_end - config.beta_start) * t;
}

// ---------------------------------------------------------------------------
// ParameterSet

Eigen::MatrixXd& ParameterSet::add(const std::string& name, Eigen::MatrixXd value) {
  const auto [it, inserted] = tensors_.emplace(name, std::move(value));
  if (!inserted) throw Error(ErrorCode::InvalidArgument, "duplicate parameter " + name);
  order_.push_back(name);
  return it->second;
}

const Eigen::MatrixXd& ParameterSet::at(const std::string& name) const {
  const auto it = tensors_.find(name);
  if (it == tensors_.end()) throw Error(ErrorCode::InvalidArgument, "unknown parameter " + name);
  return it->second;
}

Eigen::MatrixXd& ParameterSet::at(const std::string& name) {
  return const_cast<Eigen::MatrixXd&>(std::as_const(*this).at(name));
}

Eigen::Index ParameterSet::total_size() const {
  Eigen::Index n = 0;
  for (const auto& [name, t] : tensors_) n += t.size();
  return n;
}

Eigen::VectorXd ParameterSet::flatten() const {
  Eigen::VectorXd flat(total_size());
  Eigen::Index offset = 0;
  for (const auto& name : order_) {
    const auto& t = at(name);
    flat.segment(offset, t.size()) = t.reshaped();
    offset += t.size();
  }
  return flat;
}

void ParameterSet::unflatten(const Eigen::Ref<const Eigen::VectorXd>& flat) {
  if (flat.size() != total_size()) throw Error(ErrorCode::ShapeMismatch, "flat parameter size");
  Eigen::Index offset = 0;
  for (const auto& name : order_) {
    auto& t = at(name);
    t.reshaped() = flat.segment(offset, t.size());
    offset += t.size();
  }
}

ParameterSet ParameterSet::zeros_like() const {
  ParameterSet out;
  for (const auto& name : order_) {
    const auto& t = at(name);
    out.add(name, Eigen::MatrixXd::Zero(t.rows(), t.cols()));
  }
  return out;
}

bool ParameterSet::operator==(const ParameterSet& other) const {
  if (order_ != other.order_) return false;
  for (const auto& name : order_) {
    const auto& a = at(name);
    const auto& b = other.at(name);
    if (a.rows() != b.rows() || a.cols() != b.cols() || a != b) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Network

namespace {

std::string tap(const std::string& prefix, int j) { return prefix + ".w" + std::to_string(j); }

VAEModel make_shapes(const VAEConfig& config, const FeatureStats& stats) {
  VAEModel m;
  m.config = config;
  m.stats = stats;
  const int c1 = config.conv1_channels, c2 = config.conv2_channels, h = config.hidden;
  auto& ps = m.params;
  for (int j = 0; j < kConv1Kernel; ++j) ps.add(tap("enc.conv1", j), Eigen::MatrixXd(c1, kNumFeatures));
  ps.add("enc.conv1.b", Eigen::MatrixXd(c1, 1));
  for (int j = 0; j < kConv2Kernel; ++j) ps.add(tap("enc.conv2", j), Eigen::MatrixXd(c2, c1));
  ps.add("enc.conv2.b", Eigen::MatrixXd(c2, 1));
  for (const char* dir : {"enc.lstm_fwd", "enc.lstm_bwd"}) {
    ps.add(std::string(dir) + ".wx", Eigen::MatrixXd(4 * h, c2));
    ps.add(std::string(dir) + ".wh", Eigen::MatrixXd(4 * h, h));
    ps.add(std::string(dir) + ".b", Eigen::MatrixXd(4 * h, 1));
  }
  ps.add("enc.mu.w", Eigen::MatrixXd(kLatentDim, 2 * h));
  ps.add("enc.mu.b", Eigen::MatrixXd(kLatentDim, 1));
  ps.add("enc.logvar.w", Eigen::MatrixXd(kLatentDim, 2 * h));
  ps.add("enc.logvar.b", Eigen::MatrixXd(kLatentDim, 1));
  ps.add("dec.expand.w", Eigen::MatrixXd(h, kLatentDim));
  ps.add("dec.expand.b", Eigen::MatrixXd(h, 1));
  ps.add("dec.lstm.wx", Eigen::MatrixXd(4 * h, h));
  ps.add("dec.lstm.wh", Eigen::MatrixXd(4 * h, h));
  ps.add("dec.lstm.b", Eigen::MatrixXd(4 * h, 1));
  // Transposed convolutions store each tap as (in x out).
  for (int j = 0; j < kConv2Kernel; ++j) ps.add(tap("dec.tconv1", j), Eigen::MatrixXd(h, c1));
  ps.add("dec.tconv1.b", Eigen::MatrixXd(c1, 1));
  for (int j = 0; j < kConv1Kernel; ++j) ps.add(tap("dec.tconv2", j), Eigen::MatrixXd(c1, kNumFeatures));
  ps.add("dec.tconv2.b", Eigen::MatrixXd(kNumFeatures, 1));
  return m;
}

double fan_in_bound(const std::string& name, const VAEConfig& c) {
  const auto starts = [&](const char* prefix) { return name.rfind(prefix, 0) == 0; };
  double fan_in = 1.0;
  if (starts("enc.conv1")) fan_in = kNumFeatures * kConv1Kernel;
  else if (starts("enc.conv2")) fan_in = c.conv1_channels * kConv2Kernel;
  else if (starts("enc.lstm") || starts("dec.lstm")) fan_in = c.hidden;
  else if (starts("enc.mu") || starts("enc.logvar")) fan_in = 2.0 * c.hidden;
  else if (starts("dec.expand")) fan_in = kLatentDim;
  else if (starts("dec.tconv1")) fan_in = c.hidden * kConv2Kernel;
  else if (starts("dec.tconv2")) fan_in = c.conv1_channels * kConv1Kernel;
  return 1.0 / std::sqrt(fan_in);
}

/// Builds the forward graph on a tape, binding parameters lazily.
class Network {
 public:
  Network(ad::Tape& tape, const VAEModel& model, ParameterSet* grads)
      : tape_(tape), model_(model), grads_(grads) {}

  Var param(const std::string& name) {
    const auto it = bound_.find(name);
    if (it != bound_.end()) return it->second;
    const auto& value = model_.params.at(name);
    Var v = grads_ != nullptr ? tape_.leaf(value, &grads_->at(name)) : tape_.constant(value);
    bound_.emplace(name, v);
    return v;
  }

  std::vector<Var> conv(const std::vector<Var>& seq, const std::string& prefix, int kernel) {
    const int p = static_cast<int>(seq.size());
    const int pad = (kernel - 1) / 2;
    std::vector<Var> out;
    out.reserve(seq.size());
    for (int t = 0; t < p; ++t) {
      std::optional<Var> acc;
      for (int j = 0; j < kernel; ++j) {
        const int src = t + j - pad;
        if (src < 0 || src >= p) continue;
        Var term = ad::matmul(param(tap(prefix, j)), seq[static_cast<std::size_t>(src)]);
        acc = acc ? ad::add(*acc, term) : term;
      }
      out.push_back(ad::add_bias(*acc, param(prefix + ".b")));
    }
    return out;
  }

  std::vector<Var> transposed_conv(const std::vector<Var>& seq, const std::string& prefix, int kernel) {
    const int p = static_cast<int>(seq.size());
    const int pad = (kernel - 1) / 2;
    std::vector<Var> out;
    out.reserve(seq.size());
    for (int t = 0; t < p; ++t) {
      std::optional<Var> acc;
      for (int j = 0; j < kernel; ++j) {
        const int src = t + pad - j;
        if (src < 0 || src >= p) continue;
        Var term = ad::matmul_tn(param(tap(prefix, j)), seq[static_cast<std::size_t>(src)]);
        acc = acc ? ad::add(*acc, term) : term;
      }
      out.push_back(ad::add_bias(*acc, param(prefix + ".b")));
    }
    return out;
  }

  std::vector<Var> lstm(const std::vector<Var>& seq, const std::string& prefix, bool reverse) {
    const Eigen::Index h = model_.config.hidden;
    const Eigen::Index batch = seq.front().cols();
    const int p = static_cast<int>(seq.size());
    std::vector<Var> hidden(seq.size());
    std::optional<Var> h_prev, c_prev;
    for (int step = 0; step < p; ++step) {
      const int t = reverse ? p - 1 - step : step;
      Var gates = ad::matmul(param(prefix + ".wx"), seq[static_cast<std::size_t>(t)]);
      if (h_prev) gates = ad::add(gates, ad::matmul(param(prefix + ".wh"), *h_prev));
      gates = ad::add_bias(gates, param(prefix + ".b"));
      Var i = ad::sigmoid(ad::rows(gates, 0, h));
      Var f = ad::sigmoid(ad::rows(gates, h, h));
      Var g = ad::tanh(ad::rows(gates, 2 * h, h));
      Var o = ad::sigmoid(ad::rows(gates, 3 * h, h));
      Var c = c_prev ? ad::add(ad::mul(f, *c_prev), ad::mul(i, g)) : ad::mul(i, g);
      Var hs = ad::mul(o, ad::tanh(c));
      hidden[static_cast<std::size_t>(t)] = hs;
      h_prev = hs;
      c_prev = c;
    }
    (void)batch;
    return hidden;
  }

  std::pair<Var, Var> encode(const std::vector<Var>& x) {
    std::vector<Var> a = conv(x, "enc.conv1", kConv1Kernel);
    for (auto& v : a) v = ad::tanh(v);
    std::vector<Var> b = conv(a, "enc.conv2", kConv2Kernel);
    for (auto& v : b) v = ad::tanh(v);
    const auto fwd = lstm(b, "enc.lstm_fwd", false);
    const auto bwd = lstm(b, "enc.lstm_bwd", true);
    Var summary = ad::vcat(fwd.back(), bwd.front());
    Var mu = ad::add_bias(ad::matmul(param("enc.mu.w"), summary), param("enc.mu.b"));
    Var logvar = ad::add_bias(ad::matmul(param("enc.logvar.w"), summary), param("enc.logvar.b"));
    return {mu, logvar};
  }

  std::vector<Var> decode(Var z) {
    Var e = ad::tanh(ad::add_bias(ad::matmul(param("dec.expand.w"), z), param("dec.expand.b")));
    const std::vector<Var> repeated(static_cast<std::size_t>(model_.config.p), e);
    const auto hs = lstm(repeated, "dec.lstm", false);
    std::vector<Var> a = transposed_conv(hs, "dec.tconv1", kConv2Kernel);
    for (auto& v : a) v = ad::tanh(v);
    return transposed_conv(a, "dec.tconv2", kConv1Kernel);
  }

 private:
  ad::Tape& tape_;
  const VAEModel& model_;
  ParameterSet* grads_;
  std::map<std::string, Var> bound_;
};

/// Time-major inputs: one (features x batch) matrix per step.
std::vector<Var> batch_inputs(ad::Tape& tape, const std::vector<const Eigen::MatrixXd*>& batch, int p) {
  std::vector<Var> seq;
  seq.reserve(static_cast<std::size_t>(p));
  const auto n = static_cast<Eigen::Index>(batch.size());
  for (int t = 0; t < p; ++t) {
    Eigen::MatrixXd step(kNumFeatures, n);
    for (Eigen::Index b = 0; b < n; ++b) step.col(b) = batch[static_cast<std::size_t>(b)]->row(t).transpose();
    seq.push_back(tape.constant(std::move(step)));
  }
  return seq;
}

void check_shape(const VAEModel& model, const Eigen::MatrixXd& x) {
  if (x.rows() != model.config.p || x.cols() != kNumFeatures) {
    std::ostringstream os;
    os << "expected " << model.config.p << "x" << kNumFeatures << " period, got " << x.rows() << "x" << x.cols();
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
}

}  // namespace

VAEModel init_vae(const VAEConfig& config, const FeatureStats& stats) {
  config.validate();
  VAEModel m = make_shapes(config, stats);
  std::mt19937_64 rng(config.seed);
  for (const auto& name : m.params.names()) {
    const double bound = fan_in_bound(name, config);
    std::uniform_real_distribution<double> u(-bound, bound);
    auto& t = m.params.at(name);
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = u(rng);
  }
  return m;
}

Encoding encode(const VAEModel& model, const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const Eigen::MatrixXd copy = x;
  check_shape(model, copy);
  if (!copy.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite period input");
  ad::Tape tape;
  Network net(tape, model, nullptr);
  const auto [mu, logvar] = net.encode(batch_inputs(tape, {&copy}, model.config.p));
  return {mu.value().col(0), logvar.value().col(0)};
}

Eigen::MatrixXd encode_means(const VAEModel& model, const std::vector<Period>& standardized) {
  constexpr std::size_t kChunk = 256;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(standardized.size()), kLatentDim);
  for (std::size_t begin = 0; begin < standardized.size(); begin += kChunk) {
    const std::size_t end = std::min(standardized.size(), begin + kChunk);
    std::vector<const Eigen::MatrixXd*> batch;
    for (std::size_t i = begin; i < end; ++i) {
      check_shape(model, standardized[i].features);
      batch.push_back(&standardized[i].features);
    }
    ad::Tape tape;
    Network net(tape, model, nullptr);
    const auto mu = net.encode(batch_inputs(tape, batch, model.config.p)).first;
    out.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin)) = mu.value().transpose();
  }
  return out;
}

Eigen::MatrixXd decode(const VAEModel& model, const Eigen::Ref<const LatentVector>& z) {
  if (!z.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite latent");
  ad::Tape tape;
  Network net(tape, model, nullptr);
  const auto out = net.decode(tape.constant(Eigen::MatrixXd(z)));
  Eigen::MatrixXd xhat(model.config.p, kNumFeatures);
  for (int t = 0; t < model.config.p; ++t) xhat.row(t) = out[static_cast<std::size_t>(t)].value().col(0).transpose();
  return xhat;
}

double vae_loss(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::MatrixXd>& xhat,
                const Eigen::Ref<const Eigen::VectorXd>& mu, const Eigen::Ref<const Eigen::VectorXd>& logvar,
                double beta) {
  if (x.rows() != xhat.rows() || x.cols() != xhat.cols() || mu.size() != logvar.size()) {
    throw Error(ErrorCode::ShapeMismatch, "vae_loss operand shapes");
  }
  const double mse = (x - xhat).squaredNorm() / static_cast<double>(x.size());
  return mse + beta * kl_divergence(mu, logvar);
}

BatchLoss batch_loss(const VAEModel& model, const std::vector<const Eigen::MatrixXd*>& batch,
                     const Eigen::MatrixXd& eps, double beta, ParameterSet* grads) {
  const int p = model.config.p;
  const auto n = static_cast<double>(batch.size());
  ad::Tape tape;
  Network net(tape, model, grads);
  const auto x = batch_inputs(tape, batch, p);
  const auto [mu, logvar] = net.encode(x);
  Var z = ad::add(mu, ad::mul(ad::exp(ad::scale(logvar, 0.5)), tape.constant(eps)));
  const auto xhat = net.decode(z);

  std::optional<Var> sq;
  for (int t = 0; t < p; ++t) {
    Var term = ad::sum(ad::square(ad::sub(xhat[static_cast<std::size_t>(t)], x[static_cast<std::size_t>(t)])));
    sq = sq ? ad::add(*sq, term) : term;
  }
  Var recon = ad::scale(*sq, 1.0 / (n * p * kNumFeatures));
  Var kl_terms = ad::sub(ad::add(ad::exp(logvar), ad::square(mu)), ad::add_scalar(logvar, 1.0));
  Var kl = ad::scale(ad::sum(kl_terms), 0.5 / n);
  Var total = ad::add(recon, ad::scale(kl, beta));
  if (grads != nullptr) tape.backward(total);
  return {total.value()(0, 0), recon.value()(0, 0), kl.value()(0, 0)};
}

namespace {

double reconstruction_mse(const VAEModel& model, const std::vector<const Eigen::MatrixXd*>& items) {
  if (items.empty()) return 0.0;
  const int p = model.config.p;
  double total = 0.0;
  constexpr std::size_t kChunk = 256;
  for (std::size_t begin = 0; begin < items.size(); begin += kChunk) {
    const std::size_t end = std::min(items.size(), begin + kChunk);
    const std::vector<const Eigen::MatrixXd*> chunk(items.begin() + static_cast<std::ptrdiff_t>(begin),
                                                    items.begin() + static_cast<std::ptrdiff_t>(end));
    ad::Tape tape;
    Network net(tape, model, nullptr);
    const auto x = batch_inputs(tape, chunk, p);
    const auto xhat = net.decode(net.encode(x).first);
    for (int t = 0; t < p; ++t) {
      total += (xhat[static_cast<std::size_t>(t)].value() - x[static_cast<std::size_t>(t)].value()).squaredNorm();
    }
  }
  return total / (static_cast<double>(items.size()) * p * kNumFeatures);
}

struct AdamW {
  ParameterSet m, v;
  long step = 0;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  explicit AdamW(const ParameterSet& params) : m(params.zeros_like()), v(params.zeros_like()) {}

  void update(ParameterSet& params, const ParameterSet& grads, double lr, double weight_decay) {
    ++step;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (const auto& name : params.names()) {
      auto& w = params.at(name);
      const auto& g = grads.at(name);
      auto& mm = m.at(name);
      auto& vv = v.at(name);
      mm = beta1 * mm + (1.0 - beta1) * g;
      vv = beta2 * vv + (1.0 - beta2) * g.cwiseProduct(g);
      w.array() -= lr * ((mm.array() / c1) / ((vv.array() / c2).sqrt() + eps) + weight_decay * w.array());
    }
  }
};

}  // namespace

TrainResult train_vae(const std::vector<Period>& standardized, const VAEConfig& config, const FeatureStats& stats) {
  config.validate();
  for (const auto& period : standardized) {
    if (period.features.rows() != config.p || period.features.cols() != kNumFeatures) {
      throw Error(ErrorCode::ShapeMismatch, "period length differs from VAE configuration");
    }
  }
  if (standardized.size() < static_cast<std::size_t>(config.batch_size)) {
    throw Error(ErrorCode::InvalidArgument, "fewer periods than the batch size");
  }

  TrainResult result{init_vae(config, stats), {}, 0};
  VAEModel& model = result.model;
  std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<std::size_t> order(standardized.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  auto n_val = static_cast<std::size_t>(std::floor(config.validation_fraction * static_cast<double>(order.size())));
  if (order.size() - n_val < static_cast<std::size_t>(config.batch_size)) n_val = 0;
  std::vector<const Eigen::MatrixXd*> validation, train;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_val ? validation : train).push_back(&standardized[order[i]].features);
  }

  AdamW optimizer(model.params);
  std::optional<ParameterSet> best;
  double best_val = std::numeric_limits<double>::infinity();
  int since_best = 0;

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const double beta = beta_at_epoch(config, epoch);
    std::shuffle(train.begin(), train.end(), rng);
    EpochLog entry;
    entry.epoch = epoch;
    entry.beta = beta;
    for (std::size_t begin = 0; begin < train.size(); begin += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(train.size(), begin + static_cast<std::size_t>(config.batch_size));
      const std::vector<const Eigen::MatrixXd*> batch(train.begin() + static_cast<std::ptrdiff_t>(begin),
                                                      train.begin() + static_cast<std::ptrdiff_t>(end));
      Eigen::MatrixXd eps(kLatentDim, static_cast<Eigen::Index>(batch.size()));
      for (Eigen::Index i = 0; i < eps.size(); ++i) eps.data()[i] = normal(rng);
      ParameterSet grads = model.params.zeros_like();
      const BatchLoss loss = batch_loss(model, batch, eps, beta, &grads);
      if (!std::isfinite(loss.total) || !grads.flatten().allFinite()) {
        std::ostringstream os;
        os << "epoch " << epoch << " batch " << begin / static_cast<std::size_t>(config.batch_size)
           << ": reconstruction=" << loss.reconstruction << " kl=" << loss.kl << " beta=" << beta;
        throw Error(ErrorCode::NonFiniteLoss, os.str());
      }
      const auto w = static_cast<double>(batch.size());
      entry.reconstruction += loss.reconstruction * w;
      entry.kl += loss.kl * w;
      optimizer.update(model.params, grads, config.learning_rate, config.weight_decay);
    }
    entry.reconstruction /= static_cast<double>(train.size());
    entry.kl /= static_cast<double>(train.size());

    if (!validation.empty()) {
      entry.validation_reconstruction = reconstruction_mse(model, validation);
      if (entry.validation_reconstruction < best_val) {
        best_val = entry.validation_reconstruction;
        best = model.params;
        result.best_epoch = epoch;
        since_best = 0;
      } else if (++since_best >= config.patience) {
        result.log.push_back(entry);
        log::info("VAE early stop at epoch " + std::to_string(epoch));
        break;
      }
    }
    result.log.push_back(entry);
  }
  if (best) {
    model.params = *best;
  } else {
    result.best_epoch = static_cast<int>(result.log.size()) - 1;
  }
  return result;
}

Eigen::MatrixXd l2_normalize_rows(const Eigen::Ref<const Eigen::MatrixXd>& x, std::size_t* zero_rows) {
  Eigen::MatrixXd out = x;
  std::size_t zeros = 0;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) {
      out.row(i) /= norm;
    } else {
      out.row(i).setZero();
      ++zeros;
    }
  }
  if (zero_rows != nullptr) *zero_rows = zeros;
  return out;
}

Embedding embed_periods(const VAEModel& model, const std::vector<Period>& standardized) {
  Embedding e;
  e.raw = encode_means(model, standardized);
  e.normalized = l2_normalize_rows(e.raw, &e.zero_rows);
  if (e.zero_rows > 0) log::warn(std::to_string(e.zero_rows) + " periods have a zero latent mean");
  return e;
}

}  // namespace wr
