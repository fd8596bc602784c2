#include "windregime/autodiff.hpp"

#include "windregime/error.hpp"

#include <cassert>

namespace wr::ad {

const Eigen::MatrixXd& Var::value() const { return tape_->value(id_); }
const Eigen::MatrixXd& Var::grad() const { return tape_->grad(id_); }

Var Tape::constant(Eigen::MatrixXd value) { return record(std::move(value), nullptr); }

Var Tape::leaf(const Eigen::MatrixXd& value, Eigen::MatrixXd* sink) {
  Var v = record(value, nullptr);
  nodes_.back().sink = sink;
  return v;
}

Var Tape::record(Eigen::MatrixXd value, Backward backward) {
  nodes_.push_back(Node{std::move(value), Eigen::MatrixXd(), std::move(backward), nullptr});
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Eigen::MatrixXd& Tape::grad_ref(int id) {
  auto& node = nodes_[static_cast<std::size_t>(id)];
  if (node.grad.size() == 0) node.grad = Eigen::MatrixXd::Zero(node.value.rows(), node.value.cols());
  return node.grad;
}

void Tape::backward(Var out) {
  if (out.rows() != 1 || out.cols() != 1) {
    throw Error(ErrorCode::ShapeMismatch, "backward() needs a scalar output");
  }
  for (auto& node : nodes_) node.grad.resize(0, 0);
  grad_ref(out.id()).setOnes();
  for (int id = out.id(); id >= 0; --id) {
    auto& node = nodes_[static_cast<std::size_t>(id)];
    if (node.grad.size() == 0) continue;
    if (node.backward) node.backward(*this, id);
    if (node.sink != nullptr) *node.sink += node.grad;
  }
}

namespace {

void check(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::ShapeMismatch, what);
}

}  // namespace

Var matmul(Var a, Var b) {
  check(a.cols() == b.rows(), "matmul");
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(a.value() * b.value(), [ia, ib](Tape& t, int self) {
    const Eigen::MatrixXd& g = t.grad(self);
    t.grad_ref(ia).noalias() += g * t.value(ib).transpose();
    t.grad_ref(ib).noalias() += t.value(ia).transpose() * g;
  });
}

Var matmul_tn(Var a, Var b) {
  check(a.rows() == b.rows(), "matmul_tn");
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(a.value().transpose() * b.value(), [ia, ib](Tape& t, int self) {
    const Eigen::MatrixXd& g = t.grad(self);
    t.grad_ref(ia).noalias() += t.value(ib) * g.transpose();
    t.grad_ref(ib).noalias() += t.value(ia) * g;
  });
}

Var add(Var a, Var b) {
  check(a.rows() == b.rows() && a.cols() == b.cols(), "add");
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(a.value() + b.value(), [ia, ib](Tape& t, int self) {
    t.grad_ref(ia) += t.grad(self);
    t.grad_ref(ib) += t.grad(self);
  });
}

Var sub(Var a, Var b) {
  check(a.rows() == b.rows() && a.cols() == b.cols(), "sub");
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(a.value() - b.value(), [ia, ib](Tape& t, int self) {
    t.grad_ref(ia) += t.grad(self);
    t.grad_ref(ib) -= t.grad(self);
  });
}

Var mul(Var a, Var b) {
  check(a.rows() == b.rows() && a.cols() == b.cols(), "mul");
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(a.value().cwiseProduct(b.value()), [ia, ib](Tape& t, int self) {
    const Eigen::MatrixXd& g = t.grad(self);
    t.grad_ref(ia) += g.cwiseProduct(t.value(ib));
    t.grad_ref(ib) += g.cwiseProduct(t.value(ia));
  });
}

Var add_bias(Var a, Var bias) {
  check(bias.cols() == 1 && bias.rows() == a.rows(), "add_bias");
  const int ia = a.id(), ib = bias.id();
  Eigen::MatrixXd out = a.value();
  out.colwise() += bias.value().col(0);
  return a.tape()->record(std::move(out), [ia, ib](Tape& t, int self) {
    t.grad_ref(ia) += t.grad(self);
    t.grad_ref(ib) += t.grad(self).rowwise().sum();
  });
}

Var scale(Var a, double s) {
  const int ia = a.id();
  return a.tape()->record(a.value() * s, [ia, s](Tape& t, int self) { t.grad_ref(ia) += s * t.grad(self); });
}

Var add_scalar(Var a, double s) {
  const int ia = a.id();
  return a.tape()->record((a.value().array() + s).matrix(),
                          [ia](Tape& t, int self) { t.grad_ref(ia) += t.grad(self); });
}

Var tanh(Var a) {
  const int ia = a.id();
  return a.tape()->record(a.value().array().tanh().matrix(), [ia](Tape& t, int self) {
    const auto& y = t.value(self).array();
    t.grad_ref(ia).array() += t.grad(self).array() * (1.0 - y.square());
  });
}

Var sigmoid(Var a) {
  const int ia = a.id();
  Eigen::MatrixXd y = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
  return a.tape()->record(std::move(y), [ia](Tape& t, int self) {
    const auto& y = t.value(self).array();
    t.grad_ref(ia).array() += t.grad(self).array() * y * (1.0 - y);
  });
}

Var exp(Var a) {
  const int ia = a.id();
  return a.tape()->record(a.value().array().exp().matrix(), [ia](Tape& t, int self) {
    t.grad_ref(ia).array() += t.grad(self).array() * t.value(self).array();
  });
}

Var square(Var a) {
  const int ia = a.id();
  return a.tape()->record(a.value().array().square().matrix(), [ia](Tape& t, int self) {
    t.grad_ref(ia).array() += 2.0 * t.grad(self).array() * t.value(ia).array();
  });
}

Var rows(Var a, Eigen::Index start, Eigen::Index count) {
  check(start >= 0 && start + count <= a.rows(), "rows");
  const int ia = a.id();
  return a.tape()->record(a.value().middleRows(start, count), [ia, start, count](Tape& t, int self) {
    t.grad_ref(ia).middleRows(start, count) += t.grad(self);
  });
}

Var vcat(Var a, Var b) {
  check(a.cols() == b.cols(), "vcat");
  const int ia = a.id(), ib = b.id();
  const Eigen::Index ra = a.rows();
  Eigen::MatrixXd out(a.rows() + b.rows(), a.cols());
  out << a.value(), b.value();
  return a.tape()->record(std::move(out), [ia, ib, ra](Tape& t, int self) {
    const Eigen::MatrixXd& g = t.grad(self);
    t.grad_ref(ia) += g.topRows(ra);
    t.grad_ref(ib) += g.bottomRows(g.rows() - ra);
  });
}

Var sum(Var a) {
  const int ia = a.id();
  Eigen::MatrixXd out(1, 1);
  out(0, 0) = a.value().sum();
  return a.tape()->record(std::move(out), [ia](Tape& t, int self) {
    t.grad_ref(ia).array() += t.grad(self)(0, 0);
  });
}

}  // namespace wr::ad
