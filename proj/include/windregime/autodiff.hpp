#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

// Minimal tape-based reverse-mode differentiation over dense matrices.
//
// Every operation records its value and a closure that pushes the node's
// adjoint to its inputs. A tape lives for one forward/backward pass.

namespace wr::ad {

class Tape;

/// Handle to a node on a tape.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  [[nodiscard]] const Eigen::MatrixXd& value() const;
  [[nodiscard]] const Eigen::MatrixXd& grad() const;
  [[nodiscard]] Eigen::Index rows() const { return value().rows(); }
  [[nodiscard]] Eigen::Index cols() const { return value().cols(); }
  [[nodiscard]] Tape* tape() const { return tape_; }
  [[nodiscard]] int id() const { return id_; }

 private:
  Tape* tape_ = nullptr;
  int id_ = -1;
};

class Tape {
 public:
  using Backward = std::function<void(Tape&, int self)>;

  /// Leaf whose gradient is discarded.
  Var constant(Eigen::MatrixXd value);
  /// Leaf whose accumulated gradient is added into `*sink` by backward().
  Var leaf(const Eigen::MatrixXd& value, Eigen::MatrixXd* sink);

  Var record(Eigen::MatrixXd value, Backward backward);

  /// Seeds d(out)/d(out) = 1 for a 1x1 output and propagates to all leaves.
  void backward(Var out);

  [[nodiscard]] const Eigen::MatrixXd& value(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  [[nodiscard]] const Eigen::MatrixXd& grad(int id) const { return nodes_[static_cast<std::size_t>(id)].grad; }
  /// Adjoint accumulator, zero-initialised on first use.
  Eigen::MatrixXd& grad_ref(int id);

  [[nodiscard]] std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Eigen::MatrixXd value;
    Eigen::MatrixXd grad;
    Backward backward;
    Eigen::MatrixXd* sink = nullptr;
  };
  std::vector<Node> nodes_;
};

Var matmul(Var a, Var b);
/// a^T * b
Var matmul_tn(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
/// Element-wise product.
Var mul(Var a, Var b);
/// Adds column vector `bias` to every column of `a`.
Var add_bias(Var a, Var bias);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
Var tanh(Var a);
Var sigmoid(Var a);
Var exp(Var a);
Var square(Var a);
/// Rows [start, start + count).
Var rows(Var a, Eigen::Index start, Eigen::Index count);
/// Vertical concatenation.
Var vcat(Var a, Var b);
/// Sum of all entries as a 1x1 node.
Var sum(Var a);

}  // namespace wr::ad
