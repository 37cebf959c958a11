#include "tlab/tensor/tensor.h"

#include <cmath>
#include <unordered_set>

#include "tlab/common/error.h"

namespace tlab::tensor {

namespace {
thread_local bool t_grad_enabled = true;
}

std::size_t numel(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor Tensor::from(Shape shape, std::vector<double> data, bool requires_grad) {
  if (numel(shape) != data.size()) {
    throw Error(ErrorCode::kShapeMismatch, "tensor of shape " + shape_string(shape) + " given " +
                                               std::to_string(data.size()) + " values");
  }
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->data = std::move(data);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  const std::size_t n = numel(shape);
  return from(std::move(shape), std::vector<double>(n, 0.0), requires_grad);
}

Tensor Tensor::full(Shape shape, double value) {
  const std::size_t n = numel(shape);
  return from(std::move(shape), std::vector<double>(n, value));
}

Tensor Tensor::scalar(double value) { return from({1}, {value}); }

double Tensor::item() const {
  if (size() != 1) throw Error(ErrorCode::kShapeMismatch, "item() on tensor of shape " + shape_string(shape()));
  return node_->data[0];
}

std::vector<double> Tensor::grad() const {
  if (node_->grad.empty()) return std::vector<double>(node_->data.size(), 0.0);
  return node_->grad;
}

void backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw Error(ErrorCode::kNonScalarLoss,
                "backward needs a one-element loss, got " + (loss.defined() ? shape_string(loss.shape()) : "undefined"));
  }
  Node* root = loss.node();
  if (!root->requires_grad) return;

  // iterative post-order DFS
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack{{root, 0}};
  visited.insert(root);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* p = node->parents[next++].get();
      if (p->requires_grad && visited.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root->grad_buffer()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (!node->backward || node->grad.empty()) continue;
    node->backward(*node);
    for (const auto& p : node->parents) {
      for (double g : p->grad) {
        if (!std::isfinite(g)) {
          throw Error(ErrorCode::kNumericFailure, std::string("non-finite gradient in backward of ") + node->op);
        }
      }
    }
    node->grad.clear();
    node->grad.shrink_to_fit();
  }
}

NoGradGuard::NoGradGuard() : previous_(t_grad_enabled) { t_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { t_grad_enabled = previous_; }

bool grad_enabled() { return t_grad_enabled; }

}  // namespace tlab::tensor
