#include "slucb/tree.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace slucb {

namespace {

int levels_for(std::int64_t capacity) {
  int bits = 0;
  while ((std::int64_t{1} << bits) < capacity) ++bits;
  return bits + 1;  // ceil(log2(capacity)) + 1
}

}  // namespace

TreeAggregator::TreeAggregator(int dim, std::int64_t capacity, double sigma_node)
    : dim_(dim), capacity_(capacity), depth_(levels_for(capacity)),
      sigma_node_(sigma_node) {
  if (dim < 1) throw std::invalid_argument("TreeAggregator: dim must be >= 1");
  if (capacity < 1)
    throw std::invalid_argument("TreeAggregator: capacity must be >= 1");
  if (sigma_node < 0.0)
    throw std::invalid_argument("TreeAggregator: sigma_node must be >= 0");
  levels_.resize(static_cast<std::size_t>(depth_));
  for (int l = 0; l < depth_; ++l) {
    const std::int64_t count = (capacity_ + (std::int64_t{1} << l) - 1) >> l;
    levels_[static_cast<std::size_t>(l)].resize(static_cast<std::size_t>(count));
  }
}

TreeAggregator::Node& TreeAggregator::node(int level, std::int64_t index) {
  return levels_[static_cast<std::size_t>(level)][static_cast<std::size_t>(index)];
}

const TreeAggregator::Node& TreeAggregator::node(int level,
                                                 std::int64_t index) const {
  return levels_[static_cast<std::size_t>(level)][static_cast<std::size_t>(index)];
}

void TreeAggregator::insert(const Vector& u_leaf, const Matrix& v_leaf,
                            Rng& rng) {
  if (leaf_count_ >= capacity_)
    throw std::out_of_range("TreeAggregator: capacity exceeded");
  if (u_leaf.size() != dim_ || v_leaf.rows() != dim_ || v_leaf.cols() != dim_)
    throw ShapeError("TreeAggregator: leaf shape mismatch");
  const std::int64_t leaf = leaf_count_++;
  last_insert_touched_ = 0;
  for (int l = 0; l < depth_; ++l) {
    const std::int64_t idx = leaf >> l;
    if (idx >= static_cast<std::int64_t>(levels_[static_cast<std::size_t>(l)].size()))
      break;
    Node& n = node(l, idx);
    if (!n.created) {
      n.created = true;
      n.u = Vector::Zero(dim_);
      n.v = Matrix::Zero(dim_, dim_);
      if (sigma_node_ > 0.0) {
        for (int i = 0; i < dim_; ++i) n.u[i] = sigma_node_ * rng.normal();
        for (int i = 0; i < dim_; ++i) {
          for (int j = i; j < dim_; ++j) {
            const double z = sigma_node_ * rng.normal();
            n.v(i, j) = z;
            n.v(j, i) = z;
          }
        }
      }
    }
    n.u += u_leaf;
    n.v += v_leaf;
    ++last_insert_touched_;
  }
}

std::pair<Vector, Matrix> TreeAggregator::prefix(std::int64_t t) const {
  if (t < 1 || t > leaf_count_)
    throw std::out_of_range("TreeAggregator: prefix index out of range");
  Vector u = Vector::Zero(dim_);
  Matrix v = Matrix::Zero(dim_, dim_);
  std::int64_t pos = 0;
  for (int l = depth_ - 1; l >= 0; --l) {
    if (t & (std::int64_t{1} << l)) {
      const Node& n = node(l, pos >> l);
      u += n.u;
      v += n.v;
      pos += std::int64_t{1} << l;
    }
  }
  return {std::move(u), std::move(v)};
}

int TreeAggregator::prefix_node_count(std::int64_t t) {
  return std::popcount(static_cast<std::uint64_t>(t));
}

double calibrate_tree(double epsilon, double delta, std::int64_t leaves, int m0,
                      double constant) {
  if (epsilon <= 0.0) throw std::invalid_argument("calibrate_tree: epsilon must be > 0");
  if (delta <= 0.0 || delta > 1.0)
    throw std::invalid_argument("calibrate_tree: delta outside (0,1]");
  if (leaves < 1) throw std::invalid_argument("calibrate_tree: leaves must be >= 1");
  if (m0 < 1) throw std::invalid_argument("calibrate_tree: m0 must be >= 1");
  if (constant <= 0.0)
    throw std::invalid_argument("calibrate_tree: constant must be > 0");
  const double m = static_cast<double>(levels_for(leaves));
  return static_cast<double>(m0) * (constant / epsilon) *
         std::sqrt(2.0 * m * std::log(2.5 / delta));
}

}  // namespace slucb
