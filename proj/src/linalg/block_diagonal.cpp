#include <algorithm>
#include <numeric>

#include "polydecay/linalg.hpp"

namespace polydecay::linalg {

BlockDiagonal::BlockDiagonal(Index dim, std::vector<Block> blocks)
    : dim_(dim), blocks_(std::move(blocks)) {
  Index covered = 0;
  for (const auto& b : blocks_) {
    require(b.matrix.rows() == static_cast<Index>(b.indices.size()) &&
                b.matrix.cols() == b.matrix.rows(),
            ErrorKind::DimensionMismatch, "BlockDiagonal: block shape does not match its index set");
    covered += b.matrix.rows();
  }
  require(covered == dim_, ErrorKind::DimensionMismatch, "BlockDiagonal: blocks do not cover the dimension");
}

BlockDiagonal BlockDiagonal::decompose(const ComplexMatrix& a) {
  require(a.rows() == a.cols(), ErrorKind::NonSquare, "BlockDiagonal: matrix must be square");
  const Index n = a.rows();

  // Union-find over the symmetrized nonzero pattern.
  std::vector<Index> parent(n);
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i != j && a(i, j) != Complex(0.0, 0.0)) {
        const Index ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }

  std::vector<Index> root_to_block(n, -1);
  std::vector<Block> blocks;
  for (Index i = 0; i < n; ++i) {
    const Index r = find(i);
    if (root_to_block[r] < 0) {
      root_to_block[r] = static_cast<Index>(blocks.size());
      blocks.push_back({});
    }
    blocks[root_to_block[r]].indices.push_back(i);
  }
  for (auto& b : blocks) {
    const Index k = static_cast<Index>(b.indices.size());
    b.matrix.resize(k, k);
    for (Index c = 0; c < k; ++c)
      for (Index r = 0; r < k; ++r) b.matrix(r, c) = a(b.indices[r], b.indices[c]);
  }
  return BlockDiagonal(n, std::move(blocks));
}

std::size_t BlockDiagonal::max_block_size() const {
  std::size_t best = 0;
  for (const auto& b : blocks_) best = std::max(best, b.indices.size());
  return best;
}

ComplexMatrix BlockDiagonal::dense() const {
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& b : blocks_) {
    const Index k = static_cast<Index>(b.indices.size());
    for (Index c = 0; c < k; ++c)
      for (Index r = 0; r < k; ++r) out(b.indices[r], b.indices[c]) = b.matrix(r, c);
  }
  return out;
}

ComplexMatrix BlockDiagonal::gather(std::size_t k, const ComplexMatrix& x) const {
  const auto& idx = blocks_[k].indices;
  ComplexMatrix part(static_cast<Index>(idx.size()), x.cols());
  for (Index r = 0; r < part.rows(); ++r) part.row(r) = x.row(idx[r]);
  return part;
}

void BlockDiagonal::scatter(std::size_t k, const ComplexMatrix& part, ComplexMatrix& x) const {
  const auto& idx = blocks_[k].indices;
  for (Index r = 0; r < part.rows(); ++r) x.row(idx[r]) = part.row(r);
}

ComplexMatrix BlockDiagonal::apply(const ComplexMatrix& x) const {
  require(x.rows() == dim_, ErrorKind::DimensionMismatch, "BlockDiagonal::apply: row count mismatch");
  ComplexMatrix out(dim_, x.cols());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto& b = blocks_[k];
    if (b.indices.size() == 1) {
      out.row(b.indices[0]) = b.matrix(0, 0) * x.row(b.indices[0]);
    } else {
      scatter(k, b.matrix * gather(k, x), out);
    }
  }
  return out;
}

double BlockDiagonal::spectral_norm() const {
  double best = 0.0;
  for (const auto& b : blocks_) {
    const double s = b.indices.size() == 1 ? std::abs(b.matrix(0, 0)) : linalg::spectral_norm(b.matrix);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace polydecay::linalg
