// GF(2) span membership for phase-free Pauli groups (Gaussian elimination
// over the symplectic bit representation).
#pragma once

#include <span>
#include <vector>

#include "bsft/pauli.hpp"

namespace bsft {

// Row-echelon basis of the GF(2) span of a generator list. Pivots are chosen
// over the concatenated (x|z) bit rows, so membership queries are a single
// reduction pass.
class GroupBasis {
 public:
  GroupBasis() : n_(0) {}

  explicit GroupBasis(std::span<const PauliOp> generators) : n_(0) {
    if (!generators.empty()) n_ = generators[0].num_qubits();
    for (const auto& g : generators) add(g);
  }
  explicit GroupBasis(const std::vector<PauliOp>& generators)
      : GroupBasis(std::span<const PauliOp>(generators)) {}

  int num_qubits() const { return n_; }
  int rank() const { return static_cast<int>(rows_.size()); }

  // Adds a generator; returns true if it enlarged the span.
  bool add(const PauliOp& g) {
    if (n_ == 0) n_ = g.num_qubits();
    if (g.num_qubits() != n_) throw std::invalid_argument("GroupBasis: size mismatch");
    PauliOp r = reduce(g);
    if (r.is_identity()) return false;
    int piv = leading_bit(r);
    // Keep rows sorted by pivot so reduce() stays one pass.
    size_t pos = 0;
    while (pos < rows_.size() && pivots_[pos] < piv) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(r));
    pivots_.insert(pivots_.begin() + pos, piv);
    return true;
  }

  // Reduces p by the basis; the result is identity iff p is in the span.
  PauliOp reduce(PauliOp p) const {
    for (size_t i = 0; i < rows_.size(); ++i) {
      if (bit_at(p, pivots_[i])) p.mul_inplace(rows_[i]);
    }
    return p;
  }

  bool contains(const PauliOp& p) const { return reduce(p).is_identity(); }

 private:
  // Bit order: x bits first, then z bits.
  static bool bit_at(const PauliOp& p, int bit) {
    int n = p.num_qubits();
    return bit < n ? p.x_bit(bit) : p.z_bit(bit - n);
  }
  static int leading_bit(const PauliOp& p) {
    int n = p.num_qubits();
    for (int b = 0; b < 2 * n; ++b)
      if (bit_at(p, b)) return b;
    return -1;
  }

  int n_;
  std::vector<PauliOp> rows_;
  std::vector<int> pivots_;
};

// True iff p is a (phase-free) GF(2) combination of the generators.
inline bool in_group(const PauliOp& p, const std::vector<PauliOp>& generators) {
  return GroupBasis(generators).contains(p);
}

}  // namespace bsft
