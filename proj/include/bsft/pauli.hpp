// Phase-free n-qubit Pauli operators in symplectic GF(2) representation.
#pragma once

#include <bit>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsft {

// A Pauli operator modulo phase: a pair of bit-vectors (x part, z part)
// packed into 64-bit words. Bit q of x set means an X factor on qubit q,
// bit q of z a Z factor; both set is Y (up to phase, which is not tracked).
class PauliOp {
 public:
  PauliOp() : n_(0) {}
  explicit PauliOp(int num_qubits)
      : n_(num_qubits), x_((num_qubits + 63) / 64, 0), z_((num_qubits + 63) / 64, 0) {
    if (num_qubits < 0) throw std::invalid_argument("PauliOp: negative qubit count");
  }

  static PauliOp identity(int num_qubits) { return PauliOp(num_qubits); }

  // which: 'X', 'Y' or 'Z'
  static PauliOp single(int num_qubits, int qubit, char which) {
    PauliOp p(num_qubits);
    switch (which) {
      case 'X': p.set_x(qubit, true); break;
      case 'Z': p.set_z(qubit, true); break;
      case 'Y': p.set_x(qubit, true); p.set_z(qubit, true); break;
      default: throw std::invalid_argument("PauliOp::single: which must be X, Y or Z");
    }
    return p;
  }

  int num_qubits() const { return n_; }
  size_t num_words() const { return x_.size(); }

  bool x_bit(int q) const { check_q(q); return (x_[q >> 6] >> (q & 63)) & 1; }
  bool z_bit(int q) const { check_q(q); return (z_[q >> 6] >> (q & 63)) & 1; }

  void set_x(int q, bool v) {
    check_q(q);
    uint64_t m = uint64_t{1} << (q & 63);
    if (v) x_[q >> 6] |= m; else x_[q >> 6] &= ~m;
  }
  void set_z(int q, bool v) {
    check_q(q);
    uint64_t m = uint64_t{1} << (q & 63);
    if (v) z_[q >> 6] |= m; else z_[q >> 6] &= ~m;
  }

  const std::vector<uint64_t>& x_words() const { return x_; }
  const std::vector<uint64_t>& z_words() const { return z_; }

  bool is_identity() const {
    for (uint64_t w : x_) if (w) return false;
    for (uint64_t w : z_) if (w) return false;
    return true;
  }

  void mul_inplace(const PauliOp& other) {
    if (other.n_ != n_) throw std::invalid_argument("Pauli product: size mismatch");
    for (size_t i = 0; i < x_.size(); ++i) {
      x_[i] ^= other.x_[i];
      z_[i] ^= other.z_[i];
    }
  }

  bool operator==(const PauliOp& o) const { return n_ == o.n_ && x_ == o.x_ && z_ == o.z_; }
  bool operator!=(const PauliOp& o) const { return !(*this == o); }

 private:
  void check_q(int q) const {
    if (q < 0 || q >= n_) throw std::out_of_range("PauliOp: qubit index out of range");
  }
  int n_;
  std::vector<uint64_t> x_, z_;
};

// Phase-free group product: componentwise XOR of the symplectic parts.
inline PauliOp multiply(const PauliOp& p, const PauliOp& q) {
  PauliOp r = p;
  r.mul_inplace(q);
  return r;
}

// Symplectic inner product <p.x,q.z> + <p.z,q.x> over GF(2); zero iff they commute.
inline bool commutes(const PauliOp& p, const PauliOp& q) {
  if (p.num_qubits() != q.num_qubits())
    throw std::invalid_argument("commutes: size mismatch");
  uint64_t acc = 0;
  const auto& px = p.x_words(); const auto& pz = p.z_words();
  const auto& qx = q.x_words(); const auto& qz = q.z_words();
  for (size_t i = 0; i < px.size(); ++i)
    acc ^= (px[i] & qz[i]) ^ (pz[i] & qx[i]);
  return (std::popcount(acc) & 1) == 0;
}

// Number of qubits on which the operator acts nontrivially.
inline int weight(const PauliOp& p) {
  int w = 0;
  const auto& x = p.x_words(); const auto& z = p.z_words();
  for (size_t i = 0; i < x.size(); ++i) w += std::popcount(x[i] | z[i]);
  return w;
}

// Renders e.g. "X1 Y3 Z7" with 1-based qubit indices; identity renders as "I".
inline std::string to_string(const PauliOp& p) {
  std::string out;
  for (int q = 0; q < p.num_qubits(); ++q) {
    bool x = p.x_bit(q), z = p.z_bit(q);
    if (!x && !z) continue;
    if (!out.empty()) out += ' ';
    out += x ? (z ? 'Y' : 'X') : 'Z';
    out += std::to_string(q + 1);
  }
  return out.empty() ? "I" : out;
}

// Parses the to_string format back into an operator on num_qubits qubits.
inline PauliOp parse_pauli(const std::string& text, int num_qubits) {
  PauliOp p(num_qubits);
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "I") continue;
    if (tok.size() < 2) throw std::invalid_argument("parse_pauli: bad token '" + tok + "'");
    char c = tok[0];
    if (c != 'X' && c != 'Y' && c != 'Z')
      throw std::invalid_argument("parse_pauli: bad Pauli letter in '" + tok + "'");
    int q = std::stoi(tok.substr(1)) - 1;
    if (q < 0 || q >= num_qubits)
      throw std::invalid_argument("parse_pauli: qubit index out of range in '" + tok + "'");
    if (c == 'X' || c == 'Y') p.set_x(q, p.x_bit(q) ^ 1);
    if (c == 'Z' || c == 'Y') p.set_z(q, p.z_bit(q) ^ 1);
  }
  return p;
}

}  // namespace bsft
