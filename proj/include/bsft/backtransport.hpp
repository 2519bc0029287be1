// Backward conjugation of Pauli observables through a circuit. Used to check,
// at build time, that every classical node reads only parities whose
// reference value is deterministic on code-space inputs (the justification
// for flip-only fault simulation), and by tests to verify preparation
// gadgets against their target stabilizer groups.
#pragma once

#include <optional>
#include <vector>

#include "bsft/circuit.hpp"
#include "bsft/code.hpp"

namespace bsft {

// Maps a code-block operator (on n^2 qubits) onto circuit qubits.
inline PauliOp lift_onto_block(const Circuit& c, const Block& b, const PauliOp& p) {
  PauliOp out(c.num_qubits);
  for (size_t i = 0; i < b.qubits.size(); ++i) {
    if (p.x_bit(static_cast<int>(i))) out.set_x(b.qubits[i], true);
    if (p.z_bit(static_cast<int>(i))) out.set_z(b.qubits[i], true);
  }
  return out;
}

class BackTransporter {
 public:
  explicit BackTransporter(const Circuit& c) : c_(c) {
    tag_qubit_.assign(c.num_tags, -1);
    tag_basis_.assign(c.num_tags, OpKind::meas_z);
    tag_time_.assign(c.num_tags, -1);
    for (int t = 0; t < c.num_timesteps(); ++t)
      for (const auto& op : c.steps[t])
        if (is_measurement(op.kind)) {
          tag_qubit_[op.tag] = op.q0;
          tag_basis_[op.tag] = op.kind;
          tag_time_[op.tag] = t;
        }
  }

  // The operator measured by `tag`, as a factor inserted at the boundary
  // just before its measurement timestep.
  std::pair<int, PauliOp> measured_factor(int tag) const {
    PauliOp f(c_.num_qubits);
    if (tag_basis_[tag] == OpKind::meas_z)
      f.set_z(tag_qubit_[tag], true);
    else
      f.set_x(tag_qubit_[tag], true);
    return {tag_time_[tag], f};
  }

  // Transports a product of factors, each given at a boundary index b
  // (the state between steps[b-1] and steps[b]), back to boundary 0.
  // Prep ops absorb their stabilized factor; any anti-stabilized factor on a
  // prep means the observable is not deterministic and throws.
  PauliOp transport(std::vector<std::pair<int, PauliOp>> factors) const {
    std::sort(factors.begin(), factors.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    PauliOp obs(c_.num_qubits);
    int b = factors.empty() ? 0 : factors.front().first;
    size_t fi = 0;
    for (; b >= 1; --b) {
      while (fi < factors.size() && factors[fi].first == b)
        obs.mul_inplace(factors[fi++].second);
      conjugate_back_through(b - 1, obs);
    }
    while (fi < factors.size()) obs.mul_inplace(factors[fi++].second);
    return obs;
  }

  // Observable of the XOR of the given measurement outcomes, at boundary 0.
  PauliOp transport_parity(const std::vector<int>& tags) const {
    std::vector<std::pair<int, PauliOp>> factors;
    for (int tg : tags) factors.push_back(measured_factor(tg));
    return transport(std::move(factors));
  }

  // Transports an operator from the very end of the circuit to the start.
  PauliOp transport_from_end(const PauliOp& obs) const {
    return transport({{c_.num_timesteps(), obs}});
  }

 private:
  void conjugate_back_through(int t, PauliOp& obs) const {
    for (const auto& op : c_.steps[t]) {
      switch (op.kind) {
        case OpKind::cnot: {
          // self-inverse: backward rule equals the forward rule
          if (obs.x_bit(op.q0)) obs.set_x(op.q1, !obs.x_bit(op.q1));
          if (obs.z_bit(op.q1)) obs.set_z(op.q0, !obs.z_bit(op.q0));
          break;
        }
        case OpKind::hadamard: {
          bool x = obs.x_bit(op.q0), z = obs.z_bit(op.q0);
          obs.set_x(op.q0, z);
          obs.set_z(op.q0, x);
          break;
        }
        case OpKind::prep_zero:
          if (obs.x_bit(op.q0))
            throw std::logic_error("observable anti-stabilized at prep0 (not deterministic)");
          obs.set_z(op.q0, false);
          break;
        case OpKind::prep_plus:
          if (obs.z_bit(op.q0))
            throw std::logic_error("observable anti-stabilized at prep+ (not deterministic)");
          obs.set_x(op.q0, false);
          break;
        case OpKind::meas_z:
        case OpKind::meas_x:
          if (obs.x_bit(op.q0) || obs.z_bit(op.q0))
            throw std::logic_error("observable alive across a measurement");
          break;
        case OpKind::idle:
          break;
      }
    }
  }

  const Circuit& c_;
  std::vector<int> tag_qubit_;
  std::vector<OpKind> tag_basis_;
  std::vector<int> tag_time_;
};

// Checks that every deterministic parity a classical node consumes
// back-transports into the span of the input blocks' stabilizer generators
// (so its reference value is zero on any code-space input, for any gauge
// state). The logical row/column parities of knill_frame nodes are
// teleportation outcomes and deliberately not deterministic; only their
// adjacent-pair parities (the syndrome bits the node decodes) are checked.
inline void validate_node_determinism(const Circuit& c, const BaconShorCode& code,
                                      const std::vector<int>& input_blocks) {
  BackTransporter bt(c);
  std::vector<PauliOp> gens;
  for (int bi : input_blocks)
    for (const auto& s : code.stabilizer_gens())
      gens.push_back(lift_onto_block(c, c.blocks[bi], s));
  GroupBasis stab_span(gens);

  auto require_deterministic = [&](const std::vector<int>& tags, const char* what) {
    PauliOp obs = bt.transport_parity(tags);  // throws if anti-stabilized at a prep
    if (!obs.is_identity() && !stab_span.contains(obs))
      throw std::logic_error(std::string("classical node parity is not a stabilizer of the inputs: ") + what);
  };

  const int n = code.n();
  for (const auto& nd : c.nodes) {
    switch (nd.kind) {
      case ClassicalNode::Kind::decode_correct:
        for (const auto& g : nd.x_parities) require_deterministic(g, "decode x bit");
        for (const auto& g : nd.z_parities) require_deterministic(g, "decode z bit");
        for (const auto& g : nd.x_parities_b) require_deterministic(g, "decode x bit (round 2)");
        for (const auto& g : nd.z_parities_b) require_deterministic(g, "decode z bit (round 2)");
        break;
      case ClassicalNode::Kind::verify_discard: {
        PauliOp obs = bt.transport_parity({nd.verify_tag});
        if (!obs.is_identity())
          throw std::logic_error("verification outcome is not deterministic");
        break;
      }
      case ClassicalNode::Kind::knill_frame: {
        for (int i = 0; i + 1 < n; ++i) {
          std::vector<int> rows;
          for (int j = 0; j < n; ++j) {
            rows.push_back(nd.x_grid[i * n + j]);
            rows.push_back(nd.x_grid[(i + 1) * n + j]);
          }
          require_deterministic(rows, "knill x pair");
          std::vector<int> cols;
          for (int j = 0; j < n; ++j) {
            cols.push_back(nd.z_grid[j * n + i]);
            cols.push_back(nd.z_grid[j * n + i + 1]);
          }
          require_deterministic(cols, "knill z pair");
        }
        break;
      }
    }
  }
}

}  // namespace bsft
