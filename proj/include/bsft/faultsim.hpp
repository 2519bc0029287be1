// Pauli-frame fault propagation: deviations from the fault-free reference run
// are tracked as X/Z bits per qubit plus outcome flips per measurement, with
// classical nodes decoding flip parities into frame updates. Everything is
// deterministic in (circuit, fault assignment).
#pragma once

#include <span>
#include <vector>

#include "bsft/code.hpp"
#include "bsft/exrec.hpp"

namespace bsft {

// One location's fault: a Pauli on the op's qubit(s), acting after the op
// (after preparation for prep locations), or an outcome flip for
// measurements. Nominal Paulis are stored; physically trivial components
// (Z after prep|0>, X after prep|+>) are absorbed at injection.
struct FaultAction {
  uint8_t x0 = 0, z0 = 0, x1 = 0, z1 = 0, flip = 0;
  bool operator==(const FaultAction&) const = default;
};

struct FaultAssignment {
  // sorted by location id, one entry per faulty location
  std::vector<std::pair<int, FaultAction>> entries;

  static FaultAssignment of(std::vector<std::pair<int, FaultAction>> e) {
    std::sort(e.begin(), e.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 1; i < e.size(); ++i)
      if (e[i].first == e[i - 1].first)
        throw std::invalid_argument("FaultAssignment: duplicate location");
    return {std::move(e)};
  }
};

struct FrameResult {
  std::vector<PauliOp> block_residual;   // per circuit block, at output
  std::vector<uint8_t> outcome_flips;    // per tag
  std::vector<PauliOp> node_corrections; // frame change applied by each node
};

namespace fault_detail {

// Enumerated fault actions per location kind, damaging choices first so the
// adversarial search exits early on malignant sets.
inline std::vector<FaultAction> location_actions(OpKind kind) {
  std::vector<FaultAction> out;
  auto one = [](int p) { return std::pair<uint8_t, uint8_t>{(p == 1 || p == 3) ? uint8_t{1} : uint8_t{0},
                                                            (p == 2 || p == 3) ? uint8_t{1} : uint8_t{0}}; };
  switch (kind) {
    case OpKind::cnot:
      // weight-2 Paulis first, then weight-1
      for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
          auto [xa, za] = one(a);
          auto [xb, zb] = one(b);
          out.push_back({xa, za, xb, zb, 0});
        }
      for (int a = 1; a <= 3; ++a) {
        auto [xa, za] = one(a);
        out.push_back({xa, za, 0, 0, 0});
        out.push_back({0, 0, xa, za, 0});
      }
      break;
    case OpKind::hadamard:
    case OpKind::idle:
      for (int a = 1; a <= 3; ++a) {
        auto [xa, za] = one(a);
        out.push_back({xa, za, 0, 0, 0});
      }
      break;
    case OpKind::prep_zero:
      // X and Y act as X; Z is a stabilizer of |0> (kept as the nominal
      // nontrivial action, physically absorbed at injection)
      out.push_back({1, 0, 0, 0, 0});
      out.push_back({0, 1, 0, 0, 0});
      break;
    case OpKind::prep_plus:
      out.push_back({0, 1, 0, 0, 0});
      out.push_back({1, 0, 0, 0, 0});
      break;
    case OpKind::meas_z:
    case OpKind::meas_x:
      out.push_back({0, 0, 0, 0, 1});
      break;
  }
  return out;
}

}  // namespace fault_detail

class CompiledCircuit {
 public:
  struct Op {
    OpKind kind;
    int q0, q1, tag;
  };

  CompiledCircuit(const Circuit& circuit, const BaconShorCode& code)
      : circuit_(circuit), code_(code) {
    int node_idx = 0;
    for (int t = 0; t < circuit.num_timesteps(); ++t) {
      for (const auto& op : circuit.steps[t]) {
        ops_.push_back({op.kind, op.q0, op.q1, op.tag});
        actions_.push_back(fault_detail::location_actions(op.kind));
      }
      StepBoundary sb;
      sb.op_end = static_cast<int>(ops_.size());
      sb.node_begin = node_idx;
      while (node_idx < static_cast<int>(circuit.nodes.size()) &&
             circuit.nodes[node_idx].fire_after == t)
        ++node_idx;
      sb.node_end = node_idx;
      steps_.push_back(sb);
    }
    if (node_idx != static_cast<int>(circuit.nodes.size()))
      throw std::logic_error("CompiledCircuit: classical nodes out of order");
  }

  const Circuit& circuit() const { return circuit_; }
  const BaconShorCode& code() const { return code_; }
  int num_locations() const { return static_cast<int>(ops_.size()); }
  const Op& location(int loc) const { return ops_[loc]; }
  const std::vector<FaultAction>& actions(int loc) const { return actions_[loc]; }

  struct StepBoundary {
    int op_end;
    int node_begin, node_end;
  };
  const std::vector<Op>& ops() const { return ops_; }
  const std::vector<StepBoundary>& steps() const { return steps_; }

 private:
  const Circuit& circuit_;
  const BaconShorCode& code_;
  std::vector<Op> ops_;
  std::vector<std::vector<FaultAction>> actions_;
  std::vector<StepBoundary> steps_;
};

// Ideal decoder over bit-packed block residuals (n^2 <= 64 qubits): applies
// the minimal-weight repetition correction and tests membership in the gauge
// group. Mirrors BaconShorCode::{decode, logical_effect}; the equivalence is
// pinned by tests.
class FastClassifier {
 public:
  explicit FastClassifier(const BaconShorCode& code) : n_(code.n()) {
    const int nq = code.num_qubits();
    for (int j = 0; j + 1 < n_; ++j) {
      uint64_t xrow = 0, zcol = 0;
      for (int k = 0; k < n_; ++k) {
        xrow |= bit(code.qubit_index(j, k)) | bit(code.qubit_index(j + 1, k));
        zcol |= bit(code.qubit_index(k, j)) | bit(code.qubit_index(k, j + 1));
      }
      xstab_.push_back(xrow);
      zstab_.push_back(zcol);
    }
    for (const auto& g : code.gauge_gens()) {
      unsigned __int128 v = g.x_words()[0] |
                            (static_cast<unsigned __int128>(g.z_words()[0]) << nq);
      v = reduce(v);
      if (v) {
        basis_.push_back(v);
        std::sort(basis_.begin(), basis_.end(), [](auto a, auto b) {
          return (a & ~(a - 1)) < (b & ~(b - 1));
        });
      }
    }
    for (int k = 0; k < n_; ++k) {
      logical_x_ |= bit(code.qubit_index(0, k));
      logical_z_ |= bit(code.qubit_index(k, 0));
    }
    nq_ = nq;
  }

  // true iff ideal decode leaves no logical effect on the protected qubit
  bool correct(uint64_t rx, uint64_t rz) const {
    apply_ideal_decode(rx, rz);
    unsigned __int128 v = rx | (static_cast<unsigned __int128>(rz) << nq_);
    return reduce(v) == 0;
  }

  LogicalEffect classify_after_decode(uint64_t rx, uint64_t rz) const {
    apply_ideal_decode(rx, rz);
    unsigned __int128 v = rx | (static_cast<unsigned __int128>(rz) << nq_);
    if (reduce(v) == 0) return LogicalEffect::I;
    unsigned __int128 lx = static_cast<unsigned __int128>(logical_x_);
    unsigned __int128 lz = static_cast<unsigned __int128>(logical_z_) << nq_;
    if (reduce(v ^ lx) == 0) return LogicalEffect::X;
    if (reduce(v ^ lz) == 0) return LogicalEffect::Z;
    return LogicalEffect::Y;
  }

 private:
  static uint64_t bit(int q) { return uint64_t{1} << q; }
  static int parity(uint64_t v) { return std::popcount(v) & 1; }

  void apply_ideal_decode(uint64_t& rx, uint64_t& rz) const {
    uint32_t xc = 0, zc = 0;
    for (int j = 0; j + 1 < n_; ++j) {
      xc |= static_cast<uint32_t>(parity(xstab_[j] & rz)) << j;
      zc |= static_cast<uint32_t>(parity(zstab_[j] & rx)) << j;
    }
    uint32_t rows = assignment(xc), cols = assignment(zc);
    for (int i = 0; i < n_; ++i) {
      if ((rows >> i) & 1) rz ^= bit(i * n_);  // Z at (i, 0)
      if ((cols >> i) & 1) rx ^= bit(i);       // X at (0, i)
    }
  }

  uint32_t assignment(uint32_t checks) const {
    uint32_t r = 0;
    int w = 0;
    for (int i = 1; i < n_; ++i) {
      uint32_t b = ((r >> (i - 1)) ^ (checks >> (i - 1))) & 1;
      r |= b << i;
      w += static_cast<int>(b);
    }
    if (2 * w > n_ || (2 * w == n_ && !(r & 1))) r = ~r & ((uint32_t{1} << n_) - 1);
    return r;
  }

  unsigned __int128 reduce(unsigned __int128 v) const {
    for (auto row : basis_) {
      auto lead = row & ~(row - 1);
      if (v & lead) v ^= row;
    }
    return v;
  }

  int n_, nq_ = 0;
  std::vector<uint64_t> xstab_, zstab_;
  std::vector<unsigned __int128> basis_;
  uint64_t logical_x_ = 0, logical_z_ = 0;
};

// Per-thread propagation engine with preallocated scratch.
class Evaluator {
 public:
  Evaluator(const CompiledCircuit& cc)
      : cc_(cc),
        classifier_(cc.code()),
        x_(cc.circuit().num_qubits, 0),
        z_(cc.circuit().num_qubits, 0),
        flips_(cc.circuit().num_tags, 0) {}

  // Runs the circuit under the assignment; frames/flips stay valid until the
  // next run. Entries must be sorted by location (FaultAssignment guarantees).
  void run(std::span<const std::pair<int, FaultAction>> entries) {
    std::fill(x_.begin(), x_.end(), 0);
    std::fill(z_.begin(), z_.end(), 0);
    std::fill(flips_.begin(), flips_.end(), 0);
    size_t ai = 0;
    int loc = 0;
    const auto& ops = cc_.ops();
    const auto& nodes = cc_.circuit().nodes;
    for (const auto& sb : cc_.steps()) {
      for (; loc < sb.op_end; ++loc) {
        const auto& op = ops[loc];
        const FaultAction* fa = nullptr;
        if (ai < entries.size() && entries[ai].first == loc) fa = &entries[ai++].second;
        switch (op.kind) {
          case OpKind::cnot:
            x_[op.q1] ^= x_[op.q0];
            z_[op.q0] ^= z_[op.q1];
            if (fa) {
              x_[op.q0] ^= fa->x0; z_[op.q0] ^= fa->z0;
              x_[op.q1] ^= fa->x1; z_[op.q1] ^= fa->z1;
            }
            break;
          case OpKind::hadamard:
            std::swap(x_[op.q0], z_[op.q0]);
            if (fa) { x_[op.q0] ^= fa->x0; z_[op.q0] ^= fa->z0; }
            break;
          case OpKind::idle:
            if (fa) { x_[op.q0] ^= fa->x0; z_[op.q0] ^= fa->z0; }
            break;
          case OpKind::prep_zero:
            x_[op.q0] = fa ? fa->x0 : 0;
            z_[op.q0] = 0;  // Z after prep|0> is a stabilizer: absorbed
            break;
          case OpKind::prep_plus:
            z_[op.q0] = fa ? fa->z0 : 0;
            x_[op.q0] = 0;
            break;
          case OpKind::meas_z:
            flips_[op.tag] = x_[op.q0] ^ (fa ? fa->flip : 0);
            x_[op.q0] = z_[op.q0] = 0;
            break;
          case OpKind::meas_x:
            flips_[op.tag] = z_[op.q0] ^ (fa ? fa->flip : 0);
            x_[op.q0] = z_[op.q0] = 0;
            break;
        }
      }
      for (int ni = sb.node_begin; ni < sb.node_end; ++ni) fire_node(nodes[ni]);
    }
    if (ai != entries.size())
      throw std::invalid_argument("FaultAssignment: location out of range or unsorted");
  }

  // Bit-packed residual of a block (requires block size <= 64).
  std::pair<uint64_t, uint64_t> block_residual_bits(int block) const {
    const auto& qs = cc_.circuit().blocks[block].qubits;
    uint64_t rx = 0, rz = 0;
    for (size_t i = 0; i < qs.size(); ++i) {
      rx |= static_cast<uint64_t>(x_[qs[i]] & 1) << i;
      rz |= static_cast<uint64_t>(z_[qs[i]] & 1) << i;
    }
    return {rx, rz};
  }

  PauliOp block_residual(int block) const {
    const auto& qs = cc_.circuit().blocks[block].qubits;
    PauliOp p(static_cast<int>(qs.size()));
    for (size_t i = 0; i < qs.size(); ++i) {
      p.set_x(static_cast<int>(i), x_[qs[i]] & 1);
      p.set_z(static_cast<int>(i), z_[qs[i]] & 1);
    }
    return p;
  }

  const std::vector<uint8_t>& flips() const { return flips_; }
  const FastClassifier& classifier() const { return classifier_; }
  const CompiledCircuit& compiled() const { return cc_; }

  // Frame change applied by node i during the last run.
  const std::vector<PauliOp>& node_corrections() const { return node_corrections_; }
  void record_node_corrections(bool on) {
    record_corrections_ = on;
    node_corrections_.clear();
  }

 private:
  void fire_node(const ClassicalNode& nd) {
    PauliOp change(record_corrections_ ? cc_.circuit().num_qubits : 0);
    switch (nd.kind) {
      case ClassicalNode::Kind::decode_correct: {
        const auto& code = cc_.code();
        Syndrome syn;
        for (const auto& g : nd.x_parities) syn.x_checks.push_back(parity_of(g));
        for (const auto& g : nd.z_parities) syn.z_checks.push_back(parity_of(g));
        if (!nd.x_parities_b.empty()) {
          // repeat-and-compare: act only on a syndrome both rounds agree on
          Syndrome again;
          for (const auto& g : nd.x_parities_b) again.x_checks.push_back(parity_of(g));
          for (const auto& g : nd.z_parities_b) again.z_checks.push_back(parity_of(g));
          if (!(again == syn)) {
            if (record_corrections_) node_corrections_.push_back(std::move(change));
            return;
          }
        }
        PauliOp corr = code.decode(syn);
        const auto& qs = cc_.circuit().blocks[nd.block].qubits;
        for (int i = 0; i < corr.num_qubits(); ++i) {
          if (corr.x_bit(i)) { x_[qs[i]] ^= 1; if (record_corrections_) change.set_x(qs[i], true); }
          if (corr.z_bit(i)) { z_[qs[i]] ^= 1; if (record_corrections_) change.set_z(qs[i], true); }
        }
        break;
      }
      case ClassicalNode::Kind::verify_discard:
        if (flips_[nd.verify_tag]) {
          for (int q : nd.clear_qubits) {
            if (record_corrections_) {
              if (x_[q]) change.set_x(q, true);
              if (z_[q]) change.set_z(q, true);
            }
            x_[q] = z_[q] = 0;
          }
        }
        break;
      case ClassicalNode::Kind::knill_frame: {
        const auto& code = cc_.code();
        const int n = code.n();
        // corrected logical X outcome (row parities of the X-measured block)
        std::vector<uint8_t> p(n, 0), checks(n - 1);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) p[i] ^= flips_[nd.x_grid[i * n + j]];
        for (int i = 0; i + 1 < n; ++i) checks[i] = p[i] ^ p[i + 1];
        auto rows = code.repetition_decode(checks);
        bool frame_z = (p[0] ^ rows[0]) != 0;
        // corrected logical Z outcome (column parities of the Z-measured block)
        std::fill(p.begin(), p.end(), 0);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) p[j] ^= flips_[nd.z_grid[i * n + j]];
        for (int j = 0; j + 1 < n; ++j) checks[j] = p[j] ^ p[j + 1];
        auto cols = code.repetition_decode(checks);
        bool frame_x = (p[0] ^ cols[0]) != 0;

        const auto& qs = cc_.circuit().blocks[nd.block].qubits;
        for (int k = 0; k < n; ++k) {
          if (frame_z) {  // Z_L on column 0
            z_[qs[code.qubit_index(k, 0)]] ^= 1;
            if (record_corrections_) change.set_z(qs[code.qubit_index(k, 0)], true);
          }
          if (frame_x) {  // X_L on row 0
            x_[qs[code.qubit_index(0, k)]] ^= 1;
            if (record_corrections_) change.set_x(qs[code.qubit_index(0, k)], true);
          }
        }
        break;
      }
    }
    if (record_corrections_) node_corrections_.push_back(std::move(change));
  }

  uint8_t parity_of(const std::vector<int>& tags) const {
    uint8_t v = 0;
    for (int t : tags) v ^= flips_[t];
    return v;
  }

  const CompiledCircuit& cc_;
  FastClassifier classifier_;
  std::vector<uint8_t> x_, z_, flips_;
  std::vector<PauliOp> node_corrections_;
  bool record_corrections_ = false;
};

inline FrameResult propagate(const CompiledCircuit& cc, const FaultAssignment& fa) {
  for (const auto& [loc, act] : fa.entries) {
    if (loc < 0 || loc >= cc.num_locations())
      throw std::invalid_argument("propagate: unknown location id");
    bool meas = is_measurement(cc.location(loc).kind);
    if (meas && (act.x0 | act.z0 | act.x1 | act.z1))
      throw std::invalid_argument("propagate: measurement faults are outcome flips only");
    if (!meas && act.flip)
      throw std::invalid_argument("propagate: flip action on a non-measurement location");
    if (!(act.x0 | act.z0 | act.x1 | act.z1 | act.flip))
      throw std::invalid_argument("propagate: identity fault action stored");
    if (cc.location(loc).kind != OpKind::cnot && (act.x1 | act.z1))
      throw std::invalid_argument("propagate: two-qubit action on a one-qubit location");
  }
  Evaluator ev(cc);
  ev.record_node_corrections(true);
  ev.run(fa.entries);
  FrameResult fr;
  for (size_t b = 0; b < cc.circuit().blocks.size(); ++b)
    fr.block_residual.push_back(ev.block_residual(static_cast<int>(b)));
  fr.outcome_flips = ev.flips();
  fr.node_corrections = ev.node_corrections();
  return fr;
}

inline FrameResult propagate(const Circuit& circuit, const BaconShorCode& code,
                             const FaultAssignment& fa) {
  CompiledCircuit cc(circuit, code);
  return propagate(cc, fa);
}

// The exRec is correct iff, for every output block, appending an ideal EC and
// ideal decode yields no logical effect. Inputs are fault-free code states.
class ExRecEvaluator {
 public:
  explicit ExRecEvaluator(const ExRec& ex)
      : ex_(ex), cc_(ex.circuit, ex.code), ev_(cc_) {}

  bool correct(std::span<const std::pair<int, FaultAction>> entries) {
    ev_.run(entries);
    for (int b : ex_.output_blocks) {
      auto [rx, rz] = ev_.block_residual_bits(b);
      if (!ev_.classifier().correct(rx, rz)) return false;
    }
    return true;
  }

  const CompiledCircuit& compiled() const { return cc_; }
  Evaluator& evaluator() { return ev_; }
  const ExRec& exrec() const { return ex_; }

 private:
  const ExRec& ex_;
  CompiledCircuit cc_;
  Evaluator ev_;
};

inline bool exrec_correct(const ExRec& ex, const FaultAssignment& fa) {
  ExRecEvaluator ev(ex);
  return ev.correct(fa.entries);
}

}  // namespace bsft
