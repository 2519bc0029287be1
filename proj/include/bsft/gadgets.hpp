// Builders for the fault-tolerant gadgets: Fig.-2-style two-qubit gauge
// measurements, gauge-based EC, logical |0>/|+>/Bell preparation, Steane EC,
// Knill (teleportation) EC. All schedules are just-in-time: ancilla wires are
// born as late as possible, and a data block waits (explicit idles) exactly
// where a decode node must fire before its next section.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "bsft/backtransport.hpp"
#include "bsft/circuit.hpp"
#include "bsft/code.hpp"

namespace bsft {

enum class EcMethod : uint8_t { gauge, steane, knill };
enum class AncillaPolicy : uint8_t { per_check, single_roaming };
enum class GaugeOrder : uint8_t { x_then_z, alternating };

inline const char* to_string(EcMethod m) {
  switch (m) {
    case EcMethod::gauge: return "gauge";
    case EcMethod::steane: return "steane";
    case EcMethod::knill: return "knill";
  }
  return "?";
}

class CircuitBuilder {
 public:
  Circuit c;

  int add_block(const std::string& name, int count) {
    Block b;
    b.name = name;
    for (int i = 0; i < count; ++i) b.qubits.push_back(add_qubit());
    c.blocks.push_back(std::move(b));
    return static_cast<int>(c.blocks.size()) - 1;
  }

  int add_qubit() {
    free_at_.push_back(0);
    return c.num_qubits++;
  }

  int new_tag() { return c.num_tags++; }

  int free_at(int q) const { return free_at_[q]; }

  int block_free(int block) const {
    int t = 0;
    for (int q : c.blocks[block].qubits) t = std::max(t, free_at_[q]);
    return t;
  }

  void reserve(int block, int until) {
    for (int q : c.blocks[block].qubits) free_at_[q] = std::max(free_at_[q], until);
  }

  void set_section(int s) { section_ = s; }

  void put(int t, ElementaryOp op) {
    if (t < 0) throw std::logic_error("builder: negative timestep");
    while (c.num_timesteps() <= t) c.steps.emplace_back();
    c.steps[t].push_back(op);
    free_at_[op.q0] = std::max(free_at_[op.q0], t + 1);
    if (section_ >= 0) op_section_[{t, op.q0}] = section_;
    if (op.kind == OpKind::cnot) {
      free_at_[op.q1] = std::max(free_at_[op.q1], t + 1);
      if (section_ >= 0) op_section_[{t, op.q1}] = section_;
    }
  }

  void add_node(ClassicalNode nd) { c.nodes.push_back(std::move(nd)); }

  // fills idles, sorts steps, sorts nodes by firing time, validates
  Circuit take() {
    std::stable_sort(c.nodes.begin(), c.nodes.end(),
                     [](const ClassicalNode& a, const ClassicalNode& b) {
                       return a.fire_after < b.fire_after;
                     });
    c.finalize();
    return std::move(c);
  }

  // Section id recorded for every non-idle op; idles inherit the most recent
  // section of their qubit (used by the exRec location table).
  int section_of(int t, int q) const {
    auto it = op_section_.find({t, q});
    if (it != op_section_.end()) return it->second;
    for (int u = t - 1; u >= 0; --u) {
      it = op_section_.find({u, q});
      if (it != op_section_.end()) return it->second;
    }
    return -1;
  }

 private:
  std::vector<int> free_at_;
  int section_ = -1;
  std::map<std::pair<int, int>, int> op_section_;
};

namespace gadget_detail {

// Duration (in timesteps) of one logical-ancilla preparation block.
inline int prep_duration(int n, bool plus_state) {
  if (n >= 4) return n + 3;           // verification measurement dominates
  return plus_state ? n + 1 : n + 2;  // |0>_L carries the trailing H layer
}

// Schedules one logical ancilla block. |0>_L: per column, prep |0..0>, H on
// the top qubit, a CNOT ladder downward, then H on every qubit (Hadamard-
// basis cats along columns). |+>_L: the same composed with bitwise H and the
// row<->column relabeling; the two trailing H layers cancel, leaving
// computational-basis cats along rows. Cats of size >= 4 get one end-parity
// verification ancilla; a flipped check discards and ideally re-prepares.
inline void build_logical_prep(CircuitBuilder& b, const BaconShorCode& code, int block,
                               bool plus_state, int offset) {
  const int n = code.n();
  const auto& q = b.c.blocks[block].qubits;
  for (int line = 0; line < n; ++line) {
    std::vector<int> chain(n);
    for (int k = 0; k < n; ++k)
      chain[k] = plus_state ? q[code.qubit_index(line, k)] : q[code.qubit_index(k, line)];
    b.put(offset, {OpKind::prep_zero, chain[0]});
    b.put(offset + 1, {OpKind::hadamard, chain[0]});
    if (n > 1) b.put(offset + 1, {OpKind::prep_zero, chain[1]});
    for (int k = 1; k < n; ++k) {
      b.put(offset + k + 1, {OpKind::cnot, chain[k - 1], chain[k]});
      if (k + 1 < n) b.put(offset + k + 1, {OpKind::prep_zero, chain[k + 1]});
    }
    if (n >= 4) {
      int a = b.add_qubit();
      int tag = b.new_tag();
      b.put(offset + 2, {OpKind::prep_zero, a});
      b.put(offset + 3, {OpKind::cnot, chain[0], a});
      b.put(offset + n + 1, {OpKind::cnot, chain[n - 1], a});
      b.put(offset + n + 2, {OpKind::meas_z, a, -1, tag});
      ClassicalNode nd;
      nd.kind = ClassicalNode::Kind::verify_discard;
      nd.fire_after = offset + n + 2;
      nd.verify_tag = tag;
      nd.clear_qubits = chain;
      b.add_node(std::move(nd));
    }
    if (!plus_state) {
      int h_at = (n >= 4) ? offset + n + 2 : offset + n + 1;
      for (int k = 0; k < n; ++k) b.put(h_at, {OpKind::hadamard, chain[k]});
    }
  }
}

inline std::vector<int> measure_block(CircuitBuilder& b, int block, OpKind basis, int t) {
  std::vector<int> tags;
  for (int q : b.c.blocks[block].qubits) {
    int tag = b.new_tag();
    b.put(t, {basis, q, -1, tag});
    tags.push_back(tag);
  }
  return tags;
}

inline void transversal_cnot(CircuitBuilder& b, int from_block, int to_block, int t) {
  const auto& src = b.c.blocks[from_block].qubits;
  const auto& dst = b.c.blocks[to_block].qubits;
  for (size_t i = 0; i < src.size(); ++i) b.put(t, {OpKind::cnot, src[i], dst[i]});
}

}  // namespace gadget_detail

// Result of appending an EC gadget: the block that carries the logical qubit
// afterwards and the first timestep the next section may use it.
struct EcResult {
  int out_block;
  int done_at;
};

// One Fig.-2 measurement: for an X-type pair, prep |+>, CNOT ancilla onto the
// upper then lower data qubit, measure X; for Z-type, prep |0>, CNOT the left
// then right data qubit onto the ancilla, measure Z. Returns the outcome tag.
inline int append_gauge_meas(CircuitBuilder& b, const BaconShorCode& code, int data_block,
                             int gauge_gen_id, int ancilla, int t_prep) {
  const int n = code.n();
  const int per_type = n * (n - 1);
  if (gauge_gen_id < 0 || gauge_gen_id >= 2 * per_type)
    throw std::out_of_range("append_gauge_meas: unknown gauge generator id");
  const auto& q = b.c.blocks[data_block].qubits;
  int tag = b.new_tag();
  if (gauge_gen_id < per_type) {
    int j = gauge_gen_id / n, i = gauge_gen_id % n;  // X_{j,i} X_{j+1,i}
    b.put(t_prep, {OpKind::prep_plus, ancilla});
    b.put(t_prep + 1, {OpKind::cnot, ancilla, q[code.qubit_index(j, i)]});
    b.put(t_prep + 2, {OpKind::cnot, ancilla, q[code.qubit_index(j + 1, i)]});
    b.put(t_prep + 3, {OpKind::meas_x, ancilla, -1, tag});
  } else {
    int id = gauge_gen_id - per_type;
    int j = id / n, k = id % n;  // Z_{k,j} Z_{k,j+1}
    b.put(t_prep, {OpKind::prep_zero, ancilla});
    b.put(t_prep + 1, {OpKind::cnot, q[code.qubit_index(k, j)], ancilla});
    b.put(t_prep + 2, {OpKind::cnot, q[code.qubit_index(k, j + 1)], ancilla});
    b.put(t_prep + 3, {OpKind::meas_z, ancilla, -1, tag});
  }
  return tag;
}

// Standalone Fig.-2 circuit on a fresh data block.
inline Circuit build_gauge_meas(const BaconShorCode& code, int gauge_gen_id) {
  CircuitBuilder b;
  int data = b.add_block("data0", code.num_qubits());
  int anc = b.add_qubit();
  append_gauge_meas(b, code, data, gauge_gen_id, anc, 0);
  return b.take();
}

// Measures all 2n(n-1) weight-2 gauge operators twice and decodes the
// stabilizer parities into a Pauli frame update on the data block, applied
// only when the two extraction rounds agree. One round is not fault
// tolerant here: the syndrome latches bit by bit as the waves sweep the
// lattice, so a data fault occurring mid-extraction is seen by only part of
// the checks and the resulting partial-syndrome correction can push a
// single fault past the code distance. Repeat-and-compare restores alpha_1=0.
inline EcResult append_gauge_ec(CircuitBuilder& b, const BaconShorCode& code, int data_block,
                                AncillaPolicy policy = AncillaPolicy::per_check,
                                GaugeOrder order = GaugeOrder::x_then_z) {
  const int n = code.n();
  const int per_type = n * (n - 1);

  // [round][j][i]: outcome of the X-check on rows (j,j+1), column i.
  std::vector<std::vector<int>> x_tags[2], z_tags[2];
  for (int r = 0; r < 2; ++r) {
    x_tags[r].assign(n - 1, std::vector<int>(n, -1));
    z_tags[r].assign(n - 1, std::vector<int>(n, -1));
  }
  int last_meas = 0;

  if (policy == AncillaPolicy::per_check) {
    // Waves of n disjoint checks (one per column/row), pipelined at stride 2.
    std::vector<std::pair<bool, int>> waves;  // (is_x_type, pair index)
    if (order == GaugeOrder::x_then_z) {
      for (int j = 0; j + 1 < n; ++j) waves.push_back({true, j});
      for (int j = 0; j + 1 < n; ++j) waves.push_back({false, j});
    } else {
      for (int j = 0; j + 1 < n; ++j) {
        waves.push_back({true, j});
        waves.push_back({false, j});
      }
    }
    int base = std::max(b.block_free(data_block), 1);
    for (int round = 0; round < 2; ++round) {
      for (size_t w = 0; w < waves.size(); ++w) {
        auto [is_x, j] = waves[w];
        int t0 = base + 2 * static_cast<int>(w) - 1;
        for (int i = 0; i < n; ++i) {
          int anc = b.add_qubit();
          int gen = is_x ? j * n + i : per_type + j * n + i;
          int tag = append_gauge_meas(b, code, data_block, gen, anc, t0);
          (is_x ? x_tags : z_tags)[round][j][i] = tag;
          last_meas = t0 + 3;
        }
      }
      base += 2 * static_cast<int>(waves.size());
    }
  } else {
    // One roaming ancilla measures every check sequentially. X-type checks
    // run column-major, Z-type row-major.
    std::vector<int> gens;
    std::vector<int> xg, zg;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j + 1 < n; ++j) xg.push_back(j * n + i);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j + 1 < n; ++j) zg.push_back(per_type + j * n + k);
    if (order == GaugeOrder::x_then_z) {
      gens = xg;
      gens.insert(gens.end(), zg.begin(), zg.end());
    } else {
      for (size_t i = 0; i < xg.size(); ++i) {
        gens.push_back(xg[i]);
        gens.push_back(zg[i]);
      }
    }
    int anc = b.add_qubit();
    const int base = std::max(b.block_free(data_block), 1);
    for (int round = 0; round < 2; ++round) {
      for (size_t cidx = 0; cidx < gens.size(); ++cidx) {
        int gen = gens[cidx];
        int t0 = base + 4 * static_cast<int>(round * gens.size() + cidx) - 1;
        int tag = append_gauge_meas(b, code, data_block, gen, anc, t0);
        if (gen < per_type)
          x_tags[round][gen / n][gen % n] = tag;
        else
          z_tags[round][(gen - per_type) / n][(gen - per_type) % n] = tag;
        last_meas = t0 + 3;
      }
    }
  }

  ClassicalNode nd;
  nd.kind = ClassicalNode::Kind::decode_correct;
  nd.fire_after = last_meas;
  nd.block = data_block;
  nd.x_parities = x_tags[0];
  nd.z_parities = z_tags[0];
  nd.x_parities_b = x_tags[1];
  nd.z_parities_b = z_tags[1];
  b.add_node(std::move(nd));
  b.reserve(data_block, last_meas + 1);
  return {data_block, last_meas + 1};
}

// Steane-style EC: X errors are read out through a transversal CNOT from the
// data into a |+>_L block measured bitwise in Z (column-pair parities), Z
// errors through a CNOT from a |0>_L block into the data, measured bitwise in
// X (row-pair parities). One decode node applies the corrections.
inline EcResult append_steane_ec(CircuitBuilder& b, const BaconShorCode& code, int data_block,
                                 const std::string& prefix) {
  using namespace gadget_detail;
  const int n = code.n();
  const int dp = prep_duration(n, /*plus=*/true);
  const int d0 = prep_duration(n, /*plus=*/false);
  const int t_int = std::max({b.block_free(data_block), dp, d0 - 1});

  int ap = b.add_block(prefix + ".ap", n * n);
  build_logical_prep(b, code, ap, /*plus=*/true, t_int - dp);
  int a0 = b.add_block(prefix + ".a0", n * n);
  build_logical_prep(b, code, a0, /*plus=*/false, t_int + 1 - d0);

  transversal_cnot(b, data_block, ap, t_int);
  auto ap_tags = measure_block(b, ap, OpKind::meas_z, t_int + 1);
  transversal_cnot(b, a0, data_block, t_int + 1);
  auto a0_tags = measure_block(b, a0, OpKind::meas_x, t_int + 2);

  ClassicalNode nd;
  nd.kind = ClassicalNode::Kind::decode_correct;
  nd.fire_after = t_int + 2;
  nd.block = data_block;
  for (int i = 0; i + 1 < n; ++i) {
    std::vector<int> rows;
    for (int k = 0; k < n; ++k) {
      rows.push_back(a0_tags[code.qubit_index(i, k)]);
      rows.push_back(a0_tags[code.qubit_index(i + 1, k)]);
    }
    nd.x_parities.push_back(std::move(rows));
    std::vector<int> cols;
    for (int k = 0; k < n; ++k) {
      cols.push_back(ap_tags[code.qubit_index(k, i)]);
      cols.push_back(ap_tags[code.qubit_index(k, i + 1)]);
    }
    nd.z_parities.push_back(std::move(cols));
  }
  b.add_node(std::move(nd));
  b.reserve(data_block, t_int + 3);
  return {data_block, t_int + 3};
}

// Knill (teleportation) EC: a Bell pair |+>_L -> |0>_L is prepared, the
// incoming block is Bell-measured against the |+>_L half (bitwise X on the
// data, bitwise Z on the half), and the decoded logical outcome bits become a
// Pauli frame update on the surviving |0>_L half, which is the output block.
inline EcResult append_knill_ec(CircuitBuilder& b, const BaconShorCode& code, int data_block,
                                const std::string& prefix) {
  using namespace gadget_detail;
  const int n = code.n();
  const int dp = prep_duration(n, true);
  const int d0 = prep_duration(n, false);
  const int t_int = std::max(b.block_free(data_block), std::max(dp, d0) + 1);
  const int t_bell = t_int - 1;

  int ap = b.add_block(prefix + ".ap", n * n);
  build_logical_prep(b, code, ap, true, t_bell - dp);
  int a0 = b.add_block(prefix + ".a0", n * n);
  build_logical_prep(b, code, a0, false, t_bell - d0);

  transversal_cnot(b, ap, a0, t_bell);
  transversal_cnot(b, data_block, ap, t_int);
  auto x_grid = measure_block(b, data_block, OpKind::meas_x, t_int + 1);
  auto z_grid = measure_block(b, ap, OpKind::meas_z, t_int + 1);

  ClassicalNode nd;
  nd.kind = ClassicalNode::Kind::knill_frame;
  nd.fire_after = t_int + 1;
  nd.block = a0;
  nd.x_grid = x_grid;
  nd.z_grid = z_grid;
  b.add_node(std::move(nd));
  b.reserve(a0, t_int + 2);
  return {a0, t_int + 2};
}

inline EcResult append_ec(CircuitBuilder& b, const BaconShorCode& code, int data_block,
                          EcMethod method, const std::string& prefix,
                          AncillaPolicy policy = AncillaPolicy::per_check,
                          GaugeOrder order = GaugeOrder::x_then_z) {
  switch (method) {
    case EcMethod::gauge: return append_gauge_ec(b, code, data_block, policy, order);
    case EcMethod::steane: return append_steane_ec(b, code, data_block, prefix);
    case EcMethod::knill: return append_knill_ec(b, code, data_block, prefix);
  }
  throw std::logic_error("append_ec: bad method");
}

// ---- standalone gadgets (library surface + `gadget emit`) ----

inline Circuit build_prep_zero_L(const BaconShorCode& code) {
  CircuitBuilder b;
  int blk = b.add_block("out0", code.num_qubits());
  gadget_detail::build_logical_prep(b, code, blk, false, 0);
  Circuit c = b.take();
  validate_node_determinism(c, code, {});
  return c;
}

inline Circuit build_prep_plus_L(const BaconShorCode& code) {
  CircuitBuilder b;
  int blk = b.add_block("out0", code.num_qubits());
  gadget_detail::build_logical_prep(b, code, blk, true, 0);
  Circuit c = b.take();
  validate_node_determinism(c, code, {});
  return c;
}

inline Circuit build_bell_prep_L(const BaconShorCode& code) {
  using namespace gadget_detail;
  CircuitBuilder b;
  const int dp = prep_duration(code.n(), true);
  const int d0 = prep_duration(code.n(), false);
  const int t_bell = std::max(dp, d0);
  int ap = b.add_block("out0", code.num_qubits());
  build_logical_prep(b, code, ap, true, t_bell - dp);
  int a0 = b.add_block("out1", code.num_qubits());
  build_logical_prep(b, code, a0, false, t_bell - d0);
  transversal_cnot(b, ap, a0, t_bell);
  Circuit c = b.take();
  validate_node_determinism(c, code, {});
  return c;
}

inline Circuit build_gauge_ec(const BaconShorCode& code,
                              AncillaPolicy policy = AncillaPolicy::per_check,
                              GaugeOrder order = GaugeOrder::x_then_z) {
  CircuitBuilder b;
  int data = b.add_block("data0", code.num_qubits());
  append_gauge_ec(b, code, data, policy, order);
  Circuit c = b.take();
  validate_node_determinism(c, code, {0});
  return c;
}

inline Circuit build_steane_ec(const BaconShorCode& code) {
  CircuitBuilder b;
  int data = b.add_block("data0", code.num_qubits());
  append_steane_ec(b, code, data, "ec");
  Circuit c = b.take();
  validate_node_determinism(c, code, {0});
  return c;
}

inline Circuit build_knill_ec(const BaconShorCode& code) {
  CircuitBuilder b;
  int data = b.add_block("data0", code.num_qubits());
  append_knill_ec(b, code, data, "ec");
  Circuit c = b.take();
  validate_node_determinism(c, code, {0});
  return c;
}

}  // namespace bsft
