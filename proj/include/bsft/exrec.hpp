// The CNOT extended rectangle: two leading EC gadgets, a transversal CNOT
// gate section, two trailing ECs, with every elementary operation (idles
// included) enumerated in a flat location table.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "bsft/gadgets.hpp"

namespace bsft {

enum class Section : uint8_t {
  leading_ec_0 = 0,
  leading_ec_1 = 1,
  gate = 2,
  trailing_ec_0 = 3,
  trailing_ec_1 = 4,
};

inline const char* to_string(Section s) {
  switch (s) {
    case Section::leading_ec_0: return "leading_ec_0";
    case Section::leading_ec_1: return "leading_ec_1";
    case Section::gate: return "gate";
    case Section::trailing_ec_0: return "trailing_ec_0";
    case Section::trailing_ec_1: return "trailing_ec_1";
  }
  return "?";
}

struct LocationRef {
  int timestep;
  int index;  // position within the sorted timestep
};

struct ExRec {
  BaconShorCode code;
  EcMethod ec;
  Circuit circuit;
  std::vector<int> output_blocks;
  std::vector<LocationRef> locations;
  std::vector<Section> location_section;

  int count_locations() const { return static_cast<int>(locations.size()); }

  std::array<int, 5> section_counts() const {
    std::array<int, 5> counts{};
    for (Section s : location_section) counts[static_cast<int>(s)]++;
    return counts;
  }
};

inline ExRec build_exrec(const BaconShorCode& code, EcMethod method,
                         AncillaPolicy policy = AncillaPolicy::per_check,
                         GaugeOrder order = GaugeOrder::x_then_z) {
  CircuitBuilder b;
  int d0 = b.add_block("data0", code.num_qubits());
  int d1 = b.add_block("data1", code.num_qubits());

  b.set_section(static_cast<int>(Section::leading_ec_0));
  EcResult lead0 = append_ec(b, code, d0, method, "lec0", policy, order);
  b.set_section(static_cast<int>(Section::leading_ec_1));
  EcResult lead1 = append_ec(b, code, d1, method, "lec1", policy, order);

  const int t_gate = std::max(lead0.done_at, lead1.done_at);
  b.set_section(static_cast<int>(Section::gate));
  {
    const auto& src = b.c.blocks[lead0.out_block].qubits;
    const auto& dst = b.c.blocks[lead1.out_block].qubits;
    for (size_t i = 0; i < src.size(); ++i)
      b.put(t_gate, {OpKind::cnot, src[i], dst[i]});
  }
  b.reserve(lead0.out_block, t_gate + 1);
  b.reserve(lead1.out_block, t_gate + 1);

  b.set_section(static_cast<int>(Section::trailing_ec_0));
  EcResult trail0 = append_ec(b, code, lead0.out_block, method, "tec0", policy, order);
  b.set_section(static_cast<int>(Section::trailing_ec_1));
  EcResult trail1 = append_ec(b, code, lead1.out_block, method, "tec1", policy, order);

  ExRec ex{code, method, Circuit{}, {trail0.out_block, trail1.out_block}, {}, {}};

  // Location sections must be resolved against the finalized (sorted,
  // idle-filled) circuit, inheriting each idle's most recent section.
  Circuit circ = b.take();
  for (int t = 0; t < circ.num_timesteps(); ++t)
    for (int i = 0; i < static_cast<int>(circ.steps[t].size()); ++i) {
      int s = b.section_of(t, circ.steps[t][i].q0);
      if (s < 0) throw std::logic_error("exrec: op with no section");
      ex.locations.push_back({t, i});
      ex.location_section.push_back(static_cast<Section>(s));
    }
  validate_node_determinism(circ, code, {d0, d1});
  ex.circuit = std::move(circ);
  return ex;
}

}  // namespace bsft
