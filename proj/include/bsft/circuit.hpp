// Timestep-scheduled Clifford circuits with explicit idle locations and
// classical syndrome-processing nodes.
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsft {

enum class OpKind : uint8_t { prep_zero, prep_plus, meas_z, meas_x, cnot, hadamard, idle };

inline bool is_measurement(OpKind k) { return k == OpKind::meas_z || k == OpKind::meas_x; }
inline bool is_prep(OpKind k) { return k == OpKind::prep_zero || k == OpKind::prep_plus; }

struct ElementaryOp {
  OpKind kind;
  int q0 = -1;
  int q1 = -1;   // cnot target, otherwise unused
  int tag = -1;  // measurement outcome label, otherwise unused
};

struct Block {
  std::string name;
  std::vector<int> qubits;  // row-major for n x n code blocks
};

// Classical processing fired at the end of a timestep, once its input
// outcomes exist. Frame updates are instantaneous (no fault locations).
struct ClassicalNode {
  enum class Kind : uint8_t { decode_correct, verify_discard, knill_frame };
  Kind kind;
  int fire_after = -1;
  int block = -1;  // target block (decode_correct, knill_frame)

  // decode_correct: tag groups whose parities form the syndrome bits. When a
  // second-round set is present the correction is applied only if both
  // rounds agree bitwise (repeat-and-compare extraction), else skipped.
  std::vector<std::vector<int>> x_parities;
  std::vector<std::vector<int>> z_parities;
  std::vector<std::vector<int>> x_parities_b;
  std::vector<std::vector<int>> z_parities_b;

  // verify_discard: one outcome; a flip discards and ideally re-prepares.
  int verify_tag = -1;
  std::vector<int> clear_qubits;

  // knill_frame: row-major outcome grids of the X-measured data block and
  // the Z-measured Bell half.
  std::vector<int> x_grid;
  std::vector<int> z_grid;
};

class Circuit {
 public:
  int num_qubits = 0;
  int num_tags = 0;
  std::vector<std::vector<ElementaryOp>> steps;
  std::vector<Block> blocks;
  std::vector<ClassicalNode> nodes;

  int num_timesteps() const { return static_cast<int>(steps.size()); }

  int num_locations() const {
    int c = 0;
    for (const auto& s : steps) c += static_cast<int>(s.size());
    return c;
  }

  int block_index(const std::string& name) const {
    for (size_t i = 0; i < blocks.size(); ++i)
      if (blocks[i].name == name) return static_cast<int>(i);
    throw std::out_of_range("Circuit: no block named " + name);
  }

  // Sorts ops within each timestep by acting qubit and fills idle ops so
  // every live qubit is accounted for in every timestep. A qubit is live
  // from its first op until its next measurement; a qubit whose final
  // segment does not end in a measurement stays live to the end.
  void finalize() {
    std::vector<std::vector<std::pair<int, OpKind>>> per_qubit(num_qubits);
    for (int t = 0; t < num_timesteps(); ++t)
      for (const auto& op : steps[t]) {
        per_qubit[op.q0].push_back({t, op.kind});
        if (op.kind == OpKind::cnot) per_qubit[op.q1].push_back({t, op.kind});
      }
    const int t_end = num_timesteps() - 1;
    for (int q = 0; q < num_qubits; ++q) {
      auto& ops = per_qubit[q];
      if (ops.empty()) continue;
      std::sort(ops.begin(), ops.end());
      size_t i = 0;
      while (i < ops.size()) {
        // segment from ops[i] to the next measurement (inclusive) or onward
        size_t j = i;
        while (j < ops.size() && !is_measurement(ops[j].second)) ++j;
        int seg_begin = ops[i].first;
        int seg_end = (j < ops.size()) ? ops[j].first : t_end;
        size_t cursor = i;
        for (int t = seg_begin; t <= seg_end; ++t) {
          if (cursor < ops.size() && ops[cursor].first == t) {
            ++cursor;
          } else {
            steps[t].push_back({OpKind::idle, q, -1, -1});
          }
        }
        i = (j < ops.size()) ? j + 1 : ops.size();
      }
    }
    for (auto& s : steps)
      std::sort(s.begin(), s.end(),
                [](const ElementaryOp& a, const ElementaryOp& b) { return a.q0 < b.q0; });
    validate_structure();
  }

  void validate_structure() const {
    std::vector<int> tag_time(num_tags, -1);
    std::vector<std::vector<std::pair<int, OpKind>>> per_qubit(num_qubits);
    for (int t = 0; t < num_timesteps(); ++t) {
      std::vector<uint8_t> used(num_qubits, 0);
      for (const auto& op : steps[t]) {
        check_qubit(op.q0);
        if (used[op.q0]++) throw std::logic_error("qubit used twice in a timestep");
        per_qubit[op.q0].push_back({t, op.kind});
        if (op.kind == OpKind::cnot) {
          check_qubit(op.q1);
          if (op.q0 == op.q1) throw std::logic_error("cnot with equal qubits");
          if (used[op.q1]++) throw std::logic_error("qubit used twice in a timestep");
          per_qubit[op.q1].push_back({t, op.kind});
        } else if (op.q1 != -1) {
          throw std::logic_error("non-cnot op with second qubit");
        }
        if (is_measurement(op.kind)) {
          if (op.tag < 0 || op.tag >= num_tags) throw std::logic_error("bad outcome tag");
          if (tag_time[op.tag] != -1) throw std::logic_error("duplicate outcome tag");
          tag_time[op.tag] = t;
        } else if (op.tag != -1) {
          throw std::logic_error("non-measurement op with tag");
        }
      }
    }
    for (int i = 0; i < num_tags; ++i)
      if (tag_time[i] == -1) throw std::logic_error("unmeasured outcome tag");

    // Idle completeness: within each live segment (first op up to the next
    // measurement, or to circuit end) the qubit must act every timestep.
    const int t_end = num_timesteps() - 1;
    for (int q = 0; q < num_qubits; ++q) {
      const auto& ops = per_qubit[q];
      size_t i = 0;
      while (i < ops.size()) {
        size_t j = i;
        while (j < ops.size() && !is_measurement(ops[j].second)) ++j;
        int seg_end = (j < ops.size()) ? ops[j].first : t_end;
        int expect = ops[i].first;
        size_t cursor = i;
        for (int t = ops[i].first; t <= seg_end; ++t, ++expect) {
          if (cursor >= ops.size() || ops[cursor].first != t)
            throw std::logic_error("live qubit missing an op (idle not inserted)");
          ++cursor;
        }
        i = cursor;
      }
    }

    for (const auto& b : blocks)
      for (int q : b.qubits) check_qubit(q);

    int prev_fire = -1;
    for (const auto& nd : nodes) {
      if (nd.fire_after < prev_fire) throw std::logic_error("classical nodes out of order");
      prev_fire = nd.fire_after;
      if (nd.fire_after < 0 || nd.fire_after >= num_timesteps())
        throw std::logic_error("node fires outside circuit");
      auto check_tags = [&](const std::vector<int>& tags) {
        for (int tg : tags) {
          if (tg < 0 || tg >= num_tags || tag_time[tg] == -1)
            throw std::logic_error("node reads unknown tag");
          if (tag_time[tg] > nd.fire_after)
            throw std::logic_error("node fires before its input is measured");
        }
      };
      switch (nd.kind) {
        case ClassicalNode::Kind::decode_correct:
          check_block(nd.block);
          for (const auto& g : nd.x_parities) check_tags(g);
          for (const auto& g : nd.z_parities) check_tags(g);
          for (const auto& g : nd.x_parities_b) check_tags(g);
          for (const auto& g : nd.z_parities_b) check_tags(g);
          if (nd.x_parities_b.empty() != nd.z_parities_b.empty())
            throw std::logic_error("decode node: second round must cover both check types");
          break;
        case ClassicalNode::Kind::verify_discard:
          check_tags({nd.verify_tag});
          for (int q : nd.clear_qubits) check_qubit(q);
          break;
        case ClassicalNode::Kind::knill_frame:
          check_block(nd.block);
          check_tags(nd.x_grid);
          check_tags(nd.z_grid);
          break;
      }
    }
  }

  std::string dump() const {
    std::ostringstream out;
    out << "# bsft-circuit v1\n";
    out << "# qubits " << num_qubits << "\n";
    out << "# tags " << num_tags << "\n";
    for (const auto& b : blocks) {
      out << "# block " << b.name;
      for (int q : b.qubits) out << ' ' << q;
      out << "\n";
    }
    for (const auto& nd : nodes) {
      switch (nd.kind) {
        case ClassicalNode::Kind::decode_correct:
          out << "# node decode fire=" << nd.fire_after
              << " block=" << blocks[nd.block].name;
          out << " x=" << render_groups(nd.x_parities);
          out << " z=" << render_groups(nd.z_parities);
          if (!nd.x_parities_b.empty()) {
            out << " x2=" << render_groups(nd.x_parities_b);
            out << " z2=" << render_groups(nd.z_parities_b);
          }
          break;
        case ClassicalNode::Kind::verify_discard:
          out << "# node verify fire=" << nd.fire_after << " tag=m" << nd.verify_tag
              << " clear=[";
          for (size_t i = 0; i < nd.clear_qubits.size(); ++i)
            out << (i ? " " : "") << nd.clear_qubits[i];
          out << "]";
          break;
        case ClassicalNode::Kind::knill_frame:
          out << "# node knill fire=" << nd.fire_after
              << " block=" << blocks[nd.block].name;
          out << " xgrid=" << render_tags(nd.x_grid);
          out << " zgrid=" << render_tags(nd.z_grid);
          break;
      }
      out << "\n";
    }
    for (int t = 0; t < num_timesteps(); ++t) {
      out << "t=" << t << ":";
      for (size_t i = 0; i < steps[t].size(); ++i) {
        const auto& op = steps[t][i];
        out << (i ? "; " : " ");
        switch (op.kind) {
          case OpKind::prep_zero: out << "prep0 q" << op.q0; break;
          case OpKind::prep_plus: out << "prep+ q" << op.q0; break;
          case OpKind::meas_z: out << "mz q" << op.q0 << " m" << op.tag; break;
          case OpKind::meas_x: out << "mx q" << op.q0 << " m" << op.tag; break;
          case OpKind::cnot: out << "cnot q" << op.q0 << " q" << op.q1; break;
          case OpKind::hadamard: out << "h q" << op.q0; break;
          case OpKind::idle: out << "idle q" << op.q0; break;
        }
      }
      out << "\n";
    }
    return out.str();
  }

  // FNV-1a 64 over the text dump; stable fingerprint for reports.
  std::string hash() const {
    uint64_t h = 14695981039346656037ull;
    for (char c : dump()) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
  }

  static Circuit parse(const std::string& text);

 private:
  void check_qubit(int q) const {
    if (q < 0 || q >= num_qubits) throw std::logic_error("qubit id out of range");
  }
  void check_block(int b) const {
    if (b < 0 || b >= static_cast<int>(blocks.size()))
      throw std::logic_error("block id out of range");
  }
  static std::string render_tags(const std::vector<int>& tags) {
    std::string s = "[";
    for (size_t i = 0; i < tags.size(); ++i) s += (i ? " m" : "m") + std::to_string(tags[i]);
    return s + "]";
  }
  static std::string render_groups(const std::vector<std::vector<int>>& groups) {
    std::string s = "[";
    for (size_t g = 0; g < groups.size(); ++g) {
      if (g) s += " | ";
      for (size_t i = 0; i < groups[g].size(); ++i)
        s += (i ? " m" : "m") + std::to_string(groups[g][i]);
    }
    return s + "]";
  }
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline int parse_id(const std::string& tok, char prefix) {
  if (tok.empty() || tok[0] != prefix)
    throw std::invalid_argument("circuit parse: expected '" + std::string(1, prefix) +
                                "<int>', got '" + tok + "'");
  return std::stoi(tok.substr(1));
}

// Parses "[m0 m1 | m2 m3]"-style bracketed tag lists; '|' separates groups.
inline std::vector<std::vector<int>> parse_groups(std::istringstream& in) {
  std::vector<std::vector<int>> groups(1);
  std::string tok;
  bool done = false;
  while (!done && in >> tok) {
    if (tok.front() == '[') tok = tok.substr(1);
    if (!tok.empty() && tok.back() == ']') {
      tok.pop_back();
      done = true;
    }
    if (tok == "|") { groups.emplace_back(); continue; }
    if (tok.empty()) continue;
    size_t bar;
    while ((bar = tok.find('|')) != std::string::npos) {
      std::string head = tok.substr(0, bar);
      if (!head.empty()) groups.back().push_back(parse_id(head, 'm'));
      groups.emplace_back();
      tok = tok.substr(bar + 1);
    }
    if (!tok.empty()) groups.back().push_back(parse_id(tok, 'm'));
  }
  return groups;
}

}  // namespace detail

inline Circuit Circuit::parse(const std::string& text) {
  Circuit c;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    if (line.rfind("# qubits ", 0) == 0) {
      c.num_qubits = std::stoi(line.substr(9));
    } else if (line.rfind("# tags ", 0) == 0) {
      c.num_tags = std::stoi(line.substr(7));
    } else if (line.rfind("# block ", 0) == 0) {
      auto toks = detail::split_ws(line.substr(8));
      Block b;
      b.name = toks[0];
      for (size_t i = 1; i < toks.size(); ++i) b.qubits.push_back(std::stoi(toks[i]));
      c.blocks.push_back(std::move(b));
    } else if (line.rfind("# node ", 0) == 0) {
      std::istringstream in(line.substr(7));
      std::string kind;
      in >> kind;
      ClassicalNode nd;
      std::string field;
      auto value_of = [](const std::string& f) { return f.substr(f.find('=') + 1); };
      if (kind == "decode") {
        nd.kind = ClassicalNode::Kind::decode_correct;
        in >> field; nd.fire_after = std::stoi(value_of(field));
        in >> field;
        std::string bname = value_of(field);
        std::string tail;
        std::getline(in, tail);  // " x=[...] z=[...] [x2=[...] z2=[...]]"
        size_t xp = tail.find("x=");
        size_t zp = tail.find(" z=");
        size_t x2p = tail.find(" x2=");
        size_t z2p = tail.find(" z2=");
        std::istringstream xin(tail.substr(xp + 2, zp - (xp + 2)));
        nd.x_parities = detail::parse_groups(xin);
        size_t z_end = (x2p == std::string::npos) ? tail.size() : x2p;
        std::istringstream zin(tail.substr(zp + 3, z_end - (zp + 3)));
        nd.z_parities = detail::parse_groups(zin);
        if (x2p != std::string::npos) {
          std::istringstream x2in(tail.substr(x2p + 4, z2p - (x2p + 4)));
          nd.x_parities_b = detail::parse_groups(x2in);
          std::istringstream z2in(tail.substr(z2p + 4));
          nd.z_parities_b = detail::parse_groups(z2in);
        }
        nd.block = -2;
        for (size_t i = 0; i < c.blocks.size(); ++i)
          if (c.blocks[i].name == bname) nd.block = static_cast<int>(i);
        if (nd.block < 0) throw std::invalid_argument("circuit parse: unknown block");
      } else if (kind == "verify") {
        nd.kind = ClassicalNode::Kind::verify_discard;
        in >> field; nd.fire_after = std::stoi(value_of(field));
        in >> field; nd.verify_tag = detail::parse_id(value_of(field), 'm');
        in >> field;  // clear=[...]
        std::string all = value_of(field);
        std::string tail;
        std::getline(in, tail);
        all += tail;
        std::string cleaned;
        for (char ch : all) cleaned += (ch == '[' || ch == ']') ? ' ' : ch;
        for (const auto& tok : detail::split_ws(cleaned))
          nd.clear_qubits.push_back(std::stoi(tok));
      } else if (kind == "knill") {
        nd.kind = ClassicalNode::Kind::knill_frame;
        in >> field; nd.fire_after = std::stoi(value_of(field));
        in >> field;
        std::string bname = value_of(field);
        nd.block = -2;
        for (size_t i = 0; i < c.blocks.size(); ++i)
          if (c.blocks[i].name == bname) nd.block = static_cast<int>(i);
        if (nd.block < 0) throw std::invalid_argument("circuit parse: unknown block");
        std::string tail;
        std::getline(in, tail);
        size_t xp = tail.find("xgrid=");
        size_t zp = tail.find("zgrid=");
        std::istringstream xin(tail.substr(xp + 6, zp - (xp + 6)));
        nd.x_grid = detail::parse_groups(xin)[0];
        std::istringstream zin(tail.substr(zp + 6));
        nd.z_grid = detail::parse_groups(zin)[0];
      } else {
        throw std::invalid_argument("circuit parse: unknown node kind " + kind);
      }
      c.nodes.push_back(std::move(nd));
    } else if (line.rfind("t=", 0) == 0) {
      size_t colon = line.find(':');
      int t = std::stoi(line.substr(2, colon - 2));
      while (c.num_timesteps() <= t) c.steps.emplace_back();
      std::string body = line.substr(colon + 1);
      std::istringstream ops(body);
      std::string piece;
      while (std::getline(ops, piece, ';')) {
        auto toks = detail::split_ws(piece);
        if (toks.empty()) continue;
        ElementaryOp op;
        const std::string& k = toks[0];
        if (k == "prep0") { op.kind = OpKind::prep_zero; op.q0 = detail::parse_id(toks[1], 'q'); }
        else if (k == "prep+") { op.kind = OpKind::prep_plus; op.q0 = detail::parse_id(toks[1], 'q'); }
        else if (k == "h") { op.kind = OpKind::hadamard; op.q0 = detail::parse_id(toks[1], 'q'); }
        else if (k == "idle") { op.kind = OpKind::idle; op.q0 = detail::parse_id(toks[1], 'q'); }
        else if (k == "cnot") {
          op.kind = OpKind::cnot;
          op.q0 = detail::parse_id(toks[1], 'q');
          op.q1 = detail::parse_id(toks[2], 'q');
        } else if (k == "mz" || k == "mx") {
          op.kind = (k == "mz") ? OpKind::meas_z : OpKind::meas_x;
          op.q0 = detail::parse_id(toks[1], 'q');
          op.tag = detail::parse_id(toks[2], 'm');
        } else {
          throw std::invalid_argument("circuit parse: unknown op " + k);
        }
        c.steps[t].push_back(op);
      }
    }
  }
  c.validate_structure();
  return c;
}

}  // namespace bsft
