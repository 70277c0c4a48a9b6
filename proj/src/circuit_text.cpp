#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

#include "xyf/circuit.hpp"

namespace xyf {

namespace {

const char* op_name(OpKind k) {
  switch (k) {
    case OpKind::CX: return "CX";
    case OpKind::MXX: return "MXX";
    case OpKind::MZZ: return "MZZ";
    case OpKind::MZ: return "MZ";
    case OpKind::MX: return "MX";
    case OpKind::PrepPlus: return "PREP+";
    case OpKind::PrepZero: return "PREP0";
  }
  return "?";
}

std::string qubit_str(const SpatialLayout& layout, QubitId q) {
  return layout.canon(q).str();
}

struct Parser {
  const std::string& text;
  size_t pos = 0;
  int line = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("parse error at line " + std::to_string(line) + ": " + msg);
  }

  bool next_line(std::string& out) {
    if (pos >= text.size()) return false;
    size_t e = text.find('\n', pos);
    if (e == std::string::npos) e = text.size();
    out = text.substr(pos, e - pos);
    pos = (e == text.size()) ? e : e + 1;
    return true;
  }

  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
  }

  int to_int(const std::string& s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail("bad integer '" + s + "'");
    return v;
  }

  QubitId qubit(const std::string& s) {
    if (s.size() < 6 || (s[0] != 'g' && s[0] != 'p') || s[1] != '(' || s.back() != ')')
      fail("bad qubit '" + s + "'");
    size_t comma = s.find(',');
    if (comma == std::string::npos) fail("bad qubit '" + s + "'");
    QubitId q{to_int(s.substr(2, comma - 2)), to_int(s.substr(comma + 1, s.size() - comma - 2))};
    if ((s[0] == 'g') != q.green()) fail("species tag mismatch in '" + s + "'");
    return q;
  }
};

}  // namespace

std::string emit_text(const Circuit& c) {
  std::ostringstream os;
  os << "XYFLOQUET v1\n";
  os << "QUBITS " << c.layout.size() << "\n";
  for (const Layer& layer : c.layers) {
    os << "LAYER " << layer.index << " phase=" << layer.phase << "\n";
    for (const CircuitOp& op : layer.ops) {
      os << op_name(op.kind);
      if (is_measurement(op.kind)) os << " " << op.label;
      os << " " << qubit_str(c.layout, op.a);
      if (is_two_qubit(op.kind)) os << " " << qubit_str(c.layout, op.b);
      os << "\n";
    }
  }
  return os.str();
}

Circuit parse_text(const std::string& text) {
  Parser p{text};
  p.line = 0;
  std::string line;
  auto read = [&](std::string& out) {
    bool ok = p.next_line(out);
    if (ok) ++p.line;
    return ok;
  };
  if (!read(line) || line != "XYFLOQUET v1") p.fail("expected header 'XYFLOQUET v1'");
  if (!read(line)) p.fail("expected QUBITS line");
  auto toks = Parser::split(line);
  if (toks.size() != 2 || toks[0] != "QUBITS") p.fail("expected 'QUBITS n'");
  size_t declared_qubits = (size_t)p.to_int(toks[1]);

  Circuit c;
  c.geom.kind = GeometryKind::Rectangle;  // parsed circuits carry no wrap
  std::set<QubitId> seen;
  int max_label = -1;
  while (read(line)) {
    if (line.empty()) continue;
    toks = Parser::split(line);
    if (toks[0] == "LAYER") {
      if (toks.size() != 3 || toks[2].rfind("phase=", 0) != 0) p.fail("bad LAYER line");
      Layer layer;
      layer.index = p.to_int(toks[1]);
      layer.phase = p.to_int(toks[2].substr(6));
      c.layers.push_back(std::move(layer));
      continue;
    }
    if (c.layers.empty()) p.fail("op before first LAYER");
    CircuitOp op;
    size_t qfirst = 1;
    if (toks[0] == "CX") op.kind = OpKind::CX;
    else if (toks[0] == "MXX") op.kind = OpKind::MXX;
    else if (toks[0] == "MZZ") op.kind = OpKind::MZZ;
    else if (toks[0] == "MZ") op.kind = OpKind::MZ;
    else if (toks[0] == "MX") op.kind = OpKind::MX;
    else if (toks[0] == "PREP+") op.kind = OpKind::PrepPlus;
    else if (toks[0] == "PREP0") op.kind = OpKind::PrepZero;
    else p.fail("unknown op '" + toks[0] + "'");
    if (is_measurement(op.kind)) {
      if (toks.size() < 2) p.fail("missing measurement id");
      op.label = p.to_int(toks[1]);
      max_label = std::max(max_label, op.label);
      qfirst = 2;
    }
    size_t want = qfirst + (is_two_qubit(op.kind) ? 2 : 1);
    if (toks.size() != want) p.fail("wrong arity for " + toks[0]);
    op.a = p.qubit(toks[qfirst]);
    seen.insert(op.a);
    if (is_two_qubit(op.kind)) {
      op.b = p.qubit(toks[qfirst + 1]);
      seen.insert(op.b);
    }
    c.layers.back().ops.push_back(op);
  }
  c.layout.spec = c.geom;
  c.layout.qubits.assign(seen.begin(), seen.end());
  std::sort(c.layout.qubits.begin(), c.layout.qubits.end(),
            [](const QubitId& a, const QubitId& b) {
              return std::pair(a.v2, a.z2) < std::pair(b.v2, b.z2);
            });
  if (declared_qubits != c.layout.qubits.size())
    throw std::runtime_error("QUBITS count does not match ops (" +
                             std::to_string(declared_qubits) + " vs " +
                             std::to_string(c.layout.qubits.size()) + ")");
  c.num_labels = max_label + 1;
  return c;
}

}  // namespace xyf
