#include "natlearn/threshold.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "natlearn/errors.hpp"

namespace natlearn {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 overflow in threshold arithmetic");
  return r;
}

std::int64_t checked_neg(std::int64_t a) {
  std::int64_t r;
  if (__builtin_sub_overflow(std::int64_t{0}, a, &r))
    throw OverflowError("int64 overflow in threshold arithmetic");
  return r;
}

LinearThreshold::LinearThreshold(std::vector<std::int64_t> weights, std::int64_t threshold)
    : weights_(std::move(weights)), threshold_(threshold) {
  if (weights_.empty() || weights_.size() > static_cast<std::size_t>(kMaxInputArity))
    throw ArityError("threshold gate arity must be in [1, 64]");
}

std::int64_t LinearThreshold::weighted_sum(Input x) const {
  const int n = arity();
  std::int64_t sum = 0;
  for (int i = 0; i < n; ++i)
    if (input_bit(x, n, i)) sum = checked_add(sum, weights_[i]);
  return sum;
}

bool LinearThreshold::is_or_gate() const noexcept {
  if (threshold_ != 1) return false;
  for (auto w : weights_)
    if (w != 0 && w != 1) return false;
  return true;
}

GateCircuit::GateCircuit(CircuitKind kind, std::vector<LinearThreshold> gates, int arity)
    : kind_(kind), gates_(std::move(gates)), arity_(arity) {
  if (arity < 1 || arity > kMaxInputArity) throw ArityError("circuit arity must be in [1, 64]");
  for (const auto& g : gates_) {
    if (g.arity() != arity_) throw ArityError("all gates must share the circuit arity");
    if (kind_ == CircuitKind::OrGateThr && !g.is_or_gate())
      throw InvalidCircuit("OR-gate circuits need 0/1 weights and threshold 1");
  }
}

std::size_t GateCircuit::firing_count(Input x) const {
  std::size_t k = 0;
  for (const auto& g : gates_) k += g.fires(x) ? 1 : 0;
  return k;
}

int GateCircuit::eval(Input x) const {
  switch (kind_) {
    case CircuitKind::MajOfThr:
      return 2 * firing_count(x) >= gates_.size() ? 1 : -1;
    case CircuitKind::AndOfThr:
    case CircuitKind::OrGateThr:
      for (const auto& g : gates_)
        if (!g.fires(x)) return -1;
      return 1;
  }
  return 1;
}

TruthTable GateCircuit::truth_table() const {
  if (arity_ > kMaxTableArity) throw ArityError("circuit too wide to tabulate");
  return TruthTable::from_function(arity_, [this](Input x) { return eval(x); });
}

ThresholdList read_threshold_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing header \"m=<count> n=<arity>\"");
  long long m = -1, n = -1;
  if (std::sscanf(line.c_str(), " m=%lld n=%lld", &m, &n) != 2)
    throw ParseError(1, "header must be \"m=<count> n=<arity>\"");
  if (m < 1) throw ParseError(1, "m must be at least 1");
  if (n < 1 || n > kMaxInputArity) throw ParseError(1, "n must be in [1, 64]");
  ThresholdList out;
  out.reserve(static_cast<std::size_t>(m));
  for (long long g = 0; g < m; ++g) {
    ++lineno;
    if (!std::getline(in, line)) throw ParseError(lineno, "expected " + std::to_string(m) + " gate lines");
    const auto semi = line.find(';');
    if (semi == std::string::npos) throw ParseError(lineno, "missing ';' before theta");
    std::istringstream ws(line.substr(0, semi)), ts(line.substr(semi + 1));
    std::vector<std::int64_t> w;
    long long v;
    while (ws >> v) w.push_back(v);
    if (!ws.eof()) throw ParseError(lineno, "weights must be decimal integers");
    if (static_cast<long long>(w.size()) != n)
      throw ParseError(lineno, "expected " + std::to_string(n) + " weights, got " + std::to_string(w.size()));
    long long theta;
    if (!(ts >> theta)) throw ParseError(lineno, "theta must be a decimal integer");
    std::string rest;
    if (ts >> rest) throw ParseError(lineno, "trailing text after theta");
    out.emplace_back(std::move(w), theta);
  }
  return out;
}

ThresholdList read_threshold_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return read_threshold_list(in);
}

void write_threshold_list(std::ostream& out, const ThresholdList& list) {
  if (list.empty()) throw ArityError("threshold list must be non-empty");
  out << "m=" << list.size() << " n=" << list.front().arity() << '\n';
  for (const auto& t : list) {
    for (std::size_t i = 0; i < t.weights().size(); ++i) out << (i ? " " : "") << t.weights()[i];
    out << " ; " << t.threshold() << '\n';
  }
}

}  // namespace natlearn
