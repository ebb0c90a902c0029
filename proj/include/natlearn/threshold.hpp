#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "natlearn/truth_table.hpp"

namespace natlearn {

// [w_1 x_1 + ... + w_n x_n >= theta] over x in {0,1}^n, output in {-1,+1}.
// Accumulation is checked; a sum that would leave int64 throws OverflowError.
class LinearThreshold {
 public:
  LinearThreshold(std::vector<std::int64_t> weights, std::int64_t threshold);

  static LinearThreshold always_fire(int n) { return {std::vector<std::int64_t>(n, 0), 0}; }
  static LinearThreshold never_fire(int n) { return {std::vector<std::int64_t>(n, 0), 1}; }

  int arity() const noexcept { return static_cast<int>(weights_.size()); }
  const std::vector<std::int64_t>& weights() const noexcept { return weights_; }
  std::int64_t threshold() const noexcept { return threshold_; }

  std::int64_t weighted_sum(Input x) const;
  bool fires(Input x) const { return weighted_sum(x) >= threshold_; }
  int eval(Input x) const { return fires(x) ? 1 : -1; }

  // Weights all in {0,1} with threshold 1, i.e. an OR of the selected inputs.
  bool is_or_gate() const noexcept;

  friend bool operator==(const LinearThreshold&, const LinearThreshold&) = default;

 private:
  std::vector<std::int64_t> weights_;
  std::int64_t threshold_;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_neg(std::int64_t a);

enum class CircuitKind {
  MajOfThr,   // +1 iff 2 * (#firing) >= fan-in
  AndOfThr,   // +1 iff every gate fires
  OrGateThr,  // AND over OR-form gates (0/1 weights, theta = 1)
};

// Depth-two circuit: a top MAJ or AND gate over threshold gates sharing one
// input arity. Empty gate lists evaluate to +1 for every kind.
class GateCircuit {
 public:
  GateCircuit(CircuitKind kind, std::vector<LinearThreshold> gates, int arity);

  CircuitKind kind() const noexcept { return kind_; }
  int arity() const noexcept { return arity_; }
  const std::vector<LinearThreshold>& gates() const noexcept { return gates_; }

  std::size_t firing_count(Input x) const;
  int eval(Input x) const;
  TruthTable truth_table() const;

 private:
  CircuitKind kind_;
  std::vector<LinearThreshold> gates_;
  int arity_;
};

using ThresholdList = std::vector<LinearThreshold>;

// Line 1 "m=<count> n=<arity>", then m lines "w_1 ... w_n ; theta".
ThresholdList read_threshold_list(std::istream& in);
ThresholdList read_threshold_list_file(const std::string& path);
void write_threshold_list(std::ostream& out, const ThresholdList& list);

}  // namespace natlearn
