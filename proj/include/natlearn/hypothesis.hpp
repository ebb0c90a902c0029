#pragma once

#include "json.hpp"
#include <vector>

#include "natlearn/concepts.hpp"

namespace natlearn {

// Deterministic predictor produced by the learner. One of
//   constant          x -> sign
//   oriented-concept  x -> sign * eval(rep, x)
//   weighted-majority x -> +1 iff sum_j weight_j * child_j(x) >= 0
class Hypothesis {
 public:
  enum class Kind { Constant, OrientedConcept, WeightedMajority };

  static Hypothesis constant(int sign);
  static Hypothesis oriented(RulePtr rule, BitString rep, int sign);
  static Hypothesis weighted_majority(std::vector<Hypothesis> children, std::vector<double> weights);

  Kind kind() const noexcept { return kind_; }
  int sign() const noexcept { return sign_; }
  const BitString& representation() const noexcept { return rep_; }
  const std::vector<Hypothesis>& children() const noexcept { return children_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  int predict(Input x) const;
  int operator()(Input x) const { return predict(x); }

  // {kind, sign?, representation_hex?, representation_bits?, children?}.
  nlohmann::json to_json() const;
  // rule is re-attached to oriented-concept nodes.
  static Hypothesis from_json(const nlohmann::json& j, RulePtr rule);

  friend bool operator==(const Hypothesis& a, const Hypothesis& b);

 private:
  Kind kind_ = Kind::Constant;
  int sign_ = 1;
  RulePtr rule_;
  BitString rep_;
  std::vector<Hypothesis> children_;
  std::vector<double> weights_;
};

const char* kind_name(Hypothesis::Kind k);

}  // namespace natlearn
