#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "natlearn/bits.hpp"
#include "natlearn/distributions.hpp"
#include "natlearn/threshold.hpp"

namespace natlearn {

// A fixed map (representation, input) -> {-1,+1}. Each representation of
// length rep_bits names one concept over n-bit inputs.
struct EvaluationRule {
  std::string name;
  int n = 0;
  std::size_t rep_bits = 0;
  std::function<int(const BitString&, Input)> evaluate;

  int operator()(const BitString& rep, Input x) const { return evaluate(rep, x); }
};

using RulePtr = std::shared_ptr<const EvaluationRule>;

// Weight on the extra input z_i that switches gate i off whenever z_i = 1:
// the usual -(sum w + theta + 1) when that value already forces the gate
// off, otherwise the smaller theta - (sum of positive weights) - 1.
std::int64_t forcing_weight(const LinearThreshold& t);

// T'_i over (x || z_i): the original weights, then forcing_weight(t).
LinearThreshold with_switch_input(const LinearThreshold& t);

// Representation z || y (2m bits). Output is MAJ(T'_1(x,z_1), ..., T'_m(x,z_m),
// y_1, ..., y_m) with ties going to +1.
RulePtr majthr_rule(const ThresholdList& list);

// Representation v || z || y (3m bits). Output is MAJ over the m switched
// gates and the 2m literals y, v with ties to +1. Under sample_mu_and_L this is
// the AND of the gates with z_i = 0.
RulePtr polytope_rule(const ThresholdList& list);

// polytope_rule restricted to OR-form gates (0/1 weights, theta = 1); a
// conjunction of disjunctions. Throws InvalidCircuit otherwise.
RulePtr cnf_rule(const ThresholdList& list);

// The majthr rule as one MAJ-of-THR circuit on the concatenated input
// (x || z || y) of arity n + 2m.
GateCircuit majthr_rule_circuit(const ThresholdList& list);

// Reference semantics: active set is {i : z_i = 0}; +1 iff 2 * (#active
// gates firing) >= #active. Empty active set gives +1.
int direct_concept_eval(const ThresholdList& list, const BitString& z, Input x);
// +1 iff every active gate fires (empty active set gives +1).
int direct_conjunction_eval(const ThresholdList& list, const BitString& z, Input x);

// z ~ theta, then y uniform among m-bit strings with |y| = floor((m + |z|) / 2).
BitString sample_mu_L(const ThresholdList& list, const TargetDistribution& theta, Rng& rng);

// z ~ theta, then (y, v) uniform among 2m-bit strings with
// |y| + |v| = ceil(3m/2) - (m - |z|). Returns v || z || y.
BitString sample_mu_and_L(const ThresholdList& list, const TargetDistribution& theta, Rng& rng);

// Target distributions over representations of the rules above. Enumerable
// whenever theta is.
TargetDistribution mu_L(const ThresholdList& list, const TargetDistribution& theta);
TargetDistribution mu_and_L(const ThresholdList& list, const TargetDistribution& theta);

// Bits of the representation read back by the rules.
struct MajThrRep {
  BitString z, y;
};
struct PolytopeRep {
  BitString v, z, y;
};
MajThrRep split_majthr_rep(const BitString& rep, std::size_t m);
PolytopeRep split_polytope_rep(const BitString& rep, std::size_t m);

// A concept with its rule; handy when a plain input -> +-1 function is needed.
struct BoundConcept {
  RulePtr rule;
  BitString rep;
  int operator()(Input x) const { return rule->evaluate(rep, x); }
};

}  // namespace natlearn
