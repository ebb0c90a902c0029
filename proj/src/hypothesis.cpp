#include "natlearn/hypothesis.hpp"

#include <stdexcept>

namespace natlearn {

const char* kind_name(Hypothesis::Kind k) {
  switch (k) {
    case Hypothesis::Kind::Constant:
      return "constant";
    case Hypothesis::Kind::OrientedConcept:
      return "oriented-concept";
    case Hypothesis::Kind::WeightedMajority:
      return "weighted-majority";
  }
  return "?";
}

Hypothesis Hypothesis::constant(int sign) {
  Hypothesis h;
  h.kind_ = Kind::Constant;
  h.sign_ = sign >= 0 ? 1 : -1;
  return h;
}

Hypothesis Hypothesis::oriented(RulePtr rule, BitString rep, int sign) {
  if (!rule) throw std::invalid_argument("oriented hypothesis needs an evaluation rule");
  if (rep.size() != rule->rep_bits) throw std::invalid_argument("representation length does not match rule");
  Hypothesis h;
  h.kind_ = Kind::OrientedConcept;
  h.sign_ = sign >= 0 ? 1 : -1;
  h.rule_ = std::move(rule);
  h.rep_ = std::move(rep);
  return h;
}

Hypothesis Hypothesis::weighted_majority(std::vector<Hypothesis> children, std::vector<double> weights) {
  if (children.size() != weights.size()) throw std::invalid_argument("one weight per child");
  if (children.empty()) throw std::invalid_argument("weighted majority needs at least one child");
  Hypothesis h;
  h.kind_ = Kind::WeightedMajority;
  h.children_ = std::move(children);
  h.weights_ = std::move(weights);
  return h;
}

int Hypothesis::predict(Input x) const {
  switch (kind_) {
    case Kind::Constant:
      return sign_;
    case Kind::OrientedConcept:
      return sign_ * rule_->evaluate(rep_, x);
    case Kind::WeightedMajority: {
      double s = 0.0;
      for (std::size_t j = 0; j < children_.size(); ++j) s += weights_[j] * children_[j].predict(x);
      return s >= 0.0 ? 1 : -1;
    }
  }
  return 1;
}

nlohmann::json Hypothesis::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_name(kind_);
  switch (kind_) {
    case Kind::Constant:
      j["sign"] = sign_;
      break;
    case Kind::OrientedConcept:
      j["sign"] = sign_;
      j["representation_hex"] = rep_.to_hex();
      j["representation_bits"] = rep_.size();
      break;
    case Kind::WeightedMajority: {
      auto arr = nlohmann::json::array();
      for (std::size_t i = 0; i < children_.size(); ++i)
        arr.push_back({{"weight", weights_[i]}, {"hypothesis", children_[i].to_json()}});
      j["children"] = std::move(arr);
      break;
    }
  }
  return j;
}

Hypothesis Hypothesis::from_json(const nlohmann::json& j, RulePtr rule) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") return constant(j.at("sign").get<int>());
  if (kind == "oriented-concept") {
    const auto bits = j.at("representation_bits").get<std::size_t>();
    return oriented(std::move(rule), BitString::from_hex(j.at("representation_hex").get<std::string>(), bits),
                    j.at("sign").get<int>());
  }
  if (kind == "weighted-majority") {
    std::vector<Hypothesis> children;
    std::vector<double> weights;
    for (const auto& c : j.at("children")) {
      weights.push_back(c.at("weight").get<double>());
      children.push_back(from_json(c.at("hypothesis"), rule));
    }
    return weighted_majority(std::move(children), std::move(weights));
  }
  throw std::invalid_argument("unknown hypothesis kind \"" + kind + "\"");
}

bool operator==(const Hypothesis& a, const Hypothesis& b) {
  return a.kind_ == b.kind_ && a.sign_ == b.sign_ && a.rep_ == b.rep_ && a.children_ == b.children_ &&
         a.weights_ == b.weights_;
}

}  // namespace natlearn
