#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "natlearn/concepts.hpp"
#include "natlearn/norm.hpp"
#include "natlearn/oracle.hpp"

namespace natlearn {

// Bits sent between the two players. Sending past the declared cost throws
// ProtocolCostViolation.
class Channel {
 public:
  explicit Channel(std::size_t cost) : cost_(cost) {}
  void send(bool bit);
  std::size_t used() const noexcept { return bits_.size(); }
  std::size_t cost() const noexcept { return cost_; }
  const std::vector<bool>& transcript() const noexcept { return bits_; }

 private:
  std::size_t cost_;
  std::vector<bool> bits_;
};

// Player one holds a representation, player two an input. run returns the
// announced output.
struct Protocol {
  std::string name;
  std::size_t cost = 0;
  std::function<int(const BitString&, Input, Channel&, Rng&)> run;
};

struct GameSpec {
  RulePtr rule;
  TargetDistribution mu;
  ExampleDistribution rho;
};

struct WinEstimate {
  double probability = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

// Pr[protocol output = eval(pi_f, x)] over pi_f ~ mu, x ~ rho and shared coins.
WinEstimate game_win_prob(const GameSpec& game, const Protocol& protocol, std::uint64_t samples, Rng& rng);

// Player one sends its whole representation; player two evaluates.
// Cost = rep_bits; always correct.
Protocol trivial_protocol(RulePtr rule);
Protocol constant_protocol(int sign);

// (gamma * 2^{-c})^4 / 8: guaranteed advantage of the weak predictor for a
// (c, gamma)-evaluated game. Requires 0 < gamma <= 1/2.
Rational advantage_bound(unsigned c, const Rational& gamma);

// ------------------------------------------------------ correlation bound

// Player one maps its half a to one of 2^{message_bits} messages; player two
// outputs out[message][b]. Total cost message_bits + 1.
struct RectangleProtocol {
  int message_bits = 0;
  std::vector<std::uint32_t> message;        // indexed by row a
  std::vector<std::vector<int>> output;      // [message][col b] -> +-1

  unsigned cost() const noexcept { return static_cast<unsigned>(message_bits) + 1; }
  int run(std::uint64_t a, std::uint64_t b, Channel& channel) const;

  static RectangleProtocol random(const InputPartition& p, int message_bits, Rng& rng);
  static RectangleProtocol constant(const InputPartition& p, int sign);
};

// sum_x f(x) h(x) over all 2^n inputs, via packed rows.
std::int64_t protocol_correlation_sum(const TruthTable& t, const RectangleProtocol& h);

// |corr| <= 2^c * R2^{1/4} decided exactly as K^4 <= 2^{4c + 2n} * S with
// K the correlation sum and S the raw norm sum.
bool correlation_within_bound(std::int64_t corr_sum, unsigned cost, const BigInt& raw_sum, int n);

struct FalsificationReport {
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  double max_abs_correlation = 0.0;
  double max_bound_ratio = 0.0;  // max |corr| / (2^c R2^{1/4})
  NormResult norm;
};

inline constexpr int kMaxFalsifyArity = 16;

// Samples rectangle protocols with message_bits uniform in [0, max_message_bits]
// and counts violations of the correlation bound.
FalsificationReport corrbound_falsify(const TruthTable& t, std::uint64_t trials, Rng& rng,
                                      int max_message_bits = 3);

// ------------------------------------------------------------------ XOR-MAJ

// Key (A, B): disjoint index sets of size log2(n), stored sorted.
struct XorMajKey {
  std::vector<int> a;
  std::vector<int> b;
  friend bool operator==(const XorMajKey&, const XorMajKey&) = default;
};

// log2(n); throws ArityError unless n is a power of two >= 2.
int xm_log2(int n);
XorMajKey xm_gen(int n, Rng& rng);
// XOR(parity of x|A, MAJ(x|B)) with MAJ ties to 1, mapped 0 -> +1, 1 -> -1.
int xm_eval(const XorMajKey& key, int n, Input x);

// Key encoding: sorted A then sorted B, each index in log2(n) bits, most
// significant first. 2 log2(n)^2 bits.
BitString xm_encode(const XorMajKey& key, int n);
XorMajKey xm_decode(const BitString& rep, int n);
std::vector<XorMajKey> xm_all_keys(int n);
std::uint64_t xm_key_count(int n);

RulePtr xm_rule(int n);
// Uniform over all keys (enumerable).
TargetDistribution xm_key_distribution(int n);

// ------------------------------------------------------------- weak PRFs

// (f, gen, enc): keyed rule, key distribution, optional keyless encoding of
// m-bit strings into n-bit inputs (identity when absent).
struct WprfTriple {
  std::string name;
  RulePtr f;
  TargetDistribution gen;
  int encoding_bits = 0;
  std::function<Input(std::uint64_t)> enc;

  // rho = enc(U_m), or U_n without an encoding.
  ExampleDistribution example_distribution() const;
};

WprfTriple xor_maj_triple(int n);

enum class LabelMode {
  Keyed,   // labels from f(k, .) with a fresh key k ~ gen per quadruple
  Random,  // uniformly random labels
};

struct DistinguisherResult {
  double mean = 0.0;
  double stderr_ = 0.0;
  double z = 0.0;
  std::uint64_t samples = 0;
  bool structured = false;
};

// Averages f(z) f(w) g(z) g(w) over N quadruples, where (z, f(z)), (w, f(w))
// come from the oracle side (labels per mode) and g ~ gen is sampled and
// evaluated locally. structured iff mean > tau / sqrt(N).
DistinguisherResult wprf_distinguish(const WprfTriple& triple, std::uint64_t samples, Rng& rng,
                                     LabelMode mode = LabelMode::Keyed, double tau = 3.0);

// Sample size at which a structured triple with norm r2 clears tau standard
// errors with room to spare: ceil(((tau + margin) / r2)^2).
std::uint64_t distinguisher_samples(double r2, double tau = 3.0, double margin = 2.0);

}  // namespace natlearn
