#include "natlearn/games.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "natlearn/errors.hpp"
#include "natlearn/parallel.hpp"

namespace natlearn {

namespace {
constexpr std::int64_t kShards = 64;

std::uint64_t shard_count(std::uint64_t total, std::uint64_t shard) {
  const auto s = static_cast<std::uint64_t>(kShards);
  return total / s + (shard < total % s ? 1 : 0);
}
}  // namespace

void Channel::send(bool bit) {
  if (bits_.size() >= cost_)
    throw ProtocolCostViolation("protocol exceeded its declared cost of " + std::to_string(cost_) + " bits");
  bits_.push_back(bit);
}

WinEstimate game_win_prob(const GameSpec& game, const Protocol& protocol, std::uint64_t samples, Rng& rng) {
  if (samples == 0) throw std::invalid_argument("game_win_prob: need at least one sample");
  const std::uint64_t base = rng();
  std::vector<std::uint64_t> wins(kShards, 0);
  parallel_for(kShards, [&](std::int64_t k) {
    const auto uk = static_cast<std::uint64_t>(k);
    Rng local(splitmix64(base + uk));
    std::uint64_t w = 0;
    for (std::uint64_t i = shard_count(samples, uk); i > 0; --i) {
      const BitString rep = game.mu.sample(local);
      const Input x = game.rho.sample(local);
      Channel channel(protocol.cost);
      const int out = protocol.run(rep, x, channel, local);
      if (channel.used() > protocol.cost) throw ProtocolCostViolation("transcript longer than declared cost");
      w += out == (*game.rule)(rep, x) ? 1 : 0;
    }
    wins[uk] = w;
  });
  const std::uint64_t total = std::accumulate(wins.begin(), wins.end(), std::uint64_t{0});
  WinEstimate e;
  e.samples = samples;
  e.probability = static_cast<double>(total) / static_cast<double>(samples);
  e.stderr_ = std::sqrt(e.probability * (1.0 - e.probability) / static_cast<double>(samples));
  return e;
}

Protocol trivial_protocol(RulePtr rule) {
  const std::size_t s = rule->rep_bits;
  Protocol p;
  p.name = "send-representation";
  p.cost = s;
  p.run = [rule, s](const BitString& rep, Input x, Channel& ch, Rng&) {
    for (std::size_t i = 0; i < s; ++i) ch.send(rep.get(i));
    // Player two rebuilds the representation from the transcript alone.
    BitString received(s);
    for (std::size_t i = 0; i < s; ++i) received.set(i, ch.transcript()[i]);
    return (*rule)(received, x);
  };
  return p;
}

Protocol constant_protocol(int sign) {
  Protocol p;
  p.name = "constant";
  p.cost = 0;
  p.run = [sign](const BitString&, Input, Channel&, Rng&) { return sign >= 0 ? 1 : -1; };
  return p;
}

Rational advantage_bound(unsigned c, const Rational& gamma) {
  if (!(gamma > 0 && gamma <= Rational(1, 2))) throw std::domain_error("gamma must lie in (0, 1/2]");
  const Rational base = gamma / Rational(pow2(c));
  return base * base * base * base / 8;
}

// ------------------------------------------------------ correlation bound

int RectangleProtocol::run(std::uint64_t a, std::uint64_t b, Channel& channel) const {
  const std::uint32_t msg = message[a];
  for (int i = message_bits - 1; i >= 0; --i) channel.send((msg >> i) & 1U);
  const int out = output[msg][b];
  channel.send(out > 0);
  return out;
}

RectangleProtocol RectangleProtocol::random(const InputPartition& p, int message_bits, Rng& rng) {
  if (message_bits < 0 || message_bits > 16) throw ArityError("message bits must be in [0, 16]");
  RectangleProtocol h;
  h.message_bits = message_bits;
  const std::uint64_t messages = std::uint64_t{1} << message_bits;
  h.message.resize(p.rows());
  for (auto& m : h.message) m = static_cast<std::uint32_t>(rng() & (messages - 1));
  h.output.assign(messages, std::vector<int>(p.cols()));
  for (auto& row : h.output)
    for (auto& v : row) v = random_sign(rng);
  return h;
}

RectangleProtocol RectangleProtocol::constant(const InputPartition& p, int sign) {
  RectangleProtocol h;
  h.message_bits = 0;
  h.message.assign(p.rows(), 0);
  h.output.assign(1, std::vector<int>(p.cols(), sign >= 0 ? 1 : -1));
  return h;
}

std::int64_t protocol_correlation_sum(const TruthTable& t, const RectangleProtocol& h) {
  const SignMatrix f = SignMatrix::from_table(t);
  SignMatrix out(h.output.size(), f.cols());
  for (std::uint64_t m = 0; m < h.output.size(); ++m)
    for (std::uint64_t b = 0; b < f.cols(); ++b) out.set(m, b, h.output[m][b]);
  std::int64_t diff = 0;
  for (std::uint64_t a = 0; a < f.rows(); ++a) {
    const auto fr = f.row(a);
    const auto hr = out.row(h.message[a]);
    for (std::size_t k = 0; k < fr.size(); ++k) diff += popcount64(fr[k] ^ hr[k]);
  }
  return static_cast<std::int64_t>(t.size()) - 2 * diff;
}

bool correlation_within_bound(std::int64_t corr_sum, unsigned cost, const BigInt& raw_sum, int n) {
  const BigInt k = corr_sum;
  const BigInt k4 = k * k * k * k;
  return k4 <= pow2(4 * cost + 2 * static_cast<unsigned>(n)) * raw_sum;
}

FalsificationReport corrbound_falsify(const TruthTable& t, std::uint64_t trials, Rng& rng, int max_message_bits) {
  if (t.arity() > kMaxFalsifyArity) throw ArityError("correlation falsification limited to n <= 16");
  FalsificationReport rep;
  rep.trials = trials;
  rep.norm = r2_exact_gram(t);
  const InputPartition p(t.arity());
  const double r2_quarter = std::pow(to_double(rep.norm.r2), 0.25);
  const double domain = static_cast<double>(t.size());
  const std::uint64_t base = rng();

  std::vector<std::uint64_t> violations(static_cast<std::size_t>(trials), 0);
  std::vector<double> corr(static_cast<std::size_t>(trials), 0.0), ratio(static_cast<std::size_t>(trials), 0.0);
  parallel_for(static_cast<std::int64_t>(trials), [&](std::int64_t i) {
    Rng local(splitmix64(base + static_cast<std::uint64_t>(i)));
    const int bits = static_cast<int>(uniform_below(local, static_cast<std::uint64_t>(max_message_bits) + 1));
    const auto h = RectangleProtocol::random(p, bits, local);
    const std::int64_t k = protocol_correlation_sum(t, h);
    const auto ui = static_cast<std::size_t>(i);
    violations[ui] = correlation_within_bound(k, h.cost(), rep.norm.raw_sum, t.arity()) ? 0 : 1;
    corr[ui] = std::abs(static_cast<double>(k)) / domain;
    ratio[ui] = corr[ui] / (std::ldexp(1.0, static_cast<int>(h.cost())) * r2_quarter);
  });
  for (std::size_t i = 0; i < violations.size(); ++i) {
    rep.violations += violations[i];
    rep.max_abs_correlation = std::max(rep.max_abs_correlation, corr[i]);
    rep.max_bound_ratio = std::max(rep.max_bound_ratio, ratio[i]);
  }
  return rep;
}

// ------------------------------------------------------------------ XOR-MAJ

int xm_log2(int n) {
  if (n < 2 || (n & (n - 1)) != 0 || n > kMaxInputArity)
    throw ArityError("XOR-MAJ needs n a power of two in [2, 64], got " + std::to_string(n));
  return std::countr_zero(static_cast<unsigned>(n));
}

XorMajKey xm_gen(int n, Rng& rng) {
  const int l = xm_log2(n);
  if (2 * l > n) throw ArityError("XOR-MAJ needs 2 log2(n) <= n");
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int k = 0; k < 2 * l; ++k) {
    const auto j = static_cast<std::size_t>(k) + uniform_below(rng, static_cast<std::uint64_t>(n - k));
    std::swap(idx[static_cast<std::size_t>(k)], idx[j]);
  }
  XorMajKey key;
  key.a.assign(idx.begin(), idx.begin() + l);
  key.b.assign(idx.begin() + l, idx.begin() + 2 * l);
  std::sort(key.a.begin(), key.a.end());
  std::sort(key.b.begin(), key.b.end());
  return key;
}

int xm_eval(const XorMajKey& key, int n, Input x) {
  unsigned parity = 0;
  for (int i : key.a) parity ^= input_bit(x, n, i) ? 1U : 0U;
  std::size_t ones = 0;
  for (int i : key.b) ones += input_bit(x, n, i) ? 1 : 0;
  const unsigned maj = 2 * ones >= key.b.size() ? 1U : 0U;
  return (parity ^ maj) == 0 ? 1 : -1;
}

BitString xm_encode(const XorMajKey& key, int n) {
  const int l = xm_log2(n);
  if (key.a.size() != static_cast<std::size_t>(l) || key.b.size() != static_cast<std::size_t>(l))
    throw ArityError("XOR-MAJ key sets must have log2(n) elements");
  BitString rep(static_cast<std::size_t>(2 * l * l));
  std::size_t pos = 0;
  for (const auto* set : {&key.a, &key.b})
    for (int e : *set)
      for (int j = l - 1; j >= 0; --j) rep.set(pos++, (e >> j) & 1);
  return rep;
}

XorMajKey xm_decode(const BitString& rep, int n) {
  const int l = xm_log2(n);
  if (rep.size() != static_cast<std::size_t>(2 * l * l)) throw ArityError("XOR-MAJ key must have 2 log2(n)^2 bits");
  XorMajKey key;
  std::size_t pos = 0;
  for (auto* set : {&key.a, &key.b})
    for (int k = 0; k < l; ++k) {
      int e = 0;
      for (int j = 0; j < l; ++j) e = (e << 1) | (rep.get(pos++) ? 1 : 0);
      set->push_back(e);
    }
  return key;
}

std::vector<XorMajKey> xm_all_keys(int n) {
  const int l = xm_log2(n);
  if (2 * l > n) throw ArityError("XOR-MAJ needs 2 log2(n) <= n");
  std::vector<XorMajKey> keys;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t am = 0; am < limit; ++am) {
    if (std::popcount(am) != l) continue;
    for (std::uint64_t bm = 0; bm < limit; ++bm) {
      if (std::popcount(bm) != l || (am & bm) != 0) continue;
      XorMajKey k;
      for (int i = 0; i < n; ++i) {
        if ((am >> i) & 1U) k.a.push_back(i);
        if ((bm >> i) & 1U) k.b.push_back(i);
      }
      keys.push_back(std::move(k));
    }
  }
  return keys;
}

std::uint64_t xm_key_count(int n) {
  const int l = xm_log2(n);
  auto choose = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  return choose(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(l)) *
         choose(static_cast<std::uint64_t>(n - l), static_cast<std::uint64_t>(l));
}

RulePtr xm_rule(int n) {
  const int l = xm_log2(n);
  auto rule = std::make_shared<EvaluationRule>();
  rule->name = "xor-maj";
  rule->n = n;
  rule->rep_bits = static_cast<std::size_t>(2 * l * l);
  rule->evaluate = [n](const BitString& rep, Input x) { return xm_eval(xm_decode(rep, n), n, x); };
  return rule;
}

TargetDistribution xm_key_distribution(int n) {
  const int l = xm_log2(n);
  TargetDistribution::Enumerator en;
  if (n <= 16)
    en = [n] {
      std::vector<Weighted<BitString>> pts;
      for (const auto& k : xm_all_keys(n)) pts.push_back({xm_encode(k, n), Rational(1)});
      return pts;
    };
  return TargetDistribution(
      static_cast<std::size_t>(2 * l * l), [n](Rng& rng) { return xm_encode(xm_gen(n, rng), n); }, "xmgen",
      std::move(en));
}

// ------------------------------------------------------------- weak PRFs

ExampleDistribution WprfTriple::example_distribution() const {
  if (!enc) return ExampleDistribution::uniform(f->n);
  return ExampleDistribution::pushforward(encoding_bits, f->n, enc);
}

WprfTriple xor_maj_triple(int n) {
  return WprfTriple{"xor-maj", xm_rule(n), xm_key_distribution(n), 0, {}};
}

DistinguisherResult wprf_distinguish(const WprfTriple& triple, std::uint64_t samples, Rng& rng, LabelMode mode,
                                     double tau) {
  if (samples == 0) throw std::invalid_argument("wprf_distinguish: need at least one sample");
  const ExampleDistribution rho = triple.example_distribution();
  const EvaluationRule& f = *triple.f;
  const std::uint64_t base = rng();
  std::vector<std::int64_t> sums(kShards, 0);
  parallel_for(kShards, [&](std::int64_t k) {
    const auto uk = static_cast<std::uint64_t>(k);
    Rng local(splitmix64(base + uk));
    std::int64_t s = 0;
    for (std::uint64_t i = shard_count(samples, uk); i > 0; --i) {
      const Input z = rho.sample(local), w = rho.sample(local);
      int fz, fw;
      if (mode == LabelMode::Keyed) {
        const BitString key = triple.gen.sample(local);
        fz = f(key, z);
        fw = f(key, w);
      } else {
        fz = random_sign(local);
        fw = random_sign(local);
      }
      const BitString g = triple.gen.sample(local);
      s += fz * fw * f(g, z) * f(g, w);
    }
    sums[uk] = s;
  });
  const std::int64_t total = std::accumulate(sums.begin(), sums.end(), std::int64_t{0});
  DistinguisherResult r;
  r.samples = samples;
  r.mean = static_cast<double>(total) / static_cast<double>(samples);
  r.stderr_ = 1.0 / std::sqrt(static_cast<double>(samples));
  r.z = r.mean / r.stderr_;
  r.structured = r.z > tau;
  return r;
}

std::uint64_t distinguisher_samples(double r2, double tau, double margin) {
  if (!(r2 > 0.0)) throw std::invalid_argument("distinguisher_samples: norm must be positive");
  const double root = (tau + margin) / r2;
  return static_cast<std::uint64_t>(std::ceil(root * root));
}

}  // namespace natlearn
