// Copyright 2026 The Flowcore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flowcore/empirical.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <boost/math/distributions/normal.hpp>

#include "flowcore/error.h"
#include "flowcore/game_lp.h"
#include "flowcore/parallel.h"
#include "flowcore/verify.h"

namespace flowcore {
namespace {

std::vector<Capacity> Uniform(int n, const Rational& c) {
  return std::vector<Capacity>(n, Capacity(c));
}

void CheckPlayers(int n) {
  if (n < 2) throw Error(ErrorKind::kStructural, "a game model needs n >= 2");
}

std::int64_t IntegerPart(const Rational& x) {
  const mpz_class q = x.get_num() / x.get_den();
  if (!q.fits_slong_p()) {
    throw Error(ErrorKind::kStructural, "model parameter is too large");
  }
  return q.get_si();
}

void Accumulate(Stats& stats, const Rational& x, bool first) {
  if (first) {
    stats.min = x;
    stats.max = x;
    stats.mean = x;
    return;
  }
  stats.min = std::min(stats.min, x);
  stats.max = std::max(stats.max, x);
  stats.mean += x;
}

struct Sample {
  IncorporationOrder order;
  PayoffVector payoff;
};

EcoreReport Reduce(const GameInstance& instance, std::vector<Sample> samples,
                   const EcoreOptions& options) {
  if (samples.empty()) {
    throw Error(ErrorKind::kStructural, "the empirical core needs samples");
  }
  EcoreReport report;
  report.samples = static_cast<std::int64_t>(samples.size());
  report.eligible = instance.DemandIncidentNodes();
  std::map<std::vector<Rational>, size_t> index;
  for (size_t s = 0; s < samples.size(); ++s) {
    PayoffVector& payoff = samples[s].payoff;
    const Rational sw = SocialWelfare(payoff);
    const Rational fair = Fairness(payoff, report.eligible);
    Accumulate(report.sw, sw, s == 0);
    Accumulate(report.fairness, fair, s == 0);
    std::vector<Rational> key(payoff.begin(), payoff.end());
    auto [it, inserted] = index.emplace(std::move(key), report.records.size());
    if (inserted) {
      EcoreRecord record;
      record.payoff = std::move(payoff);
      record.first_sample = static_cast<std::int64_t>(s);
      record.first_order = std::move(samples[s].order);
      record.social_welfare = sw;
      record.fairness = fair;
      report.records.push_back(std::move(record));
    }
    ++report.records[it->second].multiplicity;
  }
  report.sw.mean /= report.samples;
  report.fairness.mean /= report.samples;
  report.lp_sw = SocialWelfareLp(instance).social_welfare;
  report.lp_fairness =
      report.eligible.empty() ? Rational(0) : FairnessLp(instance).tau;
  if (options.audit) {
    VerifyOptions verify;
    verify.threads = options.threads;
    for (EcoreRecord& record : report.records) {
      record.in_core = VerifyCore(instance, record.payoff, verify).in_core;
      if (!*record.in_core) ++report.audit_failures;
    }
  }
  return report;
}

int Threads(int threads) { return threads > 0 ? threads : DefaultThreads(); }

}  // namespace

std::string ToString(GameModel model) {
  switch (model) {
    case GameModel::kConstant:
      return "constant";
    case GameModel::kGaussianMarginal:
      return "gaussian";
    case GameModel::kRandomGraph:
      return "random-graph";
  }
  return "unknown";
}

GameModel ParseGameModel(const std::string& name) {
  if (name == "constant") return GameModel::kConstant;
  if (name == "gaussian") return GameModel::kGaussianMarginal;
  if (name == "random-graph") return GameModel::kRandomGraph;
  throw Error(ErrorKind::kStructural, "unknown game model: " + name);
}

GameInstance GenConstant(int n, const Rational& c, const Rational& d) {
  CheckPlayers(n);
  std::vector<Commodity> commodities;
  for (NodeId u = 1; u <= n; ++u) {
    for (NodeId v = u + 1; v <= n; ++v) commodities.push_back({u, v, d});
  }
  return GameInstance::MakePath(Uniform(n, c), std::move(commodities));
}

TruncatedNormal::TruncatedNormal(double mu, double sigma, double lower,
                                 double upper)
    : mu_(mu), sigma_(sigma), lower_(lower), upper_(upper) {
  if (!(sigma > 0) || !(lower < upper)) {
    throw Error(ErrorKind::kStructural, "bad truncated normal parameters");
  }
  const boost::math::normal standard;
  cdf_lower_ = boost::math::cdf(standard, (lower - mu) / sigma);
  cdf_upper_ = boost::math::cdf(standard, (upper - mu) / sigma);
}

double TruncatedNormal::Cdf(double x) const {
  if (x <= lower_) return 0;
  if (x >= upper_) return 1;
  const boost::math::normal standard;
  return (boost::math::cdf(standard, (x - mu_) / sigma_) - cdf_lower_) /
         (cdf_upper_ - cdf_lower_);
}

double TruncatedNormal::Sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(cdf_lower_, cdf_upper_);
  double p = unit(rng);
  // Keep the quantile argument inside (0, 1).
  p = std::clamp(p, 1e-300, 1 - 1e-16);
  const boost::math::normal standard;
  const double x = mu_ + sigma_ * boost::math::quantile(standard, p);
  return std::clamp(x, lower_, upper_);
}

TruncatedNormal GaussianPairCoordinate(int n) {
  return TruncatedNormal(n / 2.0, 2.0 * std::sqrt(static_cast<double>(n)), 1.0,
                         static_cast<double>(n));
}

GameInstance GenGaussian(int n, const Rational& c, std::int64_t pairs,
                         std::uint64_t seed) {
  CheckPlayers(n);
  if (pairs < 0 || c < 0) {
    throw Error(ErrorKind::kStructural, "gaussian model needs c, d >= 0");
  }
  const TruncatedNormal coordinate = GaussianPairCoordinate(n);
  std::mt19937_64 rng(seed);
  auto draw = [&]() {
    const long x = std::lround(coordinate.Sample(rng));
    return static_cast<NodeId>(std::clamp<long>(x, 1, n));
  };
  std::map<std::pair<NodeId, NodeId>, std::int64_t> count;
  for (std::int64_t drawn = 0; drawn < pairs;) {
    const NodeId a = draw();
    const NodeId b = draw();
    if (a == b) continue;
    ++count[{std::min(a, b), std::max(a, b)}];
    ++drawn;
  }
  std::vector<Commodity> commodities;
  std::vector<Rational> marginal(n + 1, Rational(0));
  for (const auto& [uv, k] : count) {
    commodities.push_back({uv.first, uv.second, Rational(k)});
    marginal[uv.first] += k;
    marginal[uv.second] += k;
  }
  std::vector<Capacity> capacity;
  for (NodeId v = 1; v <= n; ++v) capacity.emplace_back(c * marginal[v]);
  return GameInstance::MakePath(std::move(capacity), std::move(commodities));
}

GameInstance GenRandomGraph(int n, const Rational& c, const Rational& d,
                            std::uint64_t seed) {
  CheckPlayers(n);
  if (c < 1 || d < 1) {
    throw Error(ErrorKind::kStructural, "random graph model needs c, d >= 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> cap(1, IntegerPart(c));
  std::uniform_int_distribution<std::int64_t> demand(1, IntegerPart(d));
  std::bernoulli_distribution edge(0.5);
  std::vector<Capacity> capacity;
  for (NodeId v = 1; v <= n; ++v) capacity.emplace_back(Rational(cap(rng)));
  std::vector<Commodity> commodities;
  for (NodeId u = 1; u <= n; ++u) {
    for (NodeId v = u + 1; v <= n; ++v) {
      if (edge(rng)) commodities.push_back({u, v, Rational(demand(rng))});
    }
  }
  return GameInstance::MakePath(std::move(capacity), std::move(commodities));
}

GameInstance Generate(const GameModelParams& params) {
  switch (params.model) {
    case GameModel::kConstant:
      return GenConstant(params.n, params.c, params.d);
    case GameModel::kGaussianMarginal:
      if (params.d.get_den() != 1) {
        throw Error(ErrorKind::kStructural,
                    "gaussian model needs an integer number of pairs");
      }
      return GenGaussian(params.n, params.c, IntegerPart(params.d), params.seed);
    case GameModel::kRandomGraph:
      return GenRandomGraph(params.n, params.c, params.d, params.seed);
  }
  throw Error(ErrorKind::kStructural, "unknown game model");
}

std::uint64_t SampleSeed(std::uint64_t master, std::uint64_t index) {
  // SplitMix64 output function applied to master + golden-ratio stride.
  std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

EcoreReport RunEcore(const GameInstance& instance, std::int64_t samples,
                     std::uint64_t seed, const EcoreOptions& options) {
  if (!instance.has_unique_paths()) {
    throw Error(ErrorKind::kUnsupportedTopology,
                "the empirical core needs a path or spider");
  }
  if (samples < 1) {
    throw Error(ErrorKind::kStructural, "the empirical core needs samples");
  }
  std::vector<Sample> runs(samples);
  ParallelFor(samples, Threads(options.threads), [&](std::int64_t s) {
    runs[s].order = RandomValidOrder(instance, SampleSeed(seed, s));
    runs[s].payoff = Payoff(instance, RunIncorporate(instance, runs[s].order).flow);
  });
  EcoreReport report = Reduce(instance, std::move(runs), options);
  report.seed = seed;
  return report;
}

EcoreReport RunEcoreOnOrders(const GameInstance& instance,
                             const std::vector<IncorporationOrder>& orders,
                             const EcoreOptions& options) {
  if (!instance.has_unique_paths()) {
    throw Error(ErrorKind::kUnsupportedTopology,
                "the empirical core needs a path or spider");
  }
  std::vector<Sample> runs(orders.size());
  ParallelFor(static_cast<std::int64_t>(orders.size()), Threads(options.threads),
              [&](std::int64_t s) {
                runs[s].order = orders[s];
                runs[s].payoff =
                    Payoff(instance, RunIncorporate(instance, orders[s]).flow);
              });
  return Reduce(instance, std::move(runs), options);
}

TimeMatrix::TimeMatrix(int n)
    : n_(n),
      sum_(static_cast<size_t>(n) * n, Rational(0)),
      count_(static_cast<size_t>(n) * n, 0) {}

int TimeMatrix::Index(int position, int time) const {
  if (position < 1 || position > n_ || time < 1 || time > n_) {
    throw Error(ErrorKind::kStructural, "time matrix cell out of range");
  }
  return (position - 1) * n_ + (time - 1);
}

void TimeMatrix::Add(int position, int time, const Rational& payoff) {
  const int i = Index(position, time);
  sum_[i] += payoff;
  ++count_[i];
}

void TimeMatrix::Merge(const TimeMatrix& other) {
  if (other.n_ != n_) {
    throw Error(ErrorKind::kStructural, "time matrix sizes differ");
  }
  for (size_t i = 0; i < sum_.size(); ++i) {
    sum_[i] += other.sum_[i];
    count_[i] += other.count_[i];
  }
}

std::int64_t TimeMatrix::count(int position, int time) const {
  return count_[Index(position, time)];
}

const Rational& TimeMatrix::sum(int position, int time) const {
  return sum_[Index(position, time)];
}

std::optional<Rational> TimeMatrix::average(int position, int time) const {
  const int i = Index(position, time);
  if (count_[i] == 0) return std::nullopt;
  return sum_[i] / count_[i];
}

TimeMatrix ComputeTimeMatrix(const GameInstance& instance, std::int64_t samples,
                             std::uint64_t seed, int threads) {
  if (!instance.is_path()) {
    throw Error(ErrorKind::kUnsupportedTopology, "the time matrix needs a path");
  }
  const int n = instance.num_nodes();
  std::vector<NodeMap<int>> times(samples);
  std::vector<PayoffVector> payoffs(samples);
  ParallelFor(samples, Threads(threads), [&](std::int64_t s) {
    IncorporateResult run =
        Incorporate(instance, RandomValidOrder(instance, SampleSeed(seed, s)));
    payoffs[s] = Payoff(instance, run.flow);
    times[s] = std::move(run.trace.incorporation_time);
  });
  TimeMatrix matrix(n);
  for (std::int64_t s = 0; s < samples; ++s) {
    for (NodeId v = 1; v <= n; ++v) matrix.Add(v, times[s][v] + 1, payoffs[s][v]);
  }
  return matrix;
}

}  // namespace flowcore
