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

#ifndef FLOWCORE_EMPIRICAL_H_
#define FLOWCORE_EMPIRICAL_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flowcore/incorporate.h"
#include "flowcore/model.h"

namespace flowcore {

enum class GameModel { kConstant, kGaussianMarginal, kRandomGraph };

std::string ToString(GameModel model);
// Accepts "constant", "gaussian" and "random-graph".
GameModel ParseGameModel(const std::string& name);

struct GameModelParams {
  GameModel model = GameModel::kConstant;
  int n = 2;
  Rational c;
  Rational d;
  std::uint64_t seed = 0;
};

// Every node has capacity c and every pair demand d, on the path 1..n.
GameInstance GenConstant(int n, const Rational& c, const Rational& d);

// Normal(mu, sigma) restricted to [lower, upper], sampled by inverse CDF.
class TruncatedNormal {
 public:
  TruncatedNormal(double mu, double sigma, double lower, double upper);

  double Cdf(double x) const;
  double Sample(std::mt19937_64& rng) const;

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

 private:
  double mu_;
  double sigma_;
  double lower_;
  double upper_;
  double cdf_lower_;
  double cdf_upper_;
};

// The pair distribution of the Gaussian marginal model on n players:
// mu = n/2, sigma = 2 sqrt(n), truncated to [1, n].
TruncatedNormal GaussianPairCoordinate(int n);

// Draws `pairs` pairs of truncated-normal coordinates, rounds each half away
// from zero, clamps to [1, n], redraws pairs with equal ends and adds one
// unit of demand per pair; then c_v = c * d_v. Path topology.
GameInstance GenGaussian(int n, const Rational& c, std::int64_t pairs,
                         std::uint64_t seed);

// Capacities uniform on the integers 1..c, each pair a commodity with
// probability 1/2 and demand uniform on the integers 1..d. Path topology.
// Throws Error(kStructural) unless c, d >= 1.
GameInstance GenRandomGraph(int n, const Rational& c, const Rational& d,
                            std::uint64_t seed);

// Dispatches on params.model; the Gaussian model needs an integer d.
GameInstance Generate(const GameModelParams& params);

// Seed of the index-th sample, split from a master seed.
std::uint64_t SampleSeed(std::uint64_t master, std::uint64_t index);

struct Stats {
  Rational min;
  Rational mean;
  Rational max;
};

struct EcoreRecord {
  PayoffVector payoff;
  std::int64_t multiplicity = 0;
  std::int64_t first_sample = 0;
  IncorporationOrder first_order;
  Rational social_welfare;
  Rational fairness;
  std::optional<bool> in_core;  // set in audit mode
};

struct EcoreReport {
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  // Over all samples, counted with multiplicity.
  Stats sw;
  Stats fairness;
  Rational lp_sw;
  Rational lp_fairness;
  std::vector<NodeId> eligible;  // demand-incident nodes
  // Distinct payoff vectors in order of first appearance.
  std::vector<EcoreRecord> records;
  std::int64_t audit_failures = 0;

  std::int64_t distinct() const { return static_cast<std::int64_t>(records.size()); }
};

struct EcoreOptions {
  bool audit = false;
  int threads = 0;  // 0: DefaultThreads()
};

// Samples random valid orders (seeds from SampleSeed) and runs INCORPORATE.
EcoreReport RunEcore(const GameInstance& instance, std::int64_t samples,
                     std::uint64_t seed, const EcoreOptions& options = {});

// The same report over a fixed list of orders, e.g. every valid order.
EcoreReport RunEcoreOnOrders(const GameInstance& instance,
                             const std::vector<IncorporationOrder>& orders,
                             const EcoreOptions& options = {});

// Cells are 1-based: position is the node id, time the 1-based index at which
// the node joined.
class TimeMatrix {
 public:
  explicit TimeMatrix(int n);

  int n() const { return n_; }
  void Add(int position, int time, const Rational& payoff);
  void Merge(const TimeMatrix& other);
  std::int64_t count(int position, int time) const;
  const Rational& sum(int position, int time) const;
  // Average payoff of the cell; nullopt when the cell is empty.
  std::optional<Rational> average(int position, int time) const;

 private:
  int Index(int position, int time) const;

  int n_;
  std::vector<Rational> sum_;
  std::vector<std::int64_t> count_;
};

// Path instances only; throws Error(kUnsupportedTopology) otherwise.
TimeMatrix ComputeTimeMatrix(const GameInstance& instance, std::int64_t samples,
                             std::uint64_t seed, int threads = 0);

}  // namespace flowcore

#endif  // FLOWCORE_EMPIRICAL_H_
