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

#ifndef FLOWCORE_CERTIFICATE_H_
#define FLOWCORE_CERTIFICATE_H_

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flowcore/model.h"

namespace flowcore {

// Dual multipliers proving that coalition S has no deviation:
//   sum_{v in P} y_v + z_kl >= w_k + w_l   for every kl-path P in G[S]   (4)
//   sum y_v c_v + sum z_kl d_kl <= sum w_v pi_v                         (5)
// with y, z, w >= 0 and w != 0. Binary certificates use y = 1_Y, w = 1_W.
struct Certificate {
  std::vector<NodeId> coalition;  // sorted
  NodeMap<Rational> y;
  NodeMap<Rational> w;
  std::map<int, Rational> z;  // commodity index -> value, commodities of H[S]

  std::vector<NodeId> YSet() const;  // support of y
  std::vector<NodeId> WSet() const;  // support of w
  bool IsBinary() const;
};

// z_kl = max(0, w_k + w_l - min over kl-paths P in G[S] of y(P)) for every
// commodity of H[S]; zero when G[S] has no kl-path.
std::map<int, Rational> ImpliedZ(const GameInstance& instance,
                                 const std::vector<NodeId>& coalition,
                                 const NodeMap<Rational>& y,
                                 const NodeMap<Rational>& w);

// y = 1_Y, w = 1_W, z implied.
Certificate MakeBinaryCertificate(const GameInstance& instance,
                                  const std::vector<NodeId>& coalition,
                                  const std::vector<NodeId>& y_set,
                                  const std::vector<NodeId>& w_set);

struct CertificateCheck {
  bool passed = false;
  std::string failure;  // the first violated condition, when !passed
};

// Exact check of (4) and (5) against the payoff `reference`. Throws
// Error(kInvalidCertificate) for malformed input: negative entries, support
// outside S, z on a commodity outside H[S], or y > 0 on an unbounded node.
CertificateCheck CheckCertificate(const GameInstance& instance,
                                  const PayoffVector& reference,
                                  const Certificate& cert);
CertificateCheck CheckCertificate(const GameInstance& instance, const Flow& flow,
                                  const Certificate& cert);

// Tight nodes (usage equal to a finite capacity) among `nodes`.
std::vector<NodeId> TightNodes(const GameInstance& instance, const Flow& flow,
                               const std::vector<NodeId>& nodes);

// Some v in S with pi_v = c_v: Y = W = {v}.
std::optional<Certificate> CertGloballyContent(const GameInstance& instance,
                                               const Flow& flow,
                                               const std::vector<NodeId>& coalition);

// Some v in S with pi_v >= sum_{u in S} d_uv: Y = {}, W = {v}.
std::optional<Certificate> CertSContent(const GameInstance& instance,
                                        const Flow& flow,
                                        const std::vector<NodeId>& coalition);

struct PrecertificateReport {
  bool p1 = false;  // commodities inside W are fully routed
  bool p2 = false;  // positive paths transiting Y have an endpoint in W
  bool p3 = false;  // non-fully-routed commodities of H[S] touching W are
                    // disconnected in G[S] minus Y
  bool p4 = false;  // no positive path touches two nodes of Y
  bool all() const { return p1 && p2 && p3 && p4; }
};

// Requires Y tight and Y within W within S; throws
// Error(kInvalidCertificate) otherwise.
PrecertificateReport CheckPrecertificate(const GameInstance& instance,
                                         const Flow& flow,
                                         const std::vector<NodeId>& coalition,
                                         const std::vector<NodeId>& y_set,
                                         const std::vector<NodeId>& w_set);

enum class Side { kLeft, kRight };

// Endpoints of positive flow paths that transit v, split by side. Paths only.
struct AnchorSets {
  NodeId v = 0;
  std::vector<NodeId> left;   // sorted
  std::vector<NodeId> right;  // sorted
  NodeId leftmost = 0;        // 0 when `left` is empty
  NodeId rightmost = 0;       // 0 when `right` is empty
};

AnchorSets Anchors(const GameInstance& instance, const Flow& flow, NodeId v);

struct AnchorAttempt {
  std::optional<Certificate> certificate;
  std::string reason;  // why no certificate: "no tight node", "PA", "PB"
  NodeId v = 0;
};

// Anchor pre-certificate on a path for contiguous S = [i, j]: v is the
// leftmost (rightmost) tight node of S, Y = {v}, W = L(v) + v (R(v) + v).
// Built only when PA and PB hold; the caller still checks it.
AnchorAttempt CertAnchor(const GameInstance& instance, const Flow& flow,
                         const std::vector<NodeId>& coalition, Side side);

enum class CertificateSource {
  kGloballyContent,
  kSContent,
  kSpanPositive,
  kLeftAnchor,
  kRightAnchor,
  kLpDual,
};
std::string ToString(CertificateSource source);

struct SourcedCertificate {
  Certificate certificate;
  CertificateSource source;
};

struct DeviationWitness {
  std::vector<NodeId> coalition;
  Flow flow;
  Rational margin;  // > 0
};

using CertifyOutcome = std::variant<SourcedCertificate, DeviationWitness>;

// Tries the constructive certificates in order (globally content, S-content,
// span-positive, left anchor, right anchor; the path-specific ones only for
// contiguous S on paths), keeping the first that passes CheckCertificate.
// Otherwise solves the deviation LP: margin <= 0 yields the LP dual as a
// certificate, margin > 0 the deviation witness.
CertifyOutcome CertifyCoalition(const GameInstance& instance, const Flow& flow,
                                const std::vector<NodeId>& coalition);

}  // namespace flowcore

#endif  // FLOWCORE_CERTIFICATE_H_
