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

#include "flowcore/certificate.h"

#include <algorithm>
#include <deque>

#include "flowcore/error.h"
#include "flowcore/game_lp.h"

namespace flowcore {
namespace {

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorKind::kInvalidCertificate, what);
}

std::vector<NodeId> Support(const NodeMap<Rational>& values) {
  std::vector<NodeId> out;
  for (NodeId v = 1; v <= values.size(); ++v) {
    if (values[v] != 0) out.push_back(v);
  }
  return out;
}

// Minimum of sum_{v in P} weight_v over a-b paths inside `mask`.
std::optional<Rational> MinNodeWeightPath(const GameInstance& instance,
                                          const std::vector<char>& mask,
                                          const NodeMap<Rational>& weight,
                                          NodeId a, NodeId b) {
  const int n = instance.num_nodes();
  std::vector<std::optional<Rational>> dist(n + 1);
  std::vector<char> done(n + 1, 0);
  dist[a] = weight[a];
  while (true) {
    NodeId u = 0;
    for (NodeId v = 1; v <= n; ++v) {
      if (!done[v] && dist[v] && (u == 0 || *dist[v] < *dist[u])) u = v;
    }
    if (u == 0) return std::nullopt;
    if (u == b) return dist[u];
    done[u] = 1;
    for (NodeId x : instance.neighbors(u)) {
      if (!mask[x] || done[x]) continue;
      Rational candidate = *dist[u] + weight[x];
      if (!dist[x] || candidate < *dist[x]) dist[x] = std::move(candidate);
    }
  }
}

bool Reachable(const GameInstance& instance, const std::vector<char>& mask,
               NodeId a, NodeId b) {
  if (!mask[a] || !mask[b]) return false;
  std::vector<char> seen(instance.num_nodes() + 1, 0);
  std::deque<NodeId> queue = {a};
  seen[a] = 1;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    if (u == b) return true;
    for (NodeId x : instance.neighbors(u)) {
      if (mask[x] && !seen[x]) {
        seen[x] = 1;
        queue.push_back(x);
      }
    }
  }
  return false;
}

bool Inside(const std::vector<char>& mask, const Commodity& c) {
  return mask[c.u] && mask[c.v];
}

bool FullyRouted(const GameInstance& instance, const Flow& flow, int k) {
  return flow.amount(k) == instance.commodity(k).demand;
}

// [i, j] when the coalition is contiguous on a path.
std::optional<std::pair<NodeId, NodeId>> Interval(
    const GameInstance& instance, const std::vector<NodeId>& members) {
  if (!instance.is_path() || members.empty()) return std::nullopt;
  if (members.back() - members.front() + 1 != static_cast<int>(members.size())) {
    return std::nullopt;
  }
  return std::pair(members.front(), members.back());
}

std::vector<NodeId> Sorted(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::vector<NodeId> Certificate::YSet() const { return Support(y); }
std::vector<NodeId> Certificate::WSet() const { return Support(w); }

bool Certificate::IsBinary() const {
  for (NodeId v = 1; v <= y.size(); ++v) {
    if ((y[v] != 0 && y[v] != 1) || (w[v] != 0 && w[v] != 1)) return false;
  }
  return true;
}

std::map<int, Rational> ImpliedZ(const GameInstance& instance,
                                 const std::vector<NodeId>& coalition,
                                 const NodeMap<Rational>& y,
                                 const NodeMap<Rational>& w) {
  const std::vector<char> mask = CoalitionMask(coalition, instance.num_nodes());
  std::map<int, Rational> z;
  for (int k = 0; k < instance.num_commodities(); ++k) {
    const Commodity& c = instance.commodity(k);
    if (!Inside(mask, c)) continue;
    Rational value = 0;
    if (auto shortest = MinNodeWeightPath(instance, mask, y, c.u, c.v)) {
      value = w[c.u] + w[c.v] - *shortest;
      if (value < 0) value = 0;
    }
    z[k] = value;
  }
  return z;
}

Certificate MakeBinaryCertificate(const GameInstance& instance,
                                  const std::vector<NodeId>& coalition,
                                  const std::vector<NodeId>& y_set,
                                  const std::vector<NodeId>& w_set) {
  Certificate cert;
  const int n = instance.num_nodes();
  cert.coalition = NormalizeCoalition(coalition, n);
  cert.y = NodeMap<Rational>(n, Rational(0));
  cert.w = NodeMap<Rational>(n, Rational(0));
  for (NodeId v : NormalizeCoalition(y_set, n)) cert.y[v] = 1;
  for (NodeId v : NormalizeCoalition(w_set, n)) cert.w[v] = 1;
  cert.z = ImpliedZ(instance, cert.coalition, cert.y, cert.w);
  return cert;
}

CertificateCheck CheckCertificate(const GameInstance& instance,
                                  const PayoffVector& reference,
                                  const Certificate& cert) {
  const int n = instance.num_nodes();
  if (cert.y.size() != n || cert.w.size() != n) Invalid("certificate size mismatch");
  const std::vector<char> mask = CoalitionMask(cert.coalition, n);
  for (NodeId v = 1; v <= n; ++v) {
    if (cert.y[v] < 0 || cert.w[v] < 0) Invalid("negative y or w");
    if (!mask[v] && (cert.y[v] != 0 || cert.w[v] != 0)) {
      Invalid("y or w supported outside the coalition at node " + std::to_string(v));
    }
    if (cert.y[v] != 0 && instance.capacity(v).unbounded()) {
      Invalid("y is positive on unbounded node " + std::to_string(v));
    }
  }
  for (const auto& [k, value] : cert.z) {
    if (k < 0 || k >= instance.num_commodities() ||
        !Inside(mask, instance.commodity(k))) {
      Invalid("z on a commodity outside H[S]");
    }
    if (value < 0) Invalid("negative z");
  }
  CertificateCheck result;
  if (Support(cert.w).empty()) {
    result.failure = "w is zero";
    return result;
  }
  Rational lhs = 0;
  Rational rhs = 0;
  for (NodeId v : cert.coalition) {
    if (cert.y[v] != 0) lhs += cert.y[v] * instance.capacity(v).value();
    rhs += cert.w[v] * reference[v];
  }
  for (int k = 0; k < instance.num_commodities(); ++k) {
    const Commodity& c = instance.commodity(k);
    if (!Inside(mask, c)) continue;
    auto it = cert.z.find(k);
    const Rational z = it == cert.z.end() ? Rational(0) : it->second;
    lhs += z * c.demand;
    auto shortest = MinNodeWeightPath(instance, mask, cert.y, c.u, c.v);
    if (shortest && *shortest + z < cert.w[c.u] + cert.w[c.v]) {
      result.failure = "path constraint fails for commodity " +
                       std::to_string(c.u) + "-" + std::to_string(c.v);
      return result;
    }
  }
  if (lhs > rhs) {
    result.failure = "budget constraint fails: " + ToString(lhs) + " > " +
                     ToString(rhs);
    return result;
  }
  result.passed = true;
  return result;
}

CertificateCheck CheckCertificate(const GameInstance& instance, const Flow& flow,
                                  const Certificate& cert) {
  return CheckCertificate(instance, Payoff(instance, flow), cert);
}

std::vector<NodeId> TightNodes(const GameInstance& instance, const Flow& flow,
                               const std::vector<NodeId>& nodes) {
  const NodeMap<Rational> usage = NodeUsage(instance, flow);
  std::vector<NodeId> out;
  for (NodeId v : nodes) {
    if (instance.capacity(v).Equals(usage[v])) out.push_back(v);
  }
  return out;
}

std::optional<Certificate> CertGloballyContent(
    const GameInstance& instance, const Flow& flow,
    const std::vector<NodeId>& coalition) {
  const std::vector<NodeId> members =
      NormalizeCoalition(coalition, instance.num_nodes());
  const PayoffVector pay = Payoff(instance, flow);
  for (NodeId v : members) {
    if (instance.capacity(v).Equals(pay[v])) {
      return MakeBinaryCertificate(instance, members, {v}, {v});
    }
  }
  return std::nullopt;
}

std::optional<Certificate> CertSContent(const GameInstance& instance,
                                        const Flow& flow,
                                        const std::vector<NodeId>& coalition) {
  const std::vector<NodeId> members =
      NormalizeCoalition(coalition, instance.num_nodes());
  const std::vector<char> mask = CoalitionMask(members, instance.num_nodes());
  const PayoffVector pay = Payoff(instance, flow);
  for (NodeId v : members) {
    Rational internal = 0;
    for (int k : instance.incident_commodities(v)) {
      if (Inside(mask, instance.commodity(k))) internal += instance.commodity(k).demand;
    }
    if (pay[v] >= internal) return MakeBinaryCertificate(instance, members, {}, {v});
  }
  return std::nullopt;
}

PrecertificateReport CheckPrecertificate(const GameInstance& instance,
                                         const Flow& flow,
                                         const std::vector<NodeId>& coalition,
                                         const std::vector<NodeId>& y_set,
                                         const std::vector<NodeId>& w_set) {
  const int n = instance.num_nodes();
  const std::vector<NodeId> members = NormalizeCoalition(coalition, n);
  const std::vector<NodeId> ys = NormalizeCoalition(y_set, n);
  const std::vector<NodeId> ws = NormalizeCoalition(w_set, n);
  const std::vector<char> in_s = CoalitionMask(members, n);
  const std::vector<char> in_y = CoalitionMask(ys, n);
  const std::vector<char> in_w = CoalitionMask(ws, n);
  for (NodeId v : ws) {
    if (!in_s[v]) Invalid("W is not inside S");
  }
  for (NodeId v : ys) {
    if (!in_w[v]) Invalid("Y is not inside W");
  }
  if (TightNodes(instance, flow, ys).size() != ys.size()) Invalid("Y has a non-tight node");

  PrecertificateReport report;
  report.p1 = true;
  report.p3 = true;
  std::vector<char> s_minus_y = in_s;
  for (NodeId v : ys) s_minus_y[v] = 0;
  for (int k = 0; k < instance.num_commodities(); ++k) {
    const Commodity& c = instance.commodity(k);
    const bool full = FullyRouted(instance, flow, k);
    if (in_w[c.u] && in_w[c.v] && !full) report.p1 = false;
    if (!full && Inside(in_s, c) && (in_w[c.u] || in_w[c.v]) &&
        Reachable(instance, s_minus_y, c.u, c.v)) {
      report.p3 = false;
    }
  }
  report.p2 = true;
  report.p4 = true;
  for (const PathFlow& p : flow.PositivePaths(instance)) {
    int touched = 0;
    bool transits_y = false;
    for (size_t i = 0; i < p.nodes.size(); ++i) {
      if (!in_y[p.nodes[i]]) continue;
      ++touched;
      if (i > 0 && i + 1 < p.nodes.size()) transits_y = true;
    }
    if (touched > 1) report.p4 = false;
    if (transits_y && !in_w[p.nodes.front()] && !in_w[p.nodes.back()]) {
      report.p2 = false;
    }
  }
  return report;
}

AnchorSets Anchors(const GameInstance& instance, const Flow& flow, NodeId v) {
  if (!instance.is_path()) {
    throw Error(ErrorKind::kUnsupportedTopology, "anchor sets are defined on paths");
  }
  AnchorSets out;
  out.v = v;
  for (int k = 0; k < instance.num_commodities(); ++k) {
    const Commodity& c = instance.commodity(k);
    if (flow.amount(k) > 0 && c.u < v && v < c.v) {
      out.left.push_back(c.u);
      out.right.push_back(c.v);
    }
  }
  out.left = Sorted(out.left);
  out.right = Sorted(out.right);
  if (!out.left.empty()) out.leftmost = out.left.front();
  if (!out.right.empty()) out.rightmost = out.right.back();
  return out;
}

AnchorAttempt CertAnchor(const GameInstance& instance, const Flow& flow,
                         const std::vector<NodeId>& coalition, Side side) {
  AnchorAttempt attempt;
  const std::vector<NodeId> members =
      NormalizeCoalition(coalition, instance.num_nodes());
  const auto interval = Interval(instance, members);
  if (!interval) {
    attempt.reason = "coalition is not an interval of a path";
    return attempt;
  }
  const auto [i, j] = *interval;
  const std::vector<NodeId> tight = TightNodes(instance, flow, members);
  if (tight.empty()) {
    attempt.reason = "no tight node";
    return attempt;
  }
  const NodeId v = side == Side::kLeft ? tight.front() : tight.back();
  attempt.v = v;
  const AnchorSets anchors = Anchors(instance, flow, v);
  const std::vector<NodeId>& chosen =
      side == Side::kLeft ? anchors.left : anchors.right;
  for (NodeId a : chosen) {
    if (a < i || a > j) {
      attempt.reason = "PA";
      return attempt;
    }
  }
  const std::vector<char> is_anchor = CoalitionMask(chosen, instance.num_nodes());
  for (int k = 0; k < instance.num_commodities(); ++k) {
    if (FullyRouted(instance, flow, k)) continue;
    const Commodity& c = instance.commodity(k);
    const bool blocked =
        side == Side::kLeft
            ? is_anchor[c.v] && c.u >= i && c.u < anchors.leftmost
            : is_anchor[c.u] && c.v > anchors.rightmost && c.v <= j;
    if (blocked) {
      attempt.reason = "PB";
      return attempt;
    }
  }
  std::vector<NodeId> w_set = chosen;
  w_set.push_back(v);
  attempt.certificate = MakeBinaryCertificate(instance, members, {v}, w_set);
  return attempt;
}

std::string ToString(CertificateSource source) {
  switch (source) {
    case CertificateSource::kGloballyContent:
      return "globally-content";
    case CertificateSource::kSContent:
      return "s-content";
    case CertificateSource::kSpanPositive:
      return "span-positive";
    case CertificateSource::kLeftAnchor:
      return "left-anchor";
    case CertificateSource::kRightAnchor:
      return "right-anchor";
    case CertificateSource::kLpDual:
      return "lp-dual";
  }
  return "unknown";
}

CertifyOutcome CertifyCoalition(const GameInstance& instance, const Flow& flow,
                                const std::vector<NodeId>& coalition) {
  const std::vector<NodeId> members =
      NormalizeCoalition(coalition, instance.num_nodes());
  const PayoffVector pay = Payoff(instance, flow);
  auto accept = [&](const std::optional<Certificate>& cert) {
    return cert && CheckCertificate(instance, pay, *cert).passed;
  };
  if (auto cert = CertGloballyContent(instance, flow, members); accept(cert)) {
    return SourcedCertificate{*cert, CertificateSource::kGloballyContent};
  }
  if (auto cert = CertSContent(instance, flow, members); accept(cert)) {
    return SourcedCertificate{*cert, CertificateSource::kSContent};
  }
  if (const auto interval = Interval(instance, members)) {
    const auto [i, j] = *interval;
    bool spanned = false;
    for (int k = 0; k < instance.num_commodities(); ++k) {
      const Commodity& c = instance.commodity(k);
      if (flow.amount(k) > 0 && c.u <= i && j <= c.v) spanned = true;
    }
    if (spanned) {
      std::optional<Certificate> cert =
          MakeBinaryCertificate(instance, members, {}, members);
      if (accept(cert)) return SourcedCertificate{*cert, CertificateSource::kSpanPositive};
    }
    for (Side side : {Side::kLeft, Side::kRight}) {
      const AnchorAttempt attempt = CertAnchor(instance, flow, members, side);
      if (accept(attempt.certificate)) {
        return SourcedCertificate{*attempt.certificate,
                                  side == Side::kLeft ? CertificateSource::kLeftAnchor
                                                      : CertificateSource::kRightAnchor};
      }
    }
  }
  const DeviationResult dev = DeviationMargin(instance, pay, members);
  if (dev.margin > 0) return DeviationWitness{members, dev.witness, dev.margin};
  Certificate cert;
  cert.coalition = members;
  cert.y = dev.y;
  cert.w = dev.w;
  cert.z = dev.z;
  const CertificateCheck check = CheckCertificate(instance, pay, cert);
  if (!check.passed) {
    throw Error(ErrorKind::kSolver,
                "deviation LP dual is not a certificate: " + check.failure);
  }
  return SourcedCertificate{cert, CertificateSource::kLpDual};
}

}  // namespace flowcore
