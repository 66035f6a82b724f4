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

#include "flowcore/io.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "flowcore/error.h"

namespace flowcore {
namespace {

[[noreturn]] void Bad(const std::string& what) { throw Error(ErrorKind::kIo, what); }

const Json& Field(const Json& json, const char* key) {
  if (!json.is_object() || !json.contains(key)) {
    Bad(std::string("missing field \"") + key + "\"");
  }
  return json.at(key);
}

int IntFrom(const Json& json, const char* what) {
  if (!json.is_number_integer()) Bad(std::string(what) + " must be an integer");
  return json.get<int>();
}

std::vector<NodeId> NodeList(const Json& json, const char* what) {
  if (!json.is_array()) Bad(std::string(what) + " must be an array");
  std::vector<NodeId> out;
  for (const Json& v : json) out.push_back(IntFrom(v, what));
  return out;
}

std::string CommodityKey(const Commodity& c) {
  return std::to_string(c.u) + "-" + std::to_string(c.v);
}

int CommodityFromKey(const GameInstance& instance, const std::string& key) {
  const auto dash = key.find('-');
  if (dash == std::string::npos) Bad("bad commodity key \"" + key + "\"");
  int a = 0;
  int b = 0;
  const char* begin = key.data();
  const char* end = key.data() + key.size();
  if (std::from_chars(begin, begin + dash, a).ptr != begin + dash ||
      std::from_chars(begin + dash + 1, end, b).ptr != end) {
    Bad("bad commodity key \"" + key + "\"");
  }
  const auto k = instance.FindCommodity(a, b);
  if (!k) Bad("no commodity " + key);
  return *k;
}

std::string TopologyName(const Topology& t) {
  switch (t.kind) {
    case TopologyKind::kPath:
      return "path";
    case TopologyKind::kSpider:
      return "spider";
    case TopologyKind::kGeneral:
      return "general";
  }
  return "general";
}

Json NodeRationalMap(const NodeMap<Rational>& values) {
  Json out = Json::object();
  for (NodeId v = 1; v <= values.size(); ++v) {
    if (values[v] != 0) out[std::to_string(v)] = RationalToJson(values[v]);
  }
  return out;
}

NodeMap<Rational> NodeRationalMapFrom(const Json& json, int num_nodes) {
  if (!json.is_object()) Bad("node map must be an object");
  NodeMap<Rational> out(num_nodes, Rational(0));
  for (const auto& [key, value] : json.items()) {
    int v = 0;
    if (std::from_chars(key.data(), key.data() + key.size(), v).ptr !=
            key.data() + key.size() ||
        v < 1 || v > num_nodes) {
      Bad("bad node key \"" + key + "\"");
    }
    out[v] = RationalFromJson(value);
  }
  return out;
}

Json StatsToJson(const Stats& s) {
  return Json{{"min", RationalToJson(s.min)},
              {"mean", RationalToJson(s.mean)},
              {"max", RationalToJson(s.max)},
              {"min_decimal", ToDecimal(s.min)},
              {"mean_decimal", ToDecimal(s.mean)},
              {"max_decimal", ToDecimal(s.max)}};
}

// Runs `body`, turning parser exceptions into Error(kIo).
template <typename F>
auto Parsing(F body) -> decltype(body()) {
  try {
    return body();
  } catch (const Json::exception& e) {
    Bad(e.what());
  }
}

}  // namespace

Json RationalToJson(const Rational& value) { return ToString(value); }

Rational RationalFromJson(const Json& json) {
  try {
    if (json.is_string()) return ParseRational(json.get<std::string>());
    if (json.is_number_unsigned()) return Rational(std::to_string(json.get<std::uint64_t>()));
    if (json.is_number_integer()) return Rational(std::to_string(json.get<std::int64_t>()));
    if (json.is_number_float()) {
      char buffer[512];
      const auto r = std::to_chars(buffer, buffer + sizeof(buffer),
                                   json.get<double>(), std::chars_format::fixed);
      if (r.ec != std::errc()) Bad("unrepresentable number");
      return ParseRational(std::string_view(buffer, r.ptr - buffer));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    Bad(e.what());
  }
  Bad("expected a rational, got " + json.dump());
}

Json CapacityToJson(const Capacity& capacity) {
  return capacity.unbounded() ? Json("inf") : RationalToJson(capacity.value());
}

Capacity CapacityFromJson(const Json& json) {
  if (json.is_string() && json.get<std::string>() == "inf") return Capacity::Unbounded();
  return Capacity(RationalFromJson(json));
}

Json InstanceToJson(const GameInstance& instance) {
  Json out;
  out["n"] = instance.num_nodes();
  out["topology"] = TopologyName(instance.topology());
  if (instance.is_spider()) out["root"] = instance.topology().root;
  if (!instance.is_path()) {
    Json edges = Json::array();
    for (const Edge& e : instance.edges()) edges.push_back({e.first, e.second});
    out["edges"] = edges;
  }
  Json caps = Json::array();
  for (const Capacity& c : instance.capacities()) caps.push_back(CapacityToJson(c));
  out["capacity"] = caps;
  Json commodities = Json::array();
  for (const Commodity& c : instance.commodities()) {
    commodities.push_back({{"u", c.u}, {"v", c.v}, {"d", RationalToJson(c.demand)}});
  }
  out["commodities"] = commodities;
  return out;
}

namespace {

struct InstanceParts {
  int n = 0;
  Topology topology;
  std::vector<Edge> edges;
  std::vector<Capacity> capacity;
};

InstanceParts ParseParts(const Json& json) {
  InstanceParts parts;
  parts.n = IntFrom(Field(json, "n"), "n");
  const Json& topology = Field(json, "topology");
  if (!topology.is_string()) Bad("topology must be a string");
  const std::string name = topology.get<std::string>();
  if (name == "path") {
    parts.topology = Topology::Path();
  } else if (name == "spider") {
    parts.topology = Topology::Spider(IntFrom(Field(json, "root"), "root"));
  } else if (name == "general") {
    parts.topology = Topology::General();
  } else {
    Bad("unknown topology \"" + name + "\"");
  }
  if (json.contains("edges")) {
    const Json& edges = json.at("edges");
    if (!edges.is_array()) Bad("edges must be an array");
    for (const Json& e : edges) {
      const std::vector<NodeId> ends = NodeList(e, "edge");
      if (ends.size() != 2) Bad("an edge needs two endpoints");
      parts.edges.push_back({ends[0], ends[1]});
    }
  }
  const Json& caps = Field(json, "capacity");
  if (!caps.is_array()) Bad("capacity must be an array");
  for (const Json& c : caps) parts.capacity.push_back(CapacityFromJson(c));
  return parts;
}

}  // namespace

GameInstance InstanceFromJson(const Json& json) {
  return Parsing([&] {
    InstanceParts parts = ParseParts(json);
    const Json& list = Field(json, "commodities");
    if (!list.is_array()) Bad("commodities must be an array");
    std::vector<Commodity> commodities;
    for (const Json& c : list) {
      commodities.push_back({IntFrom(Field(c, "u"), "u"), IntFrom(Field(c, "v"), "v"),
                             RationalFromJson(Field(c, "d"))});
    }
    return GameInstance::Create(parts.n, parts.topology, std::move(parts.edges),
                                std::move(parts.capacity), std::move(commodities));
  });
}

Json SingleSinkToJson(const SingleSinkInstance& instance) {
  Json out = InstanceToJson(instance.base());
  out["sink"] = instance.sink();
  Json terminals = Json::array();
  for (const Terminal& t : instance.terminals()) {
    terminals.push_back({{"s", t.s}, {"d", RationalToJson(t.demand)}});
  }
  out["terminals"] = terminals;
  return out;
}

SingleSinkInstance SingleSinkFromJson(const Json& json) {
  return Parsing([&] {
    const NodeId sink = IntFrom(Field(json, "sink"), "sink");
    if (!json.contains("terminals")) {
      return SingleSinkInstance::FromGame(InstanceFromJson(json), sink);
    }
    InstanceParts parts = ParseParts(json);
    const Json& list = json.at("terminals");
    if (!list.is_array()) Bad("terminals must be an array");
    std::vector<Terminal> terminals;
    for (const Json& t : list) {
      terminals.push_back({IntFrom(Field(t, "s"), "s"), RationalFromJson(Field(t, "d"))});
    }
    SingleSinkInstance out =
        SingleSinkInstance::Create(parts.n, parts.topology, std::move(parts.edges),
                                   std::move(parts.capacity), sink, terminals);
    if (json.contains("commodities") &&
        InstanceToJson(InstanceFromJson(json))["commodities"] !=
            InstanceToJson(out.base())["commodities"]) {
      Bad("commodities disagree with terminals");
    }
    return out;
  });
}

Json FlowToJson(const GameInstance& instance, const Flow& flow) {
  Json out;
  if (flow.unique_path_mode()) {
    out["mode"] = "amounts";
    Json amounts = Json::array();
    for (int k = 0; k < flow.num_commodities(); ++k) {
      const Commodity& c = instance.commodity(k);
      amounts.push_back({{"u", c.u}, {"v", c.v}, {"f", RationalToJson(flow.amount(k))}});
    }
    out["amounts"] = amounts;
  } else {
    out["mode"] = "paths";
    Json paths = Json::array();
    for (const PathFlow& p : flow.paths()) {
      paths.push_back({{"nodes", p.nodes}, {"f", RationalToJson(p.amount)}});
    }
    out["paths"] = paths;
  }
  return out;
}

Flow FlowFromJson(const GameInstance& instance, const Json& json) {
  return Parsing([&] {
    const Json& mode = Field(json, "mode");
    Flow flow;
    if (mode == "amounts") {
      std::vector<Rational> amounts(instance.num_commodities(), Rational(0));
      std::vector<char> seen(instance.num_commodities(), 0);
      for (const Json& a : Field(json, "amounts")) {
        const auto k = instance.FindCommodity(IntFrom(Field(a, "u"), "u"),
                                              IntFrom(Field(a, "v"), "v"));
        if (!k) Bad("flow names a missing commodity: " + a.dump());
        if (seen[*k]++) Bad("commodity listed twice: " + a.dump());
        amounts[*k] = RationalFromJson(Field(a, "f"));
      }
      flow = Flow::FromAmounts(std::move(amounts));
    } else if (mode == "paths") {
      std::vector<PathFlow> paths;
      for (const Json& p : Field(json, "paths")) {
        std::vector<NodeId> nodes = NodeList(Field(p, "nodes"), "nodes");
        if (nodes.size() < 2) Bad("a flow path needs two nodes");
        const auto k = instance.FindCommodity(nodes.front(), nodes.back());
        if (!k) Bad("flow path joins no commodity: " + p.dump());
        paths.push_back({*k, std::move(nodes), RationalFromJson(Field(p, "f"))});
      }
      flow = Flow::FromPathsFor(instance, std::move(paths));
    } else {
      Bad("flow mode must be \"amounts\" or \"paths\"");
    }
    flow.Validate(instance);
    return flow;
  });
}

Json PayoffToJson(const PayoffVector& payoff) {
  Json out = Json::array();
  for (const Rational& x : payoff) out.push_back(RationalToJson(x));
  return out;
}

PayoffVector PayoffFromJson(const Json& json, int num_nodes) {
  return Parsing([&] {
    if (!json.is_array() || static_cast<int>(json.size()) != num_nodes) {
      Bad("payoff must be an array of " + std::to_string(num_nodes) + " values");
    }
    PayoffVector payoff(num_nodes);
    for (int v = 1; v <= num_nodes; ++v) payoff[v] = RationalFromJson(json[v - 1]);
    return payoff;
  });
}

Json OrderToJson(const IncorporationOrder& order) {
  return Json{{"start", order.start}, {"sequence", order.sequence}};
}

IncorporationOrder OrderFromJson(const Json& json) {
  return Parsing([&] {
    IncorporationOrder order;
    order.start = IntFrom(Field(json, "start"), "start");
    order.sequence = NodeList(Field(json, "sequence"), "sequence");
    return order;
  });
}

IncorporationOrder ParseOrder(const std::string& text) {
  std::vector<NodeId> nodes;
  std::string token;
  std::istringstream in(text);
  auto flush = [&] {
    if (token.empty()) Bad("empty node in order \"" + text + "\"");
    int v = 0;
    if (std::from_chars(token.data(), token.data() + token.size(), v).ptr !=
        token.data() + token.size()) {
      Bad("bad node \"" + token + "\" in order");
    }
    nodes.push_back(v);
    token.clear();
  };
  for (char ch : text) {
    if (ch == ';' || ch == ',') {
      flush();
    } else if (ch != ' ') {
      token += ch;
    }
  }
  flush();
  IncorporationOrder order;
  order.start = nodes.front();
  order.sequence.assign(nodes.begin() + 1, nodes.end());
  return order;
}

std::string TraceToJsonLines(const GameInstance& instance, const RoutingTrace& trace) {
  std::map<int, NodeId> joined;
  for (NodeId v = 1; v <= trace.incorporation_time.size(); ++v) {
    joined[trace.incorporation_time[v]] = v;
  }
  std::string out;
  for (const RoutingEvent& e : trace.events) {
    const Commodity& c = instance.commodity(e.commodity);
    const Json line{{"step", e.step},
                    {"incorporated", joined[e.incorporation_step]},
                    {"commodity", e.commodity},
                    {"u", c.u},
                    {"v", c.v},
                    {"amount", RationalToJson(e.amount)},
                    {"bottleneck", e.bottleneck}};
    out += line.dump() + "\n";
  }
  return out;
}

Json CertificateToJson(const GameInstance& instance, const Certificate& cert) {
  Json out;
  out["S"] = cert.coalition;
  out["Y"] = cert.YSet();
  out["W"] = cert.WSet();
  Json z = Json::object();
  for (const auto& [k, value] : cert.z) {
    z[CommodityKey(instance.commodity(k))] = RationalToJson(value);
  }
  out["z"] = z;
  out["binary"] = cert.IsBinary();
  if (!cert.IsBinary()) {
    out["y"] = NodeRationalMap(cert.y);
    out["w"] = NodeRationalMap(cert.w);
  }
  return out;
}

Certificate CertificateFromJson(const GameInstance& instance, const Json& json) {
  return Parsing([&] {
    const int n = instance.num_nodes();
    const std::vector<NodeId> coalition =
        NormalizeCoalition(NodeList(Field(json, "S"), "S"), n);
    Certificate cert;
    if (json.contains("y") || json.contains("w")) {
      cert.coalition = coalition;
      cert.y = NodeRationalMapFrom(Field(json, "y"), n);
      cert.w = NodeRationalMapFrom(Field(json, "w"), n);
      cert.z = ImpliedZ(instance, coalition, cert.y, cert.w);
    } else {
      cert = MakeBinaryCertificate(instance, coalition, NodeList(Field(json, "Y"), "Y"),
                                   NodeList(Field(json, "W"), "W"));
    }
    if (json.contains("z")) {
      const Json& z = json.at("z");
      if (!z.is_object()) Bad("z must be an object");
      cert.z.clear();
      for (const auto& [key, value] : z.items()) {
        cert.z[CommodityFromKey(instance, key)] = RationalFromJson(value);
      }
    }
    return cert;
  });
}

Json VerdictToJson(const GameInstance& instance, const CoreVerdict& verdict) {
  Json out;
  out["in_core"] = verdict.in_core;
  out["coalitions_checked"] = verdict.coalitions_checked;
  if (verdict.breakaway) {
    out["breakaway"] = {{"S", verdict.breakaway->coalition},
                        {"flow", FlowToJson(instance, verdict.breakaway->flow)},
                        {"margin", RationalToJson(verdict.breakaway->margin)}};
  }
  return out;
}

Json EcoreReportToJson(const EcoreReport& report) {
  Json out;
  out["samples"] = report.samples;
  out["seed"] = report.seed;
  out["distinct"] = report.distinct();
  out["sw"] = StatsToJson(report.sw);
  out["fairness"] = StatsToJson(report.fairness);
  out["lp_sw"] = RationalToJson(report.lp_sw);
  out["lp_sw_decimal"] = ToDecimal(report.lp_sw);
  out["lp_fairness"] = RationalToJson(report.lp_fairness);
  out["lp_fairness_decimal"] = ToDecimal(report.lp_fairness);
  out["eligible"] = report.eligible;
  out["audit_failures"] = report.audit_failures;
  Json records = Json::array();
  for (const EcoreRecord& r : report.records) {
    Json rec{{"payoff", PayoffToJson(r.payoff)},
             {"multiplicity", r.multiplicity},
             {"first_sample", r.first_sample},
             {"first_order", OrderToJson(r.first_order)},
             {"sw", RationalToJson(r.social_welfare)},
             {"fairness", RationalToJson(r.fairness)}};
    if (r.in_core) rec["in_core"] = *r.in_core;
    records.push_back(std::move(rec));
  }
  out["records"] = records;
  return out;
}

std::string EcoreCsvHeader() {
  return "C,distinct,sw_min,sw_mean,sw_max,lp_sw,fair_min,fair_mean,fair_max,lp_fair\n";
}

std::string EcoreCsvRow(const Rational& c, const EcoreReport& r) {
  std::string out = ToString(c) + "," + std::to_string(r.distinct());
  for (const Rational* x : {&r.sw.min, &r.sw.mean, &r.sw.max, &r.lp_sw, &r.fairness.min,
                            &r.fairness.mean, &r.fairness.max, &r.lp_fairness}) {
    out += "," + ToDecimal(*x);
  }
  return out + "\n";
}

std::string TimeMatrixCsv(const TimeMatrix& matrix) {
  std::string out = "position,time,avg,count\n";
  for (int pos = 1; pos <= matrix.n(); ++pos) {
    for (int time = 1; time <= matrix.n(); ++time) {
      const auto avg = matrix.average(pos, time);
      out += std::to_string(pos) + "," + std::to_string(time) + "," +
             (avg ? ToDecimal(*avg) : std::string()) + "," +
             std::to_string(matrix.count(pos, time)) + "\n";
    }
  }
  return out;
}

std::string CanonicalJson(const Json& json) { return json.dump(); }

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string HashHex(std::uint64_t hash) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

Json ArtifactHeader(std::optional<std::uint64_t> seed, const std::string& input_hash,
                    const Json& config) {
  Json out{{"tool", kToolName},
           {"version", kToolVersion},
           {"input_hash", input_hash},
           {"config", config}};
  if (seed) out["seed"] = *seed;
  return out;
}

std::string CsvHeaderLine(const Json& header) { return "# " + CanonicalJson(header) + "\n"; }

const Json& InstancePart(const Json& document) {
  if (document.is_object() && document.contains("instance")) return document.at("instance");
  return document;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Bad("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    Bad(path + ": " + e.what());
  }
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Bad("cannot write " + path);
  out << text;
  if (!out) Bad("cannot write " + path);
}

}  // namespace flowcore
