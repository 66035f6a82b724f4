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

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <gtest/gtest.h>

#include "flowcore/certificate.h"
#include "flowcore/empirical.h"
#include "flowcore/error.h"
#include "flowcore/incorporate.h"
#include "tests/testing/generators.h"

namespace flowcore {
namespace {

using ::flowcore::testing::TwoBottleneckInstance;
using ::flowcore::testing::RandomFeasibleFlow;
using ::flowcore::testing::RandomGeneral;
using ::flowcore::testing::RandomInstanceOptions;
using ::flowcore::testing::RandomPath;
using ::flowcore::testing::RandomRational;
using ::flowcore::testing::RandomSingleSink;
using ::flowcore::testing::RandomSpider;
using ::flowcore::testing::Rng;

template <typename F>
ErrorKind KindOf(F body) {
  try {
    body();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kSolver;
}

void ExpectSameInstance(const GameInstance& a, const GameInstance& b) {
  ASSERT_EQ(a.num_nodes(), b.num_nodes());
  EXPECT_EQ(a.topology().kind, b.topology().kind);
  EXPECT_EQ(a.topology().root, b.topology().root);
  EXPECT_EQ(a.edges(), b.edges());
  for (NodeId v = 1; v <= a.num_nodes(); ++v) EXPECT_EQ(a.capacity(v), b.capacity(v));
  ASSERT_EQ(a.num_commodities(), b.num_commodities());
  for (int k = 0; k < a.num_commodities(); ++k) {
    EXPECT_EQ(a.commodity(k).u, b.commodity(k).u);
    EXPECT_EQ(a.commodity(k).v, b.commodity(k).v);
    EXPECT_EQ(a.commodity(k).demand, b.commodity(k).demand);
  }
}

TEST(RationalJsonTest, WritesCanonicalStrings) {
  EXPECT_EQ(RationalToJson(Frac(3, 6)), Json("1/2"));
  EXPECT_EQ(RationalToJson(Rational(-4)), Json("-4"));
  EXPECT_EQ(RationalToJson(Rational(0)), Json("0"));
}

TEST(RationalJsonTest, ReadsStringsIntegersAndDecimals) {
  EXPECT_EQ(RationalFromJson(Json("7/21")), Frac(1, 3));
  EXPECT_EQ(RationalFromJson(Json("2.25")), Frac(9, 4));
  EXPECT_EQ(RationalFromJson(Json(5)), Rational(5));
  EXPECT_EQ(RationalFromJson(Json(-5)), Rational(-5));
  EXPECT_EQ(RationalFromJson(Json(0.1)), Frac(1, 10));
  EXPECT_EQ(RationalFromJson(Json(2.5)), Frac(5, 2));
  EXPECT_EQ(RationalFromJson(Json::parse("18446744073709551615")),
            Rational("18446744073709551615"));
}

TEST(RationalJsonTest, RoundTripsRandomValues) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const Rational x = RandomRational(rng, -50, 50, 97);
    EXPECT_EQ(RationalFromJson(Json::parse(RationalToJson(x).dump())), x);
  }
}

TEST(RationalJsonTest, RejectsNonNumbers) {
  EXPECT_EQ(KindOf([] { RationalFromJson(Json("abc")); }), ErrorKind::kIo);
  EXPECT_EQ(KindOf([] { RationalFromJson(Json("1/0")); }), ErrorKind::kIo);
  EXPECT_EQ(KindOf([] { RationalFromJson(Json::array()); }), ErrorKind::kIo);
  EXPECT_EQ(KindOf([] { RationalFromJson(Json(true)); }), ErrorKind::kIo);
}

TEST(CapacityJsonTest, UnboundedIsInf) {
  EXPECT_EQ(CapacityToJson(Capacity::Unbounded()), Json("inf"));
  EXPECT_TRUE(CapacityFromJson(Json("inf")).unbounded());
  EXPECT_EQ(CapacityFromJson(Json("3/2")), Capacity(Frac(3, 2)));
}

TEST(InstanceJsonTest, ParsesHandWrittenPath) {
  const Json doc = Json::parse(R"({
    "n": 4, "topology": "path",
    "capacity": ["inf", 2, "2", "inf"],
    "commodities": [{"u": 1, "v": 3, "d": 2}, {"u": 2, "v": 4, "d": "2"},
                    {"u": 1, "v": 2, "d": 1}, {"u": 2, "v": 3, "d": 2},
                    {"u": 3, "v": 4, "d": 1}]})");
  ExpectSameInstance(InstanceFromJson(doc), TwoBottleneckInstance());
}

TEST(InstanceJsonTest, RoundTripsRandomInstances) {
  Rng rng(5);
  RandomInstanceOptions options;
  options.unbounded_prob = 0.2;
  for (int i = 0; i < 60; ++i) {
    const GameInstance g = i % 3 == 0   ? RandomPath(rng, options)
                           : i % 3 == 1 ? RandomSpider(rng, options)
                                        : RandomGeneral(rng, options, 2);
    const Json json = InstanceToJson(g);
    const GameInstance back = InstanceFromJson(Json::parse(json.dump()));
    ExpectSameInstance(g, back);
    EXPECT_EQ(CanonicalJson(InstanceToJson(back)), CanonicalJson(json));
  }
}

TEST(InstanceJsonTest, GeneratedGamesRoundTripByteEqual) {
  for (const GameModel model :
       {GameModel::kConstant, GameModel::kGaussianMarginal, GameModel::kRandomGraph}) {
    GameModelParams params;
    params.model = model;
    params.n = 12;
    params.c = Rational(5);
    params.d = Rational(3);
    params.seed = 17;
    const std::string text = CanonicalJson(InstanceToJson(Generate(params)));
    EXPECT_EQ(CanonicalJson(InstanceToJson(InstanceFromJson(Json::parse(text)))), text)
        << ToString(model);
  }
}

TEST(InstanceJsonTest, AcceptsWrappedDocuments) {
  const Json inner = InstanceToJson(TwoBottleneckInstance());
  const Json wrapped{{"header", {{"tool", "flowcore"}}}, {"instance", inner}};
  EXPECT_EQ(InstancePart(wrapped), inner);
  EXPECT_EQ(InstancePart(inner), inner);
}

TEST(InstanceJsonTest, ParseErrorsAreIo) {
  EXPECT_EQ(KindOf([] { InstanceFromJson(Json::parse(R"({"n": 3})")); }), ErrorKind::kIo);
  EXPECT_EQ(KindOf([] {
              InstanceFromJson(Json::parse(
                  R"({"n": 2, "topology": "torus", "capacity": [1, 1], "commodities": []})"));
            }),
            ErrorKind::kIo);
  EXPECT_EQ(KindOf([] {
              InstanceFromJson(Json::parse(
                  R"({"n": "two", "topology": "path", "capacity": [1, 1], "commodities": []})"));
            }),
            ErrorKind::kIo);
}

TEST(InstanceJsonTest, ValidationErrorsKeepTheirKind) {
  EXPECT_EQ(KindOf([] {
              InstanceFromJson(Json::parse(
                  R"({"n": 3, "topology": "path", "capacity": [1, 1],
                      "commodities": []})"));
            }),
            ErrorKind::kStructural);
}

TEST(SingleSinkJsonTest, RoundTripsRandomInstances) {
  Rng rng(8);
  RandomInstanceOptions options;
  for (int i = 0; i < 40; ++i) {
    const SingleSinkInstance g = RandomSingleSink(rng, options);
    const SingleSinkInstance back =
        SingleSinkFromJson(Json::parse(SingleSinkToJson(g).dump()));
    EXPECT_EQ(back.sink(), g.sink());
    ASSERT_EQ(back.num_terminals(), g.num_terminals());
    for (int t = 0; t < g.num_terminals(); ++t) {
      EXPECT_EQ(back.terminal(t).s, g.terminal(t).s);
      EXPECT_EQ(back.terminal(t).demand, g.terminal(t).demand);
    }
    ExpectSameInstance(g.base(), back.base());
  }
}

TEST(SingleSinkJsonTest, TerminalsDefineCommodities) {
  const SingleSinkInstance g = SingleSinkFromJson(Json::parse(R"({
    "n": 3, "topology": "path", "capacity": [1, 2, "inf"], "sink": 3,
    "terminals": [{"s": 1, "d": "1/2"}, {"s": 2, "d": 3}]})"));
  ASSERT_EQ(g.base().num_commodities(), 2);
  EXPECT_EQ(g.base().commodity(0).demand, Frac(1, 2));
  EXPECT_TRUE(g.base().commodity(1).Touches(3));
}

TEST(FlowJsonTest, AmountsRoundTrip) {
  Rng rng(21);
  RandomInstanceOptions options;
  for (int i = 0; i < 60; ++i) {
    const GameInstance g = i % 2 == 0 ? RandomPath(rng, options) : RandomSpider(rng, options);
    const Flow flow = RandomFeasibleFlow(rng, g);
    const Json json = FlowToJson(g, flow);
    EXPECT_EQ(json.at("mode"), "amounts");
    EXPECT_EQ(FlowFromJson(g, Json::parse(json.dump())), flow);
  }
}

TEST(FlowJsonTest, PathsRoundTripOnGeneralGraphs) {
  // A 4-cycle with two routes for commodity (1,3).
  const GameInstance g = GameInstance::Create(
      4, Topology::General(), {{1, 2}, {2, 3}, {3, 4}, {4, 1}},
      {Capacity(Rational(5)), Capacity(Rational(1)), Capacity(Rational(5)),
       Capacity(Rational(1))},
      {{1, 3, Rational(2)}});
  const Flow flow = Flow::FromPaths(
      1, {{0, {1, 2, 3}, Frac(1, 2)}, {0, {1, 4, 3}, Frac(3, 4)}});
  const Json json = FlowToJson(g, flow);
  EXPECT_EQ(json.at("mode"), "paths");
  const Flow back = FlowFromJson(g, Json::parse(json.dump()));
  EXPECT_EQ(back.amount(0), Frac(5, 4));
  EXPECT_EQ(CanonicalJson(FlowToJson(g, back)), CanonicalJson(json));
}

TEST(FlowJsonTest, RejectsFlowsThatDoNotFit) {
  const GameInstance g = TwoBottleneckInstance();
  EXPECT_EQ(KindOf([&] {
              FlowFromJson(g, Json::parse(R"({"mode": "amounts",
                                              "amounts": [{"u": 1, "v": 4, "f": 1}]})"));
            }),
            ErrorKind::kIo);
  EXPECT_EQ(KindOf([&] { FlowFromJson(g, Json::parse(R"({"mode": "rivers"})")); }),
            ErrorKind::kIo);
}

TEST(PayoffJsonTest, RoundTripAndLength) {
  PayoffVector payoff(3);
  payoff[1] = Frac(1, 2);
  payoff[2] = Rational(0);
  payoff[3] = Rational(7);
  EXPECT_EQ(PayoffFromJson(PayoffToJson(payoff), 3), payoff);
  EXPECT_EQ(KindOf([&] { PayoffFromJson(PayoffToJson(payoff), 4); }), ErrorKind::kIo);
}

TEST(OrderJsonTest, ParsesBothSeparators) {
  const IncorporationOrder expected{3, {2, 4, 1}};
  EXPECT_EQ(ParseOrder("3;2,4,1"), expected);
  EXPECT_EQ(ParseOrder("3,2,4,1"), expected);
  EXPECT_EQ(ParseOrder(" 3; 2, 4, 1"), expected);
  EXPECT_EQ(ParseOrder(ToString(expected)), expected);
  EXPECT_EQ(OrderFromJson(OrderToJson(expected)), expected);
}

TEST(OrderJsonTest, RejectsMalformedText) {
  EXPECT_EQ(KindOf([] { ParseOrder(""); }), ErrorKind::kIo);
  EXPECT_EQ(KindOf([] { ParseOrder("1;;2"); }), ErrorKind::kIo);
  EXPECT_EQ(KindOf([] { ParseOrder("1;x"); }), ErrorKind::kIo);
}

TEST(TraceJsonTest, OneLinePerEvent) {
  const GameInstance g = TwoBottleneckInstance();
  const IncorporateResult r = RunIncorporate(g, IncorporationOrder{2, {3, 1, 4}});
  const std::string text = TraceToJsonLines(g, r.trace);
  std::istringstream in(text);
  std::string line;
  size_t count = 0;
  Rational routed = 0;
  while (std::getline(in, line)) {
    const Json event = Json::parse(line);
    EXPECT_EQ(event.at("step"), count);
    routed += RationalFromJson(event.at("amount"));
    ++count;
  }
  EXPECT_EQ(count, r.trace.events.size());
  Rational total = 0;
  for (const Rational& f : r.flow.totals()) total += f;
  EXPECT_EQ(routed, total);
}

TEST(CertificateJsonTest, BinaryRoundTrip) {
  const GameInstance g = TwoBottleneckInstance();
  const Certificate cert = MakeBinaryCertificate(g, {2, 3}, {2}, {2, 3});
  const Json json = CertificateToJson(g, cert);
  EXPECT_TRUE(json.at("binary").get<bool>());
  EXPECT_FALSE(json.contains("y"));
  const Certificate back = CertificateFromJson(g, Json::parse(json.dump()));
  EXPECT_EQ(back.coalition, cert.coalition);
  EXPECT_EQ(back.y, cert.y);
  EXPECT_EQ(back.w, cert.w);
  EXPECT_EQ(back.z, cert.z);
}

TEST(CertificateJsonTest, FractionalRoundTrip) {
  const GameInstance g = TwoBottleneckInstance();
  Certificate cert = MakeBinaryCertificate(g, {1, 2, 3}, {2}, {1, 3});
  cert.y[2] = Frac(1, 2);
  cert.w[1] = Frac(1, 3);
  cert.z = ImpliedZ(g, cert.coalition, cert.y, cert.w);
  const Json json = CertificateToJson(g, cert);
  EXPECT_FALSE(json.at("binary").get<bool>());
  const Certificate back = CertificateFromJson(g, Json::parse(json.dump()));
  EXPECT_EQ(back.y, cert.y);
  EXPECT_EQ(back.w, cert.w);
  EXPECT_EQ(back.z, cert.z);
}

TEST(CertificateJsonTest, CertifiedCoalitionSurvivesSerialization) {
  const GameInstance g = TwoBottleneckInstance();
  const Flow flow = RunIncorporate(g, IncorporationOrder{1, {2, 3, 4}}).flow;
  const CertifyOutcome outcome = CertifyCoalition(g, flow, {2, 3});
  const auto* sourced = std::get_if<SourcedCertificate>(&outcome);
  ASSERT_NE(sourced, nullptr);
  const Certificate back =
      CertificateFromJson(g, Json::parse(CertificateToJson(g, sourced->certificate).dump()));
  EXPECT_TRUE(CheckCertificate(g, flow, back).passed);
}

TEST(HashTest, Fnv1aKnownVectors) {
  EXPECT_EQ(HashHex(Fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(HashHex(Fnv1a64("a")), "af63dc4c8601ec8c");
  EXPECT_EQ(HashHex(Fnv1a64("foobar")), "85944171f73967e8");
}

TEST(CanonicalJsonTest, KeyOrderAndWhitespaceDoNotMatter) {
  const Json a = Json::parse(R"({"b": 1, "a": {"y": [1, 2], "x": "s"}})");
  const Json b = Json::parse(R"({ "a" : { "x" : "s", "y" : [1,2] }, "b" : 1 })");
  EXPECT_EQ(CanonicalJson(a), CanonicalJson(b));
  EXPECT_EQ(CanonicalJson(a), R"({"a":{"x":"s","y":[1,2]},"b":1})");
}

TEST(ArtifactHeaderTest, CarriesToolVersionSeedAndHash) {
  const Json config{{"command", "sweep"}};
  const Json header = ArtifactHeader(42, "00ff", config);
  EXPECT_EQ(header.at("tool"), kToolName);
  EXPECT_EQ(header.at("version"), kToolVersion);
  EXPECT_EQ(header.at("seed"), 42);
  EXPECT_EQ(header.at("input_hash"), "00ff");
  EXPECT_EQ(header.at("config"), config);
  EXPECT_FALSE(ArtifactHeader(std::nullopt, "00ff", config).contains("seed"));
  const std::string line = CsvHeaderLine(header);
  EXPECT_EQ(line.rfind("# ", 0), 0u);
  EXPECT_EQ(Json::parse(line.substr(2)), header);
}

TEST(CsvTest, EcoreRowMatchesReport) {
  const GameInstance g = GenConstant(4, Rational(2), Rational(1));
  const EcoreReport report = RunEcore(g, 20, 3, {});
  const std::string header = EcoreCsvHeader();
  const std::string row = EcoreCsvRow(Rational(2), report);
  auto fields = [](const std::string& text) {
    std::vector<std::string> out;
    std::string cell;
    for (char ch : text) {
      if (ch == ',' || ch == '\n') {
        out.push_back(cell);
        cell.clear();
      } else {
        cell += ch;
      }
    }
    return out;
  };
  const std::vector<std::string> names = fields(header);
  const std::vector<std::string> cells = fields(row);
  ASSERT_EQ(names.size(), cells.size());
  EXPECT_EQ(names.front(), "C");
  EXPECT_EQ(cells[0], "2");
  EXPECT_EQ(std::stoll(cells[1]), report.distinct());
  EXPECT_NEAR(std::stod(cells[2]), ToDouble(report.sw.min), 1e-6);
  EXPECT_NEAR(std::stod(cells[5]), ToDouble(report.lp_sw), 1e-6);
}

TEST(CsvTest, TimeMatrixListsEveryCell) {
  TimeMatrix m(3);
  m.Add(1, 2, Rational(3));
  m.Add(1, 2, Rational(1));
  const std::string csv = TimeMatrixCsv(m);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "position,time,avg,count");
  int rows = 0;
  bool found = false;
  while (std::getline(in, line)) {
    ++rows;
    if (line.rfind("1,2,", 0) == 0) {
      EXPECT_EQ(line, "1,2,2.000000,2");
      found = true;
    }
  }
  EXPECT_EQ(rows, 9);
  EXPECT_TRUE(found);
}

TEST(FileTest, WriteThenRead) {
  const std::string path =
      (std::filesystem::temp_directory_path() / "flowcore_io_test.json").string();
  WriteTextFile(path, InstanceToJson(TwoBottleneckInstance()).dump());
  ExpectSameInstance(InstanceFromJson(ReadJsonFile(path)), TwoBottleneckInstance());
  std::remove(path.c_str());
}

TEST(FileTest, MissingAndMalformedFilesAreIo) {
  EXPECT_EQ(KindOf([] { ReadJsonFile("/nonexistent/flowcore.json"); }), ErrorKind::kIo);
  const std::string path =
      (std::filesystem::temp_directory_path() / "flowcore_io_bad.json").string();
  WriteTextFile(path, "{not json");
  EXPECT_EQ(KindOf([&] { ReadJsonFile(path); }), ErrorKind::kIo);
  std::remove(path.c_str());
  EXPECT_EQ(KindOf([] { WriteTextFile("/nonexistent/dir/out.txt", "x"); }), ErrorKind::kIo);
}

}  // namespace
}  // namespace flowcore
