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

// Command-line front end: flowcore <subcommand> [flags].

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "flowcore/certificate.h"
#include "flowcore/empirical.h"
#include "flowcore/error.h"
#include "flowcore/game_lp.h"
#include "flowcore/incorporate.h"
#include "flowcore/io.h"
#include "flowcore/singlesink.h"
#include "flowcore/verify.h"

namespace flowcore {
namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

// Thrown by commands to request a specific exit code after printing.
struct ExitCode {
  int code;
};

std::string Join(const std::vector<NodeId>& nodes, const char* sep = ",") {
  std::string out;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0) out += sep;
    out += std::to_string(nodes[i]);
  }
  return out;
}

std::string PayoffText(const PayoffVector& payoff) {
  std::string out = "(";
  bool first = true;
  for (const Rational& x : payoff) {
    if (!first) out += ",";
    out += ToString(x);
    first = false;
  }
  return out + ")";
}

std::vector<NodeId> ParseNodes(const std::string& text) {
  std::vector<NodeId> nodes;
  std::string token;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (token.empty()) throw Error(ErrorKind::kIo, "bad node list \"" + text + "\"");
      nodes.push_back(std::stoi(token));
      token.clear();
    } else if (ch != ' ') {
      token += ch;
    }
  }
  return nodes;
}

// "a:b:step" (inclusive) or "x,y,z".
std::vector<Rational> ParseGrid(const std::string& text) {
  std::vector<Rational> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::string token;
    for (char ch : text + ":") {
      if (ch == ':') {
        parts.push_back(token);
        token.clear();
      } else {
        token += ch;
      }
    }
    if (parts.size() != 3) throw Error(ErrorKind::kIo, "grid must be a:b:step");
    const Rational lo = ParseRational(parts[0]);
    const Rational hi = ParseRational(parts[1]);
    const Rational step = ParseRational(parts[2]);
    if (step <= 0) throw Error(ErrorKind::kIo, "grid step must be positive");
    for (Rational c = lo; c <= hi; c += step) out.push_back(c);
  } else {
    std::string token;
    for (char ch : text + ",") {
      if (ch == ',') {
        out.push_back(ParseRational(token));
        token.clear();
      } else {
        token += ch;
      }
    }
  }
  if (out.empty()) throw Error(ErrorKind::kIo, "empty grid");
  return out;
}

struct Artifact {
  Json header;
  void Print() const { std::cout << "config " << CanonicalJson(header) << "\n"; }
};

Artifact MakeArtifact(std::optional<std::uint64_t> seed, const Json& config,
                      const std::vector<const Json*>& inputs) {
  std::string bytes = CanonicalJson(config);
  for (const Json* input : inputs) bytes += CanonicalJson(*input);
  Artifact a{ArtifactHeader(seed, HashHex(Fnv1a64(bytes)), config)};
  a.Print();
  return a;
}

void Emit(const std::string& out, const Json& document) {
  const std::string text = document.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    WriteTextFile(out, text);
    std::cout << "wrote " << out << "\n";
  }
}

// A flow document may be a bare flow or any object holding one under "flow".
const Json& FlowPart(const Json& document) {
  if (document.is_object() && document.contains("flow") && !document.contains("mode")) {
    return document.at("flow");
  }
  return document;
}

// Accepts plain and single-sink instance documents.
GameInstance LoadGame(const Json& inst) {
  if (inst.is_object() && inst.contains("terminals")) return SingleSinkFromJson(inst).base();
  return InstanceFromJson(inst);
}

struct ModelFlags {
  std::string model = "constant";
  int n = 0;
  std::string c = "1";
  std::string d = "1";
  std::uint64_t seed = 0;

  void Add(CLI::App* app, bool required) {
    auto* m = app->add_option("--model", model, "constant, gaussian or random-graph");
    auto* nn = app->add_option("--n", n, "number of players");
    if (required) {
      m->required();
      nn->required();
    }
    app->add_option("--c", c, "capacity parameter C");
    app->add_option("--d", d, "demand parameter D");
    app->add_option("--seed", seed, "64-bit seed");
  }
  GameModelParams Params() const {
    GameModelParams p;
    p.model = ParseGameModel(model);
    p.n = n;
    p.c = ParseRational(c);
    p.d = ParseRational(d);
    p.seed = seed;
    return p;
  }
  Json ToJson() const {
    return Json{{"model", model}, {"n", n}, {"c", c}, {"d", d}, {"seed", seed}};
  }
};

}  // namespace

int Main(int argc, char** argv) {
  CLI::App app{"Multicommodity-flow coalition games: cores, certificates, "
               "fair flows and empirical-core experiments."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  std::function<void()> run;

  // gen
  ModelFlags gen_model;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "generate a game from a model");
  gen_model.Add(gen, true);
  gen->add_option("--out", gen_out, "instance file (stdout if omitted)");
  gen->callback([&] {
    run = [&] {
      const Json config{{"command", "gen"}, {"model", gen_model.ToJson()}};
      const Artifact a = MakeArtifact(gen_model.seed, config, {});
      const GameInstance g = Generate(gen_model.Params());
      Emit(gen_out, Json{{"header", a.header}, {"instance", InstanceToJson(g)}});
    };
  });

  // incorporate
  std::string inc_instance, inc_order, inc_out, inc_trace;
  std::uint64_t inc_seed = 0;
  CLI::App* inc = app.add_subcommand("incorporate", "run INCORPORATE on a path or spider");
  inc->add_option("--instance", inc_instance, "instance file")->required();
  inc->add_option("--order", inc_order, "order \"r;a,b,...\"; random if omitted");
  inc->add_option("--seed", inc_seed, "seed of the random order");
  inc->add_option("--trace", inc_trace, "write routing events as JSON lines");
  inc->add_option("--out", inc_out, "result file (stdout if omitted)");
  inc->callback([&] {
    run = [&] {
      const Json doc = ReadJsonFile(inc_instance);
      const Json& inst = InstancePart(doc);
      const Json config{{"command", "incorporate"}, {"instance", inc_instance},
                        {"order", inc_order}, {"seed", inc_seed}};
      const Artifact a = MakeArtifact(inc_seed, config, {&inst});
      const GameInstance g = LoadGame(inst);
      const IncorporationOrder order =
          inc_order.empty() ? RandomValidOrder(g, inc_seed) : ParseOrder(inc_order);
      const IncorporateResult result = RunIncorporate(g, order);
      const PayoffVector payoff = Payoff(g, result.flow);
      std::cout << "order " << ToString(order) << "\n";
      std::cout << "payoff " << PayoffText(payoff) << "\n";
      std::cout << "social_welfare " << ToString(SocialWelfare(payoff)) << "\n";
      if (!inc_trace.empty()) {
        WriteTextFile(inc_trace, TraceToJsonLines(g, result.trace));
        std::cout << "wrote " << inc_trace << "\n";
      }
      Emit(inc_out, Json{{"header", a.header},
                         {"order", OrderToJson(order)},
                         {"flow", FlowToJson(g, result.flow)},
                         {"payoff", PayoffToJson(payoff)},
                         {"social_welfare", RationalToJson(SocialWelfare(payoff))},
                         {"fairness", RationalToJson(
                                          Fairness(payoff, g.DemandIncidentNodes()))}});
    };
  });

  // verify
  std::string ver_instance, ver_flow, ver_payoff, ver_approx, ver_out;
  bool ver_expect = false;
  bool ver_no_prefilter = false;
  int ver_threads = 0;
  CLI::App* ver = app.add_subcommand("verify", "decide core membership");
  ver->add_option("--instance", ver_instance, "instance file")->required();
  auto* ver_flow_opt = ver->add_option("--flow", ver_flow, "flow file");
  auto* ver_payoff_opt = ver->add_option("--payoff", ver_payoff, "payoff file");
  ver_flow_opt->excludes(ver_payoff_opt);
  ver->add_option("--approx", ver_approx, "check the approximate core for factor rho");
  ver->add_flag("--expect-core", ver_expect, "exit 1 unless in the core");
  ver->add_flag("--no-prefilter", ver_no_prefilter, "always solve the deviation LP");
  ver->add_option("--threads", ver_threads, "worker threads (0: automatic)");
  ver->add_option("--out", ver_out, "verdict file");
  ver->callback([&] {
    run = [&] {
      if (ver_flow.empty() == ver_payoff.empty()) {
        throw Error(ErrorKind::kIo, "give exactly one of --flow and --payoff");
      }
      const Json doc = ReadJsonFile(ver_instance);
      const Json& inst = InstancePart(doc);
      const Json input = ReadJsonFile(ver_flow.empty() ? ver_payoff : ver_flow);
      const Json config{{"command", "verify"}, {"instance", ver_instance},
                        {"flow", ver_flow}, {"payoff", ver_payoff},
                        {"approx", ver_approx}, {"prefilter", !ver_no_prefilter},
                        {"threads", ver_threads}};
      const Artifact a = MakeArtifact(std::nullopt, config, {&inst, &input});
      const GameInstance g = LoadGame(inst);
      PayoffVector payoff;
      if (!ver_flow.empty()) {
        const Flow flow = FlowFromJson(g, FlowPart(input));
        const FeasibilityReport feasible = CheckFeasibility(g, flow);
        if (!feasible.feasible) {
          throw Error(ErrorKind::kStructural,
                      "flow is infeasible: " + feasible.first_violation->Describe());
        }
        payoff = Payoff(g, flow);
      } else {
        payoff = PayoffFromJson(
            input.is_object() ? input.at("payoff") : input, g.num_nodes());
      }
      VerifyOptions options;
      options.threads = ver_threads;
      options.prefilter = !ver_no_prefilter;
      const CoreVerdict verdict =
          ver_approx.empty()
              ? VerifyCore(g, payoff, options)
              : VerifyApproxCore(g, payoff, ParseRational(ver_approx), options);
      std::cout << "payoff " << PayoffText(payoff) << "\n";
      std::cout << "in_core=" << (verdict.in_core ? "true" : "false") << "\n";
      if (verdict.breakaway) {
        std::cout << "breakaway=" << Join(verdict.breakaway->coalition)
                  << " margin=" << ToString(verdict.breakaway->margin) << "\n";
      }
      if (!ver_out.empty()) {
        Emit(ver_out, Json{{"header", a.header}, {"verdict", VerdictToJson(g, verdict)}});
      }
      if (ver_expect && !verdict.in_core) throw ExitCode{kExitDomain};
    };
  });

  // certify
  std::string cer_instance, cer_flow, cer_coalition, cer_out;
  CLI::App* cer = app.add_subcommand("certify", "certify a coalition or find its deviation");
  cer->add_option("--instance", cer_instance, "instance file")->required();
  cer->add_option("--flow", cer_flow, "flow file")->required();
  cer->add_option("--coalition", cer_coalition, "nodes, e.g. 2,3")->required();
  cer->add_option("--out", cer_out, "certificate or witness file");
  cer->callback([&] {
    run = [&] {
      const Json doc = ReadJsonFile(cer_instance);
      const Json& inst = InstancePart(doc);
      const Json input = ReadJsonFile(cer_flow);
      const Json config{{"command", "certify"}, {"instance", cer_instance},
                        {"flow", cer_flow}, {"coalition", cer_coalition}};
      const Artifact a = MakeArtifact(std::nullopt, config, {&inst, &input});
      const GameInstance g = LoadGame(inst);
      const Flow flow = FlowFromJson(g, FlowPart(input));
      const CertifyOutcome outcome = CertifyCoalition(g, flow, ParseNodes(cer_coalition));
      Json result{{"header", a.header}};
      if (const auto* cert = std::get_if<SourcedCertificate>(&outcome)) {
        std::cout << "certified source=" << ToString(cert->source)
                  << " Y=" << Join(cert->certificate.YSet())
                  << " W=" << Join(cert->certificate.WSet()) << "\n";
        result["source"] = ToString(cert->source);
        result["certificate"] = CertificateToJson(g, cert->certificate);
      } else {
        const auto& witness = std::get<DeviationWitness>(outcome);
        std::cout << "deviation margin=" << ToString(witness.margin) << " payoff "
                  << PayoffText(Payoff(g, witness.flow)) << "\n";
        result["deviation"] = {{"S", witness.coalition},
                               {"flow", FlowToJson(g, witness.flow)},
                               {"margin", RationalToJson(witness.margin)}};
      }
      if (!cer_out.empty()) Emit(cer_out, result);
    };
  });

  // sweep
  ModelFlags swp_model;
  std::string swp_grid, swp_out, swp_report;
  std::int64_t swp_samples = 2000;
  bool swp_audit = false;
  int swp_threads = 0;
  CLI::App* swp = app.add_subcommand("sweep", "empirical core over a grid of C values");
  swp_model.Add(swp, true);
  swp->add_option("--c-grid", swp_grid, "a:b:step or a list x,y,z")->required();
  swp->add_option("--samples", swp_samples, "orders sampled per grid point");
  swp->add_flag("--audit", swp_audit, "verify every distinct vector");
  swp->add_option("--threads", swp_threads, "worker threads (0: automatic)");
  swp->add_option("--out", swp_out, "ecore.csv")->required();
  swp->add_option("--report", swp_report, "full JSON report");
  swp->callback([&] {
    run = [&] {
      const Json config{{"command", "sweep"}, {"model", swp_model.ToJson()},
                        {"c_grid", swp_grid}, {"samples", swp_samples},
                        {"audit", swp_audit}, {"threads", swp_threads}};
      const Artifact a = MakeArtifact(swp_model.seed, config, {});
      std::string csv = CsvHeaderLine(a.header) + EcoreCsvHeader();
      Json reports = Json::array();
      EcoreOptions options;
      options.audit = swp_audit;
      options.threads = swp_threads;
      std::int64_t failures = 0;
      for (const Rational& c : ParseGrid(swp_grid)) {
        GameModelParams params = swp_model.Params();
        params.c = c;
        const EcoreReport report =
            RunEcore(Generate(params), swp_samples, swp_model.seed, options);
        failures += report.audit_failures;
        const std::string row = EcoreCsvRow(c, report);
        std::cout << row;
        csv += row;
        if (!swp_report.empty()) {
          Json r = EcoreReportToJson(report);
          r["C"] = RationalToJson(c);
          reports.push_back(std::move(r));
        }
      }
      WriteTextFile(swp_out, csv);
      std::cout << "wrote " << swp_out << "\n";
      if (!swp_report.empty()) {
        Emit(swp_report, Json{{"header", a.header}, {"reports", reports}});
      }
      if (failures > 0) {
        std::cout << "audit failures " << failures << "\n";
        throw ExitCode{kExitDomain};
      }
    };
  });

  // timematrix
  ModelFlags tm_model;
  std::string tm_instance, tm_out;
  std::int64_t tm_samples = 5000;
  std::uint64_t tm_seed = 0;
  int tm_threads = 0;
  CLI::App* tm = app.add_subcommand("timematrix", "average payoff by position and join time");
  tm_model.Add(tm, false);
  tm->add_option("--instance", tm_instance, "instance file instead of a model");
  tm->add_option("--samples", tm_samples, "orders sampled");
  tm->add_option("--order-seed", tm_seed, "seed of the sampled orders (default: --seed)");
  tm->add_option("--threads", tm_threads, "worker threads (0: automatic)");
  tm->add_option("--out", tm_out, "timematrix.csv")->required();
  tm->callback([&] {
    run = [&] {
      const std::uint64_t seed = tm->count("--order-seed") ? tm_seed : tm_model.seed;
      Json config{{"command", "timematrix"}, {"samples", tm_samples},
                  {"order_seed", seed}, {"threads", tm_threads}};
      Json inst;
      GameInstance g;
      if (!tm_instance.empty()) {
        const Json doc = ReadJsonFile(tm_instance);
        inst = InstancePart(doc);
        config["instance"] = tm_instance;
        g = LoadGame(inst);
      } else {
        if (tm_model.n == 0) throw Error(ErrorKind::kIo, "give --instance or --model/--n");
        config["model"] = tm_model.ToJson();
        g = Generate(tm_model.Params());
      }
      const Artifact a = MakeArtifact(seed, config, {&inst});
      const TimeMatrix matrix = ComputeTimeMatrix(g, tm_samples, seed, tm_threads);
      WriteTextFile(tm_out, CsvHeaderLine(a.header) + TimeMatrixCsv(matrix));
      std::cout << "wrote " << tm_out << "\n";
    };
  });

  // singlesink
  std::string ss_instance, ss_out;
  int ss_sink = 0;
  CLI::App* ss = app.add_subcommand("singlesink", "fair core flow of a single-sink game");
  ss->add_option("--instance", ss_instance, "single-sink instance file")->required();
  ss->add_option("--sink", ss_sink, "sink node when the file has none");
  ss->add_option("--out", ss_out, "result file");
  ss->callback([&] {
    run = [&] {
      const Json doc = ReadJsonFile(ss_instance);
      Json inst = InstancePart(doc);
      if (ss_sink > 0) inst["sink"] = ss_sink;
      const Json config{{"command", "singlesink"}, {"instance", ss_instance},
                        {"sink", ss_sink}};
      const Artifact a = MakeArtifact(std::nullopt, config, {&inst});
      const SingleSinkInstance g = SingleSinkFromJson(inst);
      const FairCoreFlowResult r = FairCoreFlow(g);
      Rational total = 0;
      Json x = Json::array();
      for (const Rational& xi : r.x) {
        total += xi;
        x.push_back(RationalToJson(xi));
      }
      const bool core = CoreCheckSingleSink(g, r.flow);
      std::cout << "tau " << ToString(r.tau) << "\n";
      std::cout << "throughput " << ToString(total) << "\n";
      std::cout << "core_check " << (core ? "true" : "false") << "\n";
      std::cout << "lp_checked " << (r.lp_checked ? "true" : "false") << "\n";
      if (!ss_out.empty()) {
        Emit(ss_out, Json{{"header", a.header},
                          {"tau", RationalToJson(r.tau)},
                          {"x", x},
                          {"flow", FlowToJson(g.base(), r.flow)},
                          {"payoff", PayoffToJson(Payoff(g.base(), r.flow))},
                          {"core_check", core},
                          {"lp_checked", r.lp_checked}});
      }
    };
  });

  // bicriteria
  std::string bi_instance, bi_lambda, bi_fair, bi_out;
  int bi_sink = 0;
  bool bi_verify = false;
  int bi_threads = 0;
  CLI::App* bi = app.add_subcommand("bicriteria", "approximate-core flow with a fairness floor");
  bi->add_option("--instance", bi_instance, "instance file")->required();
  bi->add_option("--lambda", bi_lambda, "weight of the fair flow in (0,1)")->required();
  bi->add_option("--fair-flow", bi_fair, "fair flow file (default: fairness LP optimum)");
  bi->add_option("--sink", bi_sink, "use the single-sink fair core flow for the core part");
  bi->add_flag("--verify", bi_verify, "check the approximate core with rho = 1/(1-lambda)");
  bi->add_option("--threads", bi_threads, "worker threads (0: automatic)");
  bi->add_option("--out", bi_out, "result file");
  bi->callback([&] {
    run = [&] {
      const Json doc = ReadJsonFile(bi_instance);
      const Json& inst = InstancePart(doc);
      Json fair_doc;
      if (!bi_fair.empty()) fair_doc = ReadJsonFile(bi_fair);
      const Json config{{"command", "bicriteria"}, {"instance", bi_instance},
                        {"lambda", bi_lambda}, {"fair_flow", bi_fair},
                        {"sink", bi_sink}, {"verify", bi_verify}};
      const Artifact a = MakeArtifact(std::nullopt, config, {&inst, &fair_doc});
      const GameInstance g = LoadGame(inst);
      const Rational lambda = ParseRational(bi_lambda);
      const FairnessResult lp = FairnessLp(g);
      const Flow fair = bi_fair.empty() ? lp.witness : FlowFromJson(g, FlowPart(fair_doc));
      const CoreAlgorithm algorithm =
          bi_sink > 0 ? FairCoreFlowAlgorithm(bi_sink) : IncorporateCoreAlgorithm();
      const BicriteriaResult r = Bicriteria(g, lambda, algorithm, fair);
      const Rational fairness = Fairness(r.payoff, lp.eligible);
      const Rational rho = 1 / (1 - lambda);
      std::cout << "payoff " << PayoffText(r.payoff) << "\n";
      std::cout << "fairness " << ToString(fairness) << " (lp " << ToString(lp.tau)
                << ", floor " << ToString(lambda * lp.tau) << ")\n";
      std::cout << "social_welfare " << ToString(SocialWelfare(r.payoff)) << "\n";
      std::cout << "rho " << ToString(rho) << "\n";
      Json result{{"header", a.header},
                  {"flow", FlowToJson(g, r.flow)},
                  {"payoff", PayoffToJson(r.payoff)},
                  {"fairness", RationalToJson(fairness)},
                  {"lp_fairness", RationalToJson(lp.tau)},
                  {"rho", RationalToJson(rho)}};
      if (bi_verify) {
        VerifyOptions options;
        options.threads = bi_threads;
        const CoreVerdict v = VerifyApproxCore(g, r.payoff, rho, options);
        std::cout << "approx_core=" << (v.in_core ? "true" : "false") << "\n";
        result["approx_core"] = VerdictToJson(g, v);
      }
      if (!bi_out.empty()) Emit(bi_out, result);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  try {
    run();
  } catch (const ExitCode& e) {
    return e.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::kIo ? kExitUsage : kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}

}  // namespace flowcore

int main(int argc, char** argv) { return flowcore::Main(argc, argv); }
