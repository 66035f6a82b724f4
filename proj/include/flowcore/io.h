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

#ifndef FLOWCORE_IO_H_
#define FLOWCORE_IO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "flowcore/certificate.h"
#include "flowcore/empirical.h"
#include "flowcore/incorporate.h"
#include "flowcore/model.h"
#include "flowcore/singlesink.h"
#include "flowcore/verify.h"

namespace flowcore {

using Json = nlohmann::json;

inline constexpr char kToolName[] = "flowcore";
inline constexpr char kToolVersion[] = "1.0.0";

// Rationals are written as "p/q" (or "p") strings. Reading accepts such
// strings, decimal strings, JSON integers and JSON decimals; a JSON decimal
// is read exactly as its shortest round-trip decimal text.
Json RationalToJson(const Rational& value);
Rational RationalFromJson(const Json& json);

// "inf" for unbounded capacities.
Json CapacityToJson(const Capacity& capacity);
Capacity CapacityFromJson(const Json& json);

// {"n", "topology", "root"?, "edges"?, "capacity", "commodities"}.
// Every Error from parsing carries kind kIo; instance validation errors keep
// their own kind.
Json InstanceToJson(const GameInstance& instance);
GameInstance InstanceFromJson(const Json& json);

// The instance schema plus {"sink", "terminals": [{"s", "d"}]}. When
// "terminals" is present it defines the commodities.
Json SingleSinkToJson(const SingleSinkInstance& instance);
SingleSinkInstance SingleSinkFromJson(const Json& json);

// Unique-path flows: {"mode": "amounts", "amounts": [{"u", "v", "f"}]} with
// one entry per commodity. Path flows: {"mode": "paths", "paths":
// [{"nodes": [...], "f"}]}.
Json FlowToJson(const GameInstance& instance, const Flow& flow);
Flow FlowFromJson(const GameInstance& instance, const Json& json);

Json PayoffToJson(const PayoffVector& payoff);
PayoffVector PayoffFromJson(const Json& json, int num_nodes);

Json OrderToJson(const IncorporationOrder& order);
IncorporationOrder OrderFromJson(const Json& json);
// "r;a,b,c" as printed by ToString(IncorporationOrder), or "r,a,b,c".
IncorporationOrder ParseOrder(const std::string& text);

// One JSON object per routing event, newline separated.
std::string TraceToJsonLines(const GameInstance& instance, const RoutingTrace& trace);

// {"S", "Y", "W", "z": {"k-l": "p/q"}}, plus "y" and "w" node maps when the
// certificate is not binary.
Json CertificateToJson(const GameInstance& instance, const Certificate& cert);
Certificate CertificateFromJson(const GameInstance& instance, const Json& json);

// {"in_core", "breakaway"?: {"S", "flow", "margin"}, "coalitions_checked"}.
Json VerdictToJson(const GameInstance& instance, const CoreVerdict& verdict);

// Exact rationals with 6-place decimal renderings.
Json EcoreReportToJson(const EcoreReport& report);
std::string EcoreCsvHeader();
std::string EcoreCsvRow(const Rational& c, const EcoreReport& report);
std::string TimeMatrixCsv(const TimeMatrix& matrix);

// Sorted keys, no whitespace.
std::string CanonicalJson(const Json& json);
std::uint64_t Fnv1a64(std::string_view bytes);
std::string HashHex(std::uint64_t hash);

// {"tool", "version", "seed"?, "input_hash", "config"}.
Json ArtifactHeader(std::optional<std::uint64_t> seed, const std::string& input_hash,
                    const Json& config);
// The header as a CSV comment line.
std::string CsvHeaderLine(const Json& header);

// Instance documents may be bare or wrapped as {"header", "instance"}.
const Json& InstancePart(const Json& document);

// Throw Error(kIo) on failure.
Json ReadJsonFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace flowcore

#endif  // FLOWCORE_IO_H_
