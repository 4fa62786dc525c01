#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "failover/forwarding.hpp"
#include "failover/graph.hpp"
#include "failover/resilience.hpp"
#include "failover/routing.hpp"
#include "failover/synthesis.hpp"

namespace failover {

using Json = nlohmann::json;

// Malformed document; the message names the line (for syntax errors) or the field path.
class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParseOptions {
  bool permissive = false;  // accept unknown fields
};

using FamilyMap = std::map<std::string, std::vector<FailureSet>>;

struct GraphDocument {
  Graph graph;
  FamilyMap families;
};

Json parse_json(const std::string& text, const std::string& origin = "<input>");
// Two-space indentation, sorted keys, trailing newline.
std::string dump(const Json& doc);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

Json graph_to_json(const Graph& g, const FamilyMap& families = {});
GraphDocument graph_from_json(const Json& doc, ParseOptions options = {});

Json failure_set_to_json(const Graph& g, const FailureSet& f);
FailureSet failure_set_from_json(const Graph& g, const Json& doc, const std::string& where = "failures");

Json pattern_to_json(const Pattern& p, const Graph& g);
Pattern pattern_from_json(const Json& doc, const Graph& g, ParseOptions options = {});

Json trace_to_json(const RouteTrace& t);
RouteTrace trace_from_json(const Json& doc, ParseOptions options = {});

Json report_to_json(const ResilienceReport& r, const Graph& g);
Json stats_to_json(const SynthesisStats& s);
Json synthesis_to_json(const SynthesisResult& r);

Json certificate_to_json(const UnsatCertificate& c);
UnsatCertificate certificate_from_json(const Json& doc, ParseOptions options = {});

// "u-v,u-v" with either endpoint order; empty string = no failures.
FailureSet parse_failures(const Graph& g, const std::string& text);
std::string format_failures(const Graph& g, const FailureSet& f);

// Failed links dashed, links on the trace bold.
std::string to_dot(const Graph& g, const FailureSet* failures = nullptr, const RouteTrace* trace = nullptr);

}  // namespace failover
