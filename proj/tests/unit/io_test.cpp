#include <gtest/gtest.h>

#include "failover/constructions.hpp"
#include "failover/gadgets.hpp"
#include "failover/io.hpp"
#include "failover/minor.hpp"

namespace failover {
namespace {

Json reparse(const Json& doc) { return parse_json(dump(doc)); }

TEST(Io, GraphRoundTripKeepsRotationEndpointsAndFamilies) {
  for (const Gadget& k : {k4(), feigenbaum13(), counter_fig()}) {
    GraphDocument back = graph_from_json(reparse(graph_to_json(k.graph, k.families)));
    EXPECT_EQ(back.graph, k.graph) << k.name;
    EXPECT_EQ(back.families, k.families) << k.name;
  }
}

TEST(Io, DumpIsSortedAndNewlineTerminated) {
  const std::string text = dump(Json{{"b", 1}, {"a", {1, 2}}});
  EXPECT_EQ(text, "{\n  \"a\": [\n    1,\n    2\n  ],\n  \"b\": 1\n}\n");
}

TEST(Io, PatternRoundTripForEveryKind) {
  Gadget k = k4();
  const Graph& g = k.graph;
  std::vector<Pattern> patterns{
      Pattern(outerplanar_pattern(cycle(5).graph, 0)), target_removal_pattern(g, 3),
      two_hop_source_pattern(g, 0, 3), two_hop_id_pattern(g, 3), Pattern(compile_to_table(target_removal_pattern(g, 3), g))};
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const Graph& on = i == 0 ? cycle(5).graph : g;
    Pattern back = pattern_from_json(reparse(pattern_to_json(patterns[i], on)), on);
    EXPECT_EQ(back, patterns[i]) << i;
  }
}

TEST(Io, TraceRoundTrip) {
  Gadget c = counter_fig();
  RouteTrace t = route(c.graph, c.family("counter").front(), Pattern(counter_bounce_pattern(c.graph)), 2, 0);
  EXPECT_EQ(trace_from_json(reparse(trace_to_json(t))), t);
}

TEST(Io, CertificateRoundTrip) {
  Gadget k = k5();
  auto r = synthesize(k.graph, 4, FailureFamily::explicit_sets(k.graph.edge_count(), k.family("nok5"), "nok5"),
                      {false, std::nullopt, Pruning::Orbit});
  ASSERT_TRUE(r.certificate);
  UnsatCertificate back = certificate_from_json(reparse(certificate_to_json(*r.certificate)));
  EXPECT_EQ(back.graph, r.certificate->graph);
  EXPECT_EQ(back.family, r.certificate->family);
  EXPECT_EQ(back.refutations, r.certificate->refutations);
  EXPECT_EQ(back.pruning, Pruning::Orbit);
  EXPECT_EQ(back.family_name, "nok5");
  EXPECT_TRUE(replay(back));
}

TEST(Io, MalformedDocumentsNameTheProblem) {
  try {
    parse_json("{\n  \"n\": 3,\n  oops\n}", "doc.json");
    FAIL();
  } catch (const DocumentError& e) {
    EXPECT_NE(std::string(e.what()).find("doc.json:3"), std::string::npos) << e.what();
  }
  try {
    graph_from_json(Json{{"n", 2}, {"edges", {{0, 5}}}});
    FAIL();
  } catch (const DocumentError& e) {
    EXPECT_NE(std::string(e.what()).find("edges"), std::string::npos) << e.what();
  }
  EXPECT_THROW(graph_from_json(Json{{"edges", Json::array()}}), DocumentError);
  EXPECT_THROW(graph_from_json(Json{{"n", 2}, {"edges", {{0, 1}}}, {"extra", 1}}), DocumentError);
  EXPECT_NO_THROW(graph_from_json(Json{{"n", 2}, {"edges", {{0, 1}}}, {"extra", 1}}, {true}));
  EXPECT_THROW(graph_from_json(Json{{"n", 3}, {"edges", {{0, 1}, {1, 2}}}, {"rotation", {{1}, {0}, {1}}}}),
               DocumentError);
  EXPECT_THROW(read_file("/nonexistent/graph.json"), DocumentError);
}

TEST(Io, FailureListsParseEitherOrder) {
  Graph g = complete_graph(4);
  FailureSet f = parse_failures(g, "1-0,3-2");
  EXPECT_EQ(f, FailureSet::from_edges(g, {{0, 1}, {2, 3}}));
  EXPECT_EQ(format_failures(g, f), "0-1,2-3");
  EXPECT_TRUE(parse_failures(g, "").empty());
  EXPECT_THROW(parse_failures(g, "0-0"), DocumentError);
  EXPECT_THROW(parse_failures(g, "0_1"), DocumentError);
  EXPECT_THROW(parse_failures(g, "0-9"), DocumentError);
}

TEST(Io, DotMarksFailuresAndTrace) {
  Gadget c = counter_fig();
  const FailureSet& f = c.family("counter").front();
  RouteTrace t = route(c.graph, f, Pattern(counter_bounce_pattern(c.graph)), 2, 0);
  const std::string dot = to_dot(c.graph, &f, &t);
  EXPECT_EQ(dot.rfind("graph G {", 0), 0u);
  EXPECT_NE(dot.find("0 -- 3 [style=dashed, color=red]"), std::string::npos);
  EXPECT_NE(dot.find("0 -- 1 [penwidth=3]"), std::string::npos);
  EXPECT_NE(dot.find("0 [shape=doublecircle]"), std::string::npos);
}

TEST(Io, ReportJsonCarriesCounterexample) {
  Gadget k = k5();
  auto r = verify(k.graph, two_hop_id_pattern(k.graph, 4), 4, FailureFamily::all_subsets(k.graph));
  Json doc = report_to_json(r, k.graph);
  EXPECT_EQ(doc.at("verdict"), false);
  EXPECT_TRUE(doc.contains("counterexample"));
}

}  // namespace
}  // namespace failover
