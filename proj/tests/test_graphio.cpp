#include <doctest.h>

#include <sstream>

#include <graphwave/graphio.hpp>
#include <graphwave/graphs.hpp>

using namespace graphwave;

TEST_CASE("parse a tadpole spec")
{
    std::istringstream in(
        "# tadpole fixture\n"
        "vertex o nk\n"
        "edge loop o o 6.283185307179586\n"
        "edge tail o inf inf\n");
    auto g = parse_graph_stream(in);
    CHECK(g.vertices().size() == 1);
    CHECK(g.edges().size() == 2);
    CHECK(g.edge(0).is_loop());
    CHECK(g.edge(1).unbounded);
    CHECK(g.validate().ok());
}

TEST_CASE("parse vertex conditions")
{
    std::istringstream in(
        "vertex v1 delta -2.0\n"
        "vertex v2 deltaprime 0.5\n"
        "vertex v3 gk 1.0 2.0\n"
        "edge a v1 v2 1.0\n"
        "edge b v2 v3 2.0 nonlinear=0\n");
    auto g = parse_graph_stream(in);
    CHECK(g.vertex(0).condition.kind == ConditionKind::Delta);
    CHECK(g.vertex(0).condition.strength == -2.0);
    CHECK(g.vertex(1).condition.kind == ConditionKind::DeltaPrime);
    CHECK(g.vertex(2).condition.weights.size() == 2);
    CHECK_FALSE(g.edge(1).nonlinear);
}

TEST_CASE("parse errors carry line numbers")
{
    {
        std::istringstream in("vertex o nk\nedge e o o abc\n");
        try {
            parse_graph_stream(in);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
            CHECK(std::string(e.what()).find("length") != std::string::npos);
        }
    }
    {
        std::istringstream in("vertex o funky\n");
        CHECK_THROWS_AS(parse_graph_stream(in), ParseError);
    }
    {
        std::istringstream in("vertex o nk\nvertex o nk\n");
        try {
            parse_graph_stream(in);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
        }
    }
}

TEST_CASE("emit then parse reproduces the graph")
{
    MetricGraph g;
    g.add_vertex("a", VertexCondition::delta(-1.5));
    g.add_vertex("b", VertexCondition::delta_prime(0.25));
    g.add_edge("loop", "a", "a", 2.5);
    g.add_edge("mid", "a", "b", 1.25, false);
    g.add_half_line("ray", "b");

    std::ostringstream out;
    emit_graph(out, g);
    std::istringstream in(out.str());
    auto back = parse_graph_stream(in);

    REQUIRE(back.vertices().size() == g.vertices().size());
    REQUIRE(back.edges().size() == g.edges().size());
    for (size_t v = 0; v < g.vertices().size(); ++v) {
        CHECK(back.vertex(v).id == g.vertex(v).id);
        CHECK(back.vertex(v).condition.kind == g.vertex(v).condition.kind);
        CHECK(back.vertex(v).condition.strength == g.vertex(v).condition.strength);
    }
    for (size_t e = 0; e < g.edges().size(); ++e) {
        CHECK(back.edge(e).id == g.edge(e).id);
        CHECK(back.edge(e).length == g.edge(e).length);
        CHECK(back.edge(e).nonlinear == g.edge(e).nonlinear);
        CHECK(back.edge(e).unbounded == g.edge(e).unbounded);
    }

    // determinism: emitting the round-tripped graph gives identical bytes
    std::ostringstream out2;
    emit_graph(out2, back);
    CHECK(out.str() == out2.str());
}

TEST_CASE("function csv format")
{
    auto layout = GridLayout::make(make_interval(1.0), 0.5); // 64-interval floor
    auto f = sample_real(layout, [](int, double x) { return x; });
    std::ostringstream out;
    write_function_csv(out, f);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "edge,x,re,im");
    std::string first;
    std::getline(in, first);
    CHECK(first.substr(0, 4) == "seg,");
}
