#include "doctest.h"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "sixv/contfrac.hpp"
#include "sixv/edge_sampler.hpp"
#include "sixv/oracle.hpp"
#include "sixv/rng.hpp"

using namespace sixv;

TEST_SUITE("edge-sampler") {
  TEST_CASE("primitive draws have the documented shape and order") {
    CHECK_THROWS_AS([] { RandomStream r(1); return draw_primitives(0, r); }(),
                    std::invalid_argument);

    RandomStream rng(67);
    PrimitiveDraws p = draw_primitives(5, rng);
    CHECK(p.alpha.size() == 5);
    CHECK(p.beta.size() == 5);
    CHECK((p.eps0 == 1 || p.eps0 == -1));
    for (auto a : p.alpha) CHECK(a <= 1);
    for (auto b : p.beta) CHECK((b == 1 || b == -1));

    // consumption order: eps0, then (alpha_k, beta_k) pairs
    RandomStream replay(67);
    CHECK(p.eps0 == replay.fair_sign());
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(p.alpha[i] == (replay.bernoulli_third() ? 1 : 0));
      CHECK(p.beta[i] == replay.fair_sign());
    }
  }

  TEST_CASE("edge construction from a fixed record") {
    PrimitiveDraws p{1, {1, 0, 1}, {-1, 1, -1}};
    BuiltEdge e = build_edge(p);
    CHECK(e.a.to_string() == "++-");
    CHECK(e.b.to_string() == "-++");
    CHECK(!e.loop_sign.has_value());
    CHECK(classify_move(e.a, e.b) == EdgeLabel::PositiveMove);

    PrimitiveDraws loop{-1, {0, 0, 0}, {1, -1, 1}};
    BuiltEdge le = build_edge(loop);
    CHECK(le.a == le.b);
    CHECK(le.a.to_string() == "+-+");
    CHECK(le.loop_sign == -1);

    CHECK_THROWS_AS(build_edge(PrimitiveDraws{0, {1}, {1}}), std::invalid_argument);
    CHECK_THROWS_AS(build_edge(PrimitiveDraws{1, {1}, {1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(build_edge(PrimitiveDraws{1, {1}, {0}}), std::invalid_argument);
    CHECK_THROWS_AS(build_edge(PrimitiveDraws{1, {}, {}}), std::invalid_argument);
  }

  TEST_CASE("built edges are always edges and carry the base sign") {
    RandomStream rng(71);
    for (int trial = 0; trial < 500; ++trial) {
      auto k = static_cast<std::int64_t>(rng.uniform_index(80)) + 1;
      PrimitiveDraws p = draw_primitives(k, rng);
      BuiltEdge e = build_edge(p);
      bool any = false;
      for (auto a : p.alpha) any = any || a;
      if (!any) {
        CHECK(e.a == e.b);
        CHECK(e.loop_sign == p.eps0);
      } else {
        CHECK(!e.loop_sign.has_value());
        auto label = classify_move(e.a, e.b);
        REQUIRE(label.has_value());
        CHECK(*label == (p.eps0 == 1 ? EdgeLabel::PositiveMove : EdgeLabel::NegativeMove));
      }
    }
  }

  TEST_CASE("uniform edge draw hits every edge equally often") {
    std::int64_t k = 2;
    auto edges = oracle::enumerate_edges(k);
    REQUIRE(edges.size() == 18);
    std::map<oracle::LabeledEdge, std::size_t> index;
    for (const auto& e : edges) index[e] = index.size();

    int n = 90000;
    std::vector<std::int64_t> counts(edges.size(), 0);
    RandomStream rng(73);
    for (int s = 0; s < n; ++s) {
      auto [a, b, label] = sample_uniform_edge(k, rng);
      ++counts[index.at(oracle::LabeledEdge{a, b, label})];
    }
    std::vector<double> expected(edges.size(), 1.0 / static_cast<double>(edges.size()));
    auto r = oracle::chi_square(counts, expected, n);
    CHECK(r.df == 17);
    CHECK(r.p_value > 1e-6);
  }

  TEST_CASE("stationary vertex draw matches degree-proportional masses") {
    std::int64_t k = 2;
    // masses deg(a)/18: 4 for the constant vertices, 5 for the alternating
    std::map<std::string, double> expected{
        {"--", 4.0 / 18.0}, {"++", 4.0 / 18.0}, {"+-", 5.0 / 18.0}, {"-+", 5.0 / 18.0}};
    std::map<std::string, std::int64_t> counts;
    int n = 60000;
    RandomStream rng(79);
    for (int s = 0; s < n; ++s) counts[sample_stationary_vertex(k, rng).to_string()]++;

    std::vector<std::int64_t> obs;
    std::vector<double> exp;
    for (const auto& [key, prob] : expected) {
      obs.push_back(counts[key]);
      exp.push_back(prob);
    }
    auto r = oracle::chi_square(obs, exp, n);
    CHECK(r.p_value > 1e-6);

    // and the masses really are deg/(2*3^K)
    std::map<std::string, Rational> exact{{"--", Rational(2, 9)},
                                          {"++", Rational(2, 9)},
                                          {"+-", Rational(5, 18)},
                                          {"-+", Rational(5, 18)}};
    for (const auto& [key, mass] : exact) {
      auto bd = block_decomposition(Vertex::from_string(key));
      CHECK(Rational(degree_from_blocks(bd.m), 2 * pow3(k)) == mass);
    }
  }

  TEST_CASE("lazy infinite stream replays the finite construction") {
    std::int64_t k = 40;
    RandomStream finite_rng(83), lazy_rng(83);
    BuiltEdge e = build_edge(draw_primitives(k, finite_rng));

    InfiniteEdgeStream stream(lazy_rng);
    CHECK(stream.position() == 0);
    for (std::int64_t j = 1; j <= k; ++j) {
      auto c = stream.next();
      CHECK(c.a == e.a.digit(j));
      CHECK(c.b == e.b.digit(j));
    }
    CHECK(stream.position() == k);
    CHECK(((stream.step_sign() == 1) || (stream.step_sign() == -1)));

    RandomStream replay(83);
    CHECK(stream.step_sign() == replay.fair_sign());
  }
}
