#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "grouplim/error.hpp"
#include "grouplim/json_io.hpp"
#include "oracles.hpp"

namespace gl = grouplim;
namespace io = grouplim::io;
using io::json;
using gl::Complex;
using gl::DenseFn;
using gl::Elem;
using gl::GroupSpec;
using gl::SparseFn;

TEST(JsonGroup, Forms) {
  EXPECT_EQ(io::group_from_json(json::parse(R"({"moduli":[0,4]})")), GroupSpec({0, 4}));
  EXPECT_EQ(io::group_from_json(json::parse("[3,5]")), GroupSpec({3, 5}));
  EXPECT_EQ(io::to_json(GroupSpec({2, 0})).dump(), R"({"moduli":[2,0]})");
  EXPECT_THROW(io::group_from_json(json::parse(R"({"moduli":[2.5]})")), gl::ValidationError);
  EXPECT_THROW(io::group_from_json(json::parse(R"({"mod":[2]})")), gl::ValidationError);
  EXPECT_THROW(io::group_from_json(json::parse(R"({"moduli":[-1]})")), gl::ValidationError);
}

TEST(JsonElem, ReducedAndChecked) {
  const GroupSpec G({0, 4});
  EXPECT_EQ(io::elem_from_json(json::parse("[-3,7]"), G), (Elem{-3, 3}));
  EXPECT_EQ(io::elem_from_json(json::parse("5"), GroupSpec({3})), Elem{2});
  EXPECT_THROW(io::elem_from_json(json::parse("[1]"), G), gl::ValidationError);
  EXPECT_EQ(io::to_json(Elem{1, 2}).dump(), "[1,2]");
}

TEST(JsonDense, AcceptsValueShapes) {
  const auto f = io::dense_from_json(json::parse(R"({"group":{"moduli":[3]},"values":[0.5,[1,-2],{"re":3}]})"));
  EXPECT_EQ(f[0], Complex(0.5, 0));
  EXPECT_EQ(f[1], Complex(1, -2));
  EXPECT_EQ(f[2], Complex(3, 0));
  EXPECT_THROW(io::dense_from_json(json::parse(R"({"group":{"moduli":[3]},"values":[1,2]})")), gl::ValidationError);
  EXPECT_THROW(io::dense_from_json(json::parse(R"({"group":{"moduli":[2]},"values":["a",1]})")), gl::ValidationError);
  EXPECT_THROW(io::dense_from_json(json::parse(R"({"values":[1]})")), gl::ValidationError);
}

TEST(JsonDense, RoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  const auto f = oracle::random_complex(GroupSpec({2, 5}), rng);
  const auto g = io::dense_from_json(json::parse(io::to_json(f).dump()));
  EXPECT_EQ(g.group(), f.group());
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(g[i], f[i]);
  // Awkward doubles survive formatting too.
  const auto h = DenseFn::from_real(GroupSpec({3}), std::vector<double>{0.1, 1.0 / 3.0, 5e-324});
  const auto back = io::dense_from_json(json::parse(io::to_json(h).dump(2)));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(back[i], h[i]);
}

TEST(JsonSparse, RoundTrip) {
  SparseFn f(GroupSpec({0, 6}));
  f.set(Elem{-2, 1}, Complex(0.25, -0.125));
  f.set(Elem{7, 5}, 1.0 / 7.0);
  f.set_declared_l2(1.5);
  const auto j = io::to_json(f);
  EXPECT_TRUE(io::is_sparse_json(j));
  const auto g = io::sparse_from_json(json::parse(j.dump()));
  EXPECT_TRUE(g == f);
  EXPECT_EQ(g.declared_l2(), std::optional<double>(1.5));
  SparseFn plain(GroupSpec({5}));
  plain.set(Elem{1}, 1.0);
  EXPECT_FALSE(io::to_json(plain).contains("l2"));
  EXPECT_FALSE(io::sparse_from_json(io::to_json(plain)).declared_l2());
}

TEST(JsonSparse, Validation) {
  EXPECT_THROW(io::sparse_from_json(json::parse(
                   R"({"group":{"moduli":[5]},"entries":[{"elem":[1],"re":1},{"elem":[6],"re":2}]})")),
               gl::ValidationError);
  EXPECT_THROW(io::sparse_from_json(json::parse(R"({"group":{"moduli":[5]},"entries":[{"elem":[1]}]})")),
               gl::ValidationError);
  EXPECT_FALSE(io::is_sparse_json(json::parse(R"({"group":[5],"values":[1,2,3,4,5]})")));
}

TEST(JsonConfig, FormsAndBuiltins) {
  const auto L = io::config_from_json(json::parse(R"({"forms":[[1,0],[1,1],[1,2]],"name":"mine"})"));
  EXPECT_EQ(L.size(), 3u);
  EXPECT_EQ(L.name(), "mine");
  EXPECT_EQ(io::config_from_json(json("parallelogram")).size(), 4u);
  EXPECT_THROW(io::config_from_json(json::parse(R"({"forms":[[1,0],[1]]})")), gl::ValidationError);
  EXPECT_THROW(io::config_from_json(json::parse(R"({"forms":[1,2]})")), gl::ValidationError);
  EXPECT_THROW(io::config_from_json(json("nonsense")), gl::ValidationError);
}

TEST(JsonGraph, Parse) {
  const auto H = io::graph_from_json(json::parse(R"({"n":4,"edges":[[0,1],[1,2],[2,3],[3,0]]})"));
  EXPECT_EQ(H.vertex_count(), 4u);
  EXPECT_EQ(H.edges().size(), 4u);
  EXPECT_THROW(io::graph_from_json(json::parse(R"({"n":2,"edges":[[0,1,2]]})")), gl::ValidationError);
  EXPECT_THROW(io::graph_from_json(json::parse(R"({"n":2,"edges":[[0,-1]]})")), gl::ValidationError);
  EXPECT_THROW(io::graph_from_json(json::parse(R"({"n":2,"edges":[[0,2]]})")), gl::ValidationError);
}

TEST(JsonOut, Bracket) {
  gl::DistBracket b;
  b.lo = 0.25;
  b.hi = 1.0 / 3.0;
  b.witness = gl::PartialIso{{{Elem{1}, Elem{1, 0}}}, 3};
  const auto j = io::to_json(b);
  EXPECT_EQ(j.at("lo"), 0.25);
  EXPECT_EQ(j.at("hi").get<double>(), 1.0 / 3.0);
  EXPECT_EQ(j.at("exact"), false);
  EXPECT_EQ(j.at("witness").at("weight"), 3);
  EXPECT_EQ(j.at("witness").at("pairs").dump(), "[[[1],[1,0]]]");
  b.witness.reset();
  EXPECT_TRUE(io::to_json(b).at("witness").is_null());
}

TEST(JsonFile, Errors) {
  EXPECT_THROW(io::read_file("/nonexistent/file.json"), gl::ValidationError);
  const std::string path = testing::TempDir() + "grouplim_bad.json";
  {
    std::ofstream out(path);
    out << "{not json";
  }
  EXPECT_THROW(io::read_file(path), gl::ValidationError);
  {
    std::ofstream out(path);
    out << R"({"moduli":[7]})";
  }
  EXPECT_EQ(io::group_from_json(io::read_file(path)), GroupSpec({7}));
  std::remove(path.c_str());
}
