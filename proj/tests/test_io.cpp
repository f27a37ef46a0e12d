#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "lsm/error.hpp"
#include "lsm/io.hpp"

using namespace lsm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lsm_test_io";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& body) {
  const fs::path path = scratch(name);
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("reverse duplicate collapses to one edge", "[io]") {
  const auto g = io::read_edge_list(write_file("dup.txt", "0 1\n1 0\n"));
  CHECK(g.num_nodes() == 2);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0] == std::pair{0, 1});
  REQUIRE(g.warnings.size() == 1);
  CHECK(g.warnings[0].find("dup.txt:2") != std::string::npos);
  const Matrix a = g.adjacency();
  CHECK(a(0, 1) == 1.0);
  CHECK(a(1, 0) == 1.0);
}

TEST_CASE("self-loops are dropped with a warning", "[io]") {
  const auto g = io::read_edge_list(write_file("loop.txt", "# comment\n0 1\n3 3\n"));
  CHECK(g.num_nodes() == 2);
  CHECK(g.edges.size() == 1);
  REQUIRE(g.warnings.size() == 1);
  CHECK(g.warnings[0].find("loop.txt:3") != std::string::npos);
  CHECK(g.warnings[0].find("self-loop") != std::string::npos);
}

TEST_CASE("sparse ids are remapped densely in ascending order", "[io]") {
  const auto g = io::read_edge_list(write_file("sparse.txt", "% header\n100 7\n7 42\n"));
  CHECK(g.node_ids == std::vector<std::int64_t>{7, 42, 100});
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}});
  const auto h = io::read_edge_list(write_file("sparse2.txt", "5 6\n"), {1, 6});
  CHECK(h.node_ids == std::vector<std::int64_t>{1, 5, 6});
}

TEST_CASE("malformed lines report their line number", "[io]") {
  const auto expect_error = [](const std::string& body, const std::string& where) {
    const fs::path path = write_file("bad.txt", body);
    try {
      io::read_edge_list(path);
      FAIL("no error raised");
    } catch (const IngestError& e) {
      CHECK(std::string(e.what()).find(where) != std::string::npos);
    }
  };
  expect_error("0 1\n2\n", "bad.txt:2");
  expect_error("0 1\n1 x\n", "bad.txt:2");
  expect_error("0 1 2\n", "bad.txt:1");
  expect_error("0 1\n\n-3 1\n", "bad.txt:3");
  expect_error("# nodes 3\n0 5\n", "bad.txt:2");
  CHECK_THROWS_AS(io::read_edge_list(scratch("missing.txt")), IngestError);
}

TEST_CASE("instance round trip", "[io]") {
  ModelParams p;
  p.n = 40;
  p.d = 3;
  p.sigma = 0.25;
  const LsmInstance inst = generate(p, 77);
  const fs::path dir = scratch("inst");
  fs::remove_all(dir);
  io::write_instance(dir, inst);
  const LsmInstance back = io::read_instance(dir);
  CHECK(back.adjacency == inst.adjacency);
  CHECK(back.labels == inst.labels);
  CHECK(back.latents == inst.latents);
  CHECK(back.seed == 77);
  CHECK(back.params.n == 40);
  CHECK(back.params.d == 3);
  CHECK(back.params.sigma == 0.25);
  CHECK(back.params.kernel.name() == "sqexp");
}

TEST_CASE("isolated nodes survive a round trip", "[io]") {
  Matrix a = Matrix::Zero(5, 5);
  a(1, 2) = a(2, 1) = 1.0;
  const fs::path path = scratch("iso.txt");
  io::write_edge_list(path, a);
  CHECK(io::read_edge_list(path).adjacency() == a);
}

TEST_CASE("label files", "[io]") {
  const Labels y = io::read_labels(write_file("y.txt", "1\n-1\n+1\n# note\n-1\n"));
  CHECK(y.values() == std::vector<int>{1, -1, 1, -1});
  try {
    io::read_labels(write_file("ybad.txt", "1\n0\n"));
    FAIL("no error raised");
  } catch (const IngestError& e) {
    CHECK(std::string(e.what()).find("ybad.txt:2") != std::string::npos);
  }
  const fs::path out = scratch("yout.txt");
  io::write_labels(out, y);
  CHECK(io::read_labels(out) == y);
}
