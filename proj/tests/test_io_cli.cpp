#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "qgd/cli.hpp"
#include "qgd/io.hpp"
#include "qgd/lowerbound.hpp"

using namespace qgd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qgd_test_" + std::to_string(std::rand()) +
            std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& sub = "") const {
    return (sub.empty() ? path : path / sub).string();
  }
};

std::string strip_timestamp(std::string text) {
  auto pos = text.find("\"timestamp\"");
  if (pos == std::string::npos) return text;
  auto end = text.find('\n', pos);
  text.erase(pos, end - pos);
  return text;
}

}  // namespace

TEST_CASE("packing and net files round trip") {
  TempDir tmp;
  PackingSet s = grid_packing(2, 0.3);
  io::write_packing_file(tmp.str("p.txt"), s);
  PackingSet back = io::read_packing_file(tmp.str("p.txt"));
  CHECK(back.d == s.d);
  CHECK(back.delta == s.delta);
  CHECK(back.points.data == s.points.data);

  NetSet n = epsilon_net(2, 0.2);
  io::write_net_file(tmp.str("n.txt"), n);
  NetSet nb = io::read_net_file(tmp.str("n.txt"));
  CHECK(nb.radius == n.radius);
  CHECK(nb.points.data == n.points.data);
}

TEST_CASE("objective files round trip") {
  TempDir tmp;
  QuadraticSum f =
      QuadraticSum::make(3, {{1.25, {0.1, 0.2, 0.3}}, {0.5, {1, 0, -1}}});
  io::write_quadsum_file(tmp.str("f.txt"), f);
  QuadraticSum back = io::read_quadsum_file(tmp.str("f.txt"));
  REQUIRE(back.terms.size() == 2);
  CHECK(back.terms[0].weight == 1.25);
  CHECK(back.terms[1].center == f.terms[1].center);

  SUBCASE("bad headers are format errors") {
    std::ofstream(tmp.str("bad.txt")) << "polysum 3 1\n1 0 0 0\n";
    CHECK_THROWS_AS(io::read_quadsum_file(tmp.str("bad.txt")), Error);
  }
}

TEST_CASE("cone spec files round trip") {
  TempDir tmp;
  io::ConeSpec spec;
  spec.packing_path = "packing.txt";
  spec.beta = 1.5;
  spec.eps = 0.2;
  spec.selection = BitString::from_uint(0b1011, 6);
  io::write_cone_spec_file(tmp.str("cone.txt"), spec);
  io::ConeSpec back = io::read_cone_spec_file(tmp.str("cone.txt"));
  CHECK(back.packing_path == spec.packing_path);
  CHECK(back.beta == spec.beta);
  CHECK(back.eps == spec.eps);
  CHECK(back.selection == spec.selection);
}

TEST_CASE("cone specs load into working objectives") {
  TempDir tmp;
  PackingSet s = grid_packing(1, 0.3);
  io::write_packing_file(tmp.str("p.txt"), s);
  io::ConeSpec spec;
  spec.packing_path = tmp.str("p.txt");
  spec.beta = 1.0;
  spec.eps = 0.15;
  spec.selection = BitString::from_uint(0b0101, static_cast<int>(s.size()));
  io::write_cone_spec_file(tmp.str("cone.txt"), spec);
  ConeObjective f = io::load_cone(io::read_cone_spec_file(tmp.str("cone.txt")));
  CHECK(f.eval(s.points.point(0)) == 0.0);
  CHECK(f.eval({0.9}) == 0.15);
}

TEST_CASE("avg instance files round trip with hex codewords") {
  TempDir tmp;
  AvgParams params{2, 2, 0.0025, 1.0};
  AvgInstance inst = make_avg_instance(params, 6);
  io::write_avg_instance_file(tmp.str("avg.txt"), inst, tmp.str("avg_p.txt"));
  AvgInstance back = io::read_avg_instance_file(tmp.str("avg.txt"));
  CHECK(back.codewords == inst.codewords);
  CHECK(back.packing.points.data == inst.packing.points.data);
  CHECK(back.xstar == inst.xstar);
  CHECK(back.net.points.data == inst.net.points.data);
}

TEST_CASE("manifest files round trip") {
  TempDir tmp;
  io::RunManifest m;
  m.alpha = 1.0;
  m.beta = 4.0;
  m.W = 2.0;
  m.eps_target = 1e-5;
  m.n_nodes = 2;
  m.d = 3;
  m.seed = 42;
  m.objective_paths = {"a.txt", "b.txt"};
  io::write_manifest_file(tmp.str("m.txt"), m);
  io::RunManifest back = io::read_manifest_file(tmp.str("m.txt"));
  CHECK(back.beta == 4.0);
  CHECK(back.seed == 42);
  CHECK(back.objective_paths == m.objective_paths);
}

TEST_CASE("cli run writes reports and honours exit contracts") {
  TempDir tmp;

  SUBCASE("a generated instance converges with exit 0") {
    int rc = cli_main({"run", "--n-nodes", "2", "--dim", "1", "--eps", "1e-4",
                       "--seed", "3", "--out", tmp.str("run")});
    CHECK(rc == 0);
    CHECK(fs::exists(tmp.str("run") + "/rounds.csv"));
    CHECK(fs::exists(tmp.str("run") + "/summary.json"));
    CHECK(fs::exists(tmp.str("run") + "/transcript.txt"));
    CHECK(fs::exists(tmp.str("run") + "/meter.json"));
  }

  SUBCASE("eps at or above W is a usage error") {
    int rc = cli_main({"run", "--n-nodes", "2", "--dim", "1", "--eps", "2.0",
                       "--out", tmp.str("bad")});
    CHECK(rc == 2);
  }

  SUBCASE("the q3 injection hook exits 1") {
    int rc = cli_main({"run", "--n-nodes", "2", "--dim", "1", "--eps", "1e-4",
                       "--seed", "3", "--inject-q3-round", "2", "--out",
                       tmp.str("q3")});
    CHECK(rc == 1);
  }

  SUBCASE("unknown codec is a usage error") {
    int rc = cli_main({"run", "--codec", "lattice", "--out", tmp.str("c")});
    CHECK(rc == 2);
  }
}

TEST_CASE("cli reruns are byte-identical") {
  TempDir tmp;
  REQUIRE(cli_main({"run", "--n-nodes", "3", "--dim", "2", "--eps", "1e-4",
                    "--seed", "11", "--out", tmp.str("a")}) == 0);
  REQUIRE(cli_main({"run", "--n-nodes", "3", "--dim", "2", "--eps", "1e-4",
                    "--seed", "11", "--out", tmp.str("b")}) == 0);
  CHECK(io::read_text_file(tmp.str("a") + "/rounds.csv") ==
        io::read_text_file(tmp.str("b") + "/rounds.csv"));
  CHECK(io::read_text_file(tmp.str("a") + "/transcript.txt") ==
        io::read_text_file(tmp.str("b") + "/transcript.txt"));
  CHECK(strip_timestamp(io::read_text_file(tmp.str("a") + "/summary.json")) ==
        strip_timestamp(io::read_text_file(tmp.str("b") + "/summary.json")));
}

TEST_CASE("cli run accepts a manifest") {
  TempDir tmp;
  QuadraticSum f1 = QuadraticSum::make(1, {{1.0, {0.0}}});
  QuadraticSum f2 = QuadraticSum::make(1, {{1.0, {1.0}}});
  io::write_quadsum_file(tmp.str("f1.txt"), f1);
  io::write_quadsum_file(tmp.str("f2.txt"), f2);
  io::RunManifest m;
  m.alpha = 2.0;
  m.beta = 4.0;
  m.W = 1.0;
  m.eps_target = 1e-5;
  m.n_nodes = 2;
  m.d = 1;
  m.seed = 0;
  m.objective_paths = {tmp.str("f1.txt"), tmp.str("f2.txt")};
  io::write_manifest_file(tmp.str("m.txt"), m);
  int rc = cli_main({"run", "--manifest", tmp.str("m.txt"), "--out",
                     tmp.str("out")});
  CHECK(rc == 0);
}

TEST_CASE("cli run accepts explicit objective files") {
  TempDir tmp;
  io::write_quadsum_file(tmp.str("f1.txt"),
                         QuadraticSum::make(2, {{1.0, {0.2, 0.4}}}));
  io::write_quadsum_file(tmp.str("f2.txt"),
                         QuadraticSum::make(2, {{0.5, {0.9, 0.1}}}));
  int rc = cli_main({"run", "--objectives", tmp.str("f1.txt"), tmp.str("f2.txt"),
                     "--kappa", "2", "--eps", "1e-4", "--out", tmp.str("o")});
  CHECK(rc == 0);
}

TEST_CASE("cli sweep") {
  TempDir tmp;

  SUBCASE("a 2x2 grid yields four rows plus the header") {
    int rc = cli_main({"sweep", "--n-nodes", "2,4", "--dim", "1,2", "--kappa",
                       "2", "--eps", "1e-3", "--out", tmp.str("sw")});
    CHECK(rc == 0);
    std::string csv = io::read_text_file(tmp.str("sw") + "/sweep.csv");
    size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 5);
  }

  SUBCASE("an empty grid is a usage error") {
    int rc = cli_main({"sweep", "--n-nodes", "", "--out", tmp.str("sw2")});
    CHECK(rc == 2);
  }
}

TEST_CASE("cli verify") {
  CHECK(cli_main({"verify", "codec"}) == 0);
  CHECK(cli_main({"verify", "nonsense"}) == 2);
}

TEST_CASE("cli lb-demo") {
  TempDir tmp;
  CHECK(cli_main({"lb-demo", "recover", "--seed", "1", "--out",
                  tmp.str("demo")}) == 0);
  CHECK(cli_main({"lb-demo", "eq"}) == 0);
  CHECK(cli_main({"lb-demo", "disj"}) == 0);
  CHECK(cli_main({"lb-demo", "what"}) == 2);
}

TEST_CASE("cli pack and net emit readable files") {
  TempDir tmp;
  CHECK(cli_main({"pack", "--dim", "2", "--delta", "0.4", "--out",
                  tmp.str("p.txt")}) == 0);
  PackingSet s = io::read_packing_file(tmp.str("p.txt"));
  CHECK(s.d == 2);
  CHECK(cli_main({"net", "--dim", "1", "--radius", "0.25", "--out",
                  tmp.str("n.txt")}) == 0);
  NetSet n = io::read_net_file(tmp.str("n.txt"));
  CHECK(n.size() == 3);
}

TEST_CASE("summary totals equal the csv column sums") {
  TempDir tmp;
  REQUIRE(cli_main({"run", "--n-nodes", "2", "--dim", "2", "--eps", "1e-3",
                    "--seed", "9", "--out", tmp.str("sum")}) == 0);
  std::string csv = io::read_text_file(tmp.str("sum") + "/rounds.csv");
  std::istringstream is(csv);
  std::string header;
  std::getline(is, header);
  int64_t bits_sum = 0, bits_cum_last = 0;
  std::string line;
  while (std::getline(is, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double t, err, rt, q1, q2, q3;
    int64_t bits_round, bits_cum;
    row >> t >> err >> rt >> q1 >> q2 >> q3 >> bits_round >> bits_cum;
    bits_sum += bits_round;
    bits_cum_last = bits_cum;
  }
  CHECK(bits_sum == bits_cum_last);
  std::string summary = io::read_text_file(tmp.str("sum") + "/summary.json");
  CHECK(summary.find("\"bits_total\": " + std::to_string(bits_sum)) !=
        std::string::npos);
}
