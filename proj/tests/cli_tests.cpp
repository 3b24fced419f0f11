// End-to-end checks of the command-line tool: runs the built binary on
// temporary files and inspects outputs and exit codes.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "orbitope/io.hpp"
#include "orbitope/pair_hull.hpp"
#include "orbitope/rdc.hpp"
#include "orbitope/single_ion.hpp"

using namespace orbitope;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAIL: " << what << "\n";
  }
}

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run(const std::string& args, const fs::path& dir) {
  fs::path out = dir / "stdout.txt";
  std::string cmd = std::string(ORBITOPE_CLI_PATH) + " " + args + " > " +
                    out.string() + " 2> " + (dir / "stderr.txt").string();
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = rc == -1 ? -1 : WEXITSTATUS(rc);
  if (fs::exists(out)) r.stdout_text = io::read_file(out.string());
  return r;
}

}  // namespace

int main() {
  fs::path dir = fs::temp_directory_path() / "orbitope_cli_tests";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto file = [&](const std::string& name, const std::string& content) {
    io::write_file((dir / name).string(), content);
    return (dir / name).string();
  };

  std::string hull = file("hull.json", R"({"matrix":[[1,0,0],[0,0,0],[0,0,-1]]})");
  std::string zero = file("zero.json", R"({"coords":[0,0,0,0,0]})");
  std::string outside = file("outside.json", R"({"coords":[1.5,0,0,0.75,0]})");

  // membership: origin is inside with margin 1
  RunResult mem = run("membership --hull " + hull + " --target " + zero, dir);
  check(mem.exit_code == 0, "membership exit code");
  check(mem.stdout_text.find("\"classification\":\"inside\"") != std::string::npos,
        "membership classification");
  check(mem.stdout_text.find("\"margin\":1") != std::string::npos,
        "membership margin");

  // decompose the origin: two atoms, validated reconstruction in the output
  fs::path meas_path = dir / "measure.json";
  RunResult dec = run("decompose --hull " + hull + " --target " + zero +
                          " --output " + meas_path.string(),
                      dir);
  check(dec.exit_code == 0, "decompose exit code");
  std::string meas_text = io::read_file(meas_path.string());
  AtomicMeasure meas = io::parse_measure(meas_text);
  check(meas.atoms.size() == 2, "decompose atom count");
  check(meas_text.find("reconstruction_error") != std::string::npos,
        "decompose reports its reconstruction error");
  AnisoTensor chi = io::parse_tensor(io::read_file(hull));
  check(norm_inf(evaluate(meas, chi)) < 1e-8, "decompose reconstruction");

  // decompose an outside target: domain error, exit 2
  check(run("decompose --hull " + hull + " --target " + outside, dir).exit_code == 2,
        "outside target exits 2");

  // malformed file: exit 1
  std::string bad = file("bad.json", "{ not json");
  check(run("membership --hull " + bad + " --target " + zero, dir).exit_code == 1,
        "parse error exits 1");
  check(run("membership --hull missing.json --target " + zero, dir).exit_code == 1,
        "missing file exits 1");

  // invariants + region-x
  RunResult inv = run("invariants --input " + hull, dir);
  check(inv.exit_code == 0 &&
            inv.stdout_text.find("\"alpha\":1") != std::string::npos,
        "invariants output");
  RunResult reg = run("region-x --alpha 0.75 --det 0.25", dir);
  check(reg.stdout_text.find("\"contained\":true") != std::string::npos,
        "region-x containment");

  // pmax on the analytic case: 1/2
  std::string ident = file("identity.json", R"({"matrix":[[1,0,0],[0,1,0],[0,0,1]]})");
  RunResult pm = run("pmax --hull " + hull + " --target " + zero +
                         " --rotation " + ident,
                     dir);
  check(pm.exit_code == 0, "pmax exit code");
  check(pm.stdout_text.find("\"p_max\":0.5000000") != std::string::npos,
        "pmax value");

  // coaxial scan on a shared-eigenvector pair: every dimension is 2 or 4
  std::string pair = file("pair.json",
                          R"({"chi1":{"coords":[1,0,0,0.5,0]},)"
                          R"("chi2":{"coords":[-0.3,0,0,0.2,0.7]}})");
  fs::path scan_path = dir / "scan.csv";
  RunResult scan = run("coaxial-scan --pair " + pair + " --n-alpha 90 --output " +
                           scan_path.string(),
                       dir);
  check(scan.exit_code == 0, "coaxial-scan exit code");
  {
    std::istringstream in(io::read_file(scan_path.string()));
    std::string line;
    std::getline(in, line);
    check(line == "alpha_angle,d1,d2,dim,M_alpha", "scan header");
    int rows = 0;
    bool dims_ok = true;
    while (std::getline(in, line)) {
      ++rows;
      std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
      std::size_t c3 = line.find(',', c2 + 1), c4 = line.find(',', c3 + 1);
      int dim = std::stoi(line.substr(c3 + 1, c4 - c3 - 1));
      if (dim != 2 && dim != 4) dims_ok = false;
    }
    check(rows == 90, "scan row count");
    check(dims_ok, "shared-eigenvector scan dims in {2,4}");
  }

  // facet-dim with empirical cross-check
  std::string generic = file("generic.json",
                             R"({"chi1":{"coords":[1,0,0,0.5,0]},)"
                             R"("chi2":{"coords":[0.2,0.4,-0.3,0.1,0.6]}})");
  RunResult fdim = run("facet-dim --pair " + generic +
                           " --alpha-angle 0.7 --empirical 60 --seed 5",
                       dir);
  check(fdim.exit_code == 0, "facet-dim exit code");
  check(fdim.stdout_text.find("\"dim\":6") != std::string::npos,
        "facet-dim formula value");
  check(fdim.stdout_text.find("\"empirical_dim\":6") != std::string::npos,
        "facet-dim empirical value");

  // hull-dim
  RunResult hd = run("hull-dim --input " + generic, dir);
  check(hd.stdout_text.find("\"dim\":10") != std::string::npos, "hull-dim pair");

  // simulate -> estimate round trip, and bit-identical reruns
  std::string ensemble = file(
      "ensemble.json",
      std::string(R"({"measure":{"atoms":[{"p":1.0,"R":[[1,0,0],[0,1,0],[0,0,1]]}]},)") +
          R"("chi":{"coords":[1,0,0,0.5,0]}})");
  fs::path obs1 = dir / "obs1.csv", obs2 = dir / "obs2.csv";
  check(run("simulate --ensemble " + ensemble + " --n 25 --sigma 0 --seed 9 --output " +
                obs1.string(),
            dir).exit_code == 0,
        "simulate exit code");
  run("simulate --ensemble " + ensemble + " --n 25 --sigma 0 --seed 9 --output " +
          obs2.string(),
      dir);
  check(io::read_file(obs1.string()) == io::read_file(obs2.string()),
        "simulate is deterministic for a fixed seed");

  RunResult est = run("estimate --obs " + obs1.string(), dir);
  check(est.exit_code == 0, "estimate exit code");
  {
    auto j = est.stdout_text;
    auto pos = j.find("\"rms_residual\":");
    check(pos != std::string::npos &&
              std::stod(j.substr(pos + 15)) < 1e-10,
          "estimate residual on noise-free data");
  }

  // rank-deficient design: exit 2
  std::string degenerate_obs = file("degenerate.csv",
                                    "rx,ry,rz,delta\n1,0,0,1\n1,0,0,1\n1,0,0,1\n"
                                    "1,0,0,1\n1,0,0,1\n");
  check(run("estimate --obs " + degenerate_obs, dir).exit_code == 2,
        "rank-deficient design exits 2");

  if (failures == 0) {
    std::cout << "cli_tests: all checks passed\n";
    return 0;
  }
  std::cerr << "cli_tests: " << failures << " check(s) failed\n";
  return 1;
}
