#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(ROBINPOLY_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("robin_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("success exits with 0") {
  const auto out = scratch("ok");
  CHECK(run("eigs --polygon " ROBIN_DATA_DIR "/unit_square.json --beta 1 --k 2 --mesh-h 0.25 --levels 2 --out " +
            out.string()) == 0);
  CHECK(fs::exists(out / "spectrum.json"));
  CHECK(run("--version") == 0);
}

TEST_CASE("validation failures exit with 2") {
  const auto dir = scratch("bad");
  CHECK(run("") == 2);
  CHECK(run("eigs") == 2);
  CHECK(run("eigs --polygon /nonexistent.json") == 2);
  CHECK(run("converge --family spiral") == 2);

  std::ofstream(dir / "bowtie.json") << R"({"name":"b","side_budget":4,"components":[{"walk":[[0,0],[1,1],[1,0],[0,1]]}]})";
  CHECK(run("eigs --polygon " + (dir / "bowtie.json").string() + " --out " + dir.string()) == 2);

  std::ofstream(dir / "broken.json") << "{ \"name\": ";
  CHECK(run("eigs --polygon " + (dir / "broken.json").string() + " --out " + dir.string()) == 2);

  // Detachment needs a crack.
  CHECK(run("detach-sweep --polygon " ROBIN_DATA_DIR "/unit_square.json --eps 0.1 --out " + dir.string()) == 2);
  // Filling is compared for negative beta only.
  CHECK(run("fill-compare --polygon " ROBIN_DATA_DIR "/slit_square.json --beta 1 --out " + dir.string()) == 2);
}

TEST_CASE("meshing failures exit with 3") {
  const auto dir = scratch("mesh");
  // A mesh size far below the node cap of the mesher.
  CHECK(run("eigs --polygon " ROBIN_DATA_DIR "/unit_square.json --mesh-h 1e-4 --levels 2 --out " + dir.string()) == 3);
}

}  // TEST_SUITE
