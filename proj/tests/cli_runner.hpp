#pragma once

// Helpers for running the command-line tool as a subprocess against the
// golden files in tests/golden.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cli {

namespace fs = std::filesystem;

inline const fs::path kTool = PHASESPACE_CLI_PATH;
inline const fs::path kGolden = PHASESPACE_GOLDEN_DIR;

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh directory holding copies of the golden inputs.
inline fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("phasespace_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const auto& entry : fs::directory_iterator(kGolden / "inputs")) {
    fs::copy_file(entry.path(), dir / entry.path().filename());
  }
  return dir;
}

// Exit status of the tool run in `dir`; stderr goes to dir/stderr.txt.
inline int run(const fs::path& dir, const std::string& args, const std::string& env = "") {
  const std::string cmd =
      "cd '" + dir.string() + "' && " + env + " '" + kTool.string() + "' " + args + " 2> stderr.txt > stdout.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct GoldenCase {
  std::string name;
  std::string out;
  bool sidecar = false;
  std::string args;  // without --out and --threads

  std::vector<std::string> files() const {
    std::vector<std::string> f = {out};
    if (sidecar) f.push_back(out + ".meta.json");
    return f;
  }
};

// Tab-separated name, output, sidecar flag, arguments; '#' starts a comment.
inline std::vector<GoldenCase> golden_cases() {
  std::vector<GoldenCase> cases;
  std::istringstream lines(slurp(kGolden / "cases.tsv"));
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream cells(line);
    GoldenCase c;
    std::string flag;
    std::getline(cells, c.name, '\t');
    std::getline(cells, c.out, '\t');
    std::getline(cells, flag, '\t');
    std::getline(cells, c.args);
    c.sidecar = flag == "1";
    cases.push_back(c);
  }
  return cases;
}

// Runs one case and compares every artifact with its golden copy. Returns an
// empty string on success, otherwise what went wrong. With `update` the
// artifacts overwrite the goldens first.
inline std::string check_golden(const GoldenCase& c, int threads, const std::string& tag, bool update = false) {
  const fs::path dir = scratch(c.name + "_" + tag);
  const int code = run(dir, c.args + " --threads " + std::to_string(threads) + " --out " + c.out);
  if (code != 0) return c.name + ": exit " + std::to_string(code) + ": " + slurp(dir / "stderr.txt");
  const fs::path expected = kGolden / "expected" / c.name;
  std::string problem;
  for (const std::string& f : c.files()) {
    if (!fs::exists(dir / f)) {
      problem = c.name + ": no " + f;
      break;
    }
    if (update) {
      fs::create_directories(expected);
      fs::copy_file(dir / f, expected / f, fs::copy_options::overwrite_existing);
    }
    if (!fs::exists(expected / f)) {
      problem = c.name + ": missing golden " + f;
      break;
    }
    if (slurp(dir / f) != slurp(expected / f)) {
      problem = c.name + "/" + f + " differs at threads=" + std::to_string(threads);
      break;
    }
  }
  fs::remove_all(dir);
  return problem;
}

}  // namespace cli
