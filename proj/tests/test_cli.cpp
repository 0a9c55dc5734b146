#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef ADABENCH_CLI_PATH
#define ADABENCH_CLI_PATH "adabench"
#endif

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& log) {
  std::ostringstream cmd;
  cmd << ADABENCH_CLI_PATH << " " << args << " > " << log << " 2>&1";
  return std::system(cmd.str().c_str());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("datagen writes a parseable dataset and the true weights") {
  const fs::path dir = fs::temp_directory_path() / "adadiff_cli_datagen";
  fs::remove_all(dir);
  const int status = run_cli(
      "datagen --preset hinge-synth --data-seed 3 --out " + dir.string(),
      dir.string() + ".log");
  CHECK(status == 0);
  CHECK(fs::exists(dir / "dataset.libsvm"));
  CHECK(fs::exists(dir / "true_weights.txt"));
  std::ifstream in(dir / "dataset.libsvm");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
  }
  CHECK(rows == 500);
  fs::remove_all(dir);
  fs::remove(dir.string() + ".log");
}

TEST_CASE("run with monitors reports residuals and writes a trace") {
  const fs::path dir = fs::temp_directory_path() / "adadiff_cli_run";
  fs::remove_all(dir);
  const fs::path log = dir.string() + ".log";
  const int status = run_cli(
      "run --preset logreg-l2 --budget 60 --eta 0.5 --seeds 4 --init random"
      " --monitors lemma1,fejer,diffsum --policy adagrad-diff --out " +
          dir.string(),
      log);
  CHECK(status == 0);
  const std::string out = slurp(log);
  CHECK(out.find("lemma1 min residual") != std::string::npos);
  CHECK(out.find("fejer min residual") != std::string::npos);
  CHECK(out.find("tail fraction") != std::string::npos);
  CHECK(fs::exists(dir / "trace_adagrad-diff_seed4.csv"));
  const std::string trace = slurp(dir / "trace_adagrad-diff_seed4.csv");
  CHECK(trace.rfind("# adabench-csv trace v1", 0) == 0);
  CHECK(trace.find("lemma1_residual") != std::string::npos);
  CHECK(trace.find("fejer_residual") != std::string::npos);
  fs::remove_all(dir);
  fs::remove(log);
}

TEST_CASE("fstar prints the protocol estimate") {
  const fs::path dir = fs::temp_directory_path() / "adadiff_cli_fstar";
  fs::remove_all(dir);
  const fs::path log = dir.string() + ".log";
  const int status = run_cli(
      "fstar --preset logreg-l1 --budget 40 --eta 0.1,1.0 --seeds 1"
      " --write-traces 0 --out " +
          dir.string(),
      log);
  CHECK(status == 0);
  CHECK(slurp(log).find("fstar = ") != std::string::npos);
  CHECK(fs::exists(dir / "fstar.csv"));
  fs::remove_all(dir);
  fs::remove(log);
}

TEST_CASE("report emits the requested kind") {
  const fs::path dir = fs::temp_directory_path() / "adadiff_cli_report";
  fs::remove_all(dir);
  const fs::path log = dir.string() + ".log";
  const int status = run_cli(
      "report --preset svm-dual --budget 10 --eta-grid 0.0005,0.05,3"
      " --seeds 1 --write-traces 0 --kind stepsize-vs-iter --out " +
          dir.string(),
      log);
  CHECK(status == 0);
  CHECK(fs::exists(dir / "stepsize_vs_iter.csv"));
  CHECK(fs::exists(dir / "stepsize_vs_iter_eta0.svg"));
  CHECK(fs::exists(dir / "stepsize_vs_iter_eta2.svg"));
  fs::remove_all(dir);
  fs::remove(log);
}

TEST_CASE("config files drive the CLI with flag overrides") {
  const fs::path dir = fs::temp_directory_path() / "adadiff_cli_config";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "bench.cfg";
  {
    std::ofstream out(cfg);
    out << "preset = logreg-l1\n";
    out << "budget = 30\n";
    out << "eta = 0.5\n";
    out << "seeds = 1,2\n";
    out << "write_traces = 0\n";
    out << "out = " << (dir / "from_config").string() << "\n";
  }
  const fs::path log = dir / "cli.log";
  const int status = run_cli("sweep --config " + cfg.string() +
                                 " --eta 0.25,0.75 --threads 2",
                             log);
  CHECK(status == 0);
  CHECK(fs::exists(dir / "from_config" / "gap_vs_eta.csv"));
  // the flag override replaced the single config eta with two values
  std::ifstream in(dir / "from_config" / "gap_vs_eta.csv");
  std::string line;
  std::size_t data_rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line.rfind("policy", 0) != 0) {
      ++data_rows;
    }
  }
  CHECK(data_rows == 2 * 2);
  fs::remove_all(dir);
}

TEST_CASE("bad arguments produce a nonzero exit") {
  const fs::path log = fs::temp_directory_path() / "adadiff_cli_bad.log";
  CHECK(run_cli("sweep --preset no-such-preset", log) != 0);
  CHECK(run_cli("report --preset svm-dual --kind nope", log) != 0);
  fs::remove(log);
}
