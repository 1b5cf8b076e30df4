// End-to-end checks of the command-line tool; takes the binary path as argv[1].

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAIL: " << what << "\n";
  } else {
    std::cout << "ok: " << what << "\n";
  }
}

struct RunResult {
  int exit_code;
  std::string out_file;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<std::vector<double>> parse_csv(const std::string& text,
                                           std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <path-to-binary>\n";
    return 1;
  }
  const std::string bin = argv[1];
  const std::string tmp = "/tmp/jscat_cli";
  run("mkdir -p " + tmp);

  // weight table: header, row count, closed-form value at lambda = 0
  {
    const std::string out = tmp + "/w.csv";
    const int rc = run(bin + " weight --model jacobi:0.3,-0.2 --grid 101 --out " + out);
    expect(rc == 0, "weight exits 0");
    std::string header;
    const auto rows = parse_csv(slurp(out), &header);
    expect(header == "lambda,w", "weight header is lambda,w");
    expect(rows.size() == 101, "weight emits 101 rows");
    const double kappa = std::exp(std::lgamma(2.1) - 1.1 * std::log(2.0) -
                                  std::lgamma(1.3) - std::lgamma(0.8));
    bool found = false;
    for (const auto& r : rows)
      if (r[0] == 0.0) {
        found = true;
        expect(std::abs(r[1] - kappa) < 1e-8, "w(0) equals the closed form");
      }
    expect(found, "grid contains lambda = 0");
  }

  // byte-identical output across runs and thread counts
  {
    const std::string o1 = tmp + "/d1.csv", o2 = tmp + "/d2.csv";
    expect(run("JACOBI_SCATTER_THREADS=1 " + bin +
               " determinant --model jacobi:0.3,-0.2 --zeta-grid 7 --out " + o1) == 0,
           "determinant run 1");
    expect(run("JACOBI_SCATTER_THREADS=4 " + bin +
               " determinant --model jacobi:0.3,-0.2 --zeta-grid 7 --out " + o2) == 0,
           "determinant run 2");
    expect(slurp(o1) == slurp(o2) && !slurp(o1).empty(),
           "determinant output is byte-identical across thread counts");
  }

  // sum rules: ln sqrt 2 for jacobi(-1/2,-1/2)
  {
    const std::string out = tmp + "/sr.csv";
    const int rc =
        run(bin + " sumrules --model jacobi:-0.5,-0.5 --order 0 --out " + out);
    expect(rc == 0, "sumrules exits 0");
    const auto rows = parse_csv(slurp(out), nullptr);
    expect(rows.size() == 1, "one sum-rule row");
    expect(std::abs(rows[0][1] - 0.5 * std::log(2.0)) < 1e-6 &&
               std::abs(rows[0][2] - 0.5 * std::log(2.0)) < 1e-6,
           "order-0 sum rule lhs = rhs = ln sqrt 2");
  }

  // verify on the free model passes everything
  expect(run(bin + " verify --model free > " + tmp + "/v.txt") == 0,
         "verify --model free exits 0");

  // spectrum as schema-versioned json
  {
    const std::string out = tmp + "/spec.json";
    expect(run(bin + " spectrum --model file:" + tmp + "/no_such_model.json --out " +
               out + " 2>/dev/null") == 2,
           "missing model file exits 2");
    std::ofstream mf(tmp + "/rank1.json");
    mf << R"({"a":[],"b":[1.0],"tail":"free"})";
    mf.close();
    expect(run(bin + " spectrum --model file:" + tmp + "/rank1.json --format json --out " +
               out) == 0,
           "spectrum from file exits 0");
    const std::string j = slurp(out);
    expect(j.find("\"schema\": \"jacobi-scatter/1\"") != std::string::npos,
           "json carries the schema tag");
    expect(j.find("1.25") != std::string::npos, "spectrum contains lambda = 1.25");
  }

  // config errors exit 2 with a machine-readable diagnostic
  {
    expect(run(bin + " weight --model nonsense:1 --out /dev/null 2>" + tmp +
               "/err.txt") == 2,
           "unknown model exits 2");
    expect(slurp(tmp + "/err.txt").find("\"error\"") != std::string::npos,
           "stderr diagnostic is json");
    expect(run(bin + " weight --format yaml 2>/dev/null") == 2,
           "bad flag value exits 2");
  }

  // computation errors exit 3
  expect(run(bin + " weight --model pollaczek:1,0 --out /dev/null 2>/dev/null") == 3,
         "weight of an unclassified model exits 3");

  if (failures == 0) std::cout << "cli_tests: all passed\n";
  return failures == 0 ? 0 : 1;
}
