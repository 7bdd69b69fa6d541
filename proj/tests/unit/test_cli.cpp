// Copyright 2026 The qcsp-clock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string &args, const std::string &env = "") {
  const std::string cmd = env + " " QCSP_CLI_PATH " " + args + " 2>/dev/null";
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / ("qcsp-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string write(const std::string &name, const std::string &text) const {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  }
};

const char *kH = R"({"variant":"BQP1","num_qubits":1,"init":["Zero"],"gates":[{"g":"H","q":[0]}],"outputs":[0]})";
const char *kHH =
    R"({"variant":"BQP1","num_qubits":1,"init":["Zero"],"gates":[{"g":"H","q":[0]},{"g":"H","q":[0]}],"outputs":[0]})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("compile, decide and oracle exit codes") {
    TempDir t;
    const std::string h = t.write("h.json", kH), hh = t.write("hh.json", kHH);
    const std::string hi = (t.dir / "h.inst.json").string(), hhi = (t.dir / "hh.inst.json").string();
    CHECK(run("compile " + h + " -o " + hi).code == 0);
    CHECK(run("compile " + hh + " -o " + hhi).code == 0);
    const auto inst = nlohmann::json::parse(std::ifstream(hi));
    CHECK(inst.at("num_qudits") == 6);

    CHECK(run("decide " + hhi).code == 0);
    const Run rej = run("decide " + hi);
    CHECK(rej.code == 1);
    const auto j = nlohmann::json::parse(rej.out);
    CHECK(j.at("verdict").at("decision") == "Reject");
    CHECK(j.at("schema_version") == 1);

    const Run o = run("oracle " + hi);
    CHECK(o.code == 1);
    const auto oj = nlohmann::json::parse(o.out);
    CHECK(oj.at("lambda_min").get<double>() > 1e-4);
    CHECK(oj.at("verdict") == "frustrated");
    CHECK(run("oracle " + hhi).code == 0);
    CHECK(run("--format human decide " + hi).out.find("end-check") != std::string::npos);
  }

  TEST_CASE("input errors and caps") {
    TempDir t;
    const std::string bad = t.write("bad.json", R"({"variant":"BQP1","num_qubits":1,"init":["Zero"],"gates":[{"g":"Q","q":[0]}],"outputs":[0]})");
    CHECK(run("compile " + bad).code == 3);
    CHECK(run("decide " + t.write("junk.json", "{")).code == 3);
    CHECK(run("decide " + (t.dir / "missing.json").string()).code == 3);
    const std::string qcma = t.write("q.json", R"({"variant":"QCMA","num_qubits":1,"init":["Witness"],"gates":[],"outputs":[0]})");
    const std::string qi = (t.dir / "q.inst.json").string();
    REQUIRE(run("compile " + qcma + " -o " + qi).code == 0);
    CHECK(run("decide " + qi).code == 3);
    CHECK(run("decide --proof 0 " + qi).code == 0);
    CHECK(run("decide --proof 1 " + qi).code == 1);
    const std::string hi = (t.dir / "h.inst.json").string();
    REQUIRE(run("compile " + t.write("h.json", kH) + " -o " + hi).code == 0);
    CHECK(run("--dim-cap 10 oracle " + hi).code == 4);
    CHECK(run("oracle " + hi, "QCSP_DIM_CAP=10").code == 4);
    CHECK(run("--dim-cap 100000 oracle " + hi, "QCSP_DIM_CAP=10").code == 1);
  }

  TEST_CASE("output is reproducible") {
    TempDir t;
    const std::string hi = (t.dir / "h.inst.json").string();
    REQUIRE(run("compile " + t.write("h.json", kH) + " -o " + hi).code == 0);
    for (const std::string cmd : {"decide " + hi, "oracle " + hi, "--seed 9 decide --mode sampled --trials 50 " + hi}) {
      const Run a = run(cmd), b = run(cmd);
      CHECK(a.code == b.code);
      CHECK(a.out == b.out);
      CHECK_FALSE(a.out.empty());
    }
    const Run env = run("decide " + hi, "QCSP_MODE=sampled QCSP_TRIALS=7");
    const auto j = nlohmann::json::parse(env.out);
    CHECK(j.at("verdict").at("trials") == 7);
    const Run flag = run("decide --trials 3 " + hi, "QCSP_MODE=sampled QCSP_TRIALS=7");
    CHECK(nlohmann::json::parse(flag.out).at("verdict").at("trials") == 3);
  }

  TEST_CASE("reduce round trip") {
    TempDir t;
    const std::string toy = t.write(
        "toy.json",
        R"({"d":3,"num_qudits":2,"clause_types":[{"dim":3,"entries":[[0,0,1,0]]},{"dim":9,"entries":[[4,4,1,0]]}],"clauses":[{"type":0,"sites":[0]},{"type":1,"sites":[0,1]}]})");
    const std::string q = (t.dir / "toy.qubit.json").string();
    CHECK(run("reduce " + toy + " -o " + q).code == 0);
    const auto qj = nlohmann::json::parse(std::ifstream(q));
    CHECK(qj.at("x") == 8);
    CHECK(qj.at("num_qubits") == 16);
    const Run back = run("reduce --backward " + q);
    CHECK(back.code == 0);
    CHECK(nlohmann::json::parse(back.out).at("d") == 3);
    const Run chk = run("reduce --check " + toy);
    CHECK(chk.code == 0);
    const auto cj = nlohmann::json::parse(chk.out);
    CHECK(cj.at("verdict_preserved") == true);
    CHECK(cj.at("round_trip_identity") == true);
  }
}
