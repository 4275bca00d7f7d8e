// Copyright 2026 The mmbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "mmbell/cli.hpp"

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"mmbell"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  CliRun r;
  r.code = mmbell::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("vmax prints exact rationals by default") {
  const CliRun r = run({"vmax", "--max-n", "4"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out == "n,v_max\n0,1/1\n1,3/4\n2,3/4\n3,45/64\n4,45/64\n");
}

TEST_CASE("vmax in log mode prints doubles") {
  const CliRun r = run({"--mode", "log", "vmax", "--max-n", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "n,v_max\n0,1\n1,0.75\n2,0.75\n");
}

TEST_CASE("frontier output in both formats") {
  const CliRun c = run({"frontier"});
  CHECK(c.code == 0);
  CHECK(c.out == "{0,1,2}\n");
  const CliRun j = run({"--format", "json", "frontier", "--max-n", "25"});
  CHECK(j.code == 0);
  CHECK(j.out == "[0,1,2]\n");
}

TEST_CASE("dist sweeps every threshold when none is fixed") {
  const CliRun r = run({"dist", "--max-n", "1"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "n,n_sigma,v\n"
        "0,0,1/1\n"
        "0,1,0/1\n"
        "1,0,3/4\n"
        "1,1,1/2\n"
        "1,2,3/4\n"
        "1,3,0/1\n");
}

TEST_CASE("dist honors a fixed threshold") {
  const CliRun r = run({"dist", "--max-n", "2", "--n-sigma", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "n,n_sigma,v\n0,1,0/1\n1,1,1/2\n2,1,1/2\n");
}

TEST_CASE("chsh envelope lists the known violating components") {
  const CliRun r = run({"chsh", "--max-n", "3"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "n,chsh_opt"));
  CHECK(contains(r.out, "2.82842712474619"));
  CHECK(contains(r.out, "2.12132034355964"));
}

TEST_CASE("chsh with a fixed threshold uses the angle flags") {
  const CliRun r = run({"chsh", "--n-sigma", "0", "--max-n", "0"});
  CHECK(r.code == 0);
  CHECK(r.out == "n,n_sigma,chsh\n0,0,2.82842712474619\n");
  // Collapsing the four settings to one angle pair gives 2 E = 2 v.
  const CliRun c = run({"--phi-a", "0", "--phi-ap", "0", "--phi-b", "0",
                        "--phi-bp", "0", "chsh", "--n-sigma", "0", "--max-n", "0"});
  CHECK(c.code == 0);
  CHECK(contains(c.out, "0,0,2\n"));
}

TEST_CASE("spectrum at zero gain is a vacuum point mass") {
  const CliRun r = run({"spectrum", "--gain", "0"});
  CHECK(r.code == 0);
  CHECK(r.out == "n,weight\n0,1\n");
}

TEST_CASE("thresholding away all weight reports an error") {
  const CliRun r = run({"spectrum", "--gain", "0", "--n-th", "1"});
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK(contains(r.err, "error:"));
}

TEST_CASE("loss table includes the single-photon fixture") {
  const CliRun r = run({"loss", "--max-n", "1", "--max-m", "1"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "n,m,n_sigma,v_bar"));
  CHECK(contains(r.out, "1,1,0,2/3\n"));
  CHECK(contains(r.out, "1,1,1,2/3\n"));
}

TEST_CASE("asymptote reports the distance to the limit") {
  const CliRun r = run({"asymptote", "--n", "1000"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "n,v_max,abs_err"));
  CHECK(contains(r.out, "1000,"));
}

TEST_CASE("verify runs a single named group") {
  const CliRun r = run({"verify", "--group", "regions"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "ok regions"));
  CHECK(!contains(r.out, "FAIL"));
}

TEST_CASE("unknown verify group is a usage error") {
  const CliRun r = run({"verify", "--group", "nonsense"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "nonsense"));
}

TEST_CASE("usage errors exit with code 2") {
  const CliRun bad = run({"vmax", "--no-such-flag"});
  CHECK(bad.code == 2);
  CHECK(contains(bad.err, "Run with --help"));
  const CliRun none = run({});
  CHECK(none.code == 2);
}

TEST_CASE("help goes to stdout and succeeds") {
  const CliRun r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "units of pi"));
  CHECK(r.err.empty());
}

TEST_CASE("json tables are stable and well formed") {
  const CliRun r = run({"--format", "json", "vmax", "--max-n", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "[\n {\"n\": 0, \"v_max\": \"1/1\"},\n {\"n\": 1, \"v_max\": \"3/4\"}\n]\n");
}

TEST_CASE("file output matches stdout byte for byte") {
  const std::string path = "cli_out_check.csv";
  const CliRun direct = run({"vmax", "--max-n", "6"});
  const CliRun filed = run({"--output", path.c_str(), "vmax", "--max-n", "6"});
  CHECK(filed.code == 0);
  CHECK(filed.out.empty());
  const std::string first = slurp(path);
  CHECK(first == direct.out);
  const CliRun again = run({"--output", path.c_str(), "vmax", "--max-n", "6"});
  CHECK(again.code == 0);
  CHECK(slurp(path) == first);
  std::remove(path.c_str());
}

TEST_CASE("unwritable output path is a runtime error") {
  const CliRun r = run({"--output", "no/such/dir/out.csv", "vmax", "--max-n", "1"});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "cannot open"));
}
