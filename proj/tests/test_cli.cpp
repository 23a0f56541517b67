#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kothe/cli.hpp"

using namespace kothe;

namespace {

JobConfig cfg(const std::string& text) { return parse_config_text(text); }

std::string field(const Report& r, const std::string& key) {
  for (auto& [k, v] : r.fields)
    if (k == key) return v;
  return "<missing>";
}

ErrorKind kind_of_throw(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::HypothesisUnmet;
}

}  // namespace

TEST_CASE("descriptor round trips") {
  const char* spaces[] = {
      R"({"kind":"lp","p":3})",
      R"({"kind":"linfty"})",
      R"({"kind":"c0"})",
      R"({"kind":"weighted","base":{"kind":"lp","p":2},"weight":{"prefix":[2,0.5],"tail":{"kind":"power","c":1,"alpha":0.5}},"label":"w"})",
      R"({"kind":"orlicz","M":{"kind":"mtilde"}})",
      R"({"kind":"orlicz","M":{"kind":"conjugate","N":{"kind":"power","p":2},"M":{"kind":"mtilde"},"grid":512}})",
      R"({"kind":"orlicz","M":{"kind":"power_conjugate","a":2,"b":3}})",
      R"({"kind":"musielak_orlicz","family":{"kind":"table","head":[{"kind":"power","p":2}],"tail":{"kind":"power","p":3,"c":2}}})",
      R"({"kind":"nakano","p":{"kind":"formula","c0":2,"c1":1,"e":1}})",
      R"({"kind":"nakano","p":{"kind":"table","values":[1.5,2],"tail":3}})",
      R"({"kind":"lorentz","phi":{"kind":"power","alpha":0.5},"backward":true})",
      R"({"kind":"marcinkiewicz","phi":{"kind":"rational","A":1,"B":2}})",
      R"({"kind":"symmetrized","base":{"kind":"weighted","base":{"kind":"linfty"},"weight":{"tail":{"kind":"power_log","c":1,"beta":-0.5,"gamma":1}}}})",
      R"({"kind":"cesaro","base":{"kind":"lp","p":"inf"}})",
      R"({"kind":"tandori","base":{"kind":"lp","p":4}})",
  };
  for (const char* s : spaces) {
    SpaceDescriptor a = space_from_json(Json::parse(s));
    Json j = to_json(a);
    SpaceDescriptor b = space_from_json(j);
    CHECK(to_json(b).dump() == j.dump());
    CHECK(a == b);
  }
  const char* tails[] = {
      R"({"kind":"zero"})",
      R"({"kind":"constant","c":2})",
      R"({"kind":"periodic","values":[0.5,1.5]})",
      R"({"kind":"affine_power","a":1,"b":2,"alpha":0.5})",
      R"({"kind":"pattern","a":0.25,"v":[1,-1],"shift":3,"beta":-1,"gamma":2})",
  };
  for (const char* s : tails) {
    TailPtr t = tail_from_json(Json::parse(s));
    TailPtr u = tail_from_json(to_json(t));
    CHECK(to_json(u).dump() == to_json(t).dump());
    for (long long n : {1LL, 2LL, 17LL, 1000LL}) CHECK(t->at(n) == u->at(n));
  }
  Integrand f = integrand_from_json(Json::parse(R"({"kind":"piecewise","terms":[{"coeffs":[1,2],"lo":0,"hi":0.5}]})"));
  CHECK(integrand_from_json(to_json(f))(0.25) == f(0.25));
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"kind":"hilbert"})")), Error);
  CHECK_THROWS_AS(to_json(OrliczFunction::custom({"exp", [](double t) { return std::expm1(t); }, {}, {}, Tri::Unknown})), Error);
}

TEST_CASE("config round trip is bit identical") {
  JobConfig a = cfg(R"({"command":"ess-norm","X":{"kind":"lp","p":4},"Y":{"kind":"lp","p":2},
      "lambda":{"prefix":[1,0.5],"tail":{"kind":"power","c":1,"alpha":0.75}},
      "truncation":{"N":2048,"policy":"certified"},"n_grid":[1,3,9,27],"seed":7,
      "oracle":{"restarts":3},"output":{"format":"csv"}})");
  Json j = to_json(a);
  JobConfig b = parse_config(j);
  CHECK(to_json(b).dump() == j.dump());
  CHECK(b.oracle.seed == 7);
  RunResult ra = run(a), rb = run(b);
  CHECK(format_csv(ra.report) == format_csv(rb.report));
  CHECK(ra.status == 0);
}

TEST_CASE("norm and essential norm jobs") {
  RunResult r = run(cfg(R"({"command":"norm","space":{"kind":"lp","p":2},"x":{"prefix":[3,4]}})"));
  CHECK(r.status == 0);
  CHECK(field(r.report, "value") == "5");
  CHECK(field(r.report, "status") == "certified");

  RunResult e = run(cfg(R"({"command":"ess-norm","X":{"kind":"lp","p":4},"Y":{"kind":"lp","p":2},
      "lambda":{"prefix":[1,1]}})"));
  CHECK(e.status == 0);
  CHECK(field(e.report, "limit") == "[0, 0] certified");
  CHECK(field(e.report, "verdict") == "Compact");

  RunResult s = run(cfg(R"({"command":"ess-norm","X":{"kind":"lp","p":2},
      "lambda":{"tail":{"kind":"periodic","values":[0.5,1.5]}}})"));
  CHECK(field(s.report, "limit") == "[1.5, 1.5] certified");
  CHECK(field(s.report, "verdict") == "NonCompact");
}

TEST_CASE("other commands") {
  RunResult m = run(cfg(R"({"command":"mult-space","X":{"kind":"cesaro","base":{"kind":"lp","p":4}},
      "Y":{"kind":"cesaro","base":{"kind":"lp","p":2}}})"));
  CHECK(m.status == 0);
  CHECK(field(m.report, "M(X,Y)") == SpaceDescriptor::tandori(SpaceDescriptor::lp(4)).name());

  RunResult n = run(cfg(R"({"command":"mult-norm","X":{"kind":"lp","p":2},"Y":{"kind":"lp","p":1},
      "lambda":{"prefix":[1,2,2]}})"));
  CHECK(field(n.report, "lower") == "3");
  CHECK(field(n.report, "upper") == "3");

  RunResult c = run(cfg(R"({"command":"conjugate","conjugate":{"N":{"kind":"power","p":2},"M":{"kind":"mtilde"},
      "t_min":0.5,"t_max":1,"points":3}})"));
  REQUIRE(c.report.rows.size() == 3);
  CHECK(c.report.rows.back()[1] == "0.0625");
  CHECK(std::stod(c.report.rows.back()[3]) <= 1e-12);

  RunResult l = run(cfg(R"({"command":"lemma-r","lemma_r":{"integrand":{"kind":"polynomial","coeffs":[0,1]},"n_max":3}})"));
  REQUIRE(l.report.rows.size() == 3);
  CHECK(l.report.rows[0][1] == "-0.25");
  CHECK(l.report.rows[2][1] == "-0.0625");

  RunResult f = run(cfg(R"({"command":"factorize-check","X":{"kind":"lp","p":4},"Y":{"kind":"lp","p":2},
      "factorization":{"decades":6}})"));
  CHECK(field(f.report, "verdict") == "Holds");

  RunResult k = run(cfg(R"({"command":"compact-check","X":{"kind":"nakano","p":{"kind":"constant","p":2}},
      "Y":{"kind":"nakano","p":{"kind":"constant","p":3}},"lambda":{"tail":{"kind":"power","c":1,"alpha":0.5}}})"));
  CHECK(field(k.report, "route") == "nakano");
  CHECK(field(k.report, "verdict") == "Compact");
}

TEST_CASE("exit codes") {
  CHECK(kind_of_throw(R"({"command":"norm","space":{"kind":"lp","p":2},"x":{"prefix":[1]},"bogus":1})") ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of_throw(R"({"command":"norm","space":{"kind":"lp","p":2}})") == ErrorKind::InvalidArgument);
  CHECK(kind_of_throw(R"({"command":"ess-norm","X":{"kind":"lp","p":2},"lambda":{"prefix":[1]},"n_grid":[4,2]})") ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of_throw(R"({"command":"lp"})") == ErrorKind::InvalidArgument);
  CHECK(kind_of_throw(R"({"command":"norm",)") == ErrorKind::InvalidArgument);
  CHECK(kind_of_throw(R"({"command":"conjugate","conjugate":{"N":{"kind":"power","p":2},"M":{"kind":"mtilde"},"t_min":2,"t_max":1}})") ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of_throw(R"({"command":"norm","space":{"kind":"lp","p":0.5},"x":{"prefix":[1]}})") ==
        ErrorKind::InvalidArgument);

  JobConfig bare;
  bare.command = Command::Norm;
  CHECK(run(bare).status == 2);

  RunResult d = run(cfg(R"({"command":"dual","space":{"kind":"orlicz","M":{"kind":"mtilde"}}})"));
  CHECK(d.status == 3);
  CHECK(d.report.error.rfind("UnknownDual", 0) == 0);

  RunResult nb = run(cfg(R"({"command":"ess-norm","X":{"kind":"lp","p":4},"Y":{"kind":"lp","p":2},
      "lambda":{"tail":{"kind":"constant","c":1}}})"));
  CHECK(nb.status == 3);
  CHECK(nb.report.error.rfind("NotBounded", 0) == 0);
}

TEST_CASE("number formatting and csv output") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(5.0) == "5");
  CHECK(format_number(kInf) == "inf");
  CHECK(format_number(-kInf) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_pow10(2.0) == "100");
  CHECK(format_pow10(-kInf) == "0");
  CHECK(format_pow10(-8857.5) == "3.16227766017e-8858");
  CHECK(format_pow10(1000.0) == "1e1000");

  Report r;
  r.command = Command::Conjugate;
  r.columns = {"t", "note"};
  r.rows = {{"1", "plain"}, {"2", "a,b"}, {"3", "say \"x\""}};
  CHECK(format_csv(r) == "t,note\n1,plain\n2,\"a,b\"\n3,\"say \"\"x\"\"\"\n");
  Report f;
  f.command = Command::Norm;
  f.fields = {{"value", "5"}};
  CHECK(format_csv(f) == "key,value\nvalue,5\n");
  CHECK(report_stem(r) == "conjugate");

  auto dir = std::filesystem::temp_directory_path() / "kothe_cli_test";
  std::filesystem::create_directories(dir);
  std::string path = (dir / "conjugate.csv").string();
  emit_csv(r, path);
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == format_csv(r));
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(emit_csv(r, "/nonexistent-dir/x.csv"), std::runtime_error);
}
