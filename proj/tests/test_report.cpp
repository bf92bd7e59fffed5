#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "liesym/report.hpp"

using namespace liesym;

#ifndef LIESYM_SOURCE_DIR
#define LIESYM_SOURCE_DIR "."
#endif

namespace {

const std::string kRoot = LIESYM_SOURCE_DIR;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: ", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Loaded {
  Model model;
  ReportMeta meta;
};

Loaded fixture() {
  std::string text = read_file(kRoot + "/data/stagnation.pde");
  return {build_model(parse_spec(text)), {"stagnation.pde", fnv1a64_hex(text)}};
}

// Set LIESYM_UPDATE_GOLDEN=1 to rewrite the expected outputs.
void check_golden(const std::string& name, const std::string& got) {
  std::string path = kRoot + "/tests/golden/" + name;
  if (std::getenv("LIESYM_UPDATE_GOLDEN")) {
    std::ofstream out(path, std::ios::binary);
    out << got;
    return;
  }
  CHECK_MESSAGE(read_file(path) == got, "golden mismatch for ", name,
                " (set LIESYM_UPDATE_GOLDEN=1 to refresh)\n--- got ---\n", got);
}

}  // namespace

TEST_CASE("reports are deterministic and match the golden outputs") {
  Loaded in = fixture();
  struct Item {
    std::string file;
    std::function<Report()> build;
  };
  std::vector<Item> items = {
      {"symmetries.txt", [&] { return symmetries_report(in.model, in.meta, 2, false); }},
      {"verify.txt", [&] { return verify_report(in.model, in.meta, {}, 20); }},
      {"algebra.txt", [&] { return algebra_report(in.model, in.meta); }},
      {"optimal1.txt", [&] { return optimal_report(in.model, in.meta, 1); }},
      {"optimal2.txt", [&] { return optimal_report(in.model, in.meta, 2); }},
      {"optimal3.txt", [&] { return optimal_report(in.model, in.meta, 3); }},
      {"reduce_v1.txt", [&] { return reduce_report(in.model, in.meta, "v1"); }},
      {"reduce_v2.txt", [&] { return reduce_report(in.model, in.meta, "v2"); }},
      {"reduce_v3.txt", [&] { return reduce_report(in.model, in.meta, "v3"); }},
      {"reduce_v4.txt", [&] { return reduce_report(in.model, in.meta, "v4"); }},
  };
  for (const auto& item : items) {
    Report a = item.build();
    Report b = item.build();
    CHECK(a.render_text() == b.render_text());
    CHECK(a.render_json().dump(2) == b.render_json().dump(2));
    check_golden(item.file, a.render_text());
  }
}

TEST_CASE("json and text sections carry the same content") {
  Loaded in = fixture();
  Report rep = symmetries_report(in.model, in.meta, 2, false);
  Json j = rep.render_json();
  CHECK(j["sections"]["determining system"]["dimension"].get<int>() == 4);
  CHECK(j["sections"]["determining system"]["unknowns"].get<int>() == 168);
  CHECK(j["sections"]["stability"]["same_span"].get<bool>());
  std::string text = rep.render_text();
  CHECK(text.find("null space dimension:  4") != std::string::npos);
  CHECK(text.find("ansatz unknowns:       168") != std::string::npos);
  auto basis = j["sections"]["symmetry basis"];
  REQUIRE(basis.size() == 4);
  CHECK(basis[0]["dsl"].get<std::string>() == "d/dx");
  CHECK(basis[3]["dsl"].get<std::string>() == "T * d/dT");
  for (const auto& entry : basis)
    CHECK(text.find(entry["pretty"].get<std::string>()) != std::string::npos);

  Report alg = algebra_report(in.model, in.meta);
  Json ja = alg.render_json();
  CHECK(ja["sections"]["commutator table"]["table"][2][3].get<std::string>() == "v3");
  CHECK(ja["sections"]["commutator table"]["table"][3][2].get<std::string>() == "-v3");
  CHECK(ja["sections"]["series and solvability"]["solvable"].get<bool>());
  CHECK(alg.render_text().find("[ , ]") != std::string::npos);
}

TEST_CASE("structure constants from a JSON table") {
  std::string path = "/tmp/liesym_a1_table.json";
  {
    std::ofstream out(path);
    out << R"({"labels": ["v1","v2","v3","v4"],
               "entries": [{"i":3,"j":4,"k":3,"c":"1"}]})";
  }
  LieAlgebra g = algebra_from_json_file(path);
  CHECK(g.dim() == 4);
  CHECK(g.c(2, 3, 2) == 1);
  CHECK(g.c(3, 2, 2) == -1);
  ReportMeta meta{"a1_table.json", "0"};
  Report rep = algebra_report_from_table(g, meta);
  CHECK(rep.render_text().find("solvable:  yes") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("verify report marks non-symmetries with residuals") {
  Loaded in = fixture();
  Report rep = verify_report(in.model, in.meta, {"v1", "v1+v2", "d/dU"}, 10);
  std::string text = rep.render_text();
  CHECK(text.find("v1 = ∂_x: symmetry") != std::string::npos);
  CHECK(text.find("d/dU = ∂_U: NOT a symmetry") != std::string::npos);
  CHECK(text.find("residual") != std::string::npos);
  CHECK(text.find("agrees") != std::string::npos);
  Json j = rep.render_json();
  for (const auto& entry : j["sections"]["verification"]) {
    CHECK(entry["oracle_agrees"].get<bool>());
    if (!entry["symmetry"].get<bool>()) {
      // structured expression form alongside the text
      const auto& res = entry["residuals"][0];
      CHECK(res.contains("expr"));
      CHECK(res["expr"]["terms"].size() >= 1);
      CHECK(res["expr"]["terms"][0].contains("coeff"));
    }
  }
}

TEST_CASE("optimal report outside the reference algebra profile is explicit") {
  std::string text = read_file(kRoot + "/data/diffusion.pde");
  Model m = build_model(parse_spec(text));
  ReportMeta meta{"diffusion.pde", fnv1a64_hex(text)};
  Report rep = optimal_report(m, meta, 1);
  CHECK(rep.render_text().find("only verification primitives apply") != std::string::npos);
  CHECK_FALSE(rep.render_json()["sections"]["optimal system"]["supported"].get<bool>());
}

TEST_CASE("reduce report on an unsupported field class propagates") {
  Model m = build_model(parse_spec(
      "independent x;\ndependent U;\nvfield w = U * d/dx;\neq D(U,x) = 0;\n"));
  ReportMeta meta{"inline", "0"};
  CHECK_THROWS_AS(reduce_report(m, meta, "w"), NotSupportedError);
}
