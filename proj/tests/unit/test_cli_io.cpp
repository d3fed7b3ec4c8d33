#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "crkfr/config.hpp"
#include "crkfr/driver.hpp"
#include "crkfr/field_io.hpp"

using namespace crkfr;

namespace {

FieldDump two_element_dump() {
  SolutionField<1> u(Mesh::line(2, 0.0, 1.0), build_basis(1, PointSet::GL));
  for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i][0] = 0.1 * static_cast<double>(i) + 1.0 / 3.0;
  u.time = 0.25;
  return make_dump(u, "linear_advection", {"u"});
}

std::string to_text(const FieldDump& d) {
  std::ostringstream out;
  write_field(out, d);
  return out.str();
}

}  // namespace

TEST(FieldDump, RoundTripIsBitIdentical) {
  const auto d = two_element_dump();
  std::istringstream in(to_text(d));
  const auto back = read_field(in);
  EXPECT_EQ(back, d);
  EXPECT_EQ(to_text(back), to_text(d));
}

TEST(FieldDump, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "crkfr_unit_roundtrip.dump";
  const auto d = two_element_dump();
  write_field(path.string(), d);
  EXPECT_EQ(read_field(path.string()), d);
  std::filesystem::remove(path);
}

TEST(FieldDump, OutputIsDeterministic) { EXPECT_EQ(to_text(two_element_dump()), to_text(two_element_dump())); }

TEST(FieldDump, TwoDimensionalReshape) {
  SolutionField<4> u(Mesh::rect(3, 2, 0.0, 3.0, -1.0, 1.0), build_basis(2, PointSet::GLL));
  for (std::size_t i = 0; i < u.values.size(); ++i)
    for (int k = 0; k < 4; ++k) u.values[i][k] = static_cast<double>(i) + 0.25 * k;
  const auto d = make_dump(u, "euler2d", {"rho", "rho_v1", "rho_v2", "E"});
  std::istringstream in(to_text(d));
  const auto back = read_field(in);
  ASSERT_EQ(back.dim, 2);
  ASSERT_EQ(back.x.size(), 6u * 9u);
  ASSERT_EQ(back.y.size(), 6u * 9u);
  ASSERT_EQ(back.values.size(), 6u * 9u * 4u);
  for (int e = 0; e < 6; ++e) {
    const int ix = e % 3, iy = e / 3;
    for (int q = 0; q < 3; ++q)
      for (int p = 0; p < 3; ++p) {
        const std::size_t node = static_cast<std::size_t>(e) * 9 + p + 3 * q;
        EXPECT_DOUBLE_EQ(back.x[node], ix + 0.5 * p);
        EXPECT_DOUBLE_EQ(back.y[node], -1.0 + iy + 0.5 * q);
        EXPECT_EQ(back.value(node, 2), u.at(e, p, q)[2]);
      }
  }
}

TEST(FieldDump, RejectsEmptyAndMalformedInput) {
  FieldDump empty = two_element_dump();
  empty.nx = 0;
  std::ostringstream sink;
  EXPECT_THROW(write_field(sink, empty), std::runtime_error);

  std::istringstream nothing("");
  EXPECT_THROW(read_field(nothing), std::runtime_error);

  auto text = to_text(two_element_dump());
  std::istringstream truncated(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
  EXPECT_THROW(read_field(truncated), std::runtime_error);

  auto bad = text;
  bad.replace(bad.rfind('\n', bad.size() - 2) + 1, 3, "abc");
  std::istringstream garbled(bad);
  EXPECT_THROW(read_field(garbled), std::runtime_error);

  auto shuffled = two_element_dump();
  std::swap(shuffled.x[0], shuffled.x[1]);
  EXPECT_THROW(shuffled.validate(), std::runtime_error);
}

TEST(Config, MinimalConfigUsesDefaults) {
  const auto c = parse_config_text("[run]\nproblem = linear_advection\n");
  EXPECT_EQ(c.problem, "linear_advection");
  EXPECT_EQ(c.scheme.points, PointSet::GL);
  EXPECT_EQ(c.scheme.dissipation, Dissipation::D2);
  EXPECT_EQ(c.scheme.trace, TraceMode::EA);
  EXPECT_EQ(c.scheme.cfl_safety, 0.98);
  EXPECT_EQ(c.scheme.degree, 3);
  EXPECT_EQ(c.limiter.blend, BlendKind::None);
  EXPECT_TRUE(c.warnings.empty());
}

TEST(Config, NonDefaultChoicesAreFlagged) {
  const auto c = parse_config_text("[run]\nproblem = burgers_sine\n[scheme]\ndissipation = dcsx\ntrace = ae\n");
  EXPECT_EQ(c.scheme.dissipation, Dissipation::DCSX);
  EXPECT_EQ(c.scheme.trace, TraceMode::AE);
  EXPECT_EQ(c.warnings.size(), 2u);
}

TEST(Config, MismatchedTableauWarns) {
  const auto c = parse_config_text("[run]\nproblem = burgers_sine\n[scheme]\ndegree = 3\ntableau = crk22\n");
  EXPECT_EQ(c.scheme.tableau, "crk22");
  ASSERT_EQ(c.warnings.size(), 1u);
  EXPECT_NE(c.warnings[0].find("crk22"), std::string::npos);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config_text("[run]\nproblem = x\n[scheme]\ndgree = 2\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[scheme]\ndegree = 2\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[run]\nproblem = x\n[scheme]\ndissipation = d3\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[run]\nproblem = x\n[scheme]\ndegree = two\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[run]\nproblem = x\n[scheme]\ncfl_safety = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[run]\nproblem = x\n[colour]\nred = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[run]\nproblem = x\n[scheme]\npoints = gll\ncorrection = radau\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[run]\nproblem = x\n[scheme]\ndegree = 5\n"), ConfigError);
  EXPECT_THROW(parse_config("/nonexistent/run.ini"), ConfigError);
}

TEST(Config, OverridesApplyBeforeValidation) {
  const auto c = parse_config_text("[run]\nproblem = linear_advection\n",
                                   {"scheme.degree=1", "mesh.nx=48", "limiter.blend=mh"});
  EXPECT_EQ(c.scheme.degree, 1);
  EXPECT_EQ(c.nx, 48);
  EXPECT_EQ(c.limiter.blend, BlendKind::MH);
  EXPECT_THROW(parse_config_text("[run]\nproblem = x\n", {"degree=1"}), ConfigError);
  EXPECT_THROW(parse_config_text("[run]\nproblem = x\n", {"scheme.nope=1"}), ConfigError);
}

TEST(Config, KeyListIsComplete) {
  const auto& keys = config_keys();
  EXPECT_NE(std::find(keys.begin(), keys.end(), "scheme.cfl_safety"), keys.end());
  EXPECT_NE(std::find(keys.begin(), keys.end(), "output.dump"), keys.end());
}

TEST(Config, ShippedConfigsParse) {
  const auto dir = std::filesystem::path(CRKFR_SOURCE_DIR) / "configs" / "paper";
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".ini") continue;
    SCOPED_TRACE(entry.path().string());
    const auto c = parse_config(entry.path().string());
    EXPECT_NO_THROW(problem_info(c.problem));
    ++count;
  }
  EXPECT_GE(count, 15);
}

TEST(Reports, EocCsvHeader) {
  std::vector<EocRow> rows(2);
  rows[0].mesh = 32;
  rows[1].mesh = 64;
  rows[1].eoc = 3.0;
  const auto csv = eoc_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "mesh,ndof,l1,l2,linf,eoc");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Reports, JsonReportHasCoreKeys) {
  RunConfig c;
  c.problem = "linear_advection";
  c.nx = 8;
  c.max_steps = 2;
  const auto j = nlohmann::json::parse(report_json(run(c)));
  for (const char* k : {"problem", "degree", "dissipation", "steps", "errors", "counters", "times", "min_constraint"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["steps"], 2);
  EXPECT_EQ(j["dissipation"], "d2");
}
