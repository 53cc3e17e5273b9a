#include <gtest/gtest.h>

#include <filesystem>

#include "carleson_lab/serialize.hpp"

using namespace carleson_lab;
using measures::MeasureSpec;
using io::json;

namespace {

MeasureSpec nested() {
  const Point a{cplx(0.5, -0.25)}, b{cplx(0.0, 0.9)};
  return MeasureSpec::sum(1, {MeasureSpec::radial_power(1, 0.25, 2.0),
                              MeasureSpec::weighted_density(1, measures::Builtin::angular_cos2, -0.5),
                              MeasureSpec::atomic(1, {{a, 1.0}, {b, 0.125}}), MeasureSpec::zero(1)});
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const DomainError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(MeasureJson, RoundTrip) {
  const json j = io::to_json(nested());
  const auto back = io::measure_from_json(j, 1);
  EXPECT_EQ(io::to_json(back), j);
  EXPECT_EQ(j["parts"][0]["coef"], 2.0);
  EXPECT_FALSE(j["parts"][1].contains("coef"));
}

TEST(MeasureJson, BallAtoms) {
  const auto j = json::parse(R"({"type":"atomic","atoms":[{"point":[[0.6,0],[0,0.2]],"mass":1}]})");
  EXPECT_EQ(io::implied_dim(j), 2);
  const auto mu = io::measure_from_json(j, 2);
  EXPECT_EQ(mu.dim(), 2);
  EXPECT_THROW(io::measure_from_json(j, 1), DomainError);
}

TEST(MeasureJson, Rejections) {
  EXPECT_NE(message_of([] { io::measure_from_json(json::parse(R"({"type":"radial_power","theta":0,"extra":1})"), 1); })
                .find("unknown key 'extra'"),
            std::string::npos);
  EXPECT_NE(message_of([] {
              io::measure_from_json(
                  json::parse(R"({"type":"sum","parts":[{"type":"atomic","atoms":[{"point":[[0.5,0]],"mass":1,"m":2}]}]})"),
                  1);
            }).find("measure.parts[0].atoms[0]: unknown key 'm'"),
            std::string::npos);
  EXPECT_THROW(io::measure_from_json(json::parse(R"({"type":"radial_power"})"), 1), DomainError);
  EXPECT_THROW(io::measure_from_json(json::parse(R"({"type":"radial_power","theta":"0"})"), 1), DomainError);
  EXPECT_THROW(io::measure_from_json(json::parse(R"({"type":"cantor"})"), 1), DomainError);
  EXPECT_THROW(io::measure_from_json(json::parse(R"({"type":"radial_power","theta":-2.5})"), 1), DomainError);
  EXPECT_THROW(io::measure_from_json(json::parse(R"({"type":"weighted_density","theta":0,"h":"bump"})"), 1),
               DomainError);
  EXPECT_THROW(io::measure_from_json(json::parse(R"({"type":"atomic","atoms":[{"point":[[1.0,0]],"mass":1}]})"), 1),
               DomainError);
  EXPECT_THROW(io::measure_from_json(json::parse(R"({"type":"atomic","atoms":[{"point":[[0.1,0]],"mass":0}]})"), 1),
               DomainError);
}

TEST(MeasureJson, Shorthand) {
  EXPECT_EQ(*io::measure_shorthand("radial_power:-0.5"), json::parse(R"({"type":"radial_power","theta":-0.5})"));
  EXPECT_EQ((*io::measure_shorthand("weighted_density:half_plane_bump:1"))["h"], "half_plane_bump");
  EXPECT_TRUE(measures::is_zero(io::measure_from_json(*io::measure_shorthand("zero"), 2)));
  EXPECT_FALSE(io::measure_shorthand("samples/atoms.json"));
  EXPECT_THROW(io::measure_shorthand("radial_power:abc"), DomainError);
  EXPECT_THROW(io::measure_shorthand("radial_power:0.5x"), DomainError);
}

TEST(Json, ParseErrorHasLineAndColumn) {
  const auto msg = message_of([] { io::parse_json("{\n  \"type\": \"atomic\",\n  \"atoms\": [,]\n}", "m.json"); });
  EXPECT_NE(msg.find("m.json"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 3, column 13"), std::string::npos) << msg;
}

TEST(QuadConfigJson, ExactFieldNames) {
  quad::QuadConfig c;
  c.radial_nodes = 64;
  c.seed = 7;
  c.outer_cutoff = 1e-9;
  const json j = io::to_json(c);
  for (const char* key : {"radial_nodes", "angular_nodes", "mc_samples", "seed", "boundary_grading", "outer_cutoff"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j.size(), 6u);
  EXPECT_EQ(io::quad_config_from_json(j), c);
  EXPECT_EQ(io::quad_config_from_json(json::object()), quad::QuadConfig{});
  EXPECT_THROW(io::quad_config_from_json(json::parse(R"({"radial":3})")), DomainError);
  EXPECT_THROW(io::quad_config_from_json(json::parse(R"({"radial_nodes":0})")), DomainError);
  EXPECT_THROW(io::quad_config_from_json(json::parse(R"({"radial_nodes":2.5})")), DomainError);
  EXPECT_THROW(io::quad_config_from_json(json::parse(R"({"seed":-1})")), DomainError);
}

TEST(TrendConfigJson, RoundTrip) {
  carleson::TrendConfig t;
  t.shells = 9;
  t.slope_min = -0.1;
  const auto back = io::trend_config_from_json(io::to_json(t));
  EXPECT_EQ(back.shells, 9);
  EXPECT_EQ(back.slope_min, -0.1);
  EXPECT_THROW(io::trend_config_from_json(json::parse(R"({"shell":3})")), DomainError);
}

TEST(LatticeJson, RoundTrip) {
  const auto lat = lattice::build_lattice(1.0, 2, 0.3);
  const json j = io::to_json(lat);
  EXPECT_EQ(j["points"][0].size(), 2u);
  const auto back = io::lattice_from_json(j);
  EXPECT_EQ(back.points.size(), lat.points.size());
  EXPECT_EQ(back.overlap_bound, lat.overlap_bound);
  for (std::size_t i = 0; i < lat.points.size(); ++i) EXPECT_TRUE(back.points[i] == lat.points[i]);
}

TEST(Csv, Columns) {
  const auto text = io::to_csv({{0.5, 0.75}, {1.0, 0.25}, -0.5, "carleson"});
  EXPECT_EQ(text, "probe_id,radius,value,slope,verdict\n0,0.5,1,-0.5,carleson\n1,0.75,0.25,-0.5,carleson\n");
  EXPECT_THROW(io::to_csv({{0.5}, {}, 0.0, ""}), DomainError);
}

TEST(Report, Envelope) {
  const auto env = io::envelope("norm", json{{"dim", 1}}, json{{"value", 2.0}});
  EXPECT_EQ(env["report_version"], 1);
  EXPECT_EQ(env["command"], "norm");
  const auto d = carleson::classify_berezin(MeasureSpec::radial_power(1, 0.5), carleson::params_from(1.0, 0.0),
                                            std::nullopt, quad::QuadConfig{});
  const json j = io::to_json(d);
  EXPECT_EQ(j["route"], "berezin");
  EXPECT_EQ(j["verdict"], "carleson");
  EXPECT_EQ(j["values"].size(), d.radii.size());
}

TEST(Summary, Deterministic) {
  const verify::Settings s;
  const std::vector<verify::SuiteResult> r{{"geometry", {{1, "a", true, "x"}, {1, "b", false, "y"}}}};
  const auto a = io::dump(io::verify_summary("geometry", r, s));
  EXPECT_EQ(a, io::dump(io::verify_summary("geometry", r, s)));
  const auto j = json::parse(a);
  EXPECT_EQ(j["report_version"], 1);
  EXPECT_FALSE(j["pass"]);
  EXPECT_EQ(j["suites"][0]["checks"][1]["name"], "b");
}

TEST(Files, AtomicWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "carleson_lab_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "report.json").string();
  io::write_atomic(path, "first\n");
  io::write_atomic(path, "second\n");
  EXPECT_EQ(io::read_file(path), "second\n");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  EXPECT_THROW(io::write_atomic((dir / "missing" / "r.json").string(), "x"), DomainError);
  std::filesystem::remove_all(dir);
}
