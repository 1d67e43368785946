#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "document.hpp"
#include "support.hpp"

using namespace ddgeo;
using namespace ddgeo::cli;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("ddgeo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::string file(const std::string& name) const { return (dir_ / name).string(); }

    int run_cli(const std::vector<std::string>& args) {
        out_.str("");
        err_.str("");
        return run(args, out_, err_);
    }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(file(name)) << text;
        return file(name);
    }

    std::string write_path(const std::string& name, const DiscretePath& path, int n, double ell) const {
        PathDocument doc;
        doc.n_sides = n;
        doc.ell = ell;
        set_path(doc, path);
        save_document(doc, file(name));
        return file(name);
    }

    std::filesystem::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

DiscretePath straight(double len) {
    DiscretePath p;
    p.start = Configuration::from_angle({0, 0}, 0.0);
    p.end = Configuration::from_angle({len, 0}, 0.0);
    p.vertices = {{0, 0}, {len, 0}};
    return p;
}

}  // namespace

TEST_F(CliTest, ValidateStraight) {
    const auto f = write_path("straight.json", straight(5.0), 8, 1.0);
    EXPECT_EQ(run_cli({"validate", f}), kOk);
    EXPECT_EQ(out_.str(), "feasible\n");
}

TEST_F(CliTest, ValidateReportsViolations) {
    const DiscretePath bad = shoot(Configuration::from_angle({0, 0}, 0.0), std::vector<double>{0.0, 2.0, 0.0},
                                   std::vector<double>{1.0, 1.0});
    const auto f = write_path("bad.json", bad, 8, 1.0);
    EXPECT_EQ(run_cli({"validate", f}), kInfeasible);
    EXPECT_NE(out_.str().find("infeasible"), std::string::npos);
}

TEST_F(CliTest, ClassifyPolygonIsOneArc) {
    const auto f = write_path("ngon.json", fixtures::ngon_path(8, 1.0, 8), 8, 1.0);
    EXPECT_EQ(run_cli({"classify", f, "--out", file("c.json")}), kOk);
    const PathDocument doc = load_document(file("c.json"));
    ASSERT_TRUE(doc.structure.has_value());
    EXPECT_EQ((*doc.structure)["type"], "A");
}

TEST_F(CliTest, PlanOutputValidates) {
    EXPECT_EQ(run_cli({"plan", "--from", "0,0,0", "--to", "2,3,120", "--params-n", "8", "--out", file("p.json"),
                       "--svg", file("p.svg")}),
              kOk);
    EXPECT_EQ(run_cli({"validate", file("p.json")}), kOk);
    EXPECT_TRUE(std::filesystem::exists(file("p.svg")));
}

TEST_F(CliTest, PlanNeedsParams) {
    EXPECT_EQ(run_cli({"plan", "--from", "0,0,0", "--to", "2,3,120"}), kUsage);
}

TEST_F(CliTest, ShortenWritesTrace) {
    const DiscretePath path = shoot(Configuration::from_angle({0, 0}, 0.0), std::vector<double>{0.0, 0.1, 0.0},
                                    std::vector<double>{2.0, 2.0});
    const auto f = write_path("ll.json", path, 8, 1.0);
    EXPECT_EQ(run_cli({"shorten", f, "--out", file("s.json")}), kOk);
    const PathDocument doc = load_document(file("s.json"));
    ASSERT_TRUE(doc.trace.has_value());
    EXPECT_FALSE(doc.trace->empty());
    EXPECT_EQ((*doc.trace)[0]["rule"], "LongLongShortcut");
    EXPECT_EQ(run_cli({"validate", file("s.json")}), kOk);
}

TEST_F(CliTest, DiscretizeWordValidates) {
    EXPECT_EQ(run_cli({"discretize", "--from", "0,0,0", "--word", "LSR", "--lengths", "1,2,1.5", "--params-n", "16",
                       "--out", file("d.json")}),
              kOk);
    EXPECT_EQ(run_cli({"validate", file("d.json")}), kOk);
    EXPECT_EQ(run_cli({"discretize", "--from", "0,0,0", "--word", "LX", "--lengths", "1,2", "--params-n", "16"}),
              kUsage);
}

TEST_F(CliTest, DubinsReportsWord) {
    EXPECT_EQ(run_cli({"dubins", "--from", "0,0,0", "--to", "10,0,0"}), kOk);
    EXPECT_NE(out_.str().find("\"length\": 10"), std::string::npos);
}

TEST_F(CliTest, ConvergeTable) {
    EXPECT_EQ(run_cli({"converge", "--from", "0,0,0", "--to", "4,1,30", "--n", "8,16", "--out", file("t.json")}), kOk);
    EXPECT_NE(out_.str().find("sandwich holds"), std::string::npos);
    std::ifstream in(file("t.json"));
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["rows"].size(), 2u);
}

TEST_F(CliTest, RenderWritesSvg) {
    const auto f = write_path("ngon.json", fixtures::ngon_path(8, 1.0, 5), 8, 1.0);
    EXPECT_EQ(run_cli({"render", f, "--svg", file("r.svg")}), kOk);
    std::ifstream in(file("r.svg"));
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_NE(ss.str().find("<svg"), std::string::npos);
    EXPECT_NE(ss.str().find("viewBox"), std::string::npos);
}

TEST_F(CliTest, MalformedJsonIsUsageError) {
    const auto f = write("bad.json", "{\n  \"version\": 1,\n  \"params\": {\"n_sides\": 8,,}\n}\n");
    EXPECT_EQ(run_cli({"validate", f}), kUsage);
    EXPECT_NE(err_.str().find("line 3"), std::string::npos) << err_.str();
}

TEST_F(CliTest, SchemaErrorsAreUsageErrors) {
    const auto f = write("s.json", R"({"version": 1, "params": {"n_sides": 3, "ell": 1},
        "start": {"point": [0, 0], "heading_degrees": 0}, "end": {"point": [1, 0], "heading_degrees": 0}})");
    EXPECT_EQ(run_cli({"validate", f}), kUsage);
    EXPECT_NE(err_.str().find("n_sides"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run_cli({}), kUsage);
    EXPECT_EQ(run_cli({"frobnicate"}), kUsage);
    EXPECT_EQ(run_cli({"validate", file("missing.json")}), kUsage);
    EXPECT_EQ(run_cli({"--help"}), kOk);
}

TEST(Document, RoundTrip) {
    PathDocument doc;
    doc.theta_degrees = 45.0;
    doc.ell = 0.1 + 0.2;
    doc.start = {0.1, -2.0 / 3.0, 179.5};
    doc.end = {1e-17, 3.0, -0.25};
    doc.vertices = {{0.1, -2.0 / 3.0}, {1.0 / 7.0, 2.5}, {1e-17, 3.0}};
    doc.structure = nlohmann::json{{"type", "AB"}};
    EXPECT_EQ(parse_document(dump_document(doc)), doc);
}

TEST(Document, HeadingsNormalizedOnLoad) {
    const auto doc = parse_document(R"({"version": 1, "params": {"n_sides": 8, "ell": 1},
        "start": {"point": [0, 0], "heading_degrees": 540}, "end": {"point": [1, 0], "heading_degrees": -180}})");
    EXPECT_DOUBLE_EQ(doc.start.heading_degrees, 180.0);
    EXPECT_DOUBLE_EQ(doc.end.heading_degrees, 180.0);
    EXPECT_TRUE(doc.vertices.empty());
}
