#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <regex>

#include "oracles.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

/// Runs the codemap binary with `args` (already quoted as needed).
Run run_cli(const std::string& args, const oracle::TempDir& scratch) {
  const auto out = scratch.path() / "stdout.txt";
  const auto err = scratch.path() / "stderr.txt";
  const std::string cmd = quote(CODEMAP_CLI) + " " + args + " >" + quote(out.string()) + " 2>" + quote(err.string());
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = oracle::read_file(out);
  r.err = oracle::read_file(err);
  return r;
}

std::string fixture() { return quote(oracle::fixture_dir("sample10").string()); }

}  // namespace

TEST(Cli, BuildIsByteIdenticalAcrossRuns) {
  oracle::TempDir tmp;
  const auto a = tmp.path() / "a.json", b = tmp.path() / "b.json";
  ASSERT_EQ(run_cli("build " + fixture() + " --seed 7 --resolution 64 -o " + quote(a.string()), tmp).status, 0);
  ASSERT_EQ(run_cli("build " + fixture() + " --seed 7 --resolution 64 -o " + quote(b.string()), tmp).status, 0);
  const auto text = oracle::read_file(a);
  EXPECT_EQ(text, oracle::read_file(b));
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["formatVersion"], 1);
  EXPECT_EQ(j["files"].size(), 10u);
  EXPECT_EQ(j["meta"]["seed"], 7);
}

TEST(Cli, EmptyDirectoryWarnsAndWritesDegenerateModel) {
  oracle::TempDir tmp, empty;
  const auto m = tmp.path() / "m.json";
  const auto r = run_cli("build " + quote(empty.path().string()) + " --resolution 32 -o " + quote(m.string()), tmp);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_TRUE(nlohmann::json::parse(oracle::read_file(m))["files"].empty());
}

TEST(Cli, UnreadableRootFails) {
  oracle::TempDir tmp;
  const auto r = run_cli("build " + quote((tmp.path() / "missing").string()) + " -o " +
                             quote((tmp.path() / "m.json").string()),
                         tmp);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, BadArgumentsAreRejected) {
  oracle::TempDir tmp;
  EXPECT_NE(run_cli("", tmp).status, 0);
  EXPECT_NE(run_cli("build " + fixture() + " --alpha 2 -o x.json", tmp).status, 0);
  EXPECT_NE(run_cli("frobnicate", tmp).status, 0);
}

TEST(Cli, RenderOverlays) {
  oracle::TempDir tmp;
  const auto m = tmp.path() / "m.json";
  ASSERT_EQ(run_cli("build " + fixture() + " --resolution 64 -o " + quote(m.string()), tmp).status, 0);
  const auto base = tmp.path() / "base.svg", flow = tmp.path() / "flow.svg", miss = tmp.path() / "miss.svg";
  ASSERT_EQ(run_cli("render " + quote(m.string()) + " --size 256 -o " + quote(base.string()), tmp).status, 0);
  ASSERT_EQ(run_cli("render " + quote(m.string()) + " --size 256 --overlay callers:getSettingOrDefault -o " +
                        quote(flow.string()),
                    tmp)
                .status,
            0);
  ASSERT_EQ(run_cli("render " + quote(m.string()) + " --size 256 --overlay search:zzqqxx -o " + quote(miss.string()),
                    tmp)
                .status,
            0);
  const auto flow_svg = oracle::read_file(flow);
  EXPECT_NE(flow_svg.find("<path class=\"flow\""), std::string::npos);
  EXPECT_NE(flow_svg.find("marker-end="), std::string::npos);

  const std::regex ann("<g id=\"annotations\"[^>]*>[\\s\\S]*?</g>");
  const auto base_svg = oracle::read_file(base), miss_svg = oracle::read_file(miss);
  EXPECT_NE(base_svg, miss_svg);
  EXPECT_EQ(std::regex_replace(base_svg, ann, ""), std::regex_replace(miss_svg, ann, ""));
}

TEST(Cli, MalformedOverlayExitsWithUsage) {
  oracle::TempDir tmp;
  const auto m = tmp.path() / "m.json";
  ASSERT_EQ(run_cli("build " + fixture() + " --resolution 32 -o " + quote(m.string()), tmp).status, 0);
  const auto r = run_cli("render " + quote(m.string()) + " --overlay grep:x -o " +
                             quote((tmp.path() / "x.svg").string()),
                         tmp);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("search:<query>, callers:<symbol>, heat:<csvfile>"), std::string::npos);
}

TEST(Cli, RenderPngAndHeat) {
  oracle::TempDir tmp;
  const auto m = tmp.path() / "m.json";
  ASSERT_EQ(run_cli("build " + fixture() + " --resolution 32 -o " + quote(m.string()), tmp).status, 0);
  tmp.write("heat.csv", "path,value\nsrc/org/demo/app/Client.java,5\nsrc/org/demo/data/Database.java,1\n");
  const auto png = tmp.path() / "map.png";
  ASSERT_EQ(run_cli("render " + quote(m.string()) + " --size 64 --overlay heat:" +
                        quote((tmp.path() / "heat.csv").string()) + " -o " + quote(png.string()),
                    tmp)
                .status,
            0);
  EXPECT_EQ(oracle::read_file(png).substr(0, 8), std::string("\x89PNG\r\n\x1a\n", 8));
}

TEST(Cli, DiffAfterAddingAFile) {
  oracle::TempDir tmp, tree;
  oracle::copy_tree(oracle::fixture_dir("sample10"), tree.path());
  const auto a = tmp.path() / "a.json", b = tmp.path() / "b.json";
  ASSERT_EQ(run_cli("build " + quote(tree.path().string()) + " --resolution 32 -o " + quote(a.string()), tmp).status, 0);
  oracle::copy_tree(oracle::fixture_dir("extra"), tree.path());
  ASSERT_EQ(run_cli("build " + quote(tree.path().string()) + " --resolution 32 --prev " + quote(a.string()) + " -o " +
                        quote(b.string()),
                    tmp)
                .status,
            0);
  const auto r = run_cli("diff " + quote(a.string()) + " " + quote(b.string()) + " --json", tmp);
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["added"], 1);
  EXPECT_EQ(j["removed"], 0);
  EXPECT_EQ(j["files"].size(), 10u);
  EXPECT_LT(j["meanDisplacement"].get<double>(), 0.05);

  const auto same = run_cli("diff " + quote(a.string()) + " " + quote(a.string()), tmp);
  EXPECT_EQ(same.status, 0);
  EXPECT_NE(same.out.find("mean displacement: 0.000000"), std::string::npos);
}
