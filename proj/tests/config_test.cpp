#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "casimir/config.hpp"
#include "casimir/errors.hpp"

namespace casimir {
namespace {

TEST(Config, EmptyTextGivesDefaults) {
  const auto c = parse_config("");
  EXPECT_EQ(c.modes, 1);
  EXPECT_EQ(c.samples, 200);
  EXPECT_DOUBLE_EQ(c.tf, 10.0);
  EXPECT_DOUBLE_EQ(c.trajectory.velocity(), 0.5);
  EXPECT_DOUBLE_EQ(c.tolerances.defect_tol, 1e-10);
  EXPECT_EQ(c.tolerances.fock_cutoff, 0);
  EXPECT_EQ(c.spectrum.branch, Branch::plus);
  EXPECT_TRUE(c.spectrum.betas.empty());
}

TEST(Config, ReadsSectionsAndTopLevelKeys) {
  const auto c = parse_config(R"(
modes = 2
tf = 20
samples = 401

[trajectory]
kind = parametric
epsilon = 0.1

[fock]
cutoff = 60

[spectrum]
betas = 0, 0.5, 0.9
branch = minus
)");
  EXPECT_EQ(c.modes, 2);
  EXPECT_DOUBLE_EQ(c.tf, 20.0);
  EXPECT_EQ(c.samples, 401);
  const auto& p = std::get<Trajectory::Parametric>(c.trajectory.kind());
  EXPECT_DOUBLE_EQ(p.epsilon, 0.1);
  EXPECT_EQ(c.tolerances.fock_cutoff, 60);
  EXPECT_EQ(c.spectrum.betas, (std::vector<double>{0.0, 0.5, 0.9}));
  EXPECT_EQ(c.spectrum.branch, Branch::minus);
}

TEST(Config, SerializeRoundTrips) {
  CavityConfig c;
  c.trajectory = Trajectory::custom({0, 1, 2, 3}, {1, 1.1, 1.2, 1.25});
  c.modes = 3;
  c.tolerances.ode_max_step = 2.5e-4;
  c.spectrum.betas = {0.1, 0.2};
  c.ermakov.omegaf = 2.0 * units::pi;
  const auto text = serialize_config(c);
  const auto back = parse_config(text);
  EXPECT_EQ(serialize_config(back), text);
  EXPECT_EQ(back.modes, 3);
  EXPECT_DOUBLE_EQ(back.tolerances.ode_max_step, 2.5e-4);
  EXPECT_DOUBLE_EQ(back.ermakov.omegaf, 2.0 * units::pi);
  EXPECT_DOUBLE_EQ(back.trajectory.q(1.0), 1.1);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("modes = 0"), ConfigError);
  EXPECT_THROW(parse_config("modes = two"), ConfigError);
  EXPECT_THROW(parse_config("tf = -1"), ConfigError);
  EXPECT_THROW(parse_config("[trajectory]\nkind = spiral"), ConfigError);
  EXPECT_THROW(parse_config("[trajectory]\nkind = parametric\nepsilon = 2"), ConfigError);
  EXPECT_THROW(parse_config("[ode]\ntol = 0"), ConfigError);
  EXPECT_THROW(parse_config("[spectrum]\nbranch = sideways"), ConfigError);
  EXPECT_THROW(parse_config("[fock]\ncutoff = 1\n[fock]\ncutoff = 2"), ConfigError);
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "casimir_config_test.ini";
  std::ofstream(path) << "samples = 17\n";
  EXPECT_EQ(load_config(path).samples, 17);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ConfigError);
}

TEST(ParseList, HandlesWhitespaceAndErrors) {
  EXPECT_EQ(parse_list(" 1, -2.5 ,3e-1"), (std::vector<double>{1.0, -2.5, 0.3}));
  EXPECT_TRUE(parse_list("  ").empty());
  EXPECT_THROW(parse_list("1,,2"), ConfigError);
  EXPECT_THROW(parse_list("1;2"), ConfigError);
}

TEST(ParseBranch, AcceptsNamesAndSigns) {
  EXPECT_EQ(parse_branch("plus"), Branch::plus);
  EXPECT_EQ(parse_branch(" - "), Branch::minus);
  EXPECT_EQ(to_string(Branch::minus), "minus");
}

}  // namespace
}  // namespace casimir
