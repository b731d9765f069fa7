#include "cbomm/config_file.hpp"
#include "cbomm/errors.hpp"
#include "doctest.h"

using namespace cbomm;

TEST_CASE("settings parse with comments and whitespace") {
  const Settings s = parse_settings("# comment\n  N = 40 \n\nsigma=2 # trailing\nbenchmark = forsaken\n");
  CHECK(s.at("N") == "40");
  CHECK(s.at("sigma") == "2");
  CHECK(s.at("benchmark") == "forsaken");
  CHECK_THROWS_AS(parse_settings("no equals sign"), ConfigError);
  CHECK_THROWS_AS(parse_settings(" = 3"), ConfigError);
}

TEST_CASE("settings apply to the solver config") {
  SolverConfig c;
  apply_settings(parse_settings("N=40\nsigma=2\nalpha_beta=100\ndt=0.05\nepsilon=0.5\nT=20\ninit=border\n"
                                "diffusion=isotropic\nseed=9\nbenchmark=forsaken\ntrials=3"),
                 c);
  CHECK(c.n_particles == 40);
  CHECK(c.sigma_x == 2.0);
  CHECK(c.sigma_y == 2.0);
  CHECK(c.alpha == 100.0);
  CHECK(c.beta == 100.0);
  CHECK(c.dt_y == 0.05);
  CHECK(c.dt_x() == doctest::Approx(0.025));
  CHECK(c.horizon == 20.0);
  CHECK(c.init.mode == InitSpec::Mode::Border);
  CHECK(c.diffusion == DiffusionMode::Isotropic);
  CHECK(c.seed == 9);
}

TEST_CASE("bad settings are config errors") {
  SolverConfig c;
  CHECK_THROWS_AS(apply_settings(parse_settings("gamma = 1"), c), ConfigError);
  CHECK_THROWS_AS(apply_settings(parse_settings("N = lots"), c), ConfigError);
  CHECK_THROWS_AS(apply_settings(parse_settings("init = spiral"), c), ConfigError);
  CHECK_THROWS_AS(load_settings_file("/nonexistent/settings.cfg"), ConfigError);
}
