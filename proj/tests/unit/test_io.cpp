#include <doctest.h>

#include <cstring>
#include <sstream>

#include "flock/error.hpp"
#include "flock/io.hpp"
#include "gen.hpp"

using namespace flock;
using flock::testing::Gen;

TEST_CASE("format_double: shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Gen g(seed);
    const double x = g.normal(std::exp(g.uniform(-50.0, 50.0)));
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("write_diagnostics_csv: header and rows") {
  DiagnosticRecord r;
  r.t = 0.5;
  r.m0 = 2.0;
  r.m1 = {1.0, -1.0};
  r.m2 = 3.0;
  r.X = 0.25;
  r.EV = 0.125;
  r.phi = 1.0;
  r.Phi = 0.5;
  std::ostringstream out;
  write_diagnostics_csv(out, {r}, 2);
  CHECK(out.str() == "t,m0,m1_1,m1_2,m2,X,EV,phi,Phi\n0.5,2,1,-1,3,0.25,0.125,1,0.5\n");
}

TEST_CASE("write_kinetic_csv: header") {
  std::ostringstream out;
  write_kinetic_csv(out, {}, 3);
  CHECK(out.str() == "t,M0,M1_1,M1_2,M1_3,M2,Lambda,zeta,eta,phi_min,Phi,entropy_rate\n");
}

TEST_CASE("write_ensemble_csv and write_hydro_csv: headers") {
  Ensemble e;
  e.dim = 2;
  e.x = {1.0, 2.0};
  e.v = {3.0, 4.0};
  e.w = {0.5};
  std::ostringstream a;
  write_ensemble_csv(a, e);
  CHECK(a.str() == "x_1,x_2,v_1,v_2,w\n1,2,3,4,0.5\n");

  HydroField f;
  f.grid.dim = 2;
  std::ostringstream b;
  write_hydro_csv(b, f);
  CHECK(b.str() == "center_1,center_2,rho,u_1,u_2,e,E,P_11,P_12,P_21,P_22,q_1,q_2\n");
}

TEST_CASE("state CSV round trip is exact") {
  Gen g(5);
  const auto s = g.state(17, 3, 10.0, 0.1);
  std::stringstream buf;
  write_state_csv(buf, s);
  const auto back = read_state_csv(buf);
  CHECK(back.dim == 3);
  CHECK(back.x == s.x);
  CHECK(back.v == s.v);
}

TEST_CASE("read_state_csv: malformed input") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_state_csv(empty), SpecError);
  std::istringstream odd("x_1,v_1,z\n1,2,3\n");
  CHECK_THROWS_AS(read_state_csv(odd), SpecError);
  std::istringstream bad("x_1,v_1\n1,abc\n");
  CHECK_THROWS_AS(read_state_csv(bad), SpecError);
  std::istringstream short_row("x_1,v_1\n1\n");
  CHECK_THROWS_AS(read_state_csv(short_row), SpecError);
  std::istringstream spaced("x_1, v_1\n 1 , -2\r\n\n");
  const auto s = read_state_csv(spaced);
  CHECK(s.x == std::vector<double>{1.0});
  CHECK(s.v == std::vector<double>{-2.0});
  CHECK_THROWS_AS(read_state_csv(std::string("/nonexistent/state.csv")), SpecError);
}
