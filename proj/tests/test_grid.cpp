#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "lcat/grid.hpp"
#include "oracles.hpp"

using namespace lcat;
using cplx = std::complex<double>;

TEST_CASE("ieee14 fixture shape") {
  const GridModel m = ieee14_fixture();
  m.validate();
  CHECK(m.buses.size() == 14);
  CHECK(m.branches.size() == 20);
  CHECK(m.generators.size() == 5);
  CHECK(m.loads.size() == 11);
  CHECK(m.buses[0].id == 1);
  CHECK(m.buses[0].type == BusType::Slack);
  CHECK(m.total_active_load_pu() == doctest::Approx(2.59).epsilon(1e-12));
  for (const auto& g : m.generators) {
    CHECK(g.inertia_s >= 2.0);
    CHECK(g.inertia_s <= 6.0);
  }

  // the 11 mappable buses, in mapping order
  const auto& zmap = nyiso_zone_bus_map();
  REQUIRE(zmap.size() == 11);
  CHECK(zmap.front().first == "WEST");
  CHECK(zmap.front().second == 2);
  CHECK(zmap.back().first == "LONGIL");
  CHECK(zmap.back().second == 14);
  for (const auto& [zone, bus] : zmap) {
    bool has_load = false;
    for (const auto& l : m.loads) has_load |= l.bus == bus;
    CHECK(has_load);
  }
}

TEST_CASE("zone mapping spreads the fixture total by share") {
  const GridModel m = ieee14_fixture();
  const double s_target = m.total_active_load_pu();

  SUBCASE("equal zones share evenly and keep power factors") {
    std::map<std::string, double> snap;
    for (const auto& [zone, bus] : nyiso_zone_bus_map()) snap[zone] = 500.0;
    const GridModel mapped = map_zone_loads(m, snap);
    for (const auto& l : mapped.loads) {
      CHECK(l.p_pu == doctest::Approx(s_target / 11.0).epsilon(1e-12));
    }
    // bus 4 keeps its capacitive base-case power factor
    double q4 = 0.0, p4 = 0.0;
    for (const auto& l : mapped.loads)
      if (l.bus == 4) {
        p4 = l.p_pu;
        q4 = l.q_pu;
      }
    CHECK(q4 / p4 == doctest::Approx(-3.9 / 47.8).epsilon(1e-12));
    CHECK(mapped.total_active_load_pu() == doctest::Approx(s_target).epsilon(1e-9));
  }

  SUBCASE("single-zone concentration") {
    std::map<std::string, double> snap;
    for (const auto& [zone, bus] : nyiso_zone_bus_map()) snap[zone] = 0.0;
    snap["N.Y.C."] = 1234.0;
    const GridModel mapped = map_zone_loads(m, snap);
    for (const auto& l : mapped.loads) {
      if (l.bus == 13)
        CHECK(l.p_pu == doctest::Approx(s_target).epsilon(1e-12));
      else
        CHECK(l.p_pu == 0.0);
    }
  }

  SUBCASE("30% NYC share lands on bus 13; oracle recomputes every ratio") {
    // a fixture hour: NYC about 30% of the state total
    std::map<std::string, double> snap = {
        {"WEST", 1600}, {"GENESE", 950},  {"CENTRL", 1500}, {"NORTH", 600},
        {"MHK VL", 800}, {"CAPITL", 1100}, {"HUD VL", 900},  {"MILLWD", 300},
        {"DUNWOD", 550}, {"N.Y.C.", 5100}, {"LONGIL", 3600}};
    double total = 0.0;
    for (const auto& [z, mw] : snap) total += mw;
    CHECK(snap["N.Y.C."] / total == doctest::Approx(0.30).epsilon(0.01));

    const GridModel mapped = map_zone_loads(m, snap);
    for (const auto& [zone, bus] : nyiso_zone_bus_map()) {
      const double want = snap[zone] / total * s_target;
      for (const auto& l : mapped.loads)
        if (l.bus == bus) CHECK(l.p_pu == doctest::Approx(want).epsilon(1e-12));
    }
  }

  SUBCASE("missing zone and all-zero snapshots are refused") {
    std::map<std::string, double> snap;
    for (const auto& [zone, bus] : nyiso_zone_bus_map()) snap[zone] = 0.0;
    try {
      map_zone_loads(m, snap);
      FAIL("expected AllZonesZero");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::AllZonesZero);
    }
    snap.erase("WEST");
    snap["N.Y.C."] = 100.0;
    try {
      map_zone_loads(m, snap);
      FAIL("expected MissingZone");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingZone);
    }
  }
}

TEST_CASE("ybus assembly") {
  GridModel m;
  m.buses = {{1, BusType::Slack, 1.0}, {2, BusType::PQ, 1.0}};
  m.generators = {{1, 0.0, 1.0, 4.0, 0.25, 2.0}};
  m.branches = {{1, 2, 0.0, 0.1, 0.0}};

  SUBCASE("pure reactance line") {
    const Eigen::MatrixXcd y = ybus(m);
    CHECK(std::abs(y(0, 0) - cplx(0, -10)) < 1e-12);
    CHECK(std::abs(y(1, 1) - cplx(0, -10)) < 1e-12);
    CHECK(std::abs(y(0, 1) - cplx(0, 10)) < 1e-12);
    CHECK(std::abs(y(1, 0) - cplx(0, 10)) < 1e-12);
  }

  SUBCASE("line charging adds half per end") {
    m.branches[0].shunt_b_pu = 0.02;
    const Eigen::MatrixXcd y = ybus(m);
    CHECK(std::abs(y(0, 0) - cplx(0, -9.99)) < 1e-12);
    CHECK(std::abs(y(1, 1) - cplx(0, -9.99)) < 1e-12);
  }

  SUBCASE("isolated bus row stays zero") {
    m.buses.push_back({3, BusType::PQ, 1.0});
    const Eigen::MatrixXcd y = ybus(m);
    CHECK(y.row(2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(y.col(2).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("zero impedance branch is refused") {
    m.branches[0].reactance_pu = 0.0;
    CHECK_THROWS_AS(ybus(m), Error);
  }

  SUBCASE("ybus is symmetric on the ieee14 fixture") {
    const Eigen::MatrixXcd y = ybus(ieee14_fixture());
    CHECK((y - y.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("power flow on a two-bus link matches the closed form") {
  // slack V=1 at bus 1, PV bus 2 held at 1.0 drawing 1.0 pu over x = 0.1:
  // angle = -asin(P x / (Vs Vr)) by inverting the lossless transfer law
  GridModel m;
  m.buses = {{1, BusType::Slack, 1.0}, {2, BusType::PV, 1.0}};
  m.generators = {{1, 0.0, 1.0, 4.0, 0.25, 2.0}, {2, 0.0, 1.0, 4.0, 0.25, 2.0}};
  m.branches = {{1, 2, 0.0, 0.1, 0.0}};
  m.loads = {{2, 1.0, 0.0}};

  const PowerFlowSolution sol = power_flow(m, 1e-13, 50);
  const double expected = -std::asin(0.1);
  CHECK(sol.v_angle(1) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(sol.v_mag(1) == doctest::Approx(1.0));
  CHECK(sol.slack_injection.real() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("unloaded lossless network converges at the flat start") {
  GridModel m;
  m.buses = {{1, BusType::Slack, 1.0}, {2, BusType::PQ, 1.0}, {3, BusType::PQ, 1.0}};
  m.generators = {{1, 0.0, 1.0, 4.0, 0.25, 2.0}};
  m.branches = {{1, 2, 0.0, 0.2, 0.0}, {2, 3, 0.0, 0.3, 0.0}};
  const PowerFlowSolution sol = power_flow(m);
  CHECK(sol.iterations <= 1);
  for (int i = 0; i < 3; ++i) {
    CHECK(sol.v_mag(i) == doctest::Approx(1.0));
    CHECK(sol.v_angle(i) == doctest::Approx(0.0));
  }
}

TEST_CASE("ieee14 base case: fast convergence, Gauss-Seidel agreement, power balance") {
  const GridModel m = ieee14_fixture();
  const PowerFlowSolution sol = power_flow(m, 1e-8, 10);
  CHECK(sol.iterations <= 10);
  CHECK(sol.max_mismatch_pu <= 1e-8);

  // oracle: independently coded accelerated Gauss-Seidel
  const auto gs = oracle::gauss_seidel_power_flow(m, 1e-12, 30000);
  REQUIRE(gs.converged);
  for (std::size_t i = 0; i < m.buses.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    CHECK(sol.v_mag(idx) == doctest::Approx(std::abs(gs.v[i])).epsilon(1e-6));
    CHECK(sol.v_angle(idx) == doctest::Approx(std::arg(gs.v[i])).epsilon(1e-6));
  }

  // complex power balance at every bus when back-substituted into Y
  const Eigen::MatrixXcd y = ybus(m);
  Eigen::VectorXcd v(14);
  for (int i = 0; i < 14; ++i) v(i) = sol.bus_voltage(i);
  Eigen::VectorXcd s_calc = v.array() * (y * v).conjugate().array();
  Eigen::VectorXcd s_sched = Eigen::VectorXcd::Zero(14);
  for (const auto& g : m.generators) s_sched(m.bus_index(g.bus)) += cplx(g.p_pu, 0.0);
  for (const auto& l : m.loads) s_sched(m.bus_index(l.bus)) -= cplx(l.p_pu, l.q_pu);
  for (int i = 0; i < 14; ++i) {
    if (m.buses[static_cast<std::size_t>(i)].type == BusType::Slack) continue;
    CHECK(s_calc(i).real() == doctest::Approx(s_sched(i).real()).epsilon(1e-7));
    if (m.buses[static_cast<std::size_t>(i)].type == BusType::PQ)
      CHECK(s_calc(i).imag() == doctest::Approx(s_sched(i).imag()).epsilon(1e-7));
  }
}

TEST_CASE("islanded bus and divergence are reported") {
  GridModel m;
  m.buses = {{1, BusType::Slack, 1.0}, {2, BusType::PQ, 1.0}, {3, BusType::PQ, 1.0}};
  m.generators = {{1, 0.0, 1.0, 4.0, 0.25, 2.0}};
  m.branches = {{1, 2, 0.0, 0.2, 0.0}};
  try {
    power_flow(m);
    FAIL("expected IslandedBus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IslandedBus);
  }

  // an impossible transfer (P >> line capacity) diverges
  GridModel hard;
  hard.buses = {{1, BusType::Slack, 1.0}, {2, BusType::PQ, 1.0}};
  hard.generators = {{1, 0.0, 1.0, 4.0, 0.25, 2.0}};
  hard.branches = {{1, 2, 0.0, 1.0, 0.0}};
  hard.loads = {{2, 5.0, 0.0}};
  try {
    power_flow(hard, 1e-8, 30);
    FAIL("expected Diverged");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Diverged);
  }
}

TEST_CASE("kron reduction") {
  SUBCASE("keeping everything is the identity") {
    const Eigen::MatrixXcd y = ybus(ieee14_fixture());
    const Eigen::MatrixXcd red = kron_reduce(y, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13});
    CHECK((red - y).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("star elimination gives the series admittance") {
    // center node 0, leaves 1 and 2 through y1 and y2
    const cplx y1(0.0, -4.0), y2(0.0, -2.5);
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(3, 3);
    y(0, 0) = y1 + y2;
    y(1, 1) = y1;
    y(2, 2) = y2;
    y(0, 1) = y(1, 0) = -y1;
    y(0, 2) = y(2, 0) = -y2;
    const Eigen::MatrixXcd red = kron_reduce(y, {1, 2});
    const cplx series = y1 * y2 / (y1 + y2);
    CHECK(std::abs(-red(0, 1) - series) < 1e-14);
    CHECK(std::abs(red(0, 0) - series) < 1e-14);
  }

  SUBCASE("nested reductions compose") {
    const Eigen::MatrixXcd y = ybus(ieee14_fixture());
    const Eigen::MatrixXcd once = kron_reduce(y, {0, 1, 2, 5, 7});
    const Eigen::MatrixXcd inner = kron_reduce(kron_reduce(y, {0, 1, 2, 3, 4, 5, 7}),
                                               {0, 1, 2, 5, 6});
    CHECK((once - inner).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("singular elimination block is refused") {
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(2, 2);
    y(0, 0) = cplx(1.0, 0.0);  // node 1 fully isolated
    try {
      kron_reduce(y, {0});
      FAIL("expected SingularEliminationBlock");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularEliminationBlock);
    }
  }
}

TEST_CASE("grid json fixture file round-trips and matches the built-in") {
  namespace fs = std::filesystem;
  const GridModel m = ieee14_fixture();
  const auto path = fs::temp_directory_path() / "lcat_ieee14_roundtrip.json";
  write_grid_json(m, path.string());
  const GridModel back = read_grid_json(path.string());
  CHECK(back.buses.size() == m.buses.size());
  CHECK(back.branches.size() == m.branches.size());
  CHECK(back.generators.size() == m.generators.size());
  CHECK(back.loads.size() == m.loads.size());
  CHECK(back.base_mva == m.base_mva);
  for (std::size_t i = 0; i < m.branches.size(); ++i) {
    CHECK(back.branches[i].reactance_pu == m.branches[i].reactance_pu);
    CHECK(back.branches[i].shunt_b_pu == m.branches[i].shunt_b_pu);
  }
  for (std::size_t i = 0; i < m.loads.size(); ++i) CHECK(back.loads[i].p_pu == m.loads[i].p_pu);
  fs::remove(path);
}

TEST_CASE("bundled fixture file matches the built-in case") {
  const GridModel bundled = read_grid_json(std::string(LCAT_DATA_DIR) + "/fixtures/ieee14.json");
  const GridModel builtin = ieee14_fixture();
  REQUIRE(bundled.buses.size() == builtin.buses.size());
  REQUIRE(bundled.branches.size() == builtin.branches.size());
  REQUIRE(bundled.generators.size() == builtin.generators.size());
  REQUIRE(bundled.loads.size() == builtin.loads.size());
  for (std::size_t i = 0; i < builtin.branches.size(); ++i) {
    CHECK(bundled.branches[i].from == builtin.branches[i].from);
    CHECK(bundled.branches[i].to == builtin.branches[i].to);
    CHECK(bundled.branches[i].reactance_pu == builtin.branches[i].reactance_pu);
  }
  for (std::size_t i = 0; i < builtin.generators.size(); ++i) {
    CHECK(bundled.generators[i].bus == builtin.generators[i].bus);
    CHECK(bundled.generators[i].inertia_s == builtin.generators[i].inertia_s);
  }
  for (std::size_t i = 0; i < builtin.loads.size(); ++i)
    CHECK(bundled.loads[i].p_pu == builtin.loads[i].p_pu);
}

TEST_CASE("common-format case text is accepted") {
  namespace fs = std::filesystem;
  // a 3-bus case in the fixed-column layout: slack + PV + PQ, two branches
  const auto put = [](std::string& line, std::size_t pos, const std::string& text) {
    if (line.size() < pos + text.size()) line.resize(pos + text.size(), ' ');
    line.replace(pos, text.size(), text);
  };
  const auto bus_line = [&](int id, const char* name, int type, double v, double pd, double qd,
                            double pg, double kv, double vset) {
    std::string line(100, ' ');
    char buf[16];
    std::snprintf(buf, sizeof buf, "%4d", id);
    put(line, 0, buf);
    put(line, 6, name);
    std::snprintf(buf, sizeof buf, "%2d", type);
    put(line, 24, buf);
    std::snprintf(buf, sizeof buf, "%6.3f", v);
    put(line, 27, buf);
    std::snprintf(buf, sizeof buf, "%8.1f", pd);
    put(line, 40, buf);
    std::snprintf(buf, sizeof buf, "%9.1f", qd);
    put(line, 49, buf);
    std::snprintf(buf, sizeof buf, "%7.1f", pg);
    put(line, 59, buf);
    std::snprintf(buf, sizeof buf, "%6.1f", kv);
    put(line, 76, buf);
    std::snprintf(buf, sizeof buf, "%5.3f", vset);
    put(line, 84, buf);
    return line + "\n";
  };
  const auto branch_line = [&](int from, int to, double r, double x, double b) {
    std::string line(72, ' ');
    char buf[16];
    std::snprintf(buf, sizeof buf, "%4d", from);
    put(line, 0, buf);
    std::snprintf(buf, sizeof buf, "%4d", to);
    put(line, 5, buf);
    std::snprintf(buf, sizeof buf, "%9.5f", r);
    put(line, 19, buf);
    std::snprintf(buf, sizeof buf, "%10.5f", x);
    put(line, 29, buf);
    std::snprintf(buf, sizeof buf, "%9.4f", b);
    put(line, 40, buf);
    return line + "\n";
  };

  std::string cdf;
  cdf += " 08/20/93 UW ARCHIVE           100.0  1993 W IEEE SAMPLE CASE\n";
  cdf += "BUS DATA FOLLOWS                            3 ITEMS\n";
  cdf += bus_line(1, "BUS-1", 3, 1.060, 0.0, 0.0, 0.0, 69.0, 1.060);
  cdf += bus_line(2, "BUS-2", 2, 1.045, 21.7, 12.7, 40.0, 69.0, 1.045);
  cdf += bus_line(3, "BUS-3", 0, 1.000, 45.0, 15.0, 0.0, 69.0, 0.0);
  cdf += "-999\n";
  cdf += "BRANCH DATA FOLLOWS                         2 ITEMS\n";
  cdf += branch_line(1, 2, 0.01938, 0.05917, 0.0528);
  cdf += branch_line(2, 3, 0.04699, 0.19797, 0.0438);
  cdf += "-999\n";
  const auto path = fs::temp_directory_path() / "lcat_case3.cdf";
  std::ofstream(path) << cdf;
  const GridModel m = read_grid_common_format(path.string());
  fs::remove(path);

  CHECK(m.buses.size() == 3);
  CHECK(m.base_mva == doctest::Approx(100.0));
  CHECK(m.buses[0].type == BusType::Slack);
  CHECK(m.buses[1].type == BusType::PV);
  CHECK(m.buses[2].type == BusType::PQ);
  CHECK(m.branches.size() == 2);
  CHECK(m.branches[0].reactance_pu == doctest::Approx(0.05917));
  CHECK(m.loads.size() == 2);  // the slack bus carries no load in this case
  REQUIRE(m.generators.size() == 2);
  CHECK(m.generators[1].p_pu == doctest::Approx(0.40));
  const PowerFlowSolution sol = power_flow(m);
  CHECK(sol.max_mismatch_pu <= 1e-8);
}

TEST_CASE("zone snapshot csv round-trips") {
  namespace fs = std::filesystem;
  std::map<std::string, double> snap;
  double v = 100.0;
  for (const auto& [zone, bus] : nyiso_zone_bus_map()) snap[zone] = (v += 37.25);
  const auto path = fs::temp_directory_path() / "lcat_zones.csv";
  write_zone_snapshot_csv(snap, path.string());
  const auto back = read_zone_snapshot_csv(path.string());
  fs::remove(path);
  REQUIRE(back.size() == snap.size());
  for (const auto& [zone, mw] : snap) CHECK(back.at(zone) == mw);
}
