#ifndef LCAT_GRID_HPP
#define LCAT_GRID_HPP

#include <Eigen/Core>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "lcat/errors.hpp"

namespace lcat {

enum class BusType { Slack, PV, PQ };

struct Bus {
  int id = 0;  // external 1-based bus number
  BusType type = BusType::PQ;
  double base_kv = 0.0;
};

struct Branch {
  int from = 0;
  int to = 0;
  double resistance_pu = 0.0;
  double reactance_pu = 0.0;
  double shunt_b_pu = 0.0;  // total line charging, split half per end
};

struct Generator {
  int bus = 0;
  double p_pu = 0.0;           // dispatched active power (ignored at the slack)
  double v_setpoint_pu = 1.0;
  double inertia_s = 4.0;      // H on system base
  double xd_transient_pu = 0.25;
  double damping_pu = 2.0;     // D on system base
};

struct Load {
  int bus = 0;
  double p_pu = 0.0;
  double q_pu = 0.0;
};

struct GridModel {
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  std::vector<Load> loads;
  double base_mva = 100.0;

  int bus_index(int bus_id) const;  // -1 when absent
  double total_active_load_pu() const;
  void validate() const;  // single slack, references resolve, H/x'd > 0
};

struct PowerFlowSolution {
  Eigen::VectorXd v_mag;    // pu per bus
  Eigen::VectorXd v_angle;  // rad, slack = 0
  // complex power entering each branch at its from/to ends
  std::vector<std::complex<double>> s_from;
  std::vector<std::complex<double>> s_to;
  std::complex<double> slack_injection;  // pu
  int iterations = 0;
  double max_mismatch_pu = 0.0;

  std::complex<double> bus_voltage(int index) const {
    return std::polar(v_mag(index), v_angle(index));
  }
};

// The 14-bus, 20-branch test case with the 11 mappable load buses
// (#2-#6, #9-#14). Machine dynamic data is the documented fixture table:
// H in [2,6] s, x'd = 0.25 pu, D = 2 pu, all on the 100 MVA system base.
GridModel ieee14_fixture();

// The 11 zone codes in mapping order (WEST -> bus 2 ... LONGIL -> bus 14).
const std::vector<std::pair<std::string, int>>& nyiso_zone_bus_map();

// Reshapes bus loads so each mapped bus carries its zone's share of the
// fixture's base-case total active load; reactive power keeps each bus's
// base-case power factor.
GridModel map_zone_loads(const GridModel& model, const std::map<std::string, double>& zone_mw);

Eigen::MatrixXcd ybus(const GridModel& model);

PowerFlowSolution power_flow(const GridModel& model, double tol_pu = 1e-8, int max_iter = 50);

// Schur complement onto the kept index set.
Eigen::MatrixXcd kron_reduce(const Eigen::MatrixXcd& y, const std::vector<int>& keep);

// Fixture file formats: self-describing JSON, and the fixed-column common
// data format (BUS/BRANCH DATA FOLLOWS sections) for alternate cases.
GridModel read_grid_json(const std::string& path);
void write_grid_json(const GridModel& model, const std::string& path);
GridModel read_grid_common_format(const std::string& path);

// One-row CSV keyed by the 11 zone codes.
std::map<std::string, double> read_zone_snapshot_csv(const std::string& path);
void write_zone_snapshot_csv(const std::map<std::string, double>& zone_mw,
                             const std::string& path);

}  // namespace lcat

#endif  // LCAT_GRID_HPP
