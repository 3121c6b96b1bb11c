#ifndef LCAT_SWING_HPP
#define LCAT_SWING_HPP

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "lcat/grid.hpp"
#include "lcat/protection.hpp"

namespace lcat {

/// Classical machine: constant EMF behind transient reactance.
struct MachineState {
  double delta_rad = 0.0;   // rotor angle
  double omega_rad_s = 0.0; // electrical speed
  double emf_pu = 1.0;      // internal EMF magnitude, fixed for a run
};

/// Timed change of one bus's load. Either a multiplicative scale of the
/// pre-event admittance or an absolute (P, Q) target converted at the bus's
/// power-flow voltage. An optional restore time puts back the admittance
/// captured just before the event fired.
struct LoadEvent {
  double time_s = 0.0;
  int bus = 0;
  bool is_scale = true;
  double scale = 1.0;
  double p_pu = 0.0;
  double q_pu = 0.0;
  std::optional<double> restore_time_s;
  std::string label;
};

struct TraceEvent {
  double time_s = 0.0;
  std::string description;
};

struct SimulationTrace {
  double step_s = 0.0;
  std::vector<double> time_s;
  std::vector<int> machine_buses;
  // one row per machine, one column per sample
  Eigen::MatrixXd delta_rad;
  Eigen::MatrixXd omega_rad_s;
  Eigen::MatrixXd p_electrical_pu;
  Eigen::MatrixXd p_mechanical_pu;
  std::vector<double> system_frequency_hz;  // inertia-weighted
  std::vector<TraceEvent> events;
  bool diverged = false;

  std::size_t sample_count() const { return time_s.size(); }
  double machine_frequency_hz(int machine, std::size_t sample) const;
};

struct GovernorConfig {
  bool enabled = false;
  double droop = 0.05;         // pu speed per pu power
  double time_constant_s = 0.5;
};

struct SimulationConfig {
  double duration_s = 300.0;
  double step_s = 0.005;  // must be <= 10 ms
  GovernorConfig governor;
  std::optional<UflsScheme> ufls;  // enables shedding feedback when set
};

/// Reduced-network dynamic model built from a converged power flow: loads
/// folded in as constant admittances, one internal node per machine behind
/// x'd, everything Kron-reduced to the internal nodes.
class DynamicsSystem {
 public:
  DynamicsSystem(const GridModel& model, const PowerFlowSolution& pf);

  int machine_count() const { return static_cast<int>(machines_.size()); }
  const std::vector<MachineState>& initial_states() const { return machines_; }
  const Eigen::MatrixXcd& reduced_ybus() const { return y_reduced_; }
  const std::vector<double>& p_mechanical() const { return p_mech_; }
  const GridModel& model() const { return model_; }

  Eigen::VectorXd electrical_power(const Eigen::VectorXd& delta) const;

  // event plumbing: admittance edits re-reduce the augmented network
  void set_load_scale(int bus_id, double scale);
  void set_load_absolute(int bus_id, double p_pu, double q_pu);
  std::complex<double> load_admittance(int bus_id) const;
  void set_load_admittance(int bus_id, std::complex<double> y);
  void scale_all_loads(double factor);

  double inertia_weighted_frequency_hz(const Eigen::VectorXd& omega) const;
  double synchronous_speed_rad_s() const { return omega_sync_; }
  const std::vector<double>& inertia() const { return inertia_; }
  const std::vector<double>& damping() const { return damping_; }

 private:
  void rebuild_reduction();

  GridModel model_;
  std::vector<MachineState> machines_;
  std::vector<int> machine_buses_;
  std::vector<double> inertia_;
  std::vector<double> damping_;
  std::vector<double> p_mech_;
  std::vector<double> emf_;
  Eigen::MatrixXcd y_network_;           // bus block without loads
  Eigen::VectorXcd y_load_;              // per-bus load admittance
  std::vector<std::complex<double>> y_gen_;  // 1/(j x'd) per machine
  Eigen::MatrixXcd y_reduced_;
  Eigen::VectorXd v_mag_pf_;             // conversion base for absolute events
  double omega_sync_;
};

// P_e_i = sum_j E_i E_j (G_ij cos(d_i - d_j) + B_ij sin(d_i - d_j))
Eigen::VectorXd electrical_power(const std::vector<MachineState>& states,
                                 const Eigen::MatrixXcd& y_reduced);

DynamicsSystem init_dynamics(const GridModel& model, const PowerFlowSolution& pf);

SimulationTrace simulate(const GridModel& model, const PowerFlowSolution& pf,
                         const std::vector<LoadEvent>& events, const SimulationConfig& cfg);

std::vector<double> system_frequency(const SimulationTrace& trace);

void write_trace_csv(const SimulationTrace& trace, const std::string& path);
void write_trace_summary_json(const SimulationTrace& trace, const FrequencyStandard& standard,
                              const std::string& path);

}  // namespace lcat

#endif  // LCAT_SWING_HPP
