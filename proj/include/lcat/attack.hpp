#ifndef LCAT_ATTACK_HPP
#define LCAT_ATTACK_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lcat/load_panel.hpp"
#include "lcat/swing.hpp"

namespace lcat {

enum class Knowledge { Oblivious, SemiOblivious };
enum class Access { NonPossession };
enum class Specificity { Targeted, NonTargeted };
enum class ResourceClass { ClassI, ClassII };
enum class AttackFrequency { Iterative, OneShot };
enum class Reproducibility { OneTime, MultipleTimes };
enum class AttackLevel { L1, L2 };

/// Descriptor of who the adversary is and what they can do.
struct ThreatModel {
  Knowledge knowledge = Knowledge::SemiOblivious;
  Access access = Access::NonPossession;
  Specificity specificity = Specificity::Targeted;
  ResourceClass resources = ResourceClass::ClassII;
  AttackFrequency frequency = AttackFrequency::Iterative;
  Reproducibility reproducibility = Reproducibility::MultipleTimes;
  AttackLevel level = AttackLevel::L2;
  std::vector<std::string> assets;
  std::string technique;
  std::string premise;
};

// The coordinated load-changing adversary profile.
ThreatModel load_changing_threat_model();

/// Discrete LTI plant x' = Gx + Bu, y = Cx + e with a linear control law
/// u' = H_ctl y. The noise source is sampled once per step.
struct LtiPlant {
  Eigen::MatrixXd G;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  Eigen::MatrixXd H_ctl;
  std::function<Eigen::VectorXd()> noise;  // empty = zero noise

  void validate() const;
};

std::function<Eigen::VectorXd()> make_uniform_noise(Eigen::Index dim, double bound,
                                                    std::uint64_t seed);

struct LtiOutput {
  Eigen::VectorXd x_next;
  Eigen::VectorXd y;
};

LtiOutput lti_step(const LtiPlant& plant, const Eigen::VectorXd& x, const Eigen::VectorXd& u);

// u_a = u + du
Eigen::VectorXd attack_controls(const Eigen::VectorXd& u, const Eigen::VectorXd& delta_u);

// P_T = sum unaltered + sum altered + losses
double total_demand(const std::vector<double>& unaltered, const std::vector<double>& altered,
                    double losses_pu = 0.0);

struct AttackScenario {
  std::string label;
  std::vector<int> compromised_buses;
  std::vector<LoadEvent> events;
  std::int64_t window_start = 0;  // wall-clock seconds
  std::int64_t window_end = 0;
  ThreatModel threat;

  void validate(const GridModel& model) const;
};

void write_scenario_json(const AttackScenario& scenario, const std::string& path);
AttackScenario read_scenario_json(const std::string& path);

// LD(t) = TL_A(t) - TL_B(t) on per-unit total series.
std::vector<double> compute_ld(const std::vector<double>& tl_a, const std::vector<double>& tl_b);

// LIID_i(t) = L_A_i(t)/TL_A(t) - L_B_i(t)/TL_B(t); columns sum to zero.
Eigen::MatrixXd compute_liid(const Eigen::MatrixXd& loads_a, const Eigen::MatrixXd& loads_b);

struct TargetWindow {
  int bus = 0;
  std::size_t start_index = 0;
  std::size_t end_index = 0;  // inclusive
};

struct TargetRecommendation {
  bool aligned = false;  // false = NoAlignedTarget (the trough misses every high-LD window)
  std::vector<int> buses;
  std::size_t window_start_index = 0;
  std::size_t window_end_index = 0;
};

struct PreselectionReport {
  std::vector<std::string> zones;  // row labels of liid, mapping order
  std::vector<int> buses;          // mapped bus per row
  std::vector<std::int64_t> timestamps;
  std::vector<double> ld;
  Eigen::MatrixXd liid;  // buses x time
  double peak_ld = 0.0;
  std::size_t peak_ld_index = 0;
  double min_liid = 0.0;
  int min_liid_bus = 0;
  std::size_t min_liid_index = 0;
  TargetRecommendation recommendation;
};

// Times with LD at or above the q-quantile form the candidate set; the
// recommendation is the global LIID minimum when its time falls inside that
// set, extended while LIID stays within 10% of the minimum. Buses whose
// LIID inside the window also comes within 10% of the minimum join the
// recommended set. Ties break to the lowest bus id, then earliest time.
TargetRecommendation select_target(const std::vector<double>& ld, const Eigen::MatrixXd& liid,
                                   const std::vector<int>& buses, double quantile = 0.9);

// Full preliminary analysis of two aligned year panels whose regions are the
// 11 zone codes. Totals are normalized by each year's own peak before LD.
PreselectionReport preselect(const LoadPanel& year_a, const LoadPanel& year_b,
                             double quantile = 0.9);

void write_preselection_json(const PreselectionReport& report, const std::string& path);
void write_preselection_csv(const PreselectionReport& report, const std::string& ld_path,
                            const std::string& liid_path);

}  // namespace lcat

#endif  // LCAT_ATTACK_HPP
