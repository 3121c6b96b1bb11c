#ifndef LCAT_DMD_HPP
#define LCAT_DMD_HPP

#include <Eigen/Core>
#include <complex>
#include <string>
#include <vector>

#include "lcat/load_panel.hpp"

namespace lcat {

/// One-step-shifted snapshot matrices: Xp column j is the panel column that
/// follows X column j.
struct SnapshotPair {
  Eigen::MatrixXd X;   // n x (m-1)
  Eigen::MatrixXd Xp;  // n x (m-1)
};

constexpr int kDmdAutoRank = -1;

/// Exact truncated decomposition of a snapshot pair. Factors are stored at
/// the truncation rank; eigenpairs keep the order the eigensolver produced,
/// user-facing orderings are made by mode_report.
struct DmdResult {
  int rank = 0;
  Eigen::MatrixXd U;            // n x r, orthonormal columns
  Eigen::VectorXd sigma;        // r positive, non-increasing
  Eigen::MatrixXd V;            // (m-1) x r
  Eigen::MatrixXd atilde;       // r x r reduced operator
  Eigen::VectorXcd eigenvalues; // r
  Eigen::MatrixXcd W;           // r x r eigenvectors
  Eigen::MatrixXcd modes;       // n x r (Phi)
  Eigen::VectorXcd amplitudes;  // r, least-squares fit of the first snapshot
};

struct ModeDescriptor {
  int index = 0;            // column in DmdResult::modes
  double frequency_hz = 0;  // Im(ln(lambda)/dt) / 2pi
  double growth_rate = 0;   // Re(ln(lambda)/dt), -inf for lambda == 0
  double energy = 0;        // |b| * ||Phi column||
  bool zero_eigenvalue = false;
};

// m >= 3 columns required so that both X and Xp carry at least two snapshots.
SnapshotPair build_snapshot_pair(const LoadPanel& panel);
SnapshotPair build_snapshot_pair(const Eigen::MatrixXd& snapshots);

// rank = kDmdAutoRank selects the smallest rank holding >= 99.9% of squared
// singular-value energy; an explicit rank above the numeric rank (relative
// tolerance 1e-12) raises RankDeficient.
DmdResult dmd(const SnapshotPair& pair, int rank = kDmdAutoRank);

// Real part of sum_j Phi_j * b_j * lambda_j^k for k = first_step .. +steps-1.
Eigen::MatrixXd reconstruct(const DmdResult& result, const std::vector<int>& mode_indices,
                            int steps, int first_step = 0);

// Continuous-time view of the spectrum, sorted by energy descending with
// ties broken by ascending frequency.
std::vector<ModeDescriptor> mode_report(const DmdResult& result, double dt_seconds);

void write_dmd_json(const DmdResult& result, const std::string& path);
DmdResult read_dmd_json(const std::string& path);

}  // namespace lcat

#endif  // LCAT_DMD_HPP
