#include "lcat/dmd.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "lcat/errors.hpp"

namespace lcat {

using json = nlohmann::ordered_json;

SnapshotPair build_snapshot_pair(const Eigen::MatrixXd& snapshots) {
  const Eigen::Index m = snapshots.cols();
  if (m < 3)
    throw Error(ErrorCode::TooFewSnapshots,
                "need at least 3 snapshots, got " + std::to_string(m));
  SnapshotPair pair;
  pair.X = snapshots.leftCols(m - 1);
  pair.Xp = snapshots.rightCols(m - 1);
  return pair;
}

SnapshotPair build_snapshot_pair(const LoadPanel& panel) {
  return build_snapshot_pair(panel.values);
}

DmdResult dmd(const SnapshotPair& pair, int rank) {
  if (pair.X.rows() != pair.Xp.rows() || pair.X.cols() != pair.Xp.cols() || pair.X.size() == 0)
    throw Error(ErrorCode::DimensionMismatch, "snapshot matrices must share a non-empty shape");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(pair.X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) < 1e-30)
    throw Error(ErrorCode::DegenerateData, "snapshot matrix is numerically zero");

  int numeric_rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) / sv(0) > 1e-12) numeric_rank = static_cast<int>(i) + 1;

  int r;
  if (rank == kDmdAutoRank) {
    const double total = sv.squaredNorm();
    double acc = 0.0;
    r = numeric_rank;
    for (int i = 0; i < numeric_rank; ++i) {
      acc += sv(i) * sv(i);
      if (acc >= 0.999 * total) {
        r = i + 1;
        break;
      }
    }
  } else {
    if (rank <= 0)
      throw Error(ErrorCode::RankDeficient, "requested rank must be positive");
    if (rank > numeric_rank)
      throw Error(ErrorCode::RankDeficient,
                  "requested rank " + std::to_string(rank) + " exceeds numeric rank " +
                      std::to_string(numeric_rank));
    r = rank;
  }

  DmdResult res;
  res.rank = r;
  res.U = svd.matrixU().leftCols(r);
  res.sigma = sv.head(r);
  res.V = svd.matrixV().leftCols(r);

  const Eigen::MatrixXd xp_v_sinv =
      pair.Xp * res.V * res.sigma.cwiseInverse().asDiagonal();
  res.atilde = res.U.transpose() * xp_v_sinv;

  Eigen::EigenSolver<Eigen::MatrixXd> eig(res.atilde);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorCode::DegenerateData, "eigendecomposition of the reduced operator failed");
  res.eigenvalues = eig.eigenvalues();
  res.W = eig.eigenvectors();

  res.modes = xp_v_sinv.cast<std::complex<double>>() * res.W;

  const Eigen::VectorXcd x1 = pair.X.col(0).cast<std::complex<double>>();
  res.amplitudes = res.modes.completeOrthogonalDecomposition().solve(x1);
  return res;
}

Eigen::MatrixXd reconstruct(const DmdResult& result, const std::vector<int>& mode_indices,
                            int steps, int first_step) {
  if (steps < 0) throw Error(ErrorCode::BadModeIndex, "negative step count");
  for (int idx : mode_indices)
    if (idx < 0 || idx >= result.rank)
      throw Error(ErrorCode::BadModeIndex, "mode index " + std::to_string(idx) +
                                               " outside rank " + std::to_string(result.rank));

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(result.modes.rows(), steps);
  for (int idx : mode_indices) {
    const std::complex<double> lambda = result.eigenvalues(idx);
    // integer power by repeated product; keeps lambda == 0 exact (0^0 == 1)
    std::complex<double> power(1.0, 0.0);
    for (int k = 0; k < first_step; ++k) power *= lambda;
    for (int k = 0; k < steps; ++k) {
      const std::complex<double> coeff = result.amplitudes(idx) * power;
      out.col(k) += (result.modes.col(idx) * coeff).real();
      power *= lambda;
    }
  }
  return out;
}

std::vector<ModeDescriptor> mode_report(const DmdResult& result, double dt_seconds) {
  if (!(dt_seconds > 0.0))
    throw Error(ErrorCode::IncompatibleResolution, "dt must be positive");
  std::vector<ModeDescriptor> report;
  report.reserve(static_cast<std::size_t>(result.rank));
  for (int j = 0; j < result.rank; ++j) {
    ModeDescriptor d;
    d.index = j;
    const std::complex<double> lambda = result.eigenvalues(j);
    if (lambda == std::complex<double>(0.0, 0.0)) {
      d.zero_eigenvalue = true;
      d.growth_rate = -std::numeric_limits<double>::infinity();
      d.frequency_hz = 0.0;
    } else {
      const std::complex<double> omega = std::log(lambda) / dt_seconds;
      d.frequency_hz = omega.imag() / (2.0 * M_PI);
      d.growth_rate = omega.real();
    }
    d.energy = std::abs(result.amplitudes(j)) * result.modes.col(j).norm();
    report.push_back(d);
  }
  std::stable_sort(report.begin(), report.end(),
                   [](const ModeDescriptor& a, const ModeDescriptor& b) {
                     if (a.energy != b.energy) return a.energy > b.energy;
                     return a.frequency_hz < b.frequency_hz;
                   });
  return report;
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(i, c));
  j["data"] = std::move(data);
  return j;
}

json cmatrix_to_json(const Eigen::MatrixXcd& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data.push_back(json::array({m(i, c).real(), m(i, c).imag()}));
  j["data"] = std::move(data);
  return j;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  Eigen::MatrixXd m(j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
  const auto& data = j.at("data");
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(i, c) = data.at(k++).get<double>();
  return m;
}

Eigen::MatrixXcd cmatrix_from_json(const json& j) {
  Eigen::MatrixXcd m(j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
  const auto& data = j.at("data");
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto& pair = data.at(k++);
      m(i, c) = {pair.at(0).get<double>(), pair.at(1).get<double>()};
    }
  return m;
}

}  // namespace

void write_dmd_json(const DmdResult& result, const std::string& path) {
  json j;
  j["rank"] = result.rank;
  j["U"] = matrix_to_json(result.U);
  json sigma = json::array();
  for (Eigen::Index i = 0; i < result.sigma.size(); ++i) sigma.push_back(result.sigma(i));
  j["sigma"] = std::move(sigma);
  j["V"] = matrix_to_json(result.V);
  j["atilde"] = matrix_to_json(result.atilde);
  json eig = json::array();
  for (Eigen::Index i = 0; i < result.eigenvalues.size(); ++i)
    eig.push_back(json::array({result.eigenvalues(i).real(), result.eigenvalues(i).imag()}));
  j["eigenvalues"] = std::move(eig);
  j["W"] = cmatrix_to_json(result.W);
  j["modes"] = cmatrix_to_json(result.modes);
  json amps = json::array();
  for (Eigen::Index i = 0; i < result.amplitudes.size(); ++i)
    amps.push_back(json::array({result.amplitudes(i).real(), result.amplitudes(i).imag()}));
  j["amplitudes"] = std::move(amps);

  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << j.dump(2) << '\n';
}

DmdResult read_dmd_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
  DmdResult r;
  r.rank = j.at("rank").get<int>();
  r.U = matrix_from_json(j.at("U"));
  const auto& sigma = j.at("sigma");
  r.sigma.resize(static_cast<Eigen::Index>(sigma.size()));
  for (Eigen::Index i = 0; i < r.sigma.size(); ++i)
    r.sigma(i) = sigma.at(static_cast<std::size_t>(i)).get<double>();
  r.V = matrix_from_json(j.at("V"));
  r.atilde = matrix_from_json(j.at("atilde"));
  const auto& eig = j.at("eigenvalues");
  r.eigenvalues.resize(static_cast<Eigen::Index>(eig.size()));
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
    const auto& p = eig.at(static_cast<std::size_t>(i));
    r.eigenvalues(i) = {p.at(0).get<double>(), p.at(1).get<double>()};
  }
  r.W = cmatrix_from_json(j.at("W"));
  r.modes = cmatrix_from_json(j.at("modes"));
  const auto& amps = j.at("amplitudes");
  r.amplitudes.resize(static_cast<Eigen::Index>(amps.size()));
  for (Eigen::Index i = 0; i < r.amplitudes.size(); ++i) {
    const auto& p = amps.at(static_cast<std::size_t>(i));
    r.amplitudes(i) = {p.at(0).get<double>(), p.at(1).get<double>()};
  }
  return r;
}

}  // namespace lcat
