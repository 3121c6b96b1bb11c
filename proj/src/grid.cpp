#include "lcat/grid.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lcat {

using json = nlohmann::ordered_json;
using cplx = std::complex<double>;

int GridModel::bus_index(int bus_id) const {
  for (std::size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == bus_id) return static_cast<int>(i);
  return -1;
}

double GridModel::total_active_load_pu() const {
  double total = 0.0;
  for (const auto& l : loads) total += l.p_pu;
  return total;
}

void GridModel::validate() const {
  if (buses.empty()) throw Error(ErrorCode::InvalidModel, "no buses");
  int slack_count = 0;
  std::set<int> ids;
  for (const auto& b : buses) {
    if (!ids.insert(b.id).second)
      throw Error(ErrorCode::InvalidModel, "duplicate bus id " + std::to_string(b.id));
    if (b.type == BusType::Slack) ++slack_count;
  }
  if (slack_count != 1)
    throw Error(ErrorCode::InvalidModel,
                "expected exactly one slack bus, found " + std::to_string(slack_count));
  for (const auto& br : branches)
    if (!ids.count(br.from) || !ids.count(br.to))
      throw Error(ErrorCode::InvalidModel, "branch references unknown bus");
  std::set<int> gen_buses;
  for (const auto& g : generators) {
    if (!ids.count(g.bus))
      throw Error(ErrorCode::InvalidModel, "generator references unknown bus");
    if (!gen_buses.insert(g.bus).second)
      throw Error(ErrorCode::InvalidModel,
                  "multiple generators at bus " + std::to_string(g.bus));
    if (!(g.inertia_s > 0.0))
      throw Error(ErrorCode::InvalidModel, "generator H must be positive");
    if (!(g.xd_transient_pu > 0.0))
      throw Error(ErrorCode::InvalidModel, "generator x'd must be positive");
  }
  for (const auto& l : loads)
    if (!ids.count(l.bus))
      throw Error(ErrorCode::InvalidModel, "load references unknown bus");
  for (const auto& b : buses) {
    if ((b.type == BusType::Slack || b.type == BusType::PV) && !gen_buses.count(b.id))
      throw Error(ErrorCode::InvalidModel,
                  "bus " + std::to_string(b.id) + " is slack/PV but has no generator");
  }
}

GridModel ieee14_fixture() {
  GridModel m;
  m.base_mva = 100.0;

  auto bus = [&](int id, BusType type, double kv) { m.buses.push_back({id, type, kv}); };
  bus(1, BusType::Slack, 69.0);
  bus(2, BusType::PV, 69.0);
  bus(3, BusType::PV, 69.0);
  bus(4, BusType::PQ, 69.0);
  bus(5, BusType::PQ, 69.0);
  bus(6, BusType::PV, 13.8);
  bus(7, BusType::PQ, 13.8);
  bus(8, BusType::PV, 18.0);
  bus(9, BusType::PQ, 13.8);
  bus(10, BusType::PQ, 13.8);
  bus(11, BusType::PQ, 13.8);
  bus(12, BusType::PQ, 13.8);
  bus(13, BusType::PQ, 13.8);
  bus(14, BusType::PQ, 13.8);

  auto line = [&](int f, int t, double r, double x, double b) {
    m.branches.push_back({f, t, r, x, b});
  };
  line(1, 2, 0.01938, 0.05917, 0.0528);
  line(1, 5, 0.05403, 0.22304, 0.0492);
  line(2, 3, 0.04699, 0.19797, 0.0438);
  line(2, 4, 0.05811, 0.17632, 0.0340);
  line(2, 5, 0.05695, 0.17388, 0.0346);
  line(3, 4, 0.06701, 0.17103, 0.0128);
  line(4, 5, 0.01335, 0.04211, 0.0);
  line(4, 7, 0.0, 0.20912, 0.0);
  line(4, 9, 0.0, 0.55618, 0.0);
  line(5, 6, 0.0, 0.25202, 0.0);
  line(6, 11, 0.09498, 0.19890, 0.0);
  line(6, 12, 0.12291, 0.25581, 0.0);
  line(6, 13, 0.06615, 0.13027, 0.0);
  line(7, 8, 0.0, 0.17615, 0.0);
  line(7, 9, 0.0, 0.11001, 0.0);
  line(9, 10, 0.03181, 0.08450, 0.0);
  line(9, 14, 0.12711, 0.27038, 0.0);
  line(10, 11, 0.08205, 0.19207, 0.0);
  line(12, 13, 0.22092, 0.19988, 0.0);
  line(13, 14, 0.17093, 0.34802, 0.0);

  // Machine table: H spread over [2,6] s with the largest unit at the slack;
  // buses 3, 6 and 8 run as synchronous condensers (P = 0).
  //   bus   P_g    Vset    H     x'd    D
  auto gen = [&](int b, double p, double v, double h) {
    m.generators.push_back({b, p, v, h, 0.25, 2.0});
  };
  gen(1, 0.0, 1.060, 6.0);
  gen(2, 0.4, 1.045, 4.0);
  gen(3, 0.0, 1.010, 3.0);
  gen(6, 0.0, 1.070, 2.5);
  gen(8, 0.0, 1.090, 2.0);

  auto load = [&](int b, double p_mw, double q_mvar) {
    m.loads.push_back({b, p_mw / m.base_mva, q_mvar / m.base_mva});
  };
  load(2, 21.7, 12.7);
  load(3, 94.2, 19.0);
  load(4, 47.8, -3.9);
  load(5, 7.6, 1.6);
  load(6, 11.2, 7.5);
  load(9, 29.5, 16.6);
  load(10, 9.0, 5.8);
  load(11, 3.5, 1.8);
  load(12, 6.1, 1.6);
  load(13, 13.5, 5.8);
  load(14, 14.9, 5.0);

  return m;
}

const std::vector<std::pair<std::string, int>>& nyiso_zone_bus_map() {
  static const std::vector<std::pair<std::string, int>> map = {
      {"WEST", 2},   {"GENESE", 3}, {"CENTRL", 4}, {"NORTH", 5},
      {"MHK VL", 6}, {"CAPITL", 9}, {"HUD VL", 10}, {"MILLWD", 11},
      {"DUNWOD", 12}, {"N.Y.C.", 13}, {"LONGIL", 14}};
  return map;
}

GridModel map_zone_loads(const GridModel& model, const std::map<std::string, double>& zone_mw) {
  double zone_total = 0.0;
  for (const auto& [zone, bus] : nyiso_zone_bus_map()) {
    auto it = zone_mw.find(zone);
    if (it == zone_mw.end()) throw Error(ErrorCode::MissingZone, "snapshot lacks zone " + zone);
    if (it->second < 0.0)
      throw Error(ErrorCode::InvalidModel, "zone " + zone + " has negative demand");
    zone_total += it->second;
    (void)bus;
  }
  if (zone_total <= 0.0) throw Error(ErrorCode::AllZonesZero, "zone snapshot sums to zero");

  const double s_target = model.total_active_load_pu();
  GridModel mapped = model;
  for (const auto& [zone, bus_id] : nyiso_zone_bus_map()) {
    const double share = zone_mw.at(zone) / zone_total;
    const double p_new = share * s_target;
    bool found = false;
    for (auto& l : mapped.loads) {
      if (l.bus != bus_id) continue;
      const double pf_ratio = l.p_pu != 0.0 ? l.q_pu / l.p_pu : 0.0;
      l.p_pu = p_new;
      l.q_pu = p_new * pf_ratio;
      found = true;
    }
    if (!found) mapped.loads.push_back({bus_id, p_new, 0.0});
  }
  return mapped;
}

Eigen::MatrixXcd ybus(const GridModel& model) {
  const auto n = static_cast<Eigen::Index>(model.buses.size());
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& br : model.branches) {
    if (br.resistance_pu == 0.0 && br.reactance_pu == 0.0)
      throw Error(ErrorCode::ZeroImpedanceBranch,
                  "branch " + std::to_string(br.from) + "-" + std::to_string(br.to));
    const int i = model.bus_index(br.from);
    const int j = model.bus_index(br.to);
    const cplx series = 1.0 / cplx(br.resistance_pu, br.reactance_pu);
    const cplx half_shunt(0.0, br.shunt_b_pu / 2.0);
    y(i, i) += series + half_shunt;
    y(j, j) += series + half_shunt;
    y(i, j) -= series;
    y(j, i) -= series;
  }
  return y;
}

namespace {

void check_connected(const GridModel& model) {
  const std::size_t n = model.buses.size();
  std::vector<std::vector<int>> adj(n);
  for (const auto& br : model.branches) {
    const int i = model.bus_index(br.from);
    const int j = model.bus_index(br.to);
    adj[static_cast<std::size_t>(i)].push_back(j);
    adj[static_cast<std::size_t>(j)].push_back(i);
  }
  int slack = -1;
  for (std::size_t i = 0; i < n; ++i)
    if (model.buses[i].type == BusType::Slack) slack = static_cast<int>(i);
  std::vector<bool> seen(n, false);
  std::vector<int> stack = {slack};
  seen[static_cast<std::size_t>(slack)] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[static_cast<std::size_t>(u)])
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i])
      throw Error(ErrorCode::IslandedBus,
                  "bus " + std::to_string(model.buses[i].id) + " unreachable from slack");
}

}  // namespace

PowerFlowSolution power_flow(const GridModel& model, double tol_pu, int max_iter) {
  model.validate();
  check_connected(model);
  const auto n = static_cast<Eigen::Index>(model.buses.size());
  const Eigen::MatrixXcd y = ybus(model);

  // net scheduled injections
  Eigen::VectorXd p_sched = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd q_sched = Eigen::VectorXd::Zero(n);
  for (const auto& g : model.generators) p_sched(model.bus_index(g.bus)) += g.p_pu;
  for (const auto& l : model.loads) {
    p_sched(model.bus_index(l.bus)) -= l.p_pu;
    q_sched(model.bus_index(l.bus)) -= l.q_pu;
  }

  Eigen::VectorXd vm = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd va = Eigen::VectorXd::Zero(n);
  for (const auto& g : model.generators) vm(model.bus_index(g.bus)) = g.v_setpoint_pu;

  std::vector<Eigen::Index> pv_pq;  // angle unknowns
  std::vector<Eigen::Index> pq;     // magnitude unknowns
  Eigen::Index slack = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    switch (model.buses[static_cast<std::size_t>(i)].type) {
      case BusType::Slack: slack = i; break;
      case BusType::PV: pv_pq.push_back(i); break;
      case BusType::PQ:
        pv_pq.push_back(i);
        pq.push_back(i);
        break;
    }
  }

  const auto calc_power = [&](Eigen::VectorXd& p, Eigen::VectorXd& q) {
    for (Eigen::Index i = 0; i < n; ++i) {
      cplx s(0.0, 0.0);
      const cplx vi = std::polar(vm(i), va(i));
      cplx sum(0.0, 0.0);
      for (Eigen::Index j = 0; j < n; ++j) sum += y(i, j) * std::polar(vm(j), va(j));
      s = vi * std::conj(sum);
      p(i) = s.real();
      q(i) = s.imag();
    }
  };

  Eigen::VectorXd p_calc(n), q_calc(n);
  int iter = 0;
  double max_mismatch = 0.0;
  const auto n_ang = static_cast<Eigen::Index>(pv_pq.size());
  const auto n_mag = static_cast<Eigen::Index>(pq.size());

  for (;; ++iter) {
    calc_power(p_calc, q_calc);
    Eigen::VectorXd f(n_ang + n_mag);
    for (Eigen::Index k = 0; k < n_ang; ++k) f(k) = p_sched(pv_pq[k]) - p_calc(pv_pq[k]);
    for (Eigen::Index k = 0; k < n_mag; ++k) f(n_ang + k) = q_sched(pq[k]) - q_calc(pq[k]);
    max_mismatch = f.size() > 0 ? f.cwiseAbs().maxCoeff() : 0.0;
    if (max_mismatch <= tol_pu) break;
    if (iter >= max_iter)
      throw Error(ErrorCode::Diverged,
                  "no convergence after " + std::to_string(max_iter) + " iterations (mismatch " +
                      std::to_string(max_mismatch) + " pu)");

    // polar Jacobian
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n_ang + n_mag, n_ang + n_mag);
    const auto dp_dth = [&](Eigen::Index i, Eigen::Index j) {
      if (i == j) return -q_calc(i) - vm(i) * vm(i) * y(i, i).imag();
      const double th = va(i) - va(j);
      return vm(i) * vm(j) *
             (y(i, j).real() * std::sin(th) - y(i, j).imag() * std::cos(th));
    };
    const auto dp_dv = [&](Eigen::Index i, Eigen::Index j) {
      if (i == j) return p_calc(i) / vm(i) + vm(i) * y(i, i).real();
      const double th = va(i) - va(j);
      return vm(i) * (y(i, j).real() * std::cos(th) + y(i, j).imag() * std::sin(th));
    };
    const auto dq_dth = [&](Eigen::Index i, Eigen::Index j) {
      if (i == j) return p_calc(i) - vm(i) * vm(i) * y(i, i).real();
      const double th = va(i) - va(j);
      return -vm(i) * vm(j) *
             (y(i, j).real() * std::cos(th) + y(i, j).imag() * std::sin(th));
    };
    const auto dq_dv = [&](Eigen::Index i, Eigen::Index j) {
      if (i == j) return q_calc(i) / vm(i) - vm(i) * y(i, i).imag();
      const double th = va(i) - va(j);
      return vm(i) * (y(i, j).real() * std::sin(th) - y(i, j).imag() * std::cos(th));
    };
    for (Eigen::Index a = 0; a < n_ang; ++a) {
      for (Eigen::Index b = 0; b < n_ang; ++b) jac(a, b) = dp_dth(pv_pq[a], pv_pq[b]);
      for (Eigen::Index b = 0; b < n_mag; ++b) jac(a, n_ang + b) = dp_dv(pv_pq[a], pq[b]);
    }
    for (Eigen::Index a = 0; a < n_mag; ++a) {
      for (Eigen::Index b = 0; b < n_ang; ++b) jac(n_ang + a, b) = dq_dth(pq[a], pv_pq[b]);
      for (Eigen::Index b = 0; b < n_mag; ++b) jac(n_ang + a, n_ang + b) = dq_dv(pq[a], pq[b]);
    }

    const Eigen::VectorXd dx = jac.partialPivLu().solve(f);
    if (!dx.allFinite())
      throw Error(ErrorCode::Diverged, "singular Jacobian");
    for (Eigen::Index k = 0; k < n_ang; ++k) va(pv_pq[k]) += dx(k);
    for (Eigen::Index k = 0; k < n_mag; ++k) vm(pq[k]) += dx(n_ang + k);
  }

  PowerFlowSolution sol;
  sol.v_mag = vm;
  sol.v_angle = va;
  sol.iterations = iter;
  sol.max_mismatch_pu = max_mismatch;
  calc_power(p_calc, q_calc);
  sol.slack_injection = {p_calc(slack), q_calc(slack)};
  sol.s_from.reserve(model.branches.size());
  sol.s_to.reserve(model.branches.size());
  for (const auto& br : model.branches) {
    const int i = model.bus_index(br.from);
    const int j = model.bus_index(br.to);
    const cplx vi = std::polar(vm(i), va(i));
    const cplx vj = std::polar(vm(j), va(j));
    const cplx series = 1.0 / cplx(br.resistance_pu, br.reactance_pu);
    const cplx half_shunt(0.0, br.shunt_b_pu / 2.0);
    const cplx i_from = series * (vi - vj) + half_shunt * vi;
    const cplx i_to = series * (vj - vi) + half_shunt * vj;
    sol.s_from.push_back(vi * std::conj(i_from));
    sol.s_to.push_back(vj * std::conj(i_to));
  }
  return sol;
}

Eigen::MatrixXcd kron_reduce(const Eigen::MatrixXcd& y, const std::vector<int>& keep) {
  const Eigen::Index n = y.rows();
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (int k : keep) {
    if (k < 0 || k >= n)
      throw Error(ErrorCode::InvalidModel, "keep index " + std::to_string(k) + " out of range");
    kept[static_cast<std::size_t>(k)] = true;
  }
  std::vector<Eigen::Index> elim;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!kept[static_cast<std::size_t>(i)]) elim.push_back(i);
  if (elim.empty()) return y;

  const auto nk = static_cast<Eigen::Index>(keep.size());
  const auto ne = static_cast<Eigen::Index>(elim.size());
  Eigen::MatrixXcd y_kk(nk, nk), y_ke(nk, ne), y_ek(ne, nk), y_ee(ne, ne);
  for (Eigen::Index a = 0; a < nk; ++a)
    for (Eigen::Index b = 0; b < nk; ++b) y_kk(a, b) = y(keep[a], keep[b]);
  for (Eigen::Index a = 0; a < nk; ++a)
    for (Eigen::Index b = 0; b < ne; ++b) y_ke(a, b) = y(keep[a], elim[b]);
  for (Eigen::Index a = 0; a < ne; ++a)
    for (Eigen::Index b = 0; b < nk; ++b) y_ek(a, b) = y(elim[a], keep[b]);
  for (Eigen::Index a = 0; a < ne; ++a)
    for (Eigen::Index b = 0; b < ne; ++b) y_ee(a, b) = y(elim[a], elim[b]);

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(y_ee);
  if (!lu.isInvertible())
    throw Error(ErrorCode::SingularEliminationBlock, "eliminated sub-block is singular");
  return y_kk - y_ke * lu.solve(y_ek);
}

// ---------------------------------------------------------------------------
// fixture file formats

GridModel read_grid_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
  GridModel m;
  try {
    m.base_mva = j.at("base_mva").get<double>();
    for (const auto& b : j.at("buses")) {
      Bus bus;
      bus.id = b.at("id").get<int>();
      const std::string type = b.at("type").get<std::string>();
      if (type == "slack") bus.type = BusType::Slack;
      else if (type == "pv") bus.type = BusType::PV;
      else if (type == "pq") bus.type = BusType::PQ;
      else throw Error(ErrorCode::MalformedInput, "unknown bus type '" + type + "'");
      bus.base_kv = b.value("base_kv", 0.0);
      m.buses.push_back(bus);
    }
    for (const auto& br : j.at("branches"))
      m.branches.push_back({br.at("from").get<int>(), br.at("to").get<int>(),
                            br.at("r_pu").get<double>(), br.at("x_pu").get<double>(),
                            br.value("b_pu", 0.0)});
    for (const auto& g : j.at("generators"))
      m.generators.push_back({g.at("bus").get<int>(), g.at("p_pu").get<double>(),
                              g.at("v_setpoint_pu").get<double>(), g.at("inertia_s").get<double>(),
                              g.at("xd_transient_pu").get<double>(),
                              g.value("damping_pu", 2.0)});
    for (const auto& l : j.at("loads"))
      m.loads.push_back({l.at("bus").get<int>(), l.at("p_pu").get<double>(),
                         l.at("q_pu").get<double>()});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
  m.validate();
  return m;
}

void write_grid_json(const GridModel& model, const std::string& path) {
  json j;
  j["base_mva"] = model.base_mva;
  j["buses"] = json::array();
  for (const auto& b : model.buses) {
    const char* type = b.type == BusType::Slack ? "slack" : b.type == BusType::PV ? "pv" : "pq";
    j["buses"].push_back({{"id", b.id}, {"type", type}, {"base_kv", b.base_kv}});
  }
  j["branches"] = json::array();
  for (const auto& br : model.branches)
    j["branches"].push_back({{"from", br.from},
                             {"to", br.to},
                             {"r_pu", br.resistance_pu},
                             {"x_pu", br.reactance_pu},
                             {"b_pu", br.shunt_b_pu}});
  j["generators"] = json::array();
  for (const auto& g : model.generators)
    j["generators"].push_back({{"bus", g.bus},
                               {"p_pu", g.p_pu},
                               {"v_setpoint_pu", g.v_setpoint_pu},
                               {"inertia_s", g.inertia_s},
                               {"xd_transient_pu", g.xd_transient_pu},
                               {"damping_pu", g.damping_pu}});
  j["loads"] = json::array();
  for (const auto& l : model.loads)
    j["loads"].push_back({{"bus", l.bus}, {"p_pu", l.p_pu}, {"q_pu", l.q_pu}});

  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << j.dump(2) << '\n';
}

namespace {

double field(const std::string& line, std::size_t begin, std::size_t end) {
  if (begin >= line.size()) return 0.0;
  const std::string token = line.substr(begin, std::min(end, line.size()) - begin);
  try {
    return std::stod(token);
  } catch (...) {
    return 0.0;
  }
}

}  // namespace

GridModel read_grid_common_format(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  GridModel m;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, path + " is empty");
  m.base_mva = field(line, 31, 37);
  if (m.base_mva <= 0.0) m.base_mva = 100.0;

  enum { None, BusSection, BranchSection } section = None;
  while (std::getline(in, line)) {
    if (line.rfind("BUS DATA FOLLOWS", 0) == 0) { section = BusSection; continue; }
    if (line.rfind("BRANCH DATA FOLLOWS", 0) == 0) { section = BranchSection; continue; }
    if (line.rfind("-999", 0) == 0 || line.rfind("-99", 0) == 0) { section = None; continue; }
    if (section == None || line.size() < 5) continue;

    if (section == BusSection) {
      Bus bus;
      bus.id = static_cast<int>(field(line, 0, 4));
      const int type = static_cast<int>(field(line, 24, 26));
      bus.type = type == 3 ? BusType::Slack : type == 2 ? BusType::PV : BusType::PQ;
      bus.base_kv = field(line, 76, 83);
      m.buses.push_back(bus);
      const double pd = field(line, 40, 49), qd = field(line, 49, 59);
      if (pd != 0.0 || qd != 0.0)
        m.loads.push_back({bus.id, pd / m.base_mva, qd / m.base_mva});
      if (bus.type != BusType::PQ) {
        Generator g;
        g.bus = bus.id;
        g.p_pu = field(line, 59, 67) / m.base_mva;
        const double vset = field(line, 84, 90);
        g.v_setpoint_pu = vset > 0.0 ? vset : field(line, 27, 33);
        if (g.v_setpoint_pu <= 0.0) g.v_setpoint_pu = 1.0;
        m.generators.push_back(g);
      }
    } else {
      Branch br;
      br.from = static_cast<int>(field(line, 0, 4));
      br.to = static_cast<int>(field(line, 5, 9));
      br.resistance_pu = field(line, 19, 29);
      br.reactance_pu = field(line, 29, 40);
      br.shunt_b_pu = field(line, 40, 50);
      m.branches.push_back(br);
    }
  }
  if (m.buses.empty())
    throw Error(ErrorCode::MalformedInput, path + ": no BUS DATA section found");
  m.validate();
  return m;
}

std::map<std::string, double> read_zone_snapshot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  std::string header, row;
  if (!std::getline(in, header) || !std::getline(in, row))
    throw Error(ErrorCode::EmptyInput, path + " needs a header and one data row");
  std::map<std::string, double> snapshot;
  std::stringstream hs(header), rs(row);
  std::string name, value;
  while (std::getline(hs, name, ',')) {
    if (!std::getline(rs, value, ','))
      throw Error(ErrorCode::MalformedRow, path + ": fewer values than zones");
    if (!name.empty() && name.back() == '\r') name.pop_back();
    if (!value.empty() && value.back() == '\r') value.pop_back();
    try {
      snapshot[name] = std::stod(value);
    } catch (...) {
      throw Error(ErrorCode::MalformedRow, path + ": bad value '" + value + "'");
    }
  }
  return snapshot;
}

void write_zone_snapshot_csv(const std::map<std::string, double>& zone_mw,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  bool first = true;
  for (const auto& [zone, bus] : nyiso_zone_bus_map()) {
    (void)bus;
    out << (first ? "" : ",") << zone;
    first = false;
  }
  out << '\n';
  first = true;
  for (const auto& [zone, bus] : nyiso_zone_bus_map()) {
    (void)bus;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", zone_mw.count(zone) ? zone_mw.at(zone) : 0.0);
    out << (first ? "" : ",") << buf;
    first = false;
  }
  out << '\n';
}

}  // namespace lcat
