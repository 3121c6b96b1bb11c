#include "lcat/swing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

namespace lcat {

using cplx = std::complex<double>;
using json = nlohmann::ordered_json;

namespace {
constexpr double kNominalHz = 60.0;
constexpr double kOmegaSync = 2.0 * M_PI * kNominalHz;
constexpr double kSpeedBandLow = 0.9 * kOmegaSync;
constexpr double kSpeedBandHigh = 1.1 * kOmegaSync;
}  // namespace

double SimulationTrace::machine_frequency_hz(int machine, std::size_t sample) const {
  return omega_rad_s(machine, static_cast<Eigen::Index>(sample)) / (2.0 * M_PI);
}

DynamicsSystem::DynamicsSystem(const GridModel& model, const PowerFlowSolution& pf)
    : model_(model), omega_sync_(kOmegaSync) {
  model_.validate();
  const auto n = static_cast<Eigen::Index>(model_.buses.size());
  y_network_ = ybus(model_);
  v_mag_pf_ = pf.v_mag;

  // loads to constant admittances at power-flow voltages
  y_load_ = Eigen::VectorXcd::Zero(n);
  for (const auto& l : model_.loads) {
    const int bi = model_.bus_index(l.bus);
    const double v2 = pf.v_mag(bi) * pf.v_mag(bi);
    y_load_(bi) += cplx(l.p_pu, -l.q_pu) / v2;
  }

  // generator outputs from the solved flow: net injection plus local load
  Eigen::VectorXd p_net(n), q_net(n);
  const Eigen::MatrixXcd& y = y_network_;
  for (Eigen::Index i = 0; i < n; ++i) {
    cplx sum(0.0, 0.0);
    for (Eigen::Index j = 0; j < n; ++j) sum += y(i, j) * pf.bus_voltage(static_cast<int>(j));
    const cplx s = pf.bus_voltage(static_cast<int>(i)) * std::conj(sum);
    p_net(i) = s.real();
    q_net(i) = s.imag();
  }

  for (const auto& g : model_.generators) {
    const int bi = model_.bus_index(g.bus);
    double p_load = 0.0, q_load = 0.0;
    for (const auto& l : model_.loads)
      if (l.bus == g.bus) {
        p_load += l.p_pu;
        q_load += l.q_pu;
      }
    const cplx s_gen(p_net(bi) + p_load, q_net(bi) + q_load);
    const cplx v_term = pf.bus_voltage(bi);
    const cplx i_gen = std::conj(s_gen / v_term);
    const cplx emf = v_term + cplx(0.0, g.xd_transient_pu) * i_gen;

    MachineState st;
    st.delta_rad = std::arg(emf);
    st.omega_rad_s = omega_sync_;
    st.emf_pu = std::abs(emf);
    machines_.push_back(st);
    machine_buses_.push_back(g.bus);
    inertia_.push_back(g.inertia_s);
    damping_.push_back(g.damping_pu);
    emf_.push_back(st.emf_pu);
    y_gen_.push_back(1.0 / cplx(0.0, g.xd_transient_pu));
    p_mech_.push_back(s_gen.real());
  }

  rebuild_reduction();

  Eigen::VectorXd delta0(machine_count());
  for (int i = 0; i < machine_count(); ++i) delta0(i) = machines_[static_cast<std::size_t>(i)].delta_rad;
  const Eigen::VectorXd pe0 = electrical_power(delta0);
  for (int i = 0; i < machine_count(); ++i) {
    if (std::abs(pe0(i) - p_mech_[static_cast<std::size_t>(i)]) > 1e-8)
      throw Error(ErrorCode::UnstableInitialization,
                  "initial electrical power mismatch " +
                      std::to_string(std::abs(pe0(i) - p_mech_[static_cast<std::size_t>(i)])) +
                      " pu at machine bus " +
                      std::to_string(machine_buses_[static_cast<std::size_t>(i)]));
    // pin the equilibrium exactly so an event-free run stays flat
    p_mech_[static_cast<std::size_t>(i)] = pe0(i);
  }
}

void DynamicsSystem::rebuild_reduction() {
  const auto n = static_cast<Eigen::Index>(model_.buses.size());
  const auto g = static_cast<Eigen::Index>(machines_.size());
  Eigen::MatrixXcd aug = Eigen::MatrixXcd::Zero(n + g, n + g);
  aug.topLeftCorner(n, n) = y_network_;
  for (Eigen::Index i = 0; i < n; ++i) aug(i, i) += y_load_(i);
  for (Eigen::Index k = 0; k < g; ++k) {
    const int bi = model_.bus_index(machine_buses_[static_cast<std::size_t>(k)]);
    const cplx ya = y_gen_[static_cast<std::size_t>(k)];
    aug(n + k, n + k) += ya;
    aug(bi, bi) += ya;
    aug(n + k, bi) -= ya;
    aug(bi, n + k) -= ya;
  }
  std::vector<int> keep(static_cast<std::size_t>(g));
  for (Eigen::Index k = 0; k < g; ++k) keep[static_cast<std::size_t>(k)] = static_cast<int>(n + k);
  y_reduced_ = kron_reduce(aug, keep);
}

Eigen::VectorXd DynamicsSystem::electrical_power(const Eigen::VectorXd& delta) const {
  const int g = machine_count();
  Eigen::VectorXd pe(g);
  for (int i = 0; i < g; ++i) {
    double acc = 0.0;
    for (int j = 0; j < g; ++j) {
      const double dd = delta(i) - delta(j);
      const cplx yij = y_reduced_(i, j);
      acc += emf_[static_cast<std::size_t>(i)] * emf_[static_cast<std::size_t>(j)] *
             (yij.real() * std::cos(dd) + yij.imag() * std::sin(dd));
    }
    pe(i) = acc;
  }
  return pe;
}

void DynamicsSystem::set_load_scale(int bus_id, double scale) {
  const int bi = model_.bus_index(bus_id);
  if (bi < 0) throw Error(ErrorCode::UnknownBus, "bus " + std::to_string(bus_id));
  y_load_(bi) *= scale;
  rebuild_reduction();
}

void DynamicsSystem::set_load_absolute(int bus_id, double p_pu, double q_pu) {
  const int bi = model_.bus_index(bus_id);
  if (bi < 0) throw Error(ErrorCode::UnknownBus, "bus " + std::to_string(bus_id));
  const double v2 = v_mag_pf_(bi) * v_mag_pf_(bi);
  y_load_(bi) = cplx(p_pu, -q_pu) / v2;
  rebuild_reduction();
}

cplx DynamicsSystem::load_admittance(int bus_id) const {
  const int bi = model_.bus_index(bus_id);
  if (bi < 0) throw Error(ErrorCode::UnknownBus, "bus " + std::to_string(bus_id));
  return y_load_(bi);
}

void DynamicsSystem::set_load_admittance(int bus_id, cplx y) {
  const int bi = model_.bus_index(bus_id);
  if (bi < 0) throw Error(ErrorCode::UnknownBus, "bus " + std::to_string(bus_id));
  y_load_(bi) = y;
  rebuild_reduction();
}

void DynamicsSystem::scale_all_loads(double factor) {
  y_load_ *= factor;
  rebuild_reduction();
}

double DynamicsSystem::inertia_weighted_frequency_hz(const Eigen::VectorXd& omega) const {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < machine_count(); ++i) {
    num += inertia_[static_cast<std::size_t>(i)] * omega(i);
    den += inertia_[static_cast<std::size_t>(i)];
  }
  return num / den / (2.0 * M_PI);
}

Eigen::VectorXd electrical_power(const std::vector<MachineState>& states,
                                 const Eigen::MatrixXcd& y_reduced) {
  const auto g = static_cast<int>(states.size());
  if (y_reduced.rows() != g || y_reduced.cols() != g)
    throw Error(ErrorCode::DimensionMismatch, "states and reduced Y-bus disagree");
  Eigen::VectorXd pe(g);
  for (int i = 0; i < g; ++i) {
    double acc = 0.0;
    for (int j = 0; j < g; ++j) {
      const double dd = states[static_cast<std::size_t>(i)].delta_rad -
                        states[static_cast<std::size_t>(j)].delta_rad;
      const cplx yij = y_reduced(i, j);
      acc += states[static_cast<std::size_t>(i)].emf_pu * states[static_cast<std::size_t>(j)].emf_pu *
             (yij.real() * std::cos(dd) + yij.imag() * std::sin(dd));
    }
    pe(i) = acc;
  }
  return pe;
}

DynamicsSystem init_dynamics(const GridModel& model, const PowerFlowSolution& pf) {
  return DynamicsSystem(model, pf);
}

namespace {

struct PendingRestore {
  double time_s;
  int bus;
  cplx admittance;
  std::string label;
};

}  // namespace

SimulationTrace simulate(const GridModel& model, const PowerFlowSolution& pf,
                         const std::vector<LoadEvent>& events, const SimulationConfig& cfg) {
  if (!(cfg.step_s > 0.0) || cfg.step_s > 0.010 + 1e-12)
    throw Error(ErrorCode::EventOutsideWindow, "step must be positive and at most 10 ms");
  if (!(cfg.duration_s > 0.0))
    throw Error(ErrorCode::EventOutsideWindow, "duration must be positive");
  for (const auto& ev : events) {
    if (ev.time_s < 0.0 || ev.time_s > cfg.duration_s)
      throw Error(ErrorCode::EventOutsideWindow,
                  "event at " + std::to_string(ev.time_s) + " s outside [0, " +
                      std::to_string(cfg.duration_s) + "] s");
    if (ev.restore_time_s && *ev.restore_time_s <= ev.time_s)
      throw Error(ErrorCode::EventOutsideWindow, "restore time must follow the event time");
    if (model.bus_index(ev.bus) < 0)
      throw Error(ErrorCode::UnknownBus, "event references bus " + std::to_string(ev.bus));
  }
  if (cfg.ufls) cfg.ufls->validate();

  DynamicsSystem sys(model, pf);
  const int g = sys.machine_count();
  const double ws = sys.synchronous_speed_rad_s();
  const double dt = cfg.step_s;
  const auto steps = static_cast<std::size_t>(std::llround(cfg.duration_s / dt));

  // events keyed by their step index (snapped to the grid)
  std::multimap<std::size_t, LoadEvent> onsets;
  for (const auto& ev : events)
    onsets.insert({static_cast<std::size_t>(std::llround(ev.time_s / dt)), ev});
  std::multimap<std::size_t, PendingRestore> restores;

  // state layout: [delta(g), omega(g), governor(g when enabled)]
  const bool gov = cfg.governor.enabled;
  Eigen::VectorXd state(gov ? 3 * g : 2 * g);
  for (int i = 0; i < g; ++i) {
    state(i) = sys.initial_states()[static_cast<std::size_t>(i)].delta_rad;
    state(g + i) = sys.initial_states()[static_cast<std::size_t>(i)].omega_rad_s;
    if (gov) state(2 * g + i) = 0.0;
  }

  const auto rhs = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd dx(x.size());
    const Eigen::VectorXd pe = sys.electrical_power(x.head(g));
    for (int i = 0; i < g; ++i) {
      const double omega = x(g + i);
      const double h = sys.inertia()[static_cast<std::size_t>(i)];
      const double d = sys.damping()[static_cast<std::size_t>(i)];
      double pm = sys.p_mechanical()[static_cast<std::size_t>(i)];
      if (gov) pm += x(2 * g + i);
      const double slip = (omega - ws) / ws;
      dx(i) = omega - ws;
      dx(g + i) = ws * (pm - pe(i) - d * slip) / (2.0 * h);
      if (gov)
        dx(2 * g + i) = (-slip / cfg.governor.droop - x(2 * g + i)) / cfg.governor.time_constant_s;
    }
    return dx;
  };

  SimulationTrace trace;
  trace.step_s = dt;
  trace.machine_buses.resize(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) {
    // machine order follows the model's generator list
    trace.machine_buses[static_cast<std::size_t>(i)] = sys.model().generators[static_cast<std::size_t>(i)].bus;
  }
  const auto samples = steps + 1;
  trace.time_s.reserve(samples);
  trace.delta_rad.resize(g, static_cast<Eigen::Index>(samples));
  trace.omega_rad_s.resize(g, static_cast<Eigen::Index>(samples));
  trace.p_electrical_pu.resize(g, static_cast<Eigen::Index>(samples));
  trace.p_mechanical_pu.resize(g, static_cast<Eigen::Index>(samples));
  trace.system_frequency_hz.reserve(samples);

  UflsState ufls_state;
  if (cfg.ufls) ufls_state = make_ufls_state(*cfg.ufls);

  std::size_t recorded = 0;
  bool diverged = false;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;

    // apply restores first so an immediate re-attack sees the base load
    for (auto [it, end] = restores.equal_range(k); it != end; ++it) {
      sys.set_load_admittance(it->second.bus, it->second.admittance);
      trace.events.push_back({t, it->second.label});
    }
    restores.erase(k);
    for (auto [it, end] = onsets.equal_range(k); it != end; ++it) {
      const LoadEvent& ev = it->second;
      const cplx before = sys.load_admittance(ev.bus);
      if (ev.is_scale)
        sys.set_load_scale(ev.bus, ev.scale);
      else
        sys.set_load_absolute(ev.bus, ev.p_pu, ev.q_pu);
      std::string label = ev.label.empty()
                              ? (ev.is_scale ? "scale load at bus " + std::to_string(ev.bus) +
                                                   " by " + std::to_string(ev.scale)
                                             : "set load at bus " + std::to_string(ev.bus))
                              : ev.label;
      trace.events.push_back({t, label});
      if (ev.restore_time_s) {
        auto rk = static_cast<std::size_t>(std::llround(*ev.restore_time_s / dt));
        if (rk <= k) rk = k + 1;  // restore cannot land on or before its onset step
        restores.insert({rk, {*ev.restore_time_s, ev.bus, before,
                              "restore load at bus " + std::to_string(ev.bus)}});
      }
    }
    onsets.erase(k);

    // UFLS feedback: latched stages shed a fraction of every load
    if (cfg.ufls && k > 0) {
      const double f_now = sys.inertia_weighted_frequency_hz(state.segment(g, g));
      const double shed = apply_ufls(*cfg.ufls, f_now, ufls_state);
      if (shed > 0.0) {
        sys.scale_all_loads(1.0 - shed);
        char buf[96];
        std::snprintf(buf, sizeof buf, "ufls shed %.3f of system load at %.3f Hz", shed, f_now);
        trace.events.push_back({t, buf});
      }
    }

    // record sample k
    const Eigen::VectorXd pe = sys.electrical_power(state.head(g));
    trace.time_s.push_back(t);
    for (int i = 0; i < g; ++i) {
      trace.delta_rad(i, static_cast<Eigen::Index>(recorded)) = state(i);
      trace.omega_rad_s(i, static_cast<Eigen::Index>(recorded)) = state(g + i);
      trace.p_electrical_pu(i, static_cast<Eigen::Index>(recorded)) = pe(i);
      double pm = sys.p_mechanical()[static_cast<std::size_t>(i)];
      if (gov) pm += state(2 * g + i);
      trace.p_mechanical_pu(i, static_cast<Eigen::Index>(recorded)) = pm;
    }
    trace.system_frequency_hz.push_back(sys.inertia_weighted_frequency_hz(state.segment(g, g)));
    ++recorded;

    for (int i = 0; i < g; ++i) {
      const double omega = state(g + i);
      if (omega < kSpeedBandLow || omega > kSpeedBandHigh) {
        diverged = true;
        char buf[96];
        std::snprintf(buf, sizeof buf, "machine speed left validity band at %.3f s", t);
        trace.events.push_back({t, buf});
        break;
      }
    }
    if (diverged || k == steps) break;

    // classic fixed-step fourth-order step
    const Eigen::VectorXd k1 = rhs(state);
    const Eigen::VectorXd k2 = rhs(state + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = rhs(state + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = rhs(state + dt * k3);
    state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  trace.diverged = diverged;
  const auto final_samples = static_cast<Eigen::Index>(recorded);
  trace.delta_rad.conservativeResize(g, final_samples);
  trace.omega_rad_s.conservativeResize(g, final_samples);
  trace.p_electrical_pu.conservativeResize(g, final_samples);
  trace.p_mechanical_pu.conservativeResize(g, final_samples);
  return trace;
}

std::vector<double> system_frequency(const SimulationTrace& trace) {
  return trace.system_frequency_hz;
}

void write_trace_csv(const SimulationTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << "time_s";
  for (int bus : trace.machine_buses) out << ",f_hz_bus" << bus;
  for (int bus : trace.machine_buses) out << ",delta_rad_bus" << bus;
  for (int bus : trace.machine_buses) out << ",pe_pu_bus" << bus;
  out << ",system_f_hz\n";
  char buf[32];
  const auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  for (std::size_t s = 0; s < trace.sample_count(); ++s) {
    out << fmt(trace.time_s[s]);
    const auto col = static_cast<Eigen::Index>(s);
    for (Eigen::Index i = 0; i < trace.omega_rad_s.rows(); ++i)
      out << ',' << fmt(trace.omega_rad_s(i, col) / (2.0 * M_PI));
    for (Eigen::Index i = 0; i < trace.delta_rad.rows(); ++i)
      out << ',' << fmt(trace.delta_rad(i, col));
    for (Eigen::Index i = 0; i < trace.p_electrical_pu.rows(); ++i)
      out << ',' << fmt(trace.p_electrical_pu(i, col));
    out << ',' << fmt(trace.system_frequency_hz[s]) << '\n';
  }
}

void write_trace_summary_json(const SimulationTrace& trace, const FrequencyStandard& standard,
                              const std::string& path) {
  const ViolationReport report = build_violation_report(trace, standard);
  json j;
  j["standard"] = standard.name;
  j["samples"] = trace.sample_count();
  j["step_s"] = trace.step_s;
  j["peak_f_hz"] = report.peak_hz;
  j["min_f_hz"] = report.min_hz;
  j["threshold_crossings"] = report.excursions.size();
  j["time_over_limit_s"] = report.time_over_s;
  j["time_under_limit_s"] = report.time_under_s;
  j["diverged"] = trace.diverged;
  json evs = json::array();
  for (const auto& e : trace.events)
    evs.push_back({{"time_s", e.time_s}, {"description", e.description}});
  j["events"] = std::move(evs);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace lcat
