#include "pado/game.hpp"

#include <sstream>

namespace pado {

namespace {

Rng stream(std::uint64_t seed, std::uint64_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), 0x9e3779b9u};
  return Rng(seq);
}

struct Pending {
  std::optional<TaskSpec> task;
  double pressure = 0.0;
  Split split;
  double f_local = 0.0;
  double f_server = 0.0;
  double psi = kNoOffer;
  bool requested = false;
  bool accepted = false;
};

double pressure_for(PolicyKind k, const VehicleState& s, const TaskSpec& task,
                    const SimParams& p) {
  return k == PolicyKind::TDO ? tdo_pressure(s, task) : queue_pressure(s, task, p);
}

void play_stackelberg(WorldState& w, std::vector<Pending>& pend, MetricsRecord& m) {
  const auto& p = w.params;
  std::vector<int> owner;
  for (int i = 0; i < p.num_vehicles; ++i)
    if (pend[i].task) owner.push_back(i);
  if (owner.empty()) return;

  ServerOffer offer;
  const int rounds = std::max(1, p.stackelberg_inner_rounds);
  for (int r = 0; r < rounds; ++r) {
    std::vector<VehicleBid> bids;
    bids.reserve(owner.size());
    for (int i : owner)
      bids.push_back(make_bid(i, pend[i].pressure, *pend[i].task, w.prior_psi[i], p));
    offer = solve_offer(bids, w.server.B_tilde(), w.server.nu, p);
    w.server.nu = offer.nu;
    m.iterations += offer.iterations;
    m.converged = m.converged && offer.converged;
    for (std::size_t b = 0; b < owner.size(); ++b)
      w.prior_psi[owner[b]] = offer.offers[b].accepted ? offer.offers[b].psi_off : kNoOffer;
  }

  for (std::size_t b = 0; b < owner.size(); ++b) {
    auto& pd = pend[owner[b]];
    const auto& o = offer.offers[b];
    pd.requested = true;
    pd.accepted = o.accepted;
    pd.psi = o.accepted ? o.psi_off : kNoOffer;
    const auto choice = choose_local_frequency(pd.pressure, *pd.task, pd.psi, p);
    pd.split = choice.split;
    pd.f_local = choice.f_local;
    pd.f_server = o.accepted ? o.f_server : 0.0;
  }
}

}  // namespace

WorldState make_world(const SimParams& p) {
  validate(p);
  WorldState w;
  w.params = p;
  const int M = p.num_vehicles;
  w.vehicles.assign(M, VehicleState(p.num_classes()));
  for (int i = 0; i < M; ++i) w.vehicle_rng.push_back(stream(p.seed, i));
  w.server_rng = stream(p.seed, std::uint64_t(M));
  Rng trace_rng = stream(p.seed, std::uint64_t(M) + 1);
  w.traces = build_traces(p, std::max<long>(p.T_slots, 1), trace_rng);
  w.chi_max = w.traces.max_price();
  w.server.theta = simulation_theta(p, w.chi_max);
  w.server.B = p.battery_initial < 0.0 ? p.e_max : p.battery_initial;
  w.server.nu = initial_multipliers(p);
  w.prior_psi.assign(M, 0.0);  // first exchange: free offload at full speed
  w.last_f.assign(M, 0.0);
  return w;
}

SlotOutcome run_slot(WorldState& w) {
  const auto& p = w.params;
  const int M = p.num_vehicles;
  const int S = p.num_classes();
  SlotOutcome out{SlotDecision(M), {}};
  auto& m = out.metrics;
  m.t = w.t;
  m.chi = w.traces.price(w.t);
  m.U = w.traces.renewable(w.t);
  m.B = w.server.B;
  m.delay_sum = Eigen::VectorXd::Zero(S);
  m.delay_count = Eigen::VectorXd::Zero(S);

  std::vector<Pending> pend(M);
  for (int i = 0; i < M; ++i) {
    pend[i].task = generate_task(w.vehicle_rng[i], p);
    if (pend[i].task) {
      pend[i].pressure = pressure_for(p.policy, w.vehicles[i], *pend[i].task, p);
      ++m.tasks;
    }
  }

  switch (p.policy) {
    case PolicyKind::PADO:
    case PolicyKind::TDO: play_stackelberg(w, pend, m); break;
    case PolicyKind::LE:
      for (auto& pd : pend) {
        if (!pd.task) continue;
        pd.split = {1.0, 0.0};
        pd.f_local = le_decide(w.vehicles[&pd - pend.data()], *pd.task, p).f_local;
      }
      break;
    case PolicyKind::DRO: {
      Eigen::VectorXd left = p.capacity();
      for (int i = 0; i < M; ++i) {
        auto& pd = pend[i];
        if (!pd.task) continue;
        const auto d = dro_decide(w.vehicle_rng[i], w.vehicles[i], *pd.task, left, p);
        pd.split = d.split;
        pd.f_local = d.f_local;
        pd.requested = d.wants_offload;
        pd.accepted = d.accepted;
        pd.psi = d.psi_off;
        pd.f_server = d.f_server;
      }
      break;
    }
  }

  // Commit, in vehicle order.
  double cost_total = 0.0;
  double delay_total = 0.0;
  int served = 0;
  for (int i = 0; i < M; ++i) {
    auto& v = w.vehicles[i];
    auto& pd = pend[i];
    double cost = 0.0;
    if (pd.task) {
      const TaskSpec& task = *pd.task;
      const double R = task.workload;
      const Split& sp = pd.split;
      out.decision.alpha(i) = sp.alpha;
      out.decision.beta(i) = sp.beta;
      out.decision.f_local(i) = sp.alpha > 0.0 ? pd.f_local : 0.0;
      if (sp.beta > 0.0) {
        out.decision.f_server(i) = pd.f_server;
        out.decision.g(i) = pd.psi * pd.f_server;
      }
      m.arrived_cycles += R;
      m.dropped_cycles += sp.dropped() * R;
      if (pd.requested) ++m.requests;
      if (pd.accepted) ++m.accepted;

      if (sp.alpha + sp.beta > 0.0) {
        const auto times =
            exec_times(R, sp.alpha, sp.beta, pd.f_local, pd.f_server, v.Q(task.cls));
        m.delay_sum(task.cls) += times.total;
        m.delay_count(task.cls) += 1.0;
        delay_total += times.total;
        ++served;
      }
      if (sp.alpha > 0.0) cost += local_energy(sp.alpha, R, pd.f_local, p.kappa);
      if (sp.beta > 0.0) {
        const double pay = sp.beta * R * pd.psi;
        cost += pay;
        m.payments += pay;
        m.offloaded_units += sp.beta * task.size_units;
        m.sum_N += server_energy(sp.beta, R, pd.f_server, p.kappa);
      }
      cost += sp.dropped() * p.drop_price * R;
      if (sp.alpha > 0.0) w.last_f[i] = pd.f_local;
    }

    const double alpha = pd.task ? pd.split.alpha : 0.0;
    for (int c = 0; c < S; ++c) {
      const bool own = pd.task && pd.task->cls == c;
      v.Q(c) = update_delay_queue(v.Q(c), p.slot_length, own ? alpha : 0.0,
                                  own ? pd.task->workload : 0.0, own ? pd.f_local : 0.0);
      v.W(c) = update_virtual_queue(v.W(c), v.Q(c), p.gamma(c));
    }
    v.backlog_bits = update_backlog_bits(v.backlog_bits, pd.task ? &*pd.task : nullptr,
                                         pd.split, w.last_f[i], p);
    v.cumulative_cost += cost;
    cost_total += cost;
  }

  // Server energy.
  auto& srv = w.server;
  const double deficit = positive_part(m.sum_N - m.U);
  const double surplus = positive_part(m.U - m.sum_N);
  m.G = grid_purchase(srv.B, srv.theta, p.H, m.chi, deficit, p.e_max, p.eta_minus);
  m.C = charge_amount(srv.B, srv.theta, m.chi, w.chi_max, surplus, p);
  try {
    srv.B = update_battery(srv.B, m.U, m.sum_N, m.G, m.C, p.eta_plus, p.eta_minus);
  } catch (const SimulationFault& e) {
    std::ostringstream os;
    os.precision(17);
    os << "slot " << w.t << ": " << e.what() << " (B=" << srv.B << ", theta=" << srv.theta
       << ", sum_N=" << m.sum_N << ", U=" << m.U << ", G=" << m.G << ", chi=" << m.chi
       << ", H=" << p.H << ")";
    throw SimulationFault(os.str());
  }
  out.decision.G = m.G;
  out.decision.C = m.C;
  m.income = m.payments;
  m.revenue = server_revenue(m.income, m.chi, m.G);
  srv.cumulative_revenue += m.revenue;

  m.Q_mean = Eigen::VectorXd::Zero(S);
  m.W_mean = Eigen::VectorXd::Zero(S);
  for (const auto& v : w.vehicles) {
    m.Q_mean += v.Q;
    m.W_mean += v.W;
  }
  if (M > 0) {
    m.Q_mean /= M;
    m.W_mean /= M;
    m.vehicle_cost_mean = cost_total / M;
  }
  m.drop_rate = m.arrived_cycles > 0.0 ? m.dropped_cycles / m.arrived_cycles : 0.0;
  m.acceptance_rate = m.requests > 0 ? double(m.accepted) / m.requests : 0.0;
  m.unit_price = m.offloaded_units > 0.0 ? m.payments / m.offloaded_units : 0.0;
  m.delay_mean = served > 0 ? delay_total / served : 0.0;

  ++w.t;
  return out;
}

Summary summarize(const std::vector<MetricsRecord>& records, const SimParams& p, double theta,
                  double chi_max) {
  const int S = p.num_classes();
  const long T = static_cast<long>(records.size());
  Summary s;
  s.slots = T;
  s.theta = theta;
  s.chi_max = chi_max;
  s.Q_avg = s.W_avg = s.W_final_quarter = s.W_mid_run = s.delay_per_class =
      Eigen::VectorXd::Zero(S);
  if (T == 0) return s;

  Eigen::VectorXd dsum = Eigen::VectorXd::Zero(S), dcnt = Eigen::VectorXd::Zero(S);
  double arrived = 0, dropped = 0, units = 0;
  long req = 0, acc = 0, conv = 0;
  const long fq = 3 * T / 4, mid_lo = 3 * T / 8, mid_hi = 5 * T / 8;
  long nfq = 0, nmid = 0;
  double bfq = 0;
  s.battery_min = s.battery_max = records.front().B;
  for (const auto& r : records) {
    s.Q_avg += r.Q_mean;
    s.W_avg += r.W_mean;
    if (r.t >= fq) s.W_final_quarter += r.W_mean, bfq += r.B, ++nfq;
    if (r.t >= mid_lo && r.t < mid_hi) s.W_mid_run += r.W_mean, ++nmid;
    dsum += r.delay_sum;
    dcnt += r.delay_count;
    s.vehicle_cost += r.vehicle_cost_mean;
    s.revenue_total += r.revenue;
    s.payments_total += r.payments;
    s.income_total += r.income;
    s.battery_min = std::min(s.battery_min, r.B);
    s.battery_max = std::max(s.battery_max, r.B);
    s.grid_total += r.G;
    arrived += r.arrived_cycles;
    dropped += r.dropped_cycles;
    units += r.offloaded_units;
    req += r.requests;
    acc += r.accepted;
    conv += r.converged ? 1 : 0;
  }
  s.Q_avg /= T;
  s.W_avg /= T;
  if (nfq) s.W_final_quarter /= nfq, s.battery_final_quarter = bfq / nfq;
  if (nmid) s.W_mid_run /= nmid;
  for (int c = 0; c < S; ++c) s.delay_per_class(c) = dcnt(c) > 0 ? dsum(c) / dcnt(c) : 0.0;
  s.delay_overall = dcnt.sum() > 0 ? dsum.sum() / dcnt.sum() : 0.0;
  s.vehicle_cost /= T;
  s.revenue_avg = s.revenue_total / T;
  s.drop_rate = arrived > 0 ? dropped / arrived : 0.0;
  s.acceptance_rate = req > 0 ? double(acc) / req : 0.0;
  s.unit_price = units > 0 ? s.payments_total / units : 0.0;
  s.converged_fraction = double(conv) / T;
  return s;
}

MetricsSeries run_horizon(const SimParams& p) {
  WorldState w = make_world(p);
  MetricsSeries out;
  out.records.reserve(std::max(p.T_slots, 0));
  for (int t = 0; t < p.T_slots; ++t) out.records.push_back(run_slot(w).metrics);
  out.summary = summarize(out.records, p, w.server.theta, w.chi_max);
  return out;
}

}  // namespace pado
