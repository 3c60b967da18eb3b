#include "curvestep/run_record.hpp"

#include <algorithm>
#include <cmath>

namespace curvestep {

SystemState RunRecord::state_at(std::size_t i) const {
  SystemState s;
  s.t = t.at(i);
  const auto base = i * dof;
  s.d.assign(d.begin() + base, d.begin() + base + dof);
  s.v.assign(v.begin() + base, v.begin() + base + dof);
  s.a.assign(a.begin() + base, a.begin() + base + dof);
  return s;
}

void RunRecord::append(const SystemState& s, double dt_used, double k) {
  t.push_back(s.t);
  dt.push_back(dt_used);
  k_eff.push_back(k);
  d.insert(d.end(), s.d.begin(), s.d.end());
  v.insert(v.end(), s.v.begin(), s.v.end());
  a.insert(a.end(), s.a.begin(), s.a.end());
  cum_evals.push_back(total_force_evaluations);
}

void RunRecord::note_accepted(double t_new, double dt_used) {
  ++accepted_steps;
  dt_min_used = std::min(dt_min_used, dt_used);
  dt_max_used = std::max(dt_max_used, dt_used);
  if (dt_log_dt.empty() ||
      std::abs(dt_used - dt_log_dt.back()) > 0.005 * dt_log_dt.back()) {
    dt_log_t.push_back(t_new);
    dt_log_dt.push_back(dt_used);
  }
}

void RunRecord::truncate_after(double t_keep) {
  const auto it = std::upper_bound(t.begin(), t.end(), t_keep);
  const auto n = static_cast<std::size_t>(it - t.begin());
  t.resize(n);
  dt.resize(n);
  k_eff.resize(n);
  d.resize(n * dof);
  v.resize(n * dof);
  a.resize(n * dof);
  cum_evals.resize(n);
  const auto lit = std::upper_bound(dt_log_t.begin(), dt_log_t.end(), t_keep);
  const auto ln = static_cast<std::size_t>(lit - dt_log_t.begin());
  dt_log_t.resize(ln);
  dt_log_dt.resize(ln);
}

double RunRecord::dt_at(double q) const {
  if (dt_log_t.empty()) return 0.0;
  const auto it = std::upper_bound(dt_log_t.begin(), dt_log_t.end(), q);
  if (it == dt_log_t.begin()) return dt_log_dt.front();
  return dt_log_dt[static_cast<std::size_t>(it - dt_log_t.begin()) - 1];
}

}  // namespace curvestep
