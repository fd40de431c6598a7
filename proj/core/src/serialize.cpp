#include "geodom/serialize.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace geodom {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string path_csv(const DiscretePath& path, const Barrier& b) {
  const int K = path.segments();
  const int n = path.dim();
  std::ostringstream os;
  os << "s";
  for (int d = 0; d < n; ++d) os << ",x" << d;
  os << ",phi,speed\n";
  const std::vector<double> speeds = node_speeds(path, b.manifold());
  for (int i = 0; i <= K; ++i) {
    os << format_double(static_cast<double>(i) / K);
    for (int d = 0; d < n; ++d) os << "," << format_double(path.nodes(i, d));
    const Vec x = path.node(i);
    os << "," << format_double(b.in_chart(x) ? b.value(x) : std::nan(""));
    os << "," << format_double(speeds[i]) << "\n";
  }
  return os.str();
}

std::string stages_csv(const std::vector<StageRecord>& stages) {
  std::ostringstream os;
  os << "stage,eps,f_eps,f,min_phi,el_residual,e_spread,max_lambda,grad_norm,inner_iters,"
        "hit_tol\n";
  for (const StageRecord& r : stages) {
    os << r.stage << "," << format_double(r.eps) << "," << format_double(r.f_eps) << ","
       << format_double(r.f) << "," << format_double(r.min_phi) << ","
       << format_double(r.el_residual) << "," << format_double(r.e_spread) << ","
       << format_double(r.max_lambda) << "," << format_double(r.grad_norm) << ","
       << r.inner_iters << "," << (r.hit_tol ? 1 : 0) << "\n";
  }
  return os.str();
}

namespace {

json stage_json(const StageRecord& r) {
  return json{{"stage", r.stage},
              {"eps", r.eps},
              {"f_eps", r.f_eps},
              {"f", r.f},
              {"min_phi", r.min_phi},
              {"el_residual", r.el_residual},
              {"e_spread", r.e_spread},
              {"max_lambda", r.max_lambda},
              {"grad_norm", r.grad_norm},
              {"inner_iters", r.inner_iters},
              {"hit_tol", r.hit_tol}};
}

json report_body(const SolveReport& rep) {
  json nodes = json::array();
  for (int i = 0; i < rep.path.nodes.rows(); ++i) {
    json row = json::array();
    for (int d = 0; d < rep.path.nodes.cols(); ++d) row.push_back(rep.path.nodes(i, d));
    nodes.push_back(std::move(row));
  }
  json stages = json::array();
  for (const StageRecord& r : rep.stages) stages.push_back(stage_json(r));
  return json{{"converged", rep.converged},
              {"failure_reason", rep.failure_reason},
              {"f", rep.f_value},
              {"beta", rep.beta},
              {"geodesic_residual", rep.geodesic_residual},
              {"seed_label", rep.seed_label},
              {"winding", rep.path.winding},
              {"stages", std::move(stages)},
              {"nodes", std::move(nodes)}};
}

json bundle_header(const ProblemDef& def, const std::string& timestamp) {
  json j{{"problem", def.name}, {"problem_hash", def.hash}, {"tool_version", kToolVersion}};
  if (!timestamp.empty()) j["timestamp"] = timestamp;
  return j;
}

}  // namespace

std::string solve_report_json(const SolveReport& rep, const ProblemDef& def,
                              const std::string& timestamp) {
  json j = bundle_header(def, timestamp);
  j["report"] = report_body(rep);
  return j.dump(2) + "\n";
}

std::string multiplicity_report_json(const MultiplicityResult& result, const ProblemDef& def,
                                     const std::string& timestamp) {
  json j = bundle_header(def, timestamp);
  j["geodesics"] = json::array();
  for (const SolveReport& rep : result.geodesics) j["geodesics"].push_back(report_body(rep));
  j["dropped"] = json::array();
  for (const SolveReport& rep : result.dropped) {
    j["dropped"].push_back(
        json{{"seed_label", rep.seed_label}, {"failure_reason", rep.failure_reason}});
  }
  return j.dump(2) + "\n";
}

namespace {

json level_json(const LevelStats& st) {
  return json{{"a", st.a},
              {"grad_min", st.grad_min},
              {"grad_max", st.grad_max},
              {"m_tangent", st.m_tangent},
              {"m_all", st.m_all},
              {"n_samples", st.n_samples},
              {"n_failures", st.n_failures}};
}

}  // namespace

std::string hypothesis_report_json(const HypothesisReport& rep, const ProblemDef& def,
                                   const std::string& timestamp) {
  json j = bundle_header(def, timestamp);
  j["per_level"] = json::array();
  for (const LevelStats& st : rep.per_level) j["per_level"].push_back(level_json(st));
  j["boxes"] = json::array();
  for (const BoxLevelSeries& bls : rep.boxes) {
    json bj;
    bj["lo"] = std::vector<double>(bls.box.lo.data(), bls.box.lo.data() + bls.box.lo.size());
    bj["hi"] = std::vector<double>(bls.box.hi.data(), bls.box.hi.data() + bls.box.hi.size());
    bj["per_level"] = json::array();
    for (const LevelStats& st : bls.per_level) bj["per_level"].push_back(level_json(st));
    j["boxes"].push_back(std::move(bj));
  }
  j["flow"] = json::array();
  for (const FlowBoundsRecord& fr : rep.flow) {
    j["flow"].push_back(json{{"a", fr.a},
                             {"c1", fr.bounds.c1},
                             {"c2", fr.bounds.c2},
                             {"c1_metric", fr.bounds.c1_metric},
                             {"c2_metric", fr.bounds.c2_metric},
                             {"n_ok", fr.bounds.n_ok},
                             {"n_failed", fr.bounds.n_failed}});
  }
  j["flow_bounds"] = json{{"c1", rep.flow_bounds.c1},
                          {"c2", rep.flow_bounds.c2},
                          {"c1_metric", rep.flow_bounds.c1_metric},
                          {"c2_metric", rep.flow_bounds.c2_metric}};
  j["verdicts"] = json::object();
  for (const auto& [name, v] : rep.verdicts) {
    j["verdicts"][name] =
        json{{"state", to_string(v.state)}, {"margin", v.margin}, {"reason", v.reason}};
  }
  return j.dump(2) + "\n";
}

std::string hypothesis_report_table(const HypothesisReport& rep) {
  std::ostringstream os;
  os << std::left;
  os << "level        grad_min      grad_max      M_tangent     M_all         samples fail\n";
  for (const LevelStats& st : rep.per_level) {
    os << std::setw(13) << format_double(st.a).substr(0, 12) << std::setw(14)
       << format_double(st.grad_min).substr(0, 13) << std::setw(14)
       << format_double(st.grad_max).substr(0, 13) << std::setw(14)
       << format_double(st.m_tangent).substr(0, 13) << std::setw(14)
       << format_double(st.m_all).substr(0, 13) << std::setw(8) << st.n_samples
       << st.n_failures << "\n";
  }
  os << "\nflow bounds: C1=" << format_double(rep.flow_bounds.c1)
     << " C2=" << format_double(rep.flow_bounds.c2)
     << " C1_metric=" << format_double(rep.flow_bounds.c1_metric)
     << " C2_metric=" << format_double(rep.flow_bounds.c2_metric) << "\n\nverdicts:\n";
  for (const auto& [name, v] : rep.verdicts) {
    os << "  " << std::setw(18) << name << " " << std::setw(14) << to_string(v.state)
       << " margin=" << format_double(v.margin);
    if (!v.reason.empty()) os << "  (" << v.reason << ")";
    os << "\n";
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory& traj, const ChartManifold& m) {
  std::ostringstream os;
  const int n = static_cast<int>(traj.points.cols());
  os << "t";
  for (int d = 0; d < n; ++d) os << ",x" << d;
  os << ",speed,energy\n";
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    os << format_double(traj.t[i]);
    for (int d = 0; d < n; ++d) os << "," << format_double(traj.points(i, d));
    const Vec x = traj.points.row(i).transpose();
    const Vec v = traj.velocities.row(i).transpose();
    os << "," << format_double(m.norm(x, v)) << "," << format_double(traj.energy_profile[i])
       << "\n";
  }
  return os.str();
}

std::string jacobi_report_json(const JacobiRunSummary& run, const ProblemDef& def,
                               const std::string& timestamp) {
  json j = bundle_header(def, timestamp);
  j["rep_check"] = json{{"m_prime", run.rep.m_prime},
                        {"per_level", run.rep.per_level},
                        {"pass", run.rep.pass},
                        {"reason", run.rep.reason}};
  j["jhes_defect"] = run.jhes_defect;
  j["solve"] = report_body(run.solve);
  j["trajectory"] = json{{"ok", run.trajectory.ok},
                         {"tag", run.trajectory.tag},
                         {"ode_residual", run.trajectory.ode_residual},
                         {"energy_spread", run.trajectory.energy_spread}};
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace geodom
