#include "geodom/problem.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace geodom {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& origin, const std::string& path,
                              const std::string& what) {
  throw InputError(origin + ": field '" + path + "': " + what);
}

int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

struct Reader {
  const json& j;
  std::string origin;
  std::string path;

  Reader at(const std::string& key) const {
    auto it = j.find(key);
    if (it == j.end()) field_error(origin, path + "/" + key, "missing");
    return Reader{*it, origin, path + "/" + key};
  }
  bool has(const std::string& key) const { return j.contains(key) && !j[key].is_null(); }

  double num() const {
    if (!j.is_number()) field_error(origin, path, "expected a number");
    return j.get<double>();
  }
  int integer() const {
    if (!j.is_number_integer()) field_error(origin, path, "expected an integer");
    return j.get<int>();
  }
  std::string str() const {
    if (!j.is_string()) field_error(origin, path, "expected a string");
    return j.get<std::string>();
  }
  Vec vec() const {
    if (!j.is_array() || j.empty()) field_error(origin, path, "expected a non-empty array");
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) field_error(origin, path, "expected numeric entries");
      v[i] = j[i].get<double>();
    }
    return v;
  }
  std::vector<double> numbers() const {
    const Vec v = vec();
    return std::vector<double>(v.data(), v.data() + v.size());
  }
  std::vector<int> integers() const {
    if (!j.is_array()) field_error(origin, path, "expected an array");
    std::vector<int> out;
    for (const auto& e : j) {
      if (!e.is_number_integer()) field_error(origin, path, "expected integer entries");
      out.push_back(e.get<int>());
    }
    return out;
  }
  ParamMap params() const {
    if (!j.is_object()) field_error(origin, path, "expected an object");
    ParamMap p;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!it.value().is_number()) {
        field_error(origin, path + "/" + it.key(), "expected a number");
      }
      p[it.key()] = it.value().get<double>();
    }
    return p;
  }
  Box box() const {
    Box b;
    b.lo = at("lo").vec();
    b.hi = at("hi").vec();
    if (b.lo.size() != b.hi.size()) field_error(origin, path, "lo/hi dimension mismatch");
    return b;
  }
};

PotentialSpec parse_potential(const Reader& r) {
  PotentialSpec p;
  p.name = r.at("name").str();
  if (r.has("params")) p.params = r.at("params").params();
  return p;
}

SeedSpec parse_seed(const Reader& r) {
  SeedSpec s;
  if (r.has("winding")) s.winding = r.at("winding").integers();
  if (r.has("via")) s.via = r.at("via").vec();
  if (r.has("label")) s.label = r.at("label").str();
  return s;
}

json seed_json(const SeedSpec& s) {
  json j = json::object();
  j["winding"] = s.winding;
  if (s.via) {
    j["via"] = std::vector<double>(s.via->data(), s.via->data() + s.via->size());
  } else {
    j["via"] = nullptr;
  }
  j["label"] = s.label;
  return j;
}

json box_json(const Box& b) {
  return json{{"lo", std::vector<double>(b.lo.data(), b.lo.data() + b.lo.size())},
              {"hi", std::vector<double>(b.hi.data(), b.hi.data() + b.hi.size())}};
}

}  // namespace

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

ProblemDef parse_problem_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(origin + ": line " + std::to_string(line_of_offset(text, e.byte)) +
                     ": " + e.what());
  }
  Reader r{root, origin, ""};

  ProblemDef def;
  if (r.has("version")) def.version = r.at("version").integer();
  if (def.version != 1) field_error(origin, "/version", "unsupported version");
  def.name = r.has("name") ? r.at("name").str() : "unnamed";

  {
    Reader m = r.at("manifold");
    def.manifold.name = m.at("name").str();
    if (m.has("params")) def.manifold.params = m.at("params").params();
    if (m.has("potential")) def.manifold.potential = parse_potential(m.at("potential"));
  }
  {
    Reader b = r.at("barrier");
    def.barrier.name = b.at("name").str();
    if (b.has("params")) def.barrier.params = b.at("params").params();
    if (b.has("levels")) {
      Reader lv = b.at("levels");
      if (lv.has("a0")) def.barrier.a0 = lv.at("a0").num();
      if (lv.has("count")) def.barrier.level_count = lv.at("count").integer();
    }
    if (!(def.barrier.a0 > 0.0) || def.barrier.level_count < 1) {
      field_error(origin, "/barrier/levels", "a0 must be > 0, count >= 1");
    }
  }
  {
    Reader e = r.at("endpoints");
    def.p = e.at("p").vec();
    def.q = e.at("q").vec();
    if (def.p.size() != def.q.size()) {
      field_error(origin, "/endpoints", "p and q must have the same dimension");
    }
  }
  if (r.has("solver")) {
    Reader s = r.at("solver");
    auto getd = [&](const char* k, double& dst) {
      if (s.has(k)) dst = s.at(k).num();
    };
    auto geti = [&](const char* k, int& dst) {
      if (s.has(k)) dst = s.at(k).integer();
    };
    getd("eps0", def.solver.eps0);
    getd("eps_ratio", def.solver.eps_ratio);
    getd("eps_min", def.solver.eps_min);
    getd("grad_tol", def.solver.grad_tol);
    geti("max_inner_iters", def.solver.max_inner_iters);
    geti("max_outer_stages", def.solver.max_outer_stages);
    geti("k_nodes", def.solver.k_nodes);
    if (s.has("seed")) def.solver.seed = static_cast<std::uint64_t>(s.at("seed").integer());
    getd("collapse_ratio", def.solver.collapse_ratio);
    geti("collapse_window", def.solver.collapse_window);
    getd("beta_floor", def.solver.beta_floor);
    getd("seed_level", def.solver.seed_level);
    try {
      def.solver.validate();
    } catch (const InputError& e2) {
      field_error(origin, "/solver", e2.what());
    }
  }
  if (r.has("init")) def.init = parse_seed(r.at("init"));
  if (r.has("classes")) {
    const json& arr = root["classes"];
    if (!arr.is_array()) field_error(origin, "/classes", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      def.classes.push_back(parse_seed(Reader{arr[i], origin, "/classes/" + std::to_string(i)}));
    }
  }
  if (r.has("hypotheses")) {
    Reader h = r.at("hypotheses");
    HypothesisSpec& hs = def.hypotheses;
    if (h.has("sampling_box")) {
      hs.sampling_box = h.at("sampling_box").box();
      hs.has_box = true;
    }
    if (h.has("levels")) hs.levels = h.at("levels").numbers();
    if (h.has("samples_per_level")) hs.samples_per_level = h.at("samples_per_level").integer();
    if (h.has("n_random_dirs")) hs.n_random_dirs = h.at("n_random_dirs").integer();
    if (h.has("seed")) hs.seed = static_cast<std::uint64_t>(h.at("seed").integer());
    if (h.has("n_boxes")) hs.n_boxes = h.at("n_boxes").integer();
    if (h.has("box_halfwidth")) hs.box_halfwidth = h.at("box_halfwidth").num();
    if (h.has("flow_samples")) hs.flow_samples = h.at("flow_samples").integer();
    if (h.has("run_flow_check")) hs.run_flow_check = root["hypotheses"]["run_flow_check"].get<bool>();
    if (h.has("checks")) {
      hs.checks.clear();
      for (const auto& c : root["hypotheses"]["checks"]) hs.checks.push_back(c.get<std::string>());
    }
    if (h.has("gordon_h")) hs.gordon_h = h.at("gordon_h").str();
  }
  if (r.has("lagrangian")) {
    Reader l = r.at("lagrangian");
    LagrangianSpec ls;
    ls.potential = parse_potential(l.at("potential"));
    ls.energy = l.at("energy").num();
    if (l.has("sample_box")) {
      ls.sample_box = l.at("sample_box").box();
      ls.has_box = true;
    }
    if (l.has("k_nodes")) ls.k_nodes = l.at("k_nodes").integer();
    if (l.has("rep_levels")) ls.rep_levels = l.at("rep_levels").numbers();
    if (l.has("rep_samples")) ls.rep_samples = l.at("rep_samples").integer();
    if (l.has("jhes_samples")) ls.jhes_samples = l.at("jhes_samples").integer();
    if (l.has("jhes_dirs")) ls.jhes_dirs = l.at("jhes_dirs").integer();
    def.lagrangian = std::move(ls);
  }
  canonicalize(def);
  return def;
}

void canonicalize(ProblemDef& def) {
  json j;
  j["version"] = def.version;
  j["name"] = def.name;
  j["manifold"] = {{"name", def.manifold.name}, {"params", def.manifold.params}};
  if (def.manifold.potential) {
    j["manifold"]["potential"] = {{"name", def.manifold.potential->name},
                                  {"params", def.manifold.potential->params}};
  }
  j["barrier"] = {{"name", def.barrier.name},
                  {"params", def.barrier.params},
                  {"levels", {{"a0", def.barrier.a0}, {"count", def.barrier.level_count}}}};
  j["endpoints"] = {{"p", std::vector<double>(def.p.data(), def.p.data() + def.p.size())},
                    {"q", std::vector<double>(def.q.data(), def.q.data() + def.q.size())}};
  j["solver"] = {{"eps0", def.solver.eps0},
                 {"eps_ratio", def.solver.eps_ratio},
                 {"eps_min", def.solver.eps_min},
                 {"grad_tol", def.solver.grad_tol},
                 {"max_inner_iters", def.solver.max_inner_iters},
                 {"max_outer_stages", def.solver.max_outer_stages},
                 {"k_nodes", def.solver.k_nodes},
                 {"seed", def.solver.seed},
                 {"collapse_ratio", def.solver.collapse_ratio},
                 {"collapse_window", def.solver.collapse_window},
                 {"beta_floor", def.solver.beta_floor},
                 {"seed_level", def.solver.seed_level}};
  j["init"] = seed_json(def.init);
  j["classes"] = json::array();
  for (const SeedSpec& s : def.classes) j["classes"].push_back(seed_json(s));
  {
    json h;
    h["sampling_box"] = def.hypotheses.has_box ? box_json(def.hypotheses.sampling_box) : json();
    h["levels"] = def.hypotheses.levels;
    h["samples_per_level"] = def.hypotheses.samples_per_level;
    h["n_random_dirs"] = def.hypotheses.n_random_dirs;
    h["seed"] = def.hypotheses.seed;
    h["n_boxes"] = def.hypotheses.n_boxes;
    h["box_halfwidth"] = def.hypotheses.box_halfwidth;
    h["flow_samples"] = def.hypotheses.flow_samples;
    h["run_flow_check"] = def.hypotheses.run_flow_check;
    h["checks"] = def.hypotheses.checks;
    h["gordon_h"] = def.hypotheses.gordon_h;
    j["hypotheses"] = std::move(h);
  }
  if (def.lagrangian) {
    const LagrangianSpec& ls = *def.lagrangian;
    json l;
    l["potential"] = {{"name", ls.potential.name}, {"params", ls.potential.params}};
    l["energy"] = ls.energy;
    l["sample_box"] = ls.has_box ? box_json(ls.sample_box) : json();
    l["k_nodes"] = ls.k_nodes;
    l["rep_levels"] = ls.rep_levels;
    l["rep_samples"] = ls.rep_samples;
    l["jhes_samples"] = ls.jhes_samples;
    l["jhes_dirs"] = ls.jhes_dirs;
    j["lagrangian"] = std::move(l);
  }
  def.canonical = j.dump();
  std::ostringstream os;
  os << std::hex << fnv1a64(def.canonical);
  def.hash = os.str();
}

ProblemInstance instantiate(const ProblemDef& def) {
  ProblemInstance inst;
  inst.manifold = make_metric(def.manifold.name, def.manifold.params, def.manifold.potential);
  if (def.p.size() != inst.manifold->dim()) {
    throw InputError("endpoint dimension " + std::to_string(def.p.size()) +
                     " does not match manifold dimension " +
                     std::to_string(inst.manifold->dim()));
  }
  ScalarField phi = make_barrier_field(def.barrier.name, def.barrier.params);
  inst.barrier = std::make_shared<Barrier>(
      inst.manifold, phi,
      Barrier::geometric_schedule(def.barrier.a0, def.barrier.level_count));
  if (def.lagrangian) {
    LagrangianProblem prob;
    prob.manifold = inst.manifold;
    prob.potential = make_potential(def.lagrangian->potential.name,
                                    def.lagrangian->potential.params);
    prob.energy = def.lagrangian->energy;
    inst.lagrangian = std::move(prob);
  }
  return inst;
}

Problem load_problem(const std::string& path_or_gallery) {
  Problem prob;
  if (std::filesystem::exists(path_or_gallery)) {
    std::ifstream in(path_or_gallery);
    if (!in) throw InputError("cannot open '" + path_or_gallery + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    prob.def = parse_problem_text(ss.str(), path_or_gallery);
  } else {
    const auto& defs = gallery_defs();
    auto it = defs.find(path_or_gallery);
    if (it == defs.end()) {
      throw InputError("'" + path_or_gallery +
                       "' is neither a file nor a gallery problem (see `geodom gallery list`)");
    }
    prob.def = parse_problem_text(it->second, "gallery:" + path_or_gallery);
  }
  prob.inst = instantiate(prob.def);

  const Barrier& b = *prob.inst.barrier;
  if (!b.inside(prob.def.p)) {
    throw InputError("endpoint p lies outside the domain: phi(p) = " +
                     std::to_string(b.in_chart(prob.def.p) ? b.value(prob.def.p)
                                                           : std::nan("")));
  }
  if (!b.inside(prob.def.q)) {
    throw InputError("endpoint q lies outside the domain: phi(q) = " +
                     std::to_string(b.in_chart(prob.def.q) ? b.value(prob.def.q)
                                                           : std::nan("")));
  }
  return prob;
}

std::vector<std::string> gallery_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : gallery_defs()) names.push_back(name);
  return names;
}

const std::string& gallery_def_text(const std::string& name) {
  const auto& defs = gallery_defs();
  auto it = defs.find(name);
  if (it == defs.end()) throw InputError("unknown gallery problem '" + name + "'");
  return it->second;
}

HypothesisConfig build_hypothesis_config(const ProblemDef& def, const ProblemInstance& inst) {
  const HypothesisSpec& hs = def.hypotheses;
  HypothesisConfig cfg;
  if (!hs.has_box) {
    throw InputError("hypotheses.sampling_box is required for check-hypotheses");
  }
  cfg.sampling_box = hs.sampling_box;
  cfg.levels = hs.levels;
  cfg.samples_per_level = hs.samples_per_level;
  cfg.n_random_dirs = hs.n_random_dirs;
  cfg.seed = hs.seed;
  cfg.n_boxes = hs.n_boxes;
  cfg.box_halfwidth = hs.box_halfwidth;
  cfg.flow_samples = hs.flow_samples;
  cfg.run_flow_check = hs.run_flow_check;
  cfg.checks = hs.checks;
  if (hs.gordon_h == "inv_phi") {
    cfg.gordon_h = reciprocal_field(inst.barrier->phi());
  } else if (hs.gordon_h == "phi") {
    cfg.gordon_h = inst.barrier->phi();
  } else if (!hs.gordon_h.empty()) {
    throw InputError("hypotheses.gordon_h: unknown candidate '" + hs.gordon_h + "'");
  }
  return cfg;
}

SeedDescriptor to_seed(const SeedSpec& s) {
  SeedDescriptor d;
  d.winding = s.winding;
  d.via = s.via;
  d.label = s.label;
  return d;
}

}  // namespace geodom
