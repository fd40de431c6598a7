#include "geodom/gallery.hpp"

namespace geodom {

// Builtin problem library. Definitions go through the same loader as user
// files, so the gallery doubles as loader coverage.
const std::map<std::string, std::string>& gallery_defs() {
  static const std::map<std::string, std::string> defs = {
      {"quadrant_sqrtxy", R"json({
  "version": 1,
  "name": "quadrant_sqrtxy",
  "manifold": {"name": "euclidean", "params": {"dim": 2}},
  "barrier": {"name": "sqrt_xy", "levels": {"a0": 0.5, "count": 6}},
  "endpoints": {"p": [1.0, 2.0], "q": [2.0, 1.0]},
  "solver": {"eps0": 0.5, "eps_min": 1e-8, "grad_tol": 1e-8, "k_nodes": 200, "seed": 1},
  "hypotheses": {
    "sampling_box": {"lo": [0.001, 0.001], "hi": [4.0, 4.0]},
    "samples_per_level": 48, "seed": 1, "n_boxes": 4, "box_halfwidth": 0.75,
    "checks": ["t0", "t1", "t2"]
  }
})json"},
      {"quadrant_xy", R"json({
  "version": 1,
  "name": "quadrant_xy",
  "manifold": {"name": "euclidean", "params": {"dim": 2}},
  "barrier": {"name": "xy", "levels": {"a0": 0.5, "count": 6}},
  "endpoints": {"p": [1.0, 2.0], "q": [2.0, 1.0]},
  "solver": {"k_nodes": 100, "seed": 1},
  "hypotheses": {
    "sampling_box": {"lo": [0.001, 0.001], "hi": [4.0, 4.0]},
    "samples_per_level": 48, "seed": 1, "n_boxes": 4, "box_halfwidth": 0.75,
    "checks": ["t0", "t2"], "run_flow_check": false
  }
})json"},
      {"punctured_plane", R"json({
  "version": 1,
  "name": "punctured_plane",
  "manifold": {"name": "polar_inverse_r2"},
  "barrier": {"name": "radial_r", "levels": {"a0": 0.5, "count": 6}},
  "endpoints": {"p": [1.0, 0.5], "q": [1.5, 2.5]},
  "solver": {"k_nodes": 120, "grad_tol": 1e-7, "eps_min": 1e-8, "seed": 2},
  "hypotheses": {
    "sampling_box": {"lo": [0.005, -3.1], "hi": [2.2, 3.1]},
    "samples_per_level": 40, "seed": 2, "n_boxes": 3, "box_halfwidth": 0.8,
    "checks": ["t1", "t2"]
  }
})json"},
      {"half_plane", R"json({
  "version": 1,
  "name": "half_plane",
  "manifold": {"name": "euclidean", "params": {"dim": 2}},
  "barrier": {"name": "half_plane_y", "levels": {"a0": 0.5, "count": 6}},
  "endpoints": {"p": [0.0, 1.0], "q": [2.0, 1.0]},
  "solver": {"k_nodes": 100, "seed": 3},
  "hypotheses": {
    "sampling_box": {"lo": [-3.0, 0.004], "hi": [3.0, 3.0]},
    "samples_per_level": 40, "seed": 3, "n_boxes": 3, "box_halfwidth": 1.0,
    "checks": ["t0", "t1", "t2"]
  }
})json"},
      {"unit_disk", R"json({
  "version": 1,
  "name": "unit_disk",
  "manifold": {"name": "euclidean", "params": {"dim": 2}},
  "barrier": {"name": "unit_disk", "levels": {"a0": 0.5, "count": 6}},
  "endpoints": {"p": [-0.4, 0.0], "q": [0.5, 0.1]},
  "solver": {"k_nodes": 100, "seed": 4},
  "hypotheses": {
    "sampling_box": {"lo": [-0.999, -0.999], "hi": [0.999, 0.999]},
    "samples_per_level": 48, "seed": 4, "n_boxes": 4, "box_halfwidth": 0.5,
    "checks": ["t0", "t1", "t2", "gordon"], "gordon_h": "inv_phi"
  }
})json"},
      {"half_plane_wavy", R"json({
  "version": 1,
  "name": "half_plane_wavy",
  "manifold": {"name": "euclidean", "params": {"dim": 2}},
  "barrier": {"name": "wavy_half_plane", "params": {"amp": 0.5, "freq": 1.0},
              "levels": {"a0": 0.4, "count": 5}},
  "endpoints": {"p": [0.0, 1.5], "q": [3.0, 1.5]},
  "solver": {"k_nodes": 100, "seed": 5},
  "hypotheses": {
    "sampling_box": {"lo": [-6.3, 0.01], "hi": [6.3, 3.0]},
    "samples_per_level": 64, "seed": 5, "n_boxes": 5, "box_halfwidth": 1.6,
    "checks": ["t0"], "run_flow_check": false
  }
})json"},
      {"flat_cylinder_winding", R"json({
  "version": 1,
  "name": "flat_cylinder_winding",
  "manifold": {"name": "flat_cylinder"},
  "barrier": {"name": "constant", "params": {"value": 1.0}, "levels": {"a0": 0.5, "count": 4}},
  "endpoints": {"p": [0.0, 0.0], "q": [0.0, 1.0]},
  "solver": {"k_nodes": 100, "grad_tol": 1e-9, "seed": 6},
  "classes": [
    {"winding": [0], "label": "k0"},
    {"winding": [1], "label": "k1"},
    {"winding": [2], "label": "k2"}
  ]
})json"},
      {"cylinder_minus_helix", R"json({
  "version": 1,
  "name": "cylinder_minus_helix",
  "manifold": {"name": "flat_cylinder"},
  "barrier": {"name": "dist_to_helix", "params": {"pitch": 1.0, "width": 0.3},
              "levels": {"a0": 0.12, "count": 5}},
  "endpoints": {"p": [0.0, 0.25], "q": [0.0, 6.533185307179586]},
  "solver": {"k_nodes": 160, "eps_min": 1e-9, "grad_tol": 1e-8, "seed": 7,
             "seed_level": 0.05},
  "init": {"winding": [1], "label": "around"},
  "hypotheses": {
    "sampling_box": {"lo": [0.0, 0.0], "hi": [6.283185307179586, 6.283185307179586]},
    "samples_per_level": 40, "seed": 7, "n_boxes": 3, "box_halfwidth": 0.5,
    "checks": ["t1", "t2"]
  }
})json"},
      {"cylinder_minus_helix_perturbed", R"json({
  "version": 1,
  "name": "cylinder_minus_helix_perturbed",
  "manifold": {"name": "helix_valley",
               "params": {"pitch": 1.0, "depth": 0.5, "d0": 0.7, "sigma": 0.5}},
  "barrier": {"name": "dist_to_helix", "params": {"pitch": 1.0, "width": 0.3},
              "levels": {"a0": 0.12, "count": 5}},
  "endpoints": {"p": [0.0, 2.0], "q": [4.71238898038469, 6.71238898038469]},
  "solver": {"k_nodes": 800, "eps_min": 1e-9, "grad_tol": 1e-4, "seed": 8,
             "seed_level": 0.05, "max_inner_iters": 20000},
  "classes": [
    {"winding": [0], "label": "direct"},
    {"winding": [0], "via": [2.356194490192345, 3.346143983853512], "label": "lower-valley"},
    {"winding": [0], "via": [2.356194490192345, 7.649430303710764], "label": "upper-valley"}
  ]
})json"},
      {"half_plane_harmonic", R"json({
  "version": 1,
  "name": "half_plane_harmonic",
  "manifold": {"name": "euclidean", "params": {"dim": 2}},
  "barrier": {"name": "half_plane_y", "levels": {"a0": 0.4, "count": 5}},
  "endpoints": {"p": [0.0, 0.5], "q": [0.0, 1.5]},
  "solver": {"k_nodes": 600, "grad_tol": 2e-8, "eps_min": 1e-9, "seed": 9},
  "lagrangian": {
    "potential": {"name": "harmonic", "params": {"k": 1.0}},
    "energy": 2.0,
    "sample_box": {"lo": [-1.0, 0.05], "hi": [1.0, 1.6]},
    "rep_levels": [0.4, 0.2, 0.1, 0.05],
    "rep_samples": 24, "jhes_samples": 50, "jhes_dirs": 4
  }
})json"},
      {"half_plane_falling", R"json({
  "version": 1,
  "name": "half_plane_falling",
  "manifold": {"name": "euclidean", "params": {"dim": 2}},
  "barrier": {"name": "half_plane_y", "levels": {"a0": 0.4, "count": 5}},
  "endpoints": {"p": [0.0, 1.0], "q": [1.0, 1.0]},
  "solver": {"k_nodes": 100, "grad_tol": 2e-8, "eps_min": 1e-9, "seed": 10},
  "lagrangian": {
    "potential": {"name": "linear_y", "params": {"slope": -1.0}},
    "energy": 1.0,
    "sample_box": {"lo": [-1.0, 0.05], "hi": [2.0, 1.6]},
    "rep_levels": [0.4, 0.2, 0.1, 0.05],
    "rep_samples": 24, "jhes_samples": 30, "jhes_dirs": 4
  }
})json"},
      {"punctured_euclidean", R"json({
  "version": 1,
  "name": "punctured_euclidean",
  "manifold": {"name": "euclidean", "params": {"dim": 2}},
  "barrier": {"name": "radial_euclidean", "levels": {"a0": 0.5, "count": 6}},
  "endpoints": {"p": [-1.0, 0.05], "q": [1.0, 0.05]},
  "solver": {"k_nodes": 100, "seed": 11, "max_outer_stages": 30},
  "hypotheses": {
    "sampling_box": {"lo": [-2.0, -2.0], "hi": [2.0, 2.0]},
    "samples_per_level": 40, "seed": 11, "n_boxes": 3, "box_halfwidth": 0.8,
    "checks": ["t0", "t1", "t2"]
  }
})json"}};
  return defs;
}

}  // namespace geodom
