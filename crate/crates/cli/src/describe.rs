//! Contract text for each pipeline op, printed by `conelab describe`.

pub const OPS: [(&str, &str); 9] = [
    (
        "block_family",
        "block_family: distances from the base vertex to w_n = (block)^n in a polygon's development and in
the Bass-Serre tree of one edge restriction.
  polygon      named polygon (nonproper-triangle, distorted-edge-triangle), a path, or inline polygon JSON
  family       optional {base_cell, target_cell, block, restrict_edge, generators, n_max};
               defaults to the nonproper triangle family (block \"d b\", edge e3, n_max 6)
outputs: NN-block_family.csv (n, block_word, development_distance, certified, tree_distance_blocks,
         letter_word, tree_distance_letters); NN-block_family.json (report, n_plus_one_convention)
errors: unsupported polygon (2), ball budget (3)",
    ),
    (
        "distortion_profile",
        "distortion_profile: fiber length against ambient word length of phi^k(x) in Z x| F_n.
  group        semidirect group scenario (path or inline)
  generator    fiber generator, default x
  k_max        default 8
  search_k     exhaustive ambient search up to this k, default 4; witness bound t^k x t^-k above
outputs: NN-distortion.csv (k, fiber_length, ambient_length, ambient_exact, witness_length, ratio,
         conjugation_certificate); NN-distortion.json (rows, verdicts)
errors: unknown generator (2), search budget or phi inverse radius (3)",
    ),
    (
        "tree_cone_family",
        "tree_cone_family: exhaustive four-point delta of random trees with coned balls.
  instances       default 20; instance i uses seed + i
  min_size        default 50
  max_size        default 400
  cones           coned balls per tree, default 5
  max_set_radius  ball radii drawn from 1..=max_set_radius, default 3
requires a seed.
outputs: NN-tree_cone_delta.csv (instance, seed, vertices, extended_vertices, delta, exact, quadruples);
         NN-tree_cone_delta.json (delta per instance, max_delta)
errors: missing seed (2), delta budget (3)",
    ),
    (
        "cone_qc_family",
        "cone_qc_family: quasiconvexity constant of a random tree segment in the coned tree.
  parameters as tree_cone_family; the segment endpoints come from the same seeded stream.
requires a seed.
outputs: NN-cone_qc.csv (instance, seed, vertices, segment_start, segment_end, segment_length,
         qc_constant); NN-cone_qc.json (constants, max_qc_constant)
errors: missing seed (2), all-pairs budget (3)",
    ),
    (
        "fellow_travel_cycles",
        "fellow_travel_cycles: Hausdorff distance in the coned graph between base and extended geodesics
on C_2n with the antipodal pair {0, n} coned, maximized over all vertex pairs.
  n_min        default 6
  n_max        default 30
outputs: NN-fellow_travel.csv (n, vertices, max_hausdorff, worst_u, worst_v); NN-fellow_travel.json
errors: bad range (2)",
    ),
    (
        "mitra_profile",
        "mitra_profile: M(N) = min distance from f(y0) to the target interval of f(u), f(v), over source
pairs whose interval avoids the open ball B(y0, N). Intervals are full geodesic unions.
  polygon         polygon whose edge restriction gives the source tree
  embedding       identity | subtree | tree_into_development
  restrict_edge   default e3
  generators      ball generators by name, default all generators
  basepoint_cell  vertex cell of y0, default v1
  radius          Cayley ball radius, default 6 (subtree source uses radius / 2)
  n_max           default radius - 1
Pairs with a distance at or beyond a non-exact ball's threshold radius - 1 are excluded.
outputs: NN-mitra_<embedding>_r<radius>.csv (N, M; empty M when undefined);
         NN-mitra_<embedding>_r<radius>.json (profile, cut, equals_n, at_least_n, max_from_3)
errors: unmatched coset (2), ball budget (3)",
    ),
    (
        "delta_four_point",
        "delta_four_point: four-point hyperbolicity constant of a graph.
  graph        path to graph JSON or inline {vertices, edges}
  mode         exhaustive (default) | sampled | auto
  budget       exhaustive vertex cap, default 300
  count        sampled quadruples, default 200000
sampled and auto modes require a seed and report a lower bound.
outputs: NN-delta.csv (vertices, delta, exact, quadruples); NN-delta.json (mode, report with witness)
errors: invalid graph (2), budget (3)",
    ),
    (
        "cayley_ball",
        "cayley_ball: word-metric ball around the identity.
  group        group scenario (path or inline)
  generators   default all generators
  radius       default 3
outputs: NN-cayley_graph.json (graph); NN-cayley_registry.csv (vertex, normal_form)
errors: unknown generator (2), budget (3)",
    ),
    (
        "development_ball",
        "development_ball: cosets of the vertex groups reached from a Cayley ball, joined along edge cosets.
  polygon        polygon (named, path or inline)
  restrict_edge  optional: develop the graph of groups of one edge instead
  generators     default all generators
  radius         default 3
outputs: NN-development_skeleton.json (graph); NN-development_registry.csv (vertex, face_label,
         representative)
errors: unsupported local groups (2), budget (3)",
    ),
];

pub fn describe(op: &str) -> Option<&'static str> {
    OPS.iter().find(|(name, _)| *name == op).map(|(_, text)| *text)
}
