#pragma once
// The resolved quartic surface over F_p: a nodal quartic with twelve A_1
// points, its sixteen lines, and the set of F_p-points of the minimal
// resolution.  A point of the resolution is either a smooth point of the
// quartic or a tangent direction on the cone of one of the nodes.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "kummer/conic.hpp"
#include "kummer/forms.hpp"
#include "kummer/proj.hpp"

namespace kummer {

struct BadPrime : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadLambda : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ModelCorrupt : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateCone : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CountMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LiftFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OffSurface : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Node {
  P3 pos;
  int pivot;                   // index of the normalized coordinate
  std::array<int, 3> chart;    // ambient indices of the direction chart
  Conic<FpField> cone;         // tangent cone as a conic in the chart
  ConicParam<FpField> param;   // rational parametrization of that conic

  // direction as an ambient 4-vector with zero pivot coordinate
  std::array<i64, 4> dir_vec(const FpField& f, const P1& u) const {
    auto v3 = param.at(f, u.a, u.b);
    std::array<i64, 4> v{0, 0, 0, 0};
    for (int i = 0; i < 3; ++i) v[chart[i]] = v3[i];
    return v;
  }
  P1 dir_param(const FpField& f, const std::array<i64, 4>& v) const {
    Vec3<FpField> v3{v[chart[0]], v[chart[1]], v[chart[2]]};
    auto [s, t] = param.param_of(f, v3);
    return p1_make(s, t, f.p);
  }
};

struct ResolvedPoint {
  bool exceptional = false;
  P3 pt;         // smooth point, or the node position
  int node = -1; // node id when exceptional
  P1 dir{};      // direction parameter on the node cone

  friend bool operator==(const ResolvedPoint&, const ResolvedPoint&) = default;
};

struct SurfaceModel {
  i64 p = 0, lambda = 0;
  i64 a_p = 0;              // trace of Frobenius of y^2 = x(x-1)(x-lambda)
  i64 expected_count = 0;   // p^2 + 18p + 1 + a_p^2
  FpField f{3};
  Form4<FpField> K;
  std::array<Form4<FpField>, 4> dK;
  std::vector<Node> nodes;                  // twelve, fixed order
  std::vector<LineP3> lines;                // sixteen
  std::vector<std::vector<int>> line_nodes; // node ids on each line

  int node_index(const P3& q) const {
    for (size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].pos == q) return (int)i;
    return -1;
  }
  i64 k_eval(const std::array<i64, 4>& x) const {
    return form4_eval(f, K, x);
  }
  std::array<i64, 4> k_grad(const std::array<i64, 4>& x) const {
    return {form4_eval(f, dK[0], x), form4_eval(f, dK[1], x),
            form4_eval(f, dK[2], x), form4_eval(f, dK[3], x)};
  }
};

struct PointTable {
  std::vector<ResolvedPoint> pts;
  std::unordered_map<u64, int> index;
  i64 smooth_count = 0;

  static u64 key(const ResolvedPoint& rp) {
    // residues stay below 64, direction indices below 64+2
    u64 k = rp.exceptional ? 1 : 0;
    if (rp.exceptional) {
      k = (k << 8) | (u64)(rp.node + 1);
      k = (k << 8) | (u64)p1_index(rp.dir);
      k <<= 32;
    } else {
      for (int i = 0; i < 4; ++i) k = (k << 8) | (u64)rp.pt.x[i];
      k <<= 16;
    }
    return k;
  }
  int at(const ResolvedPoint& rp) const {
    auto it = index.find(key(rp));
    if (it == index.end())
      throw ModelCorrupt("resolved point missing from the table");
    return it->second;
  }
  i64 size() const { return (i64)pts.size(); }
};

// Curve germ on the quartic: coordinates as truncated power series in e.
struct Germ {
  std::array<LSer, 4> x;
  i64 prec = 0;
};

SurfaceModel build_model(i64 p, i64 lambda);
i64 trace_of_frobenius(i64 p, i64 lambda);
PointTable enumerate_points(const SurfaceModel& m);

// Resolved points of a line of the model, as table indices in the canonical
// parameter order of the line.
std::vector<int> line_points(const SurfaceModel& m, const PointTable& t,
                             int line_id);

// Germ through a resolved point.  `variant` selects among deterministic
// transverse choices (0,1,2) so callers can cross-check independence.
Germ germ_at(const SurfaceModel& m, const ResolvedPoint& rp, int variant,
             i64 prec);

// Direction of a curve germ arriving at a node: first non-radial coefficient
// of the series, reduced to the node chart.
std::array<i64, 4> germ_direction_at_node(const SurfaceModel& m,
                                          const Germ& g, i64 lead_order,
                                          const Node& node);

// Image of a germ under a polynomial map given by four forms; strips the
// common power of e and resolves the landing point (smooth or exceptional).
ResolvedPoint push_germ(const SurfaceModel& m,
                        const std::array<Form4<FpField>, 4>& forms,
                        const Germ& g);

// Resolve the landing point of a coordinate arc: strip the common power of
// e, read the limit, and compute the arrival direction when the limit is a
// node.  The arc must stay on the quartic.
ResolvedPoint resolve_germ(const SurfaceModel& m, const std::array<LSer, 4>& x,
                           i64 prec);

// CSV export of the point table (exact residues).
std::string table_csv(const SurfaceModel& m, const PointTable& t);

}  // namespace kummer
