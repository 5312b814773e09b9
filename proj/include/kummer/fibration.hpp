#pragma once

// Pencils of surfaces cutting elliptic fibrations on the resolved quartic,
// together with the fiberwise group steps (negation through a pair of
// sections, translation by a difference of sections) that realize the
// non-linear generators as permutations of the rational points.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kummer/surface.hpp"

namespace kummer {

// The ambient member V_t of a pencil, by the shape its generic member has.
// Plane and NodalQuadric members carry enough structure to decide fiber
// smoothness exactly; for the higher-degree pencils only the reducible
// fibers flagged by special curves are tracked.
enum class MemberShape { Plane, NodalQuadric, Quadric, Cubic, Quartic };

// How a special curve (a node curve E_nu or one of the sixteen lines) sits
// relative to a fibration.
enum class CurveRole { BaseComponent, Fibral, Section, Multisection };

struct AmbientDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateConfiguration : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnresolvedComponentMap : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ClaimFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FibrationInvariant : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Restriction of the pencil to one special curve.
struct CurveClass {
  CurveRole role = CurveRole::Fibral;
  P1 value{};   // BaseComponent / Fibral: the single value the curve maps to
  Mobius mob{}; // Section: parameter-to-value isomorphism (row action)
  BinForm<FpField> r1{}; // Multisection: reduced value pair (r1 : r2) on the
  BinForm<FpField> r2{}; //   parameter line of the curve (gcd stripped)
  int degree = 0;        // degree of the value map on the curve
};

// Marks that drive the double-cover model of a nodal-quadric pencil whose
// members are cones over a fixed vertex with two fixed rulings (the shapes
// used for the fiberwise negation generators).
struct DoubleCoverMarks {
  std::array<i64, 3> b0{};   // chart direction of the first fixed ruling
  std::array<i64, 3> b0p{};  // chart direction of the second fixed ruling
  std::array<i64, 3> bB{};   // chart direction toward marked node B
  std::array<i64, 3> bC{};   // chart direction toward marked node C
  int nodeB = -1;
  int nodeC = -1;
  int sec_plus1 = -1;   // section node on ruling 1, positive sheet
  int sec_minus1 = -1;  // section node on ruling 1, negative sheet
  int sec_plus2 = -1;   // section node on ruling 2, positive sheet
  int sec_minus2 = -1;  // section node on ruling 2, negative sheet
};

struct Fibration {
  std::string name;
  Form4<FpField> q1, q2;         // the pencil t_b*q1 - t_a*q2
  MemberShape shape = MemberShape::Plane;
  int vertex = -1;               // node id of the cone vertex, if any
  std::vector<int> fixed_lines;  // line ids contained in every member
  std::optional<DoubleCoverMarks> marks;
  bool full_flags = false;       // smoothness decidable for every fiber
};

// Joint classification of all 28 special curves for one fibration.
struct SpecialClassification {
  std::array<CurveClass, 12> node_curves;
  std::array<CurveClass, 16> lines;
};

// Fiberwise decomposition of the point table.
struct FiberTable {
  std::vector<P1> values;                // all of P^1(F_p), canonical order
  std::vector<int> value_of;             // per point id, index into values
  std::vector<std::vector<int>> members; // point ids per value
  std::vector<bool> singular;            // per value
  std::vector<i64> orders;               // class size per value
};

struct FiberPlan {
  SpecialClassification cls;
  FiberTable table;
};

// A fiberwise group step: negation through the node pair (N, N') or
// translation by the class S' - S of two sections.
enum class StepKind { Negate, Translate };

struct SectionRef {
  bool is_line = false;
  int id = -1;  // node id or line id
  friend bool operator==(const SectionRef&, const SectionRef&) = default;
};

struct GroupStep {
  StepKind kind = StepKind::Negate;
  int nodeN = -1, nodeNp = -1;  // Negate: the two marked section nodes
  SectionRef S{}, Sp{};         // Translate: subtracted / added section
};

struct ClaimReport {
  std::string fibration;
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::string> notes;
  bool all_passed() const {
    for (auto& [_, ok] : checks)
      if (!ok) return false;
    return true;
  }
};

// The named pencils of the catalog, in a fixed order.
std::vector<Fibration> fibration_catalog(const SurfaceModel& m);
const Fibration& find_fibration(const std::vector<Fibration>& cat,
                                const std::string& name);

SpecialClassification classify_special_curves(const SurfaceModel& m,
                                              const Fibration& fib);

// Value of the fibration at a resolved point.  The overload without a
// classification recomputes one (convenient, slow).
P1 fibration_value(const SurfaceModel& m, const Fibration& fib,
                   const SpecialClassification& cls, const ResolvedPoint& rp);
P1 fibration_value(const SurfaceModel& m, const Fibration& fib,
                   const ResolvedPoint& rp);

// Authoritative smoothness of the fiber over t.  For Plane and NodalQuadric
// shapes this combines the reducible-fiber flags with exact member tests;
// for the metadata shapes it reports only the flagged values.
bool is_singular_fiber(const SurfaceModel& m, const Fibration& fib,
                       const SpecialClassification& cls, const P1& t);

FiberTable fiber_partition(const SurfaceModel& m, const Fibration& fib,
                           const SpecialClassification& cls,
                           const PointTable& table);

FiberPlan make_fiber_plan(const SurfaceModel& m, const Fibration& fib,
                          const PointTable& table);

// Least common multiple of the point-class orders of the smooth fibers.
i64 lcm_fiber_orders(const SurfaceModel& m, const FiberTable& ft);

// Second quadric through the fiber over t, independent of the member V_t,
// if one exists; throws AmbientDegenerate when the fiber spans too much.
Form4<FpField> second_quadric(const SurfaceModel& m, const Fibration& fib,
                              const P1& t);

// Fiber point of a section over the value t.
ResolvedPoint section_point(const SurfaceModel& m, const Fibration& fib,
                            const SpecialClassification& cls,
                            const SectionRef& ref, const P1& t);

// Residual point of a plane section of the quartic: the plane meets the
// fiber curve of `fib` over t in the known divisor plus one more point.
// `known` lists resolved points with multiplicity (repeats allowed).
ResolvedPoint plane_residual(const SurfaceModel& m, const Fibration& fib,
                             const SpecialClassification& cls, const P1& t,
                             const Plane& plane,
                             const std::vector<ResolvedPoint>& known);

// Smooth-fiber group steps.  `table` supplies auxiliary fiber points for
// degenerate chord configurations; aux_salt perturbs that choice so callers
// can check independence.
ResolvedPoint negate_on_fiber(const SurfaceModel& m, const Fibration& fib,
                              const SpecialClassification& cls, int nodeN,
                              int nodeNp, const ResolvedPoint& P,
                              const PointTable& table,
                              const std::vector<int>& fiber_members,
                              int aux_salt = 0);
ResolvedPoint translate_on_fiber(const SurfaceModel& m, const Fibration& fib,
                                 const SpecialClassification& cls,
                                 const SectionRef& S, const SectionRef& Sp,
                                 const ResolvedPoint& P,
                                 const PointTable& table,
                                 const std::vector<int>& fiber_members,
                                 int aux_salt = 0);

// Group step on a singular fiber, by transporting the point along a
// transverse germ into nearby smooth fibers and resolving the limit.
ResolvedPoint singular_fiber_action(const SurfaceModel& m,
                                    const Fibration& fib,
                                    const SpecialClassification& cls,
                                    const GroupStep& step,
                                    const ResolvedPoint& P);

// One group step at a point, dispatching on fiber smoothness.
ResolvedPoint apply_fiber_step(const SurfaceModel& m, const Fibration& fib,
                               const FiberPlan& plan, const PointTable& table,
                               const GroupStep& step, const ResolvedPoint& P);

// Structural checks of the catalog entry against the enumerated surface.
// `word_perms` optionally supplies point permutations (by table index) of
// named words so base actions induced on the pencil parameter can be fitted.
ClaimReport verify_fibration_claims(
    const SurfaceModel& m, const Fibration& fib, const PointTable& table,
    const std::map<std::string, const std::vector<int>*>& word_perms = {});

}  // namespace kummer
