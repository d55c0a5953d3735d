#pragma once

#include <functional>
#include <memory>

#include "iga/derham.hpp"
#include "iga/solve.hpp"
#include "iga/weaksym.hpp"

namespace iga {

// Fields handed to the transforms are functions of the parametric
// coordinate.  A physical field enters pre-composed with the geometry map
// and inverse transforms hand back the physical value at F(zeta), so no map
// inversion is ever needed here.
using SymField = std::function<Mat2(const Vec2&)>;
using VecField = std::function<Vec2(const Vec2&)>;

// Shared state of the symmetric-stress transforms: geometry plus the policy
// for line integrals along a parametric direction.  Integrals run over the
// knot spans of `spans` intersected with [0, t], q Gauss points per
// (partial) span.
struct TransformContext {
    std::shared_ptr<GeometryMap> F;
    KnotVector spans;
    int q = 6;
};
TransformContext make_context(std::shared_ptr<GeometryMap> F, int n_spans = 8, int q = 6);

// Rotated parametric Hessian of map component n (the matrix multiplying the
// d1 line integrals of the forward stress transform).
Mat2 airy_forward(const GeometryMap& F, int n, const Vec2& z);
// Rotated physical Hessian of component k of the inverse map, composed with
// F so it is evaluated at parametric points.
Mat2 airy_inverse(const GeometryMap& F, int k, const Vec2& z);

// Boundary-anchored symmetric stress transform (anchor edge zeta1 = 0) and
// its inverse.  Both keep symmetric matrices symmetric and the pair
// composes to the identity.
Mat2 y2g1_apply(const TransformContext& ctx, const SymField& S, const Vec2& z);
Mat2 y2g1_inverse(const TransformContext& ctx, const SymField& St, const Vec2& z);

// Companion displacement transform and its inverse.
Vec2 y3_apply(const TransformContext& ctx, const VecField& v, const Vec2& z);
Vec2 y3_inverse(const TransformContext& ctx, const VecField& vt, const Vec2& z);

// Diagonal boundary-integral corrections.  Subtracting y2_correction from
// y2g1_apply makes divergence compatibility hold without conditions on the
// anchor-edge traction; y2_inverse_correction is the matching diagonal
// subtracted from the argument of y2g1_inverse.
Mat2 y2_correction(const TransformContext& ctx, const SymField& S, const Vec2& z);
Mat2 y2_inverse_correction(const TransformContext& ctx, const SymField& St, const Vec2& z);

// Corrected stress transform: parametric div of y2_apply(S) equals
// y3_apply(physical div of S) for any smooth symmetric S.
Mat2 y2_apply(const TransformContext& ctx, const SymField& S, const Vec2& z);
Mat2 y2_inverse(const TransformContext& ctx, const SymField& St, const Vec2& z);

// Symmetric stress block (components 11, 12 = 21, 22 with one shared
// coefficient set for the off-diagonal) and the displacement components.
// Needs p > r >= 1 so all component spaces are at least continuous.
struct StrongSpacePair {
    int p = 2, r = 1, n = 1;
    TensorSpace s11, s12, s22;
    TensorSpace d1, d2;

    static StrongSpacePair make(int p, int r, int n);
    int n_stress() const { return s11.dim() + s12.dim() + s22.dim(); }
    int n_disp() const { return d1.dim() + d2.dim(); }
    // Stress basis indices are offset in block order 11, 12, 22.
    int off12() const { return s11.dim(); }
    int off22() const { return s11.dim() + s12.dim(); }
};

struct SymSpline {
    TensorSpline c11, c12, c22;
};

// tau with parametric divergence exactly v and zero normal trace on the
// anchor edge: tau11 = d1-antiderivative of v1, tau22 = d2-antiderivative
// of v2, tau12 = 0.  Coefficient-level, no quadrature.
SymSpline divergence_preimage(const StrongSpacePair& sp, const TensorSpline& v1,
                              const TensorSpline& v2);

// Physical value and physical divergence of one transformed stress basis
// function (index over [0, n_stress) in block order).  The divergence comes
// from the displacement-transform inverse of the parametric divergence, so
// it shares no differentiation with the value.
struct StressEval {
    Mat2 sigma = Mat2::Zero();
    Vec2 div = Vec2::Zero();
};
StressEval strong_basis_eval(const StrongSpacePair& sp, const TransformContext& ctx,
                             int basis, const Vec2& z);
// Physical value of one transformed displacement basis over [0, n_disp).
Vec2 strong_disp_basis_eval(const StrongSpacePair& sp, const TransformContext& ctx,
                            int basis, const Vec2& z);

// Two-field saddle system [[A, B^T], [B, 0]] over the transformed bases,
// dense because the anchored transforms couple each basis with entire
// parameter lines.  With drop_anchor_traces the anchor-edge normal-trace
// stress coefficients are removed (homogeneous normal stress on the image
// of zeta1 = 0, displacement data on the remaining three edges).
struct BlockSaddleSystem {
    Eigen::MatrixXd K;
    Eigen::VectorXd rhs;
    int n_stress = 0, n_disp = 0;       // kept counts
    std::vector<int> stress_keep;       // kept row -> stress basis index
};
BlockSaddleSystem assemble_strong_symmetry(const StrongSpacePair& sp, const TransformContext& ctx,
                                           const Material& mat,
                                           const std::function<Vec2(const Vec2&)>& u_dirichlet,
                                           const std::function<Vec2(const Vec2&)>& body_force,
                                           bool drop_anchor_traces = false, int quad_pts = 0);

struct StrongProblem {
    std::shared_ptr<GeometryMap> F;
    ElasticBundle exact;
    // Experimental: homogeneous normal stress on the image of zeta1 = 0
    // imposed strongly through the space; requires exact traction zero there.
    bool gamma1_traction = false;
};

struct StrongSolution {
    StrongSpacePair sp;
    TransformContext ctx;
    Eigen::VectorXd z;      // full stress+displacement coefficients, dropped = 0
    SymSpline S;            // parametric stress components
    TensorSpline v1, v2;    // parametric displacement components
    double residual = 0;
    int unknowns = 0;

    // Cached d1 antiderivatives and anchor-edge traces used by the
    // evaluators; has_anchor skips the correction integrals when both
    // traces vanish identically.
    TensorSpline ia12, ia22, iav1, iav2;
    Spline1D t11, t12;
    bool has_anchor = false;

    Mat2 stress_at(const Vec2& zeta) const;
    Vec2 div_stress_at(const Vec2& zeta) const;
    Vec2 displacement_at(const Vec2& zeta) const;
};
StrongSolution solve_strong(const StrongProblem& prob, int p, int r, int n, int quad_pts = 0);

// Error norms against the exact bundle; p_l2 stays 0 (no multiplier field).
FieldErrors strong_errors(const StrongSolution& sol, const ElasticBundle& exact,
                          int quad_pts = 0);

// Largest |sigma12 - sigma21| of the discrete stress over the error
// quadrature grid.
double max_asymmetry(const StrongSolution& sol, int quad_pts = 0);

}  // namespace iga
