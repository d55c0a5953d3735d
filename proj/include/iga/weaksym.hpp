#pragma once

#include <Eigen/Sparse>

#include "iga/derham.hpp"
#include "iga/smooth.hpp"
#include "iga/solve.hpp"

namespace iga {

struct Material {
    double lambda = 2.0;
    double mu = 1.0;
};

// A sigma = (sigma - lambda/(2 lambda + 2 mu) tr(sigma) I) / (2 mu).
// Bounded as lambda -> infinity.
Mat2 apply_compliance(const Material& m, const Mat2& sigma);

// Manufactured elasticity data derived from a displacement closure over
// order-2 Taylor scalars.  Conventions: div sigma = f (no sign flip),
// multiplier = (d1 u2 - d2 u1) / 2.
struct ElasticBundle {
    Material mat;
    std::function<std::array<D2, 2>(const D2&, const D2&)> u;
    // Optional analytic divergence of u.  The lambda-weighted terms of
    // stress and body force use it instead of sums of u derivatives, whose
    // rounding is amplified by lambda when the leading part is solenoidal.
    std::function<D2(const D2&, const D2&)> div_u;

    Vec2 displacement(const Vec2& x) const;
    Mat2 grad_u(const Vec2& x) const;  // (i, j) = d_j u_i
    Mat2 stress(const Vec2& x) const;
    Vec2 body_force(const Vec2& x) const;
    double multiplier(const Vec2& x) const;
    Vec2 traction(const Vec2& x, const Vec2& n) const { return stress(x) * n; }
};

ElasticBundle make_bundle(const Material& m,
                          std::function<std::array<D2, 2>(const D2&, const D2&)> u);

struct WeakProblem {
    PatchCollection domain;
    ElasticBundle exact;
    // Edges with prescribed normal stress; every other boundary edge carries
    // displacement data.  Must not cover the whole boundary.
    std::vector<BoundaryEdge> traction_edges;
    // Prescribed traction t(x, n) on the traction edges; when unset the
    // exact bundle's normal stress is used instead.
    std::function<Vec2(const Vec2&, const Vec2&)> traction;
};

// Flux component indices with nonzero normal trace on an edge, ordered by
// the edge parameter.  Vertical edges expose the first component, horizontal
// the second.
std::vector<int> edge_flux_dofs(const DeRhamSpaces& sp, Edge e);
std::vector<int> edge_scalar_dofs(const TensorSpace& S, Edge e);

// DOF layout of the three-field system over a patch collection.  Per patch:
// two stress rows over flux1 + flux2, two displacement copies of the density
// space, one multiplier copy of the pressure space.  Interfaces identify
// normal-trace stress DOFs (with an orientation sign) and multiplier trace
// DOFs; displacement DOFs are never coupled.
struct WeakDofs {
    DeRhamSpaces sp;
    int n_patches = 1;
    int m2 = 0;  // flux1 + flux2 dims, one stress row on one patch
    int md = 0;
    int mq = 0;
    int n_stress = 0, n_disp = 0, n_mult = 0;
    std::vector<std::vector<int>> sgid;     // [patch][2*m2] local -> global
    std::vector<std::vector<double>> ssgn;  // orientation sign of the same
    std::vector<std::vector<int>> mgid;     // [patch][mq]

    int total() const { return n_stress + n_disp + n_mult; }
    int stress_gid(int patch, int row, int lv2) const { return sgid[patch][row * m2 + lv2]; }
    double stress_sign(int patch, int row, int lv2) const { return ssgn[patch][row * m2 + lv2]; }
    int disp_gid(int patch, int row, int j) const {
        return n_stress + (patch * 2 + row) * md + j;
    }
    int mult_gid(int patch, int j) const { return n_stress + n_disp + mgid[patch][j]; }
};
WeakDofs couple_weak_dofs(const PatchCollection& pc, int p, int r, int n);

// Full symmetric saddle system before traction elimination.  Constrained
// stress DOFs carry their prescribed coefficient in cval.
struct AssembledWeak {
    Eigen::SparseMatrix<double> K;
    Eigen::VectorXd rhs;
    std::vector<char> constrained;
    Eigen::VectorXd cval;
};
// quad_pts = 0 picks the default p+1 Gauss points per direction.
AssembledWeak assemble_weak(const WeakDofs& dofs, const WeakProblem& prob, int quad_pts = 0);

struct WeakSolution {
    WeakDofs dofs;
    PatchCollection domain;
    Eigen::VectorXd z;  // full coefficient vector, constrained DOFs included
    double residual = 0;
    int unknowns = 0;

    // Parametric solution slices per patch.
    struct PatchFields {
        TensorSpline s[2][2];  // [stress row][component]
        TensorSpline u[2];
        TensorSpline q;
    };
    std::vector<PatchFields> fields;

    Mat2 stress_at(int patch, const Vec2& zeta) const;  // rows of physical sigma
    Vec2 div_stress_at(int patch, const Vec2& zeta) const;
    Vec2 displacement_at(int patch, const Vec2& zeta) const;
    double multiplier_at(int patch, const Vec2& zeta) const;
};
WeakSolution solve_weak(const WeakProblem& prob, int p, int r, int n, int quad_pts = 0);

struct FieldErrors {
    double sigma_l2 = 0;    // stress, Frobenius L2
    double sigma_hdiv = 0;  // sqrt(sigma_l2^2 + div_l2^2)
    double div_l2 = 0;      // row-wise divergence
    double u_l2 = 0;
    double p_l2 = 0;        // multiplier scalar
};
FieldErrors weak_errors(const WeakSolution& sol, const ElasticBundle& exact, int quad_pts = 0);

// Largest |(sigma_a - sigma_b) n| over matched interface sample points.
double max_flux_jump(const WeakSolution& sol, int samples = 50);

}  // namespace iga
