#include "iga/strongsym.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace iga {

namespace {

// Geometry bundle of the stress transforms at one parametric point.  jinv
// is the inverse of adj(J) (not of J), djinv1 / dadj1 are its and adj(J)'s
// first parametric partials, airy_inv the rotated inverse-map Hessians.
struct GeomPoint {
    Vec2 x = Vec2::Zero();
    Mat2 J = Mat2::Zero();
    Mat2 adj = Mat2::Zero();
    Mat2 dadj1 = Mat2::Zero();
    double det = 0;
    Mat2 jinv = Mat2::Zero();
    Mat2 djinv1 = Mat2::Zero();
    Mat2 airy_inv[2] = {Mat2::Zero(), Mat2::Zero()};
};

GeomPoint geom_point(const GeometryMap& F, const Vec2& z) {
    GeomPoint gp;
    GeomData g = geom_at(F, z);
    gp.x = g.x;
    gp.J = g.J;
    gp.adj = g.adj;
    gp.dadj1 = g.dadj[0];
    gp.det = g.det;
    assert(gp.det > 0);
    gp.jinv = g.J / g.det;
    double ddet1 = (g.adj * g.dJ[0]).trace();
    gp.djinv1 = g.dJ[0] / g.det - g.J * (ddet1 / (g.det * g.det));
    Mat2 Ji = g.J.inverse();
    Mat2 G0 = Ji * g.dJ[0] * Ji;
    Mat2 G1 = Ji * g.dJ[1] * Ji;
    for (int k = 0; k < 2; ++k) {
        Mat2 H;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                H(i, j) = -(G0(k, j) * Ji(0, i) + G1(k, j) * Ji(1, i));
        gp.airy_inv[k] << H(1, 1), -H(0, 1), -H(1, 0), H(0, 0);
    }
    return gp;
}

}  // namespace

TransformContext make_context(std::shared_ptr<GeometryMap> F, int n_spans, int q) {
    TransformContext ctx;
    ctx.F = std::move(F);
    ctx.spans = KnotVector::uniform(1, n_spans, 0);
    ctx.q = q;
    return ctx;
}

Mat2 airy_forward(const GeometryMap& F, int n, const Vec2& z) {
    auto dJ = F.jacobian_partials(z);
    Mat2 H;  // parametric Hessian of component n
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) H(i, j) = dJ[j](n, i);
    Mat2 A;
    A << H(1, 1), -H(0, 1), -H(1, 0), H(0, 0);
    return A;
}

Mat2 airy_inverse(const GeometryMap& F, int k, const Vec2& z) {
    return geom_point(F, z).airy_inv[k];
}

Mat2 y2g1_apply(const TransformContext& ctx, const SymField& S, const Vec2& z) {
    const GeometryMap& F = *ctx.F;
    GeomPoint g = geom_point(F, z);
    Mat2 out = g.adj * S(z) * g.adj.transpose();
    for (int n = 0; n < 2; ++n) {
        double jn = integrate_to(ctx.spans, ctx.q, z[0], [&](double tau) {
            Vec2 zt(tau, z[1]);
            Mat2 adj_t = adjugate(F.jacobian(zt));
            Mat2 St = S(zt);
            double s = adj_t(1, 0) * St(1 - n, 0) + adj_t(1, 1) * St(1 - n, 1);
            return n == 0 ? s : -s;
        });
        out += airy_forward(F, n, z) * jn;
    }
    return out;
}

Mat2 y2g1_inverse(const TransformContext& ctx, const SymField& St, const Vec2& z) {
    GeomPoint g = geom_point(*ctx.F, z);
    Mat2 out = g.jinv * St(z) * g.jinv.transpose();
    for (int k = 0; k < 2; ++k) {
        double ik = integrate_to(ctx.spans, ctx.q, z[0], [&](double tau) {
            Mat2 v = St(Vec2(tau, z[1]));
            return k == 0 ? v(1, 1) : -v(1, 0);
        });
        out += g.airy_inv[k] * ik;
    }
    return out;
}

Vec2 y3_apply(const TransformContext& ctx, const VecField& v, const Vec2& z) {
    const GeometryMap& F = *ctx.F;
    GeomPoint g = geom_point(F, z);
    Vec2 iv;
    for (int m = 0; m < 2; ++m)
        iv[m] = integrate_to(ctx.spans, ctx.q, z[0], [&](double tau) {
            Vec2 zt(tau, z[1]);
            return F.jacobian(zt).determinant() * v(zt)[m];
        });
    return g.det * (g.adj * v(z)) + g.dadj1 * iv;
}

Vec2 y3_inverse(const TransformContext& ctx, const VecField& vt, const Vec2& z) {
    GeomPoint g = geom_point(*ctx.F, z);
    Vec2 iv;
    for (int m = 0; m < 2; ++m)
        iv[m] = integrate_to(ctx.spans, ctx.q, z[0],
                             [&](double tau) { return vt(Vec2(tau, z[1]))[m]; });
    return (g.jinv * vt(z) + g.djinv1 * iv) / g.det;
}

Mat2 y2_correction(const TransformContext& ctx, const SymField& S, const Vec2& z) {
    const GeometryMap& F = *ctx.F;
    Vec2 z0(0.0, z[1]);
    Mat2 adj0 = adjugate(F.jacobian(z0));
    Mat2 S0 = S(z0);
    // row couplings of the anchor-edge values, fixed in the d1 variable
    double c0 = adj0(0, 0) * S0(0, 0) + adj0(0, 1) * S0(0, 1);
    double c1 = adj0(0, 0) * S0(1, 0) + adj0(0, 1) * S0(1, 1);
    Mat2 adjz = adjugate(F.jacobian(z));
    // the d1 integral of the 11 entry telescopes to an adjugate difference
    double d1 = (adjz(0, 0) - adj0(0, 0)) * c0 + (adjz(0, 1) - adj0(0, 1)) * c1;
    double d2 = integrate_to(ctx.spans, ctx.q, z[1], [&](double tau) {
        Vec2 zt(z[0], tau), zb(0.0, tau);
        Mat2 k = adjugate(F.jacobian_partials(zt)[0]);
        Mat2 adjb = adjugate(F.jacobian(zb));
        Mat2 Sb = S(zb);
        double s = 0;
        for (int i = 0; i < 2; ++i)
            s += k(1, i) * (adjb(0, 0) * Sb(i, 0) + adjb(0, 1) * Sb(i, 1));
        return s;
    });
    Mat2 D = Mat2::Zero();
    D(0, 0) = d1;
    D(1, 1) = d2;
    return D;
}

Mat2 y2_inverse_correction(const TransformContext& ctx, const SymField& St, const Vec2& z) {
    const GeometryMap& F = *ctx.F;
    Vec2 z0(0.0, z[1]);
    Mat2 J0 = F.jacobian(z0);
    Vec2 gv = (J0 / J0.determinant()) * St(z0).col(0);
    Mat2 adjz = adjugate(F.jacobian(z));
    Mat2 adj0 = adjugate(J0);
    double d11 = -((adjz(0, 0) - adj0(0, 0)) * gv[0] + (adjz(0, 1) - adj0(0, 1)) * gv[1]);
    double d22 = -integrate_to(ctx.spans, ctx.q, z[1], [&](double tau) {
        Vec2 zt(z[0], tau), zb(0.0, tau);
        Mat2 k = adjugate(F.jacobian_partials(zt)[0]);
        Mat2 Jb = F.jacobian(zb);
        Vec2 gb = (Jb / Jb.determinant()) * St(zb).col(0);
        return k(1, 0) * gb[0] + k(1, 1) * gb[1];
    });
    Mat2 D = Mat2::Zero();
    D(0, 0) = d11;
    D(1, 1) = d22;
    return D;
}

Mat2 y2_apply(const TransformContext& ctx, const SymField& S, const Vec2& z) {
    return y2g1_apply(ctx, S, z) - y2_correction(ctx, S, z);
}

Mat2 y2_inverse(const TransformContext& ctx, const SymField& St, const Vec2& z) {
    SymField mod = [&](const Vec2& w) -> Mat2 {
        return St(w) - y2_inverse_correction(ctx, St, w);
    };
    return y2g1_inverse(ctx, mod, z);
}

StrongSpacePair StrongSpacePair::make(int p, int r, int n) {
    if (!(p > r && r >= 1)) throw std::invalid_argument("strong spaces need p > r >= 1");
    StrongSpacePair sp;
    sp.p = p;
    sp.r = r;
    sp.n = n;
    KnotVector ka = KnotVector::uniform(p + 1, n, r + 1);
    KnotVector kb = KnotVector::uniform(p, n, r);
    KnotVector kc = KnotVector::uniform(p - 1, n, r - 1);
    sp.s11 = {ka, kc};
    sp.s12 = {kb, kb};
    sp.s22 = {kc, ka};
    sp.d1 = {kb, kc};
    sp.d2 = {kc, kb};
    return sp;
}

SymSpline divergence_preimage(const StrongSpacePair& sp, const TensorSpline& v1,
                              const TensorSpline& v2) {
    assert(v1.space.dim() == sp.d1.dim() && v2.space.dim() == sp.d2.dim());
    SymSpline out;
    out.c11 = tensor_antiderive1(v1);
    out.c22 = tensor_antiderive2(v2);
    out.c12 = TensorSpline{sp.s12, Eigen::VectorXd::Zero(sp.s12.dim())};
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// Per-basis evaluation machinery shared by the assembler, the boundary
// term, and the public single-basis evaluators.

struct ActiveStress {
    int kind = 0;  // 0: component 11, 1: 12, 2: 22
    int a = 0, b = 0, gid = 0;
};
struct ActiveDisp {
    int comp = 0;
    int a = 0, b = 0, gid = 0;
};

// First active 1D basis index of each component space at the point.
struct Firsts {
    int a1 = 0, b1 = 0, c1 = 0;  // direction 1: degrees p+1, p, p-1
    int c2 = 0, b2 = 0, a2 = 0;  // direction 2
};

// Bases with a nonzero value or nonzero d1 history at the point.  The
// anchor families (a = 0 of the 11 and 12 blocks) and the d1
// antiderivative tails reach beyond the local support window.
void list_actives(const StrongSpacePair& sp, const Firsts& f, bool drop_anchor,
                  std::vector<ActiveStress>& s, std::vector<ActiveDisp>& d) {
    s.clear();
    d.clear();
    int p = sp.p;
    if (!drop_anchor)
        for (int b = 0; b <= f.c2 + p - 1; ++b) s.push_back({0, 0, b, sp.s11.index(0, b)});
    for (int a = std::max(1, f.a1); a <= f.a1 + p + 1; ++a)
        for (int b = f.c2; b <= f.c2 + p - 1; ++b) s.push_back({0, a, b, sp.s11.index(a, b)});
    if (!drop_anchor)
        for (int b = 0; b <= f.b2 + p; ++b)
            s.push_back({1, 0, b, sp.off12() + sp.s12.index(0, b)});
    for (int a = 1; a <= f.b1 + p; ++a)
        for (int b = f.b2; b <= f.b2 + p; ++b)
            s.push_back({1, a, b, sp.off12() + sp.s12.index(a, b)});
    for (int a = 0; a <= f.c1 + p - 1; ++a)
        for (int b = f.a2; b <= f.a2 + p + 1; ++b)
            s.push_back({2, a, b, sp.off22() + sp.s22.index(a, b)});
    for (int a = 0; a <= f.b1 + p; ++a)
        for (int b = f.c2; b <= f.c2 + p - 1; ++b) d.push_back({0, a, b, sp.d1.index(a, b)});
    for (int a = 0; a <= f.c1 + p - 1; ++a)
        for (int b = f.b2; b <= f.b2 + p; ++b)
            d.push_back({1, a, b, sp.d1.dim() + sp.d2.index(a, b)});
}

// Dense per-point 1D data (full-length arrays indexed by basis) plus the
// anchor-edge correction tails and the geometry.  e11 / e12 are the closed
// form d1-telescoped correction kernels for the two anchor families.
struct PointData {
    const double *va1 = nullptr, *da1 = nullptr;
    const double *vb1 = nullptr, *db1 = nullptr, *ib1 = nullptr;
    const double *vc1 = nullptr, *dc1 = nullptr, *ic1 = nullptr;
    const double *vc2 = nullptr, *dc2 = nullptr;
    const double *vb2 = nullptr, *db2 = nullptr;
    const double *va2 = nullptr, *da2 = nullptr;
    const double *d22a = nullptr, *id22a = nullptr;  // 11-anchor tails per Kc basis
    const double *d22b = nullptr, *id22b = nullptr;  // 12-anchor tails per Kb basis
    const GeomPoint* g = nullptr;
    double e11 = 0, e12 = 0;
};

// Physical stress component triples (11, 12, 22) and physical divergence of
// the listed stress bases.  P is 3 x n, W is 2 x n.
void stress_columns(const std::vector<ActiveStress>& act, const PointData& pd,
                    Eigen::MatrixXd& P, Eigen::MatrixXd& W) {
    const GeomPoint& g = *pd.g;
    Vec2 c0 = g.jinv.col(0), c1 = g.jinv.col(1);
    double O11[3] = {c0[0] * c0[0], c0[0] * c0[1], c0[1] * c0[1]};
    double O12[3] = {2 * c0[0] * c1[0], c0[0] * c1[1] + c1[0] * c0[1], 2 * c0[1] * c1[1]};
    double O22[3] = {c1[0] * c1[0], c1[0] * c1[1], c1[1] * c1[1]};
    double A1[3] = {g.airy_inv[0](0, 0), 0.5 * (g.airy_inv[0](0, 1) + g.airy_inv[0](1, 0)),
                    g.airy_inv[0](1, 1)};
    double A2[3] = {g.airy_inv[1](0, 0), 0.5 * (g.airy_inv[1](0, 1) + g.airy_inv[1](1, 0)),
                    g.airy_inv[1](1, 1)};
    Vec2 jn0 = g.jinv.col(0) / g.det, jn1 = g.jinv.col(1) / g.det;
    Vec2 dj0 = g.djinv1.col(0) / g.det, dj1 = g.djinv1.col(1) / g.det;
    for (size_t c = 0; c < act.size(); ++c) {
        const ActiveStress& A = act[c];
        double p0 = 0, p1 = 0, p2 = 0;
        Vec2 w = Vec2::Zero();
        switch (A.kind) {
            case 0: {
                double v = pd.va1[A.a] * pd.vc2[A.b];
                p0 = v * O11[0];
                p1 = v * O11[1];
                p2 = v * O11[2];
                if (A.a == 0) {
                    double D11 = -pd.e11 * pd.vc2[A.b];
                    double D22 = pd.d22a[A.b];
                    double ID22 = pd.id22a[A.b];
                    p0 -= D11 * O11[0] + D22 * O22[0] + ID22 * A1[0];
                    p1 -= D11 * O11[1] + D22 * O22[1] + ID22 * A1[1];
                    p2 -= D11 * O11[2] + D22 * O22[2] + ID22 * A1[2];
                }
                double dv = pd.da1[A.a] * pd.vc2[A.b];
                double iv = v - (A.a == 0 ? pd.vc2[A.b] : 0.0);
                w = jn0 * dv + dj0 * iv;
                break;
            }
            case 1: {
                double v = pd.vb1[A.a] * pd.vb2[A.b];
                double ib = pd.ib1[A.a] * pd.vb2[A.b];
                p0 = v * O12[0] - ib * A2[0];
                p1 = v * O12[1] - ib * A2[1];
                p2 = v * O12[2] - ib * A2[2];
                if (A.a == 0) {
                    double D11 = -pd.e12 * pd.vb2[A.b];
                    double D22 = pd.d22b[A.b];
                    double ID22 = pd.id22b[A.b];
                    p0 -= D11 * O11[0] + D22 * O22[0] + ID22 * A1[0];
                    p1 -= D11 * O11[1] + D22 * O22[1] + ID22 * A1[1];
                    p2 -= D11 * O11[2] + D22 * O22[2] + ID22 * A1[2];
                }
                double d1v = pd.vb1[A.a] * pd.db2[A.b];
                double d2v = pd.db1[A.a] * pd.vb2[A.b];
                double i1v = pd.ib1[A.a] * pd.db2[A.b];
                double i2v = (pd.vb1[A.a] - (A.a == 0 ? 1.0 : 0.0)) * pd.vb2[A.b];
                w = jn0 * d1v + jn1 * d2v + dj0 * i1v + dj1 * i2v;
                break;
            }
            default: {
                double v = pd.vc1[A.a] * pd.va2[A.b];
                double ib = pd.ic1[A.a] * pd.va2[A.b];
                p0 = v * O22[0] + ib * A1[0];
                p1 = v * O22[1] + ib * A1[1];
                p2 = v * O22[2] + ib * A1[2];
                double d2v = pd.vc1[A.a] * pd.da2[A.b];
                double i2v = pd.ic1[A.a] * pd.da2[A.b];
                w = jn1 * d2v + dj1 * i2v;
                break;
            }
        }
        P(0, c) = p0;
        P(1, c) = p1;
        P(2, c) = p2;
        W(0, c) = w[0];
        W(1, c) = w[1];
    }
}

// Physical values of the listed displacement bases; U is 2 x n.
void disp_columns(const std::vector<ActiveDisp>& act, const PointData& pd, Eigen::MatrixXd& U) {
    const GeomPoint& g = *pd.g;
    Vec2 jn0 = g.jinv.col(0) / g.det, jn1 = g.jinv.col(1) / g.det;
    Vec2 dj0 = g.djinv1.col(0) / g.det, dj1 = g.djinv1.col(1) / g.det;
    for (size_t c = 0; c < act.size(); ++c) {
        const ActiveDisp& A = act[c];
        Vec2 u;
        if (A.comp == 0) {
            double v = pd.vb1[A.a] * pd.vc2[A.b];
            double iv = pd.ib1[A.a] * pd.vc2[A.b];
            u = jn0 * v + dj0 * iv;
        } else {
            double v = pd.vc1[A.a] * pd.vb2[A.b];
            double iv = pd.ic1[A.a] * pd.vb2[A.b];
            u = jn1 * v + dj1 * iv;
        }
        U(0, c) = u[0];
        U(1, c) = u[1];
    }
}

// Dense single-point 1D values: V and D are full-length (zero off the
// window), IB is the running-integral value of every basis of kv.
void dense_point_values(const KnotVector& kv, double z, Eigen::VectorXd& V, Eigen::VectorXd& D) {
    V.setZero(kv.n());
    D.setZero(kv.n());
    Eigen::MatrixXd B;
    kv.eval_basis(z, 1, B);
    int fa = kv.first_active(z);
    for (int a = 0; a <= kv.p; ++a) {
        V[fa + a] = B(a, 0);
        D[fa + a] = B(a, 1);
    }
}

void dense_point_ib(const KnotVector& kv, double z, Eigen::VectorXd& IB) {
    KnotVector rk = raised_space(kv);
    Eigen::MatrixXd B;
    rk.eval_basis(z, 0, B);
    int fr = rk.first_active(z);
    IB.setZero(kv.n());
    double cum = 0;
    for (int a = 0; a < kv.n(); ++a) {
        if (a >= fr && a <= fr + rk.p) cum += B(a - fr, 0);
        double rest = a < fr ? 1.0 : 1.0 - cum;
        if (a > fr + rk.p) rest = 0.0;
        IB[a] = basis_integral(kv, a) * rest;
    }
}

// Anchor-edge correction tails at one point by composite quadrature along
// direction 2.  Outputs are indexed by the dir-2 basis of each family.
void anchor_corrections(const StrongSpacePair& sp, const GeometryMap& F, int q, const Vec2& z,
                        Eigen::VectorXd& d22a, Eigen::VectorXd& id22a, Eigen::VectorXd& d22b,
                        Eigen::VectorXd& id22b) {
    const KnotVector& kc = sp.s11.kv2;
    const KnotVector& kb = sp.s12.kv2;
    d22a.setZero(kc.n());
    id22a.setZero(kc.n());
    d22b.setZero(kb.n());
    id22b.setZero(kb.n());
    const GaussRule& rule = gauss_rule(q);
    Eigen::MatrixXd Bc, Bb;
    auto breaks = kc.breakpoints();
    for (size_t s = 0; s + 1 < breaks.size(); ++s) {
        double lo = breaks[s];
        if (lo >= z[1]) break;
        double hi = std::min(breaks[s + 1], z[1]);
        double len = hi - lo;
        if (len <= 0) continue;
        for (int m = 0; m < q; ++m) {
            double tau = lo + len * rule.x[m];
            double w = len * rule.w[m];
            GeomData gb = geom_at(F, Vec2(0.0, tau));
            GeomData gz = geom_at(F, Vec2(z[0], tau));
            Mat2 jinv0 = gb.J / gb.det;
            double kd[2] = {gz.dadj[0](1, 0), gz.dadj[0](1, 1)};
            double ki[2] = {gz.adj(1, 0) - gb.adj(1, 0), gz.adj(1, 1) - gb.adj(1, 1)};
            double sDa = kd[0] * jinv0(0, 0) + kd[1] * jinv0(1, 0);
            double sIa = ki[0] * jinv0(0, 0) + ki[1] * jinv0(1, 0);
            double sDb = kd[0] * jinv0(0, 1) + kd[1] * jinv0(1, 1);
            double sIb = ki[0] * jinv0(0, 1) + ki[1] * jinv0(1, 1);
            kc.eval_basis(tau, 0, Bc);
            int fc = kc.first_active(tau);
            for (int j = 0; j <= kc.p; ++j) {
                d22a[fc + j] -= w * sDa * Bc(j, 0);
                id22a[fc + j] -= w * sIa * Bc(j, 0);
            }
            kb.eval_basis(tau, 0, Bb);
            int fb = kb.first_active(tau);
            for (int j = 0; j <= kb.p; ++j) {
                d22b[fb + j] -= w * sDb * Bb(j, 0);
                id22b[fb + j] -= w * sIb * Bb(j, 0);
            }
        }
    }
}

// Owned single-point evaluation state for the generic (non-tabulated) path.
struct GenericPoint {
    Eigen::VectorXd va1, da1, vb1, db1, ib1, vc1, dc1, ic1;
    Eigen::VectorXd vc2, dc2, vb2, db2, va2, da2;
    Eigen::VectorXd d22a, id22a, d22b, id22b;
    GeomPoint g;
    Firsts f;
    PointData pd;
};

void make_generic_point(const StrongSpacePair& sp, const GeometryMap& F, const Vec2& z, int q,
                        GenericPoint& P) {
    const KnotVector& ka1 = sp.s11.kv1;
    const KnotVector& kb1 = sp.s12.kv1;
    const KnotVector& kc1 = sp.s22.kv1;
    dense_point_values(ka1, z[0], P.va1, P.da1);
    dense_point_values(kb1, z[0], P.vb1, P.db1);
    dense_point_values(kc1, z[0], P.vc1, P.dc1);
    dense_point_ib(kb1, z[0], P.ib1);
    dense_point_ib(kc1, z[0], P.ic1);
    dense_point_values(sp.s11.kv2, z[1], P.vc2, P.dc2);
    dense_point_values(sp.s12.kv2, z[1], P.vb2, P.db2);
    dense_point_values(sp.s22.kv2, z[1], P.va2, P.da2);
    P.g = geom_point(F, z);
    P.f.a1 = ka1.first_active(z[0]);
    P.f.b1 = kb1.first_active(z[0]);
    P.f.c1 = kc1.first_active(z[0]);
    P.f.c2 = sp.s11.kv2.first_active(z[1]);
    P.f.b2 = sp.s12.kv2.first_active(z[1]);
    P.f.a2 = sp.s22.kv2.first_active(z[1]);
    anchor_corrections(sp, F, q, z, P.d22a, P.id22a, P.d22b, P.id22b);
    GeomPoint g0 = geom_point(F, Vec2(0.0, z[1]));
    double k0 = P.g.adj(0, 0) - g0.adj(0, 0), k1 = P.g.adj(0, 1) - g0.adj(0, 1);
    P.pd = PointData{P.va1.data(), P.da1.data(), P.vb1.data(), P.db1.data(), P.ib1.data(),
                     P.vc1.data(), P.dc1.data(), P.ic1.data(), P.vc2.data(), P.dc2.data(),
                     P.vb2.data(), P.db2.data(), P.va2.data(), P.da2.data(), P.d22a.data(),
                     P.id22a.data(), P.d22b.data(), P.id22b.data(), &P.g,
                     k0 * g0.jinv(0, 0) + k1 * g0.jinv(1, 0),
                     k0 * g0.jinv(0, 1) + k1 * g0.jinv(1, 1)};
}

// Dense full-length 1D value and derivative tables at the tensor grid of
// one direction; columns are grid points.
void dense_tables(const KnotVector& kv, int n, const GaussRule& rule, Eigen::MatrixXd& V,
                  Eigen::MatrixXd& D) {
    BasisTable1D t = tabulate(kv, n, rule, 1);
    int q = static_cast<int>(rule.x.size());
    V.setZero(kv.n(), n * q);
    D.setZero(kv.n(), n * q);
    for (int e = 0; e < n; ++e)
        for (int a = 0; a <= kv.p; ++a)
            for (int g = 0; g < q; ++g) {
                V(t.first[e] + a, e * q + g) = t.val(e, a, g);
                D(t.first[e] + a, e * q + g) = t.der(e, a, g, 1);
            }
}

// Running-integral table of every basis of kv from the dense value table of
// its raised space (prefix sums down the columns).
Eigen::MatrixXd ib_table(const KnotVector& kv, const Eigen::MatrixXd& Vraised) {
    int nb = kv.n(), np = static_cast<int>(Vraised.cols());
    Eigen::MatrixXd IB(nb, np);
    for (int pt = 0; pt < np; ++pt) {
        double cum = 0;
        for (int a = 0; a < nb; ++a) {
            cum += Vraised(a, pt);
            IB(a, pt) = basis_integral(kv, a) * (1.0 - cum);
        }
    }
    return IB;
}

}  // namespace

StressEval strong_basis_eval(const StrongSpacePair& sp, const TransformContext& ctx, int basis,
                             const Vec2& z) {
    GenericPoint P;
    make_generic_point(sp, *ctx.F, z, ctx.q, P);
    std::vector<ActiveStress> act;
    std::vector<ActiveDisp> dact;
    list_actives(sp, P.f, false, act, dact);
    StressEval out;
    for (const ActiveStress& A : act)
        if (A.gid == basis) {
            Eigen::MatrixXd Pm(3, 1), Wm(2, 1);
            stress_columns({A}, P.pd, Pm, Wm);
            out.sigma << Pm(0, 0), Pm(1, 0), Pm(1, 0), Pm(2, 0);
            out.div << Wm(0, 0), Wm(1, 0);
            return out;
        }
    return out;
}

Vec2 strong_disp_basis_eval(const StrongSpacePair& sp, const TransformContext& ctx, int basis,
                            const Vec2& z) {
    GenericPoint P;
    make_generic_point(sp, *ctx.F, z, ctx.q, P);
    std::vector<ActiveStress> act;
    std::vector<ActiveDisp> dact;
    list_actives(sp, P.f, false, act, dact);
    for (const ActiveDisp& A : dact)
        if (A.gid == basis) {
            Eigen::MatrixXd Um(2, 1);
            disp_columns({A}, P.pd, Um);
            return Vec2(Um(0, 0), Um(1, 0));
        }
    return Vec2::Zero();
}

BlockSaddleSystem assemble_strong_symmetry(const StrongSpacePair& sp, const TransformContext& ctx,
                                           const Material& mat,
                                           const std::function<Vec2(const Vec2&)>& u_dirichlet,
                                           const std::function<Vec2(const Vec2&)>& body_force,
                                           bool drop_anchor_traces, int quad_pts) {
    const GeometryMap& F = *ctx.F;
    const int p = sp.p, n = sp.n;
    const int q = quad_pts > 0 ? quad_pts : p + 2;
    const GaussRule& rule = gauss_rule(q);
    const int np = n * q;

    const KnotVector& ka1 = sp.s11.kv1;
    const KnotVector& kb1 = sp.s12.kv1;
    const KnotVector& kc1 = sp.s22.kv1;
    const KnotVector& kc2 = sp.s11.kv2;
    const KnotVector& kb2 = sp.s12.kv2;
    const KnotVector& ka2 = sp.s22.kv2;

    // dense 1D tables, one set per direction
    Eigen::MatrixXd VA1, DA1, VB1, DB1, VC1, DC1, VC2, DC2, VB2, DB2, VA2, DA2;
    dense_tables(ka1, n, rule, VA1, DA1);
    dense_tables(kb1, n, rule, VB1, DB1);
    dense_tables(kc1, n, rule, VC1, DC1);
    dense_tables(kc2, n, rule, VC2, DC2);
    dense_tables(kb2, n, rule, VB2, DB2);
    dense_tables(ka2, n, rule, VA2, DA2);
    Eigen::MatrixXd IB1 = ib_table(kb1, VA1);  // raised(kb1) shares the knots of ka1
    Eigen::MatrixXd IC1 = ib_table(kc1, VB1);

    BasisTable1D ta1 = tabulate(ka1, n, rule, 0);
    BasisTable1D tb1 = tabulate(kb1, n, rule, 0);
    BasisTable1D tc1 = tabulate(kc1, n, rule, 0);
    BasisTable1D tc2 = tabulate(kc2, n, rule, 0);
    BasisTable1D tb2 = tabulate(kb2, n, rule, 0);
    BasisTable1D ta2 = tabulate(ka2, n, rule, 0);

    std::vector<double> zg(np);
    for (int e = 0; e < n; ++e)
        for (int g = 0; g < q; ++g) zg[e * q + g] = mesh_point(n, e, rule.x[g]);

    // geometry caches over the tensor grid and along the anchor edge
    std::vector<GeomPoint> grid(static_cast<size_t>(np) * np);
    std::vector<GeomPoint> bline(np);
    for (int i2 = 0; i2 < np; ++i2) {
        bline[i2] = geom_point(F, Vec2(0.0, zg[i2]));
        for (int i1 = 0; i1 < np; ++i1)
            grid[static_cast<size_t>(i2) * np + i1] = geom_point(F, Vec2(zg[i1], zg[i2]));
    }

    // anchor-family correction tails over the grid, running d2 integrals
    // split into full elements (reusing grid nodes) plus a partial segment
    std::vector<Eigen::MatrixXd> d22a, id22a, d22b, id22b;
    if (!drop_anchor_traces) {
        d22a.assign(np, Eigen::MatrixXd());
        id22a.assign(np, Eigen::MatrixXd());
        d22b.assign(np, Eigen::MatrixXd());
        id22b.assign(np, Eigen::MatrixXd());
        Eigen::MatrixXd AccDa = Eigen::MatrixXd::Zero(kc2.n(), np);
        Eigen::MatrixXd AccIa = Eigen::MatrixXd::Zero(kc2.n(), np);
        Eigen::MatrixXd AccDb = Eigen::MatrixXd::Zero(kb2.n(), np);
        Eigen::MatrixXd AccIb = Eigen::MatrixXd::Zero(kb2.n(), np);
        Eigen::MatrixXd Bc, Bb;
        for (int e2 = 0; e2 < n; ++e2) {
            double lo = static_cast<double>(e2) / n;
            for (int g2 = 0; g2 < q; ++g2) {
                int i2 = e2 * q + g2;
                d22a[i2] = AccDa;
                id22a[i2] = AccIa;
                d22b[i2] = AccDb;
                id22b[i2] = AccIb;
                double len = zg[i2] - lo;
                if (len <= 0) continue;
                for (int m = 0; m < q; ++m) {
                    double tau = lo + len * rule.x[m];
                    double w = len * rule.w[m];
                    GeomData gb = geom_at(F, Vec2(0.0, tau));
                    Mat2 jinv0 = gb.J / gb.det;
                    kc2.eval_basis(tau, 0, Bc);
                    kb2.eval_basis(tau, 0, Bb);
                    int fc = kc2.first_active(tau), fb = kb2.first_active(tau);
                    for (int i1 = 0; i1 < np; ++i1) {
                        GeomData gz = geom_at(F, Vec2(zg[i1], tau));
                        double kd[2] = {gz.dadj[0](1, 0), gz.dadj[0](1, 1)};
                        double ki[2] = {gz.adj(1, 0) - gb.adj(1, 0), gz.adj(1, 1) - gb.adj(1, 1)};
                        double sDa = w * (kd[0] * jinv0(0, 0) + kd[1] * jinv0(1, 0));
                        double sIa = w * (ki[0] * jinv0(0, 0) + ki[1] * jinv0(1, 0));
                        double sDb = w * (kd[0] * jinv0(0, 1) + kd[1] * jinv0(1, 1));
                        double sIb = w * (ki[0] * jinv0(0, 1) + ki[1] * jinv0(1, 1));
                        for (int j = 0; j <= kc2.p; ++j) {
                            d22a[i2](fc + j, i1) -= sDa * Bc(j, 0);
                            id22a[i2](fc + j, i1) -= sIa * Bc(j, 0);
                        }
                        for (int j = 0; j <= kb2.p; ++j) {
                            d22b[i2](fb + j, i1) -= sDb * Bb(j, 0);
                            id22b[i2](fb + j, i1) -= sIb * Bb(j, 0);
                        }
                    }
                }
            }
            // fold the full element into the running integrals
            for (int g2 = 0; g2 < q; ++g2) {
                int i2 = e2 * q + g2;
                double w = rule.w[g2] / n;
                const GeomPoint& gb = bline[i2];
                Mat2 jinv0 = gb.jinv;
                int fc = tc2.first[e2], fb = tb2.first[e2];
                for (int i1 = 0; i1 < np; ++i1) {
                    const GeomPoint& gz = grid[static_cast<size_t>(i2) * np + i1];
                    double kd[2] = {gz.dadj1(1, 0), gz.dadj1(1, 1)};
                    double ki[2] = {gz.adj(1, 0) - gb.adj(1, 0), gz.adj(1, 1) - gb.adj(1, 1)};
                    double sDa = w * (kd[0] * jinv0(0, 0) + kd[1] * jinv0(1, 0));
                    double sIa = w * (ki[0] * jinv0(0, 0) + ki[1] * jinv0(1, 0));
                    double sDb = w * (kd[0] * jinv0(0, 1) + kd[1] * jinv0(1, 1));
                    double sIb = w * (ki[0] * jinv0(0, 1) + ki[1] * jinv0(1, 1));
                    for (int j = 0; j <= kc2.p; ++j) {
                        AccDa(fc + j, i1) -= sDa * VC2(fc + j, i2);
                        AccIa(fc + j, i1) -= sIa * VC2(fc + j, i2);
                    }
                    for (int j = 0; j <= kb2.p; ++j) {
                        AccDb(fb + j, i1) -= sDb * VB2(fb + j, i2);
                        AccIb(fb + j, i1) -= sIb * VB2(fb + j, i2);
                    }
                }
            }
        }
    }

    // kept-dof numbering: anchor families of the 11 and 12 blocks drop out
    // when their traces are imposed strongly
    const int n_stress = sp.n_stress(), n_disp = sp.n_disp();
    std::vector<int> o2k(n_stress, -1), keep;
    keep.reserve(n_stress);
    for (int gid = 0; gid < n_stress; ++gid) {
        bool anchored = false;
        if (gid < sp.off12())
            anchored = gid % ka1.n() == 0;
        else if (gid < sp.off22())
            anchored = (gid - sp.off12()) % kb1.n() == 0;
        if (drop_anchor_traces && anchored) continue;
        o2k[gid] = static_cast<int>(keep.size());
        keep.push_back(gid);
    }
    const int ns_k = static_cast<int>(keep.size());

    BlockSaddleSystem sys;
    sys.n_stress = ns_k;
    sys.n_disp = n_disp;
    sys.stress_keep = keep;
    sys.K = Eigen::MatrixXd::Zero(ns_k + n_disp, ns_k + n_disp);
    sys.rhs = Eigen::VectorXd::Zero(ns_k + n_disp);

    // compliance kernel in component-triple form, Cholesky factored
    double clam = mat.lambda / (2 * mat.lambda + 2 * mat.mu);
    Eigen::Matrix3d Mm;
    Mm << 1 - clam, 0, -clam, 0, 2, 0, -clam, 0, 1 - clam;
    Mm /= 2 * mat.mu;
    Eigen::Matrix3d Lt = Eigen::LLT<Eigen::Matrix3d>(Mm).matrixL().transpose();

    std::vector<ActiveStress> act;
    std::vector<ActiveDisp> dact;
    Eigen::MatrixXd P, W, U, G, Asig, Bdu;
    Eigen::VectorXd ru;
    for (int e2 = 0; e2 < n; ++e2) {
        for (int e1 = 0; e1 < n; ++e1) {
            Firsts f{ta1.first[e1], tb1.first[e1], tc1.first[e1],
                     tc2.first[e2], tb2.first[e2], ta2.first[e2]};
            list_actives(sp, f, drop_anchor_traces, act, dact);
            const int ns = static_cast<int>(act.size()), nu = static_cast<int>(dact.size());
            P.resize(3, ns);
            W.resize(2, ns);
            U.resize(2, nu);
            G.resize(3, ns);
            Asig = Eigen::MatrixXd::Zero(ns, ns);
            Bdu = Eigen::MatrixXd::Zero(nu, ns);
            ru = Eigen::VectorXd::Zero(nu);
            for (int g2 = 0; g2 < q; ++g2) {
                int i2 = e2 * q + g2;
                for (int g1 = 0; g1 < q; ++g1) {
                    int i1 = e1 * q + g1;
                    const GeomPoint& gp = grid[static_cast<size_t>(i2) * np + i1];
                    const GeomPoint& g0 = bline[i2];
                    double k0 = gp.adj(0, 0) - g0.adj(0, 0), k1 = gp.adj(0, 1) - g0.adj(0, 1);
                    PointData pd;
                    pd.va1 = VA1.col(i1).data();
                    pd.da1 = DA1.col(i1).data();
                    pd.vb1 = VB1.col(i1).data();
                    pd.db1 = DB1.col(i1).data();
                    pd.ib1 = IB1.col(i1).data();
                    pd.vc1 = VC1.col(i1).data();
                    pd.dc1 = DC1.col(i1).data();
                    pd.ic1 = IC1.col(i1).data();
                    pd.vc2 = VC2.col(i2).data();
                    pd.dc2 = DC2.col(i2).data();
                    pd.vb2 = VB2.col(i2).data();
                    pd.db2 = DB2.col(i2).data();
                    pd.va2 = VA2.col(i2).data();
                    pd.da2 = DA2.col(i2).data();
                    if (!drop_anchor_traces) {
                        pd.d22a = d22a[i2].col(i1).data();
                        pd.id22a = id22a[i2].col(i1).data();
                        pd.d22b = d22b[i2].col(i1).data();
                        pd.id22b = id22b[i2].col(i1).data();
                    }
                    pd.g = &gp;
                    pd.e11 = k0 * g0.jinv(0, 0) + k1 * g0.jinv(1, 0);
                    pd.e12 = k0 * g0.jinv(0, 1) + k1 * g0.jinv(1, 1);
                    stress_columns(act, pd, P, W);
                    disp_columns(dact, pd, U);
                    double s = rule.w[g1] * rule.w[g2] / (n * n) * gp.det;
                    G.noalias() = Lt * P;
                    Asig.selfadjointView<Eigen::Lower>().rankUpdate(G.transpose(), s);
                    Bdu.noalias() += s * (U.transpose() * W);
                    ru.noalias() += s * (U.transpose() * body_force(gp.x));
                }
            }
            Asig.triangularView<Eigen::StrictlyUpper>() = Asig.transpose();
            for (int j = 0; j < ns; ++j) {
                int cj = o2k[act[j].gid];
                for (int i = 0; i < ns; ++i) sys.K(o2k[act[i].gid], cj) += Asig(i, j);
                for (int i = 0; i < nu; ++i) {
                    sys.K(ns_k + dact[i].gid, cj) += Bdu(i, j);
                    sys.K(cj, ns_k + dact[i].gid) += Bdu(i, j);
                }
            }
            for (int i = 0; i < nu; ++i) sys.rhs[ns_k + dact[i].gid] += ru[i];
        }
    }

    // Dirichlet boundary term of the stress equations; the anchor edge is
    // excluded when its normal trace is imposed strongly
    std::vector<Edge> edges = {Edge::Left, Edge::Right, Edge::Bottom, Edge::Top};
    if (drop_anchor_traces) edges.erase(edges.begin());
    GenericPoint GP;
    Eigen::MatrixXd Pm, Wm;
    for (Edge edge : edges) {
        Vec2 nhat;
        switch (edge) {
            case Edge::Left: nhat = Vec2(-1, 0); break;
            case Edge::Right: nhat = Vec2(1, 0); break;
            case Edge::Bottom: nhat = Vec2(0, -1); break;
            default: nhat = Vec2(0, 1); break;
        }
        for (int e = 0; e < n; ++e) {
            for (int g = 0; g < q; ++g) {
                double t = mesh_point(n, e, rule.x[g]);
                Vec2 z = edge_param(edge, t);
                make_generic_point(sp, F, z, q, GP);
                list_actives(sp, GP.f, drop_anchor_traces, act, dact);
                const int ns = static_cast<int>(act.size());
                Pm.resize(3, ns);
                Wm.resize(2, ns);
                stress_columns(act, GP.pd, Pm, Wm);
                Vec2 nds = GP.g.adj.transpose() * nhat;
                Vec2 ud = u_dirichlet(GP.g.x);
                double w = rule.w[g] / n;
                for (int j = 0; j < ns; ++j) {
                    Mat2 sig;
                    sig << Pm(0, j), Pm(1, j), Pm(1, j), Pm(2, j);
                    sys.rhs[o2k[act[j].gid]] += w * ud.dot(sig * nds);
                }
            }
        }
    }
    return sys;
}

StrongSolution solve_strong(const StrongProblem& prob, int p, int r, int n, int quad_pts) {
    StrongSolution sol;
    sol.sp = StrongSpacePair::make(p, r, n);
    sol.ctx = make_context(prob.F, n, p + 2);
    auto uD = [&](const Vec2& x) { return prob.exact.displacement(x); };
    auto f = [&](const Vec2& x) { return prob.exact.body_force(x); };
    BlockSaddleSystem sys = assemble_strong_symmetry(sol.sp, sol.ctx, prob.exact.mat, uD, f,
                                                     prob.gamma1_traction, quad_pts);
    SolveReport rep;
    Eigen::VectorXd zk = solve_dense(sys.K, sys.rhs, &rep);
    sol.residual = rep.residual;
    sol.unknowns = rep.unknowns;

    const int n_stress = sol.sp.n_stress(), n_disp = sol.sp.n_disp();
    sol.z = Eigen::VectorXd::Zero(n_stress + n_disp);
    for (int i = 0; i < sys.n_stress; ++i) sol.z[sys.stress_keep[i]] = zk[i];
    sol.z.tail(n_disp) = zk.tail(n_disp);

    sol.S.c11 = TensorSpline{sol.sp.s11, sol.z.segment(0, sol.sp.s11.dim())};
    sol.S.c12 = TensorSpline{sol.sp.s12, sol.z.segment(sol.sp.off12(), sol.sp.s12.dim())};
    sol.S.c22 = TensorSpline{sol.sp.s22, sol.z.segment(sol.sp.off22(), sol.sp.s22.dim())};
    sol.v1 = TensorSpline{sol.sp.d1, sol.z.segment(n_stress, sol.sp.d1.dim())};
    sol.v2 = TensorSpline{sol.sp.d2, sol.z.segment(n_stress + sol.sp.d1.dim(), sol.sp.d2.dim())};
    sol.ia12 = tensor_antiderive1(sol.S.c12);
    sol.ia22 = tensor_antiderive1(sol.S.c22);
    sol.iav1 = tensor_antiderive1(sol.v1);
    sol.iav2 = tensor_antiderive1(sol.v2);
    Eigen::VectorXd t11c(sol.sp.s11.kv2.n()), t12c(sol.sp.s12.kv2.n());
    for (int b = 0; b < t11c.size(); ++b) t11c[b] = sol.z[sol.sp.s11.index(0, b)];
    for (int b = 0; b < t12c.size(); ++b)
        t12c[b] = sol.z[sol.sp.off12() + sol.sp.s12.index(0, b)];
    sol.t11 = Spline1D{sol.sp.s11.kv2, t11c};
    sol.t12 = Spline1D{sol.sp.s12.kv2, t12c};
    sol.has_anchor = t11c.cwiseAbs().maxCoeff() > 0 || t12c.cwiseAbs().maxCoeff() > 0;
    return sol;
}

Mat2 StrongSolution::stress_at(const Vec2& zeta) const {
    const GeometryMap& F = *ctx.F;
    GeomPoint g = geom_point(F, zeta);
    Mat2 Sv;
    double s11 = S.c11.value(zeta[0], zeta[1]);
    double s12 = S.c12.value(zeta[0], zeta[1]);
    double s22 = S.c22.value(zeta[0], zeta[1]);
    Sv << s11, s12, s12, s22;
    double D11 = 0, D22 = 0, ID22 = 0;
    if (has_anchor) {
        GeomPoint g0 = geom_point(F, Vec2(0.0, zeta[1]));
        Vec2 gt = g0.jinv * Vec2(t11.value(zeta[1]), t12.value(zeta[1]));
        D11 = -((g.adj(0, 0) - g0.adj(0, 0)) * gt[0] + (g.adj(0, 1) - g0.adj(0, 1)) * gt[1]);
        const KnotVector& kv2 = S.c11.space.kv2;
        D22 = -integrate_to(kv2, ctx.q, zeta[1], [&](double tau) {
            GeomData gz = geom_at(F, Vec2(zeta[0], tau));
            GeomData gb = geom_at(F, Vec2(0.0, tau));
            Vec2 gv = (gb.J / gb.det) * Vec2(t11.value(tau), t12.value(tau));
            return gz.dadj[0](1, 0) * gv[0] + gz.dadj[0](1, 1) * gv[1];
        });
        ID22 = -integrate_to(kv2, ctx.q, zeta[1], [&](double tau) {
            GeomData gz = geom_at(F, Vec2(zeta[0], tau));
            GeomData gb = geom_at(F, Vec2(0.0, tau));
            Vec2 gv = (gb.J / gb.det) * Vec2(t11.value(tau), t12.value(tau));
            return (gz.adj(1, 0) - gb.adj(1, 0)) * gv[0] + (gz.adj(1, 1) - gb.adj(1, 1)) * gv[1];
        });
    }
    Mat2 D = Mat2::Zero();
    D(0, 0) = D11;
    D(1, 1) = D22;
    double i1 = ia22.value(zeta[0], zeta[1]) - ID22;
    double i2 = -ia12.value(zeta[0], zeta[1]);
    return g.jinv * (Sv - D) * g.jinv.transpose() + g.airy_inv[0] * i1 + g.airy_inv[1] * i2;
}

Vec2 StrongSolution::div_stress_at(const Vec2& zeta) const {
    GeomPoint g = geom_point(*ctx.F, zeta);
    double z1 = zeta[0], z2 = zeta[1];
    Vec2 dv(S.c11.value(z1, z2, 1, 0) + S.c12.value(z1, z2, 0, 1),
            S.c12.value(z1, z2, 1, 0) + S.c22.value(z1, z2, 0, 1));
    Vec2 iv(S.c11.value(z1, z2) - t11.value(z2) + ia12.value(z1, z2, 0, 1),
            S.c12.value(z1, z2) - t12.value(z2) + ia22.value(z1, z2, 0, 1));
    return (g.jinv * dv + g.djinv1 * iv) / g.det;
}

Vec2 StrongSolution::displacement_at(const Vec2& zeta) const {
    GeomPoint g = geom_point(*ctx.F, zeta);
    Vec2 v(v1.value(zeta[0], zeta[1]), v2.value(zeta[0], zeta[1]));
    Vec2 iv(iav1.value(zeta[0], zeta[1]), iav2.value(zeta[0], zeta[1]));
    return (g.jinv * v + g.djinv1 * iv) / g.det;
}

FieldErrors strong_errors(const StrongSolution& sol, const ElasticBundle& exact, int quad_pts) {
    const int q = quad_pts > 0 ? quad_pts : sol.sp.p + 2;
    const GaussRule& rule = gauss_rule(q);
    const int n = sol.sp.n;
    double s2 = 0, d2 = 0, u2 = 0;
    for (int e2 = 0; e2 < n; ++e2)
        for (int e1 = 0; e1 < n; ++e1)
            for (int g2 = 0; g2 < q; ++g2)
                for (int g1 = 0; g1 < q; ++g1) {
                    Vec2 z(mesh_point(n, e1, rule.x[g1]), mesh_point(n, e2, rule.x[g2]));
                    GeomData g = geom_at(*sol.ctx.F, z);
                    double w = rule.w[g1] * rule.w[g2] / (n * n) * g.det;
                    Mat2 es = sol.stress_at(z) - exact.stress(g.x);
                    Vec2 ed = sol.div_stress_at(z) - exact.body_force(g.x);
                    Vec2 eu = sol.displacement_at(z) - exact.displacement(g.x);
                    s2 += w * es.squaredNorm();
                    d2 += w * ed.squaredNorm();
                    u2 += w * eu.squaredNorm();
                }
    FieldErrors err;
    err.sigma_l2 = std::sqrt(s2);
    err.div_l2 = std::sqrt(d2);
    err.sigma_hdiv = std::sqrt(s2 + d2);
    err.u_l2 = std::sqrt(u2);
    err.p_l2 = 0;
    return err;
}

double max_asymmetry(const StrongSolution& sol, int quad_pts) {
    const int q = quad_pts > 0 ? quad_pts : sol.sp.p + 2;
    const GaussRule& rule = gauss_rule(q);
    const int n = sol.sp.n;
    double m = 0;
    for (int e2 = 0; e2 < n; ++e2)
        for (int e1 = 0; e1 < n; ++e1)
            for (int g2 = 0; g2 < q; ++g2)
                for (int g1 = 0; g1 < q; ++g1) {
                    Vec2 z(mesh_point(n, e1, rule.x[g1]), mesh_point(n, e2, rule.x[g2]));
                    Mat2 s = sol.stress_at(z);
                    m = std::max(m, std::abs(s(0, 1) - s(1, 0)));
                }
    return m;
}

}  // namespace iga
