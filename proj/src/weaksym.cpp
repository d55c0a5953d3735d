#include "iga/weaksym.hpp"

#include <cassert>
#include <numeric>
#include <set>

namespace iga {

Mat2 apply_compliance(const Material& m, const Mat2& sigma) {
    double clam = m.lambda / (2.0 * (m.lambda + m.mu));
    return (sigma - clam * sigma.trace() * Mat2::Identity()) / (2.0 * m.mu);
}

namespace {

std::array<D2, 2> eval_u(const ElasticBundle& b, const Vec2& x) {
    return b.u(d2_var(x(0), 0), d2_var(x(1), 1));
}

}  // namespace

Vec2 ElasticBundle::displacement(const Vec2& x) const {
    auto c = eval_u(*this, x);
    return {c[0].v, c[1].v};
}

Mat2 ElasticBundle::grad_u(const Vec2& x) const {
    auto c = eval_u(*this, x);
    Mat2 G;
    G << c[0].g[0], c[0].g[1], c[1].g[0], c[1].g[1];
    return G;
}

Mat2 ElasticBundle::stress(const Vec2& x) const {
    Mat2 G = grad_u(x);
    Mat2 E = 0.5 * (G + G.transpose());
    double tr = div_u ? div_u(d2_var(x(0), 0), d2_var(x(1), 1)).v : E.trace();
    return 2.0 * mat.mu * E + mat.lambda * tr * Mat2::Identity();
}

Vec2 ElasticBundle::body_force(const Vec2& x) const {
    auto c = eval_u(*this, x);
    double dddiv1 = c[0].h[0] + c[1].h[1];  // d1 (div u)
    double dddiv2 = c[0].h[1] + c[1].h[2];
    double ldiv1 = dddiv1, ldiv2 = dddiv2;
    if (div_u) {
        D2 d = div_u(d2_var(x(0), 0), d2_var(x(1), 1));
        ldiv1 = d.g[0];
        ldiv2 = d.g[1];
    }
    return {mat.mu * (c[0].h[0] + c[0].h[2] + dddiv1) + mat.lambda * ldiv1,
            mat.mu * (c[1].h[0] + c[1].h[2] + dddiv2) + mat.lambda * ldiv2};
}

double ElasticBundle::multiplier(const Vec2& x) const {
    auto c = eval_u(*this, x);
    return 0.5 * (c[1].g[0] - c[0].g[1]);
}

ElasticBundle make_bundle(const Material& m,
                          std::function<std::array<D2, 2>(const D2&, const D2&)> u) {
    ElasticBundle b;
    b.mat = m;
    b.u = std::move(u);
    return b;
}

std::vector<int> edge_flux_dofs(const DeRhamSpaces& sp, Edge e) {
    std::vector<int> out;
    int off = sp.flux1.dim();
    switch (e) {
        case Edge::Left:
            for (int i2 = 0; i2 < sp.flux1.kv2.n(); ++i2) out.push_back(sp.flux1.index(0, i2));
            break;
        case Edge::Right:
            for (int i2 = 0; i2 < sp.flux1.kv2.n(); ++i2)
                out.push_back(sp.flux1.index(sp.flux1.kv1.n() - 1, i2));
            break;
        case Edge::Bottom:
            for (int i1 = 0; i1 < sp.flux2.kv1.n(); ++i1)
                out.push_back(off + sp.flux2.index(i1, 0));
            break;
        case Edge::Top:
            for (int i1 = 0; i1 < sp.flux2.kv1.n(); ++i1)
                out.push_back(off + sp.flux2.index(i1, sp.flux2.kv2.n() - 1));
            break;
    }
    return out;
}

std::vector<int> edge_scalar_dofs(const TensorSpace& S, Edge e) {
    std::vector<int> out;
    switch (e) {
        case Edge::Left:
            for (int i2 = 0; i2 < S.kv2.n(); ++i2) out.push_back(S.index(0, i2));
            break;
        case Edge::Right:
            for (int i2 = 0; i2 < S.kv2.n(); ++i2) out.push_back(S.index(S.kv1.n() - 1, i2));
            break;
        case Edge::Bottom:
            for (int i1 = 0; i1 < S.kv1.n(); ++i1) out.push_back(S.index(i1, 0));
            break;
        case Edge::Top:
            for (int i1 = 0; i1 < S.kv1.n(); ++i1) out.push_back(S.index(i1, S.kv2.n() - 1));
            break;
    }
    return out;
}

namespace {

double edge_orient(Edge e) { return (e == Edge::Right || e == Edge::Top) ? 1.0 : -1.0; }
bool edge_vertical(Edge e) { return e == Edge::Left || e == Edge::Right; }

// Union-find with an orientation sign on every link:
// value(i) = sgn[i] * value(parent[i]).
struct SignedUF {
    std::vector<int> parent;
    std::vector<double> sgn;
    explicit SignedUF(int n) : parent(n), sgn(n, 1.0) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::pair<int, double> find(int i) {
        if (parent[i] == i) return {i, 1.0};
        auto [r, s] = find(parent[i]);
        parent[i] = r;
        sgn[i] *= s;
        return {r, sgn[i]};
    }
    void unite(int a, int b, double rel) {  // value(a) = rel * value(b)
        auto [ra, sa] = find(a);
        auto [rb, sb] = find(b);
        if (ra == rb) return;
        parent[ra] = rb;
        sgn[ra] = rel * sb / sa;
    }
};

}  // namespace

WeakDofs couple_weak_dofs(const PatchCollection& pc, int p, int r, int n) {
    WeakDofs d;
    d.sp = DeRhamSpaces::make(p, r, n);
    d.n_patches = static_cast<int>(pc.patches.size());
    d.m2 = d.sp.flux1.dim() + d.sp.flux2.dim();
    d.md = d.sp.density.dim();
    d.mq = d.sp.pressure.dim();

    int su = d.n_patches * 2 * d.m2;
    SignedUF ufs(su);
    SignedUF ufm(d.n_patches * d.mq);
    auto suid = [&](int patch, int row, int lv2) { return (patch * 2 + row) * d.m2 + lv2; };

    for (const Interface& f : pc.interfaces) {
        auto Da = edge_flux_dofs(d.sp, f.edge_a);
        auto Db = edge_flux_dofs(d.sp, f.edge_b);
        int m = static_cast<int>(Da.size());
        assert(static_cast<int>(Db.size()) == m);
        double rel = -edge_orient(f.edge_a) * edge_orient(f.edge_b);
        for (int k = 0; k < 2; ++k)
            for (int t = 0; t < m; ++t) {
                int tb = f.reversed ? m - 1 - t : t;
                ufs.unite(suid(f.patch_a, k, Da[t]), suid(f.patch_b, k, Db[tb]), rel);
            }
        auto Qa = edge_scalar_dofs(d.sp.pressure, f.edge_a);
        auto Qb = edge_scalar_dofs(d.sp.pressure, f.edge_b);
        int mq = static_cast<int>(Qa.size());
        for (int t = 0; t < mq; ++t) {
            int tb = f.reversed ? mq - 1 - t : t;
            ufm.unite(f.patch_a * d.mq + Qa[t], f.patch_b * d.mq + Qb[tb], 1.0);
        }
    }

    d.sgid.assign(d.n_patches, std::vector<int>(2 * d.m2, -1));
    d.ssgn.assign(d.n_patches, std::vector<double>(2 * d.m2, 1.0));
    std::vector<int> newid(su, -1);
    int next = 0;
    for (int patch = 0; patch < d.n_patches; ++patch)
        for (int loc = 0; loc < 2 * d.m2; ++loc) {
            auto [root, s] = ufs.find(patch * 2 * d.m2 + loc);
            if (newid[root] < 0) newid[root] = next++;
            d.sgid[patch][loc] = newid[root];
            d.ssgn[patch][loc] = s;
        }
    d.n_stress = next;

    d.mgid.assign(d.n_patches, std::vector<int>(d.mq, -1));
    std::vector<int> newidm(d.n_patches * d.mq, -1);
    next = 0;
    for (int patch = 0; patch < d.n_patches; ++patch)
        for (int loc = 0; loc < d.mq; ++loc) {
            auto [root, s] = ufm.find(patch * d.mq + loc);
            (void)s;
            if (newidm[root] < 0) newidm[root] = next++;
            d.mgid[patch][loc] = newidm[root];
        }
    d.n_mult = next;
    d.n_disp = d.n_patches * 2 * d.md;
    return d;
}

AssembledWeak assemble_weak(const WeakDofs& dofs, const WeakProblem& prob, int quad_pts) {
    const DeRhamSpaces& sp = dofs.sp;
    int p = sp.p, n = sp.n;
    int q = quad_pts > 0 ? quad_pts : p + 1;
    const GaussRule& rule = gauss_rule(q);
    const Material& mat = prob.exact.mat;
    double clam = mat.lambda / (2.0 * (mat.lambda + mat.mu));

    BasisTable1D Ta = tabulate(sp.flux1.kv1, n, rule, 1);  // degree p family
    BasisTable1D Tb = tabulate(sp.flux1.kv2, n, rule, 1);  // degree p-1 family
    BasisTable1D Tq = tabulate(sp.pressure.kv1, n, rule, 0);

    int nv1 = (p + 1) * p;  // flux1 locals per element
    int nv = 2 * nv1;
    int nd = p * p;
    int nql = (sp.pressure.kv1.p + 1) * (sp.pressure.kv1.p + 1);

    int N = dofs.total();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(dofs.n_patches) * n * n *
                  (4 * nv * nv + 8 * nv * nd + 4 * nv * nql));

    Eigen::MatrixXd Ae(2 * nv, 2 * nv), B1e(2 * nv, 2 * nd), B2e(2 * nv, nql);
    Eigen::VectorXd fe(2 * nd);
    std::vector<Vec2> Pv(nv);
    std::vector<double> dv(nv), wd(nd), wp(nql);
    std::vector<int> Gs(2 * nv), Gu(2 * nd), Gq(nql);
    std::vector<double> Ss(2 * nv);

    for (int patch = 0; patch < dofs.n_patches; ++patch) {
        const GeometryMap& F = *prob.domain.patches[patch];
        for (int e2 = 0; e2 < n; ++e2)
            for (int e1 = 0; e1 < n; ++e1) {
                // active index maps for this element
                for (int a2 = 0; a2 < p; ++a2)
                    for (int a1 = 0; a1 <= p; ++a1) {
                        int i = a2 * (p + 1) + a1;
                        int lv2 = sp.flux1.index(Ta.first[e1] + a1, Tb.first[e2] + a2);
                        for (int k = 0; k < 2; ++k) {
                            Gs[k * nv + i] = dofs.stress_gid(patch, k, lv2);
                            Ss[k * nv + i] = dofs.stress_sign(patch, k, lv2);
                        }
                    }
                for (int a2 = 0; a2 <= p; ++a2)
                    for (int a1 = 0; a1 < p; ++a1) {
                        int i = nv1 + a2 * p + a1;
                        int lv2 = sp.flux1.dim() +
                                  sp.flux2.index(Tb.first[e1] + a1, Ta.first[e2] + a2);
                        for (int k = 0; k < 2; ++k) {
                            Gs[k * nv + i] = dofs.stress_gid(patch, k, lv2);
                            Ss[k * nv + i] = dofs.stress_sign(patch, k, lv2);
                        }
                    }
                for (int a2 = 0; a2 < p; ++a2)
                    for (int a1 = 0; a1 < p; ++a1) {
                        int j = a2 * p + a1;
                        int dj = sp.density.index(Tb.first[e1] + a1, Tb.first[e2] + a2);
                        Gu[j] = dofs.disp_gid(patch, 0, dj);
                        Gu[nd + j] = dofs.disp_gid(patch, 1, dj);
                    }
                int pq = sp.pressure.kv1.p;
                for (int a2 = 0; a2 <= pq; ++a2)
                    for (int a1 = 0; a1 <= pq; ++a1)
                        Gq[a2 * (pq + 1) + a1] = dofs.mult_gid(
                            patch, sp.pressure.index(Tq.first[e1] + a1, Tq.first[e2] + a2));

                Ae.setZero();
                B1e.setZero();
                B2e.setZero();
                fe.setZero();

                for (int g2 = 0; g2 < q; ++g2)
                    for (int g1 = 0; g1 < q; ++g1) {
                        Vec2 zeta(mesh_point(n, e1, rule.x[g1]), mesh_point(n, e2, rule.x[g2]));
                        double wq = rule.w[g1] * rule.w[g2] / (n * n);
                        Mat2 J = F.jacobian(zeta);
                        double det = J.determinant();
                        Vec2 x = F.map(zeta);

                        for (int a2 = 0; a2 < p; ++a2)
                            for (int a1 = 0; a1 <= p; ++a1) {
                                int i = a2 * (p + 1) + a1;
                                double B = Ta.val(e1, a1, g1) * Tb.val(e2, a2, g2);
                                Pv[i] = J.col(0) * B;
                                dv[i] = Ta.der(e1, a1, g1, 1) * Tb.val(e2, a2, g2);
                            }
                        for (int a2 = 0; a2 <= p; ++a2)
                            for (int a1 = 0; a1 < p; ++a1) {
                                int i = nv1 + a2 * p + a1;
                                double B = Tb.val(e1, a1, g1) * Ta.val(e2, a2, g2);
                                Pv[i] = J.col(1) * B;
                                dv[i] = Tb.val(e1, a1, g1) * Ta.der(e2, a2, g2, 1);
                            }
                        for (int a2 = 0; a2 < p; ++a2)
                            for (int a1 = 0; a1 < p; ++a1)
                                wd[a2 * p + a1] = Tb.val(e1, a1, g1) * Tb.val(e2, a2, g2);
                        for (int a2 = 0; a2 <= pq; ++a2)
                            for (int a1 = 0; a1 <= pq; ++a1)
                                wp[a2 * (pq + 1) + a1] = Tq.val(e1, a1, g1) * Tq.val(e2, a2, g2);

                        double com = wq / (2.0 * mat.mu * det);
                        for (int i = 0; i < nv; ++i) {
                            const Vec2& pi = Pv[i];
                            for (int j = 0; j < nv; ++j) {
                                const Vec2& pj = Pv[j];
                                double dot = com * pi.dot(pj);
                                Ae(i, j) += dot - com * clam * pi(0) * pj(0);
                                Ae(i, nv + j) -= com * clam * pi(0) * pj(1);
                                Ae(nv + i, j) -= com * clam * pi(1) * pj(0);
                                Ae(nv + i, nv + j) += dot - com * clam * pi(1) * pj(1);
                            }
                            double divw = dv[i] * wq / det;
                            for (int j = 0; j < nd; ++j) {
                                B1e(i, j) += divw * wd[j];
                                B1e(nv + i, nd + j) += divw * wd[j];
                            }
                            for (int j = 0; j < nql; ++j) {
                                B2e(i, j) -= pi(1) * wp[j] * wq;
                                B2e(nv + i, j) += pi(0) * wp[j] * wq;
                            }
                        }
                        Vec2 fx = prob.exact.body_force(x);
                        for (int j = 0; j < nd; ++j) {
                            fe(j) += fx(0) * wd[j] * wq;
                            fe(nd + j) += fx(1) * wd[j] * wq;
                        }
                    }

                for (int li = 0; li < 2 * nv; ++li) {
                    int gi = Gs[li];
                    double si = Ss[li];
                    for (int lj = 0; lj < 2 * nv; ++lj)
                        trips.emplace_back(gi, Gs[lj], si * Ss[lj] * Ae(li, lj));
                    for (int lj = 0; lj < 2 * nd; ++lj) {
                        double v = si * B1e(li, lj);
                        trips.emplace_back(gi, Gu[lj], v);
                        trips.emplace_back(Gu[lj], gi, v);
                    }
                    for (int lj = 0; lj < nql; ++lj) {
                        double v = si * B2e(li, lj);
                        trips.emplace_back(gi, Gq[lj], v);
                        trips.emplace_back(Gq[lj], gi, v);
                    }
                }
                for (int lj = 0; lj < 2 * nd; ++lj) rhs[Gu[lj]] += fe(lj);
            }
    }

    // boundary handling
    auto key = [](int patch, Edge e) { return patch * 4 + static_cast<int>(e); };
    std::set<int> traction;
    for (const BoundaryEdge& be : prob.traction_edges) traction.insert(key(be.patch, be.edge));
    auto bdry = prob.domain.boundary();
    assert(traction.size() < bdry.size());  // some displacement edge must remain

    AssembledWeak aw;
    aw.constrained.assign(N, 0);
    aw.cval = Eigen::VectorXd::Zero(N);

    const KnotVector& kvtr = sp.flux1.kv2;  // normal-trace family on every edge
    int ptr = kvtr.p;
    for (const BoundaryEdge& be : bdry) {
        const GeometryMap& F = *prob.domain.patches[be.patch];
        Edge e = be.edge;
        auto D = edge_flux_dofs(sp, e);
        double orient = edge_orient(e);
        if (!traction.count(key(be.patch, e))) {
            // displacement data enters the stress rows weakly
            for (int eb = 0; eb < n; ++eb)
                for (int g = 0; g < q; ++g) {
                    double t = mesh_point(n, eb, rule.x[g]);
                    double w = rule.w[g] / n;
                    Vec2 zeta = edge_param(e, t);
                    Vec2 uD = prob.exact.displacement(F.map(zeta));
                    for (int a = 0; a <= ptr; ++a) {
                        int abs = Tb.first[eb] + a;
                        double B = Tb.val(eb, a, g);
                        for (int k = 0; k < 2; ++k)
                            rhs[dofs.stress_gid(be.patch, k, D[abs])] +=
                                dofs.stress_sign(be.patch, k, D[abs]) * orient * uD(k) * B * w;
                    }
                }
        } else {
            // prescribed normal stress: project onto the trace space, then
            // freeze those coefficients
            int mtr = kvtr.n();
            const GaussRule& r2 = gauss_rule(p + 2);
            BasisTable1D Tt = tabulate(kvtr, n, r2, 0);
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(mtr, mtr);
            Eigen::MatrixXd rk = Eigen::MatrixXd::Zero(mtr, 2);
            for (int eb = 0; eb < n; ++eb)
                for (int g = 0; g < p + 2; ++g) {
                    double t = mesh_point(n, eb, r2.x[g]);
                    double w = r2.w[g] / n;
                    Vec2 zeta = edge_param(e, t);
                    Mat2 J = F.jacobian(zeta);
                    Vec2 tang = edge_vertical(e) ? J.col(1) : J.col(0);
                    double arc = tang.norm();
                    Vec2 nph = (adjugate(J).transpose() * edge_normal(e)).normalized();
                    Vec2 x = F.map(zeta);
                    Vec2 tex = prob.traction ? prob.traction(x, nph) : prob.exact.stress(x) * nph;
                    for (int a = 0; a <= ptr; ++a) {
                        int ia = Tt.first[eb] + a;
                        double Ba = Tt.val(eb, a, g);
                        for (int b = 0; b <= ptr; ++b)
                            M(ia, Tt.first[eb] + b) += Ba * Tt.val(eb, b, g) / arc * w;
                        rk(ia, 0) += Ba * tex(0) * w;
                        rk(ia, 1) += Ba * tex(1) * w;
                    }
                }
            Eigen::MatrixXd ck = M.ldlt().solve(rk);
            for (int a = 0; a < mtr; ++a)
                for (int k = 0; k < 2; ++k) {
                    int gsd = dofs.stress_gid(be.patch, k, D[a]);
                    aw.constrained[gsd] = 1;
                    aw.cval[gsd] = dofs.stress_sign(be.patch, k, D[a]) * orient * ck(a, k);
                }
        }
    }

    aw.K.resize(N, N);
    aw.K.setFromTriplets(trips.begin(), trips.end());
    aw.rhs = std::move(rhs);
    return aw;
}

WeakSolution solve_weak(const WeakProblem& prob, int p, int r, int n, int quad_pts) {
    WeakSolution sol;
    sol.dofs = couple_weak_dofs(prob.domain, p, r, n);
    sol.domain = prob.domain;
    AssembledWeak aw = assemble_weak(sol.dofs, prob, quad_pts);

    int N = sol.dofs.total();
    std::vector<int> fidx(N, -1);
    int nf = 0;
    for (int g = 0; g < N; ++g)
        if (!aw.constrained[g]) fidx[g] = nf++;

    Eigen::VectorXd rr(nf);
    for (int g = 0; g < N; ++g)
        if (fidx[g] >= 0) rr[fidx[g]] = aw.rhs[g];
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(aw.K.nonZeros());
    for (int j = 0; j < aw.K.outerSize(); ++j)
        for (Eigen::SparseMatrix<double>::InnerIterator it(aw.K, j); it; ++it) {
            int i = static_cast<int>(it.row());
            if (aw.constrained[i]) continue;
            if (aw.constrained[j])
                rr[fidx[i]] -= it.value() * aw.cval[j];
            else
                trips.emplace_back(fidx[i], fidx[j], it.value());
        }
    Eigen::SparseMatrix<double> Kr(nf, nf);
    Kr.setFromTriplets(trips.begin(), trips.end());

    SolveReport rep;
    Eigen::VectorXd zf = solve_sparse(Kr, rr, &rep);
    sol.residual = rep.residual;
    sol.unknowns = nf;
    sol.z.resize(N);
    for (int g = 0; g < N; ++g) sol.z[g] = aw.constrained[g] ? aw.cval[g] : zf[fidx[g]];

    const DeRhamSpaces& sp = sol.dofs.sp;
    sol.fields.resize(sol.dofs.n_patches);
    for (int patch = 0; patch < sol.dofs.n_patches; ++patch) {
        WeakSolution::PatchFields& f = sol.fields[patch];
        int d1 = sp.flux1.dim(), d2 = sp.flux2.dim();
        for (int k = 0; k < 2; ++k) {
            f.s[k][0].space = sp.flux1;
            f.s[k][0].c.resize(d1);
            for (int i = 0; i < d1; ++i)
                f.s[k][0].c[i] = sol.dofs.stress_sign(patch, k, i) *
                                 sol.z[sol.dofs.stress_gid(patch, k, i)];
            f.s[k][1].space = sp.flux2;
            f.s[k][1].c.resize(d2);
            for (int i = 0; i < d2; ++i)
                f.s[k][1].c[i] = sol.dofs.stress_sign(patch, k, d1 + i) *
                                 sol.z[sol.dofs.stress_gid(patch, k, d1 + i)];
            f.u[k].space = sp.density;
            f.u[k].c.resize(sp.density.dim());
            for (int i = 0; i < sp.density.dim(); ++i)
                f.u[k].c[i] = sol.z[sol.dofs.disp_gid(patch, k, i)];
        }
        f.q.space = sp.pressure;
        f.q.c.resize(sp.pressure.dim());
        for (int i = 0; i < sp.pressure.dim(); ++i)
            f.q.c[i] = sol.z[sol.dofs.mult_gid(patch, i)];
    }
    return sol;
}

Mat2 WeakSolution::stress_at(int patch, const Vec2& zeta) const {
    Mat2 J = domain.patches[patch]->jacobian(zeta);
    double det = J.determinant();
    const PatchFields& f = fields[patch];
    Mat2 out;
    for (int k = 0; k < 2; ++k) {
        Vec2 vh(f.s[k][0].value(zeta(0), zeta(1)), f.s[k][1].value(zeta(0), zeta(1)));
        out.row(k) = (J * vh / det).transpose();
    }
    return out;
}

Vec2 WeakSolution::div_stress_at(int patch, const Vec2& zeta) const {
    double det = domain.patches[patch]->jacobian(zeta).determinant();
    const PatchFields& f = fields[patch];
    return {(f.s[0][0].value(zeta(0), zeta(1), 1, 0) + f.s[0][1].value(zeta(0), zeta(1), 0, 1)) /
                det,
            (f.s[1][0].value(zeta(0), zeta(1), 1, 0) + f.s[1][1].value(zeta(0), zeta(1), 0, 1)) /
                det};
}

Vec2 WeakSolution::displacement_at(int patch, const Vec2& zeta) const {
    double det = domain.patches[patch]->jacobian(zeta).determinant();
    const PatchFields& f = fields[patch];
    return {f.u[0].value(zeta(0), zeta(1)) / det, f.u[1].value(zeta(0), zeta(1)) / det};
}

double WeakSolution::multiplier_at(int patch, const Vec2& zeta) const {
    return fields[patch].q.value(zeta(0), zeta(1));
}

FieldErrors weak_errors(const WeakSolution& sol, const ElasticBundle& exact, int quad_pts) {
    const DeRhamSpaces& sp = sol.dofs.sp;
    int n = sp.n;
    int q = quad_pts > 0 ? quad_pts : sp.p + 2;
    const GaussRule& rule = gauss_rule(q);
    double ds2 = 0, dd2 = 0, du2 = 0, dq2 = 0;
    for (int patch = 0; patch < sol.dofs.n_patches; ++patch) {
        const GeometryMap& F = *sol.domain.patches[patch];
        const WeakSolution::PatchFields& f = sol.fields[patch];
        for (int e2 = 0; e2 < n; ++e2)
            for (int e1 = 0; e1 < n; ++e1)
                for (int g2 = 0; g2 < q; ++g2)
                    for (int g1 = 0; g1 < q; ++g1) {
                        double z1 = mesh_point(n, e1, rule.x[g1]);
                        double z2 = mesh_point(n, e2, rule.x[g2]);
                        double wq = rule.w[g1] * rule.w[g2] / (n * n);
                        Vec2 zeta(z1, z2);
                        Mat2 J = F.jacobian(zeta);
                        double det = J.determinant();
                        Vec2 x = F.map(zeta);
                        double m = det * wq;

                        Mat2 sh;
                        Vec2 dh;
                        for (int k = 0; k < 2; ++k) {
                            Vec2 vh(f.s[k][0].value(z1, z2), f.s[k][1].value(z1, z2));
                            sh.row(k) = (J * vh / det).transpose();
                            dh(k) = (f.s[k][0].value(z1, z2, 1, 0) +
                                     f.s[k][1].value(z1, z2, 0, 1)) /
                                    det;
                        }
                        Vec2 uh(f.u[0].value(z1, z2) / det, f.u[1].value(z1, z2) / det);
                        double qh = f.q.value(z1, z2);

                        ds2 += (exact.stress(x) - sh).squaredNorm() * m;
                        dd2 += (exact.body_force(x) - dh).squaredNorm() * m;
                        du2 += (exact.displacement(x) - uh).squaredNorm() * m;
                        double dq = exact.multiplier(x) - qh;
                        dq2 += dq * dq * m;
                    }
    }
    FieldErrors err;
    err.sigma_l2 = std::sqrt(ds2);
    err.div_l2 = std::sqrt(dd2);
    err.sigma_hdiv = std::sqrt(ds2 + dd2);
    err.u_l2 = std::sqrt(du2);
    err.p_l2 = std::sqrt(dq2);
    return err;
}

double max_flux_jump(const WeakSolution& sol, int samples) {
    double worst = 0;
    for (const Interface& f : sol.domain.interfaces) {
        for (int i = 0; i < samples; ++i) {
            double t = (i + 0.5) / samples;
            double tb = f.reversed ? 1.0 - t : t;
            Vec2 za = edge_param(f.edge_a, t);
            Vec2 zb = edge_param(f.edge_b, tb);
            Mat2 J = sol.domain.patches[f.patch_a]->jacobian(za);
            Vec2 nph = (adjugate(J).transpose() * edge_normal(f.edge_a)).normalized();
            Vec2 jump = (sol.stress_at(f.patch_a, za) - sol.stress_at(f.patch_b, zb)) * nph;
            worst = std::max(worst, jump.cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

}  // namespace iga
