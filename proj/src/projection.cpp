#include "iga/projection.hpp"

#include <cassert>
#include <cmath>

namespace iga {

std::vector<DualFunctional> deboor_fix_functionals(const KnotVector& kv) {
    const int p = kv.p;
    double pfac = 1.0;
    for (int k = 2; k <= p; ++k) pfac *= k;

    std::vector<DualFunctional> out(kv.n());
    for (int i = 0; i < kv.n(); ++i) {
        // middle nonempty span of the support
        std::vector<int> spans;
        for (int j = i; j <= i + p; ++j)
            if (kv.knots[j + 1] > kv.knots[j]) spans.push_back(j);
        assert(!spans.empty());
        int j = spans[spans.size() / 2];
        double tau = 0.5 * (kv.knots[j] + kv.knots[j + 1]);

        // psi(y) = prod_k (knot_{i+k} - y) expanded in powers of (y - tau)
        std::vector<double> poly{1.0};
        for (int k = 1; k <= p; ++k) {
            double root = kv.knots[i + k] - tau;
            std::vector<double> nxt(poly.size() + 1, 0.0);
            for (size_t s = 0; s < poly.size(); ++s) {
                nxt[s] += poly[s] * root;
                nxt[s + 1] -= poly[s];
            }
            poly = std::move(nxt);
        }
        DualFunctional d;
        d.tau = tau;
        d.w.resize(p + 1);
        double fac = 1.0;  // (p - r)!
        for (int k = 2; k <= p; ++k) fac *= k;
        for (int r = 0; r <= p; ++r) {
            double sign = ((p - r) % 2 == 0) ? 1.0 : -1.0;
            d.w[r] = sign * fac * poly[p - r] / pfac;
            if (r < p) fac /= (p - r);
        }
        out[i] = std::move(d);
    }
    return out;
}

Eigen::VectorXd deboor_fix(const KnotVector& kv, const Smooth1D& f) {
    auto fs = deboor_fix_functionals(kv);
    Eigen::VectorXd c(kv.n());
    for (int i = 0; i < kv.n(); ++i) {
        double v = 0.0;
        for (int r = 0; r <= kv.p; ++r) v += fs[i].w[r] * f.d(r, fs[i].tau);
        c[i] = v;
    }
    return c;
}

namespace {

// Derivative of order r of the level-times antiderivative of f.
double level_deriv(const KnotVector& spans, int q, int level, const Smooth1D& f, int r,
                   double z) {
    if (r >= level) return f.d(r - level, z);
    int m = level - r;
    if (m == 1) return integrate_to(spans, q, z, [&](double t) { return f.d(0, t); });
    assert(m == 2);
    return integrate_to(spans, q, z, [&](double t) { return (z - t) * f.d(0, t); });
}

}  // namespace

Spline1D project_1d(const KnotVector& kv, int level, const Smooth1D& f) {
    assert(level >= 0 && level <= 2);
    KnotVector K = kv;
    for (int l = 0; l < level; ++l) K = raised_space(K);
    int q = K.p + 2;
    Smooth1D lifted{[&](int r, double z) { return level_deriv(kv, q, level, f, r, z); }};
    Eigen::VectorXd C = deboor_fix(K, lifted);

    std::vector<double> c(C.data(), C.data() + C.size());
    for (int l = 0; l < level; ++l) {
        c = derive_coeffs(K, c);
        K = derived_space(K);
    }
    assert(K.p == kv.p && K.knots == kv.knots);
    return {kv, Eigen::Map<Eigen::VectorXd>(c.data(), c.size())};
}

TensorSpline project_2d(const TensorSpace& S, int lev1, int lev2, const Smooth2D& f) {
    KnotVector K1 = S.kv1, K2 = S.kv2;
    for (int l = 0; l < lev1; ++l) K1 = raised_space(K1);
    for (int l = 0; l < lev2; ++l) K2 = raised_space(K2);
    int q = std::max(K1.p, K2.p) + 2;

    auto H = [&](int r1, int r2, double z1, double z2) -> double {
        if (r1 >= lev1) {
            Smooth1D g2{[&](int r, double z) { return f.d(r1 - lev1, r, z1, z); }};
            return level_deriv(S.kv2, q, lev2, g2, r2, z2);
        }
        int m1 = lev1 - r1;
        Smooth1D g2{[&](int r, double z) {
            auto inner = [&](double t) { return f.d(0, r, t, z); };
            if (m1 == 1) return integrate_to(S.kv1, q, z1, inner);
            return integrate_to(S.kv1, q, z1,
                                [&](double t) { return (z1 - t) * inner(t); });
        }};
        return level_deriv(S.kv2, q, lev2, g2, r2, z2);
    };

    auto f1 = deboor_fix_functionals(K1);
    auto f2 = deboor_fix_functionals(K2);
    TensorSpace R{K1, K2};
    TensorSpline T{R, Eigen::VectorXd::Zero(R.dim())};
    for (int j2 = 0; j2 < K2.n(); ++j2)
        for (int j1 = 0; j1 < K1.n(); ++j1) {
            double v = 0.0;
            for (int r1 = 0; r1 <= K1.p; ++r1) {
                if (f1[j1].w[r1] == 0.0) continue;
                double inner = 0.0;
                for (int r2 = 0; r2 <= K2.p; ++r2) {
                    if (f2[j2].w[r2] == 0.0) continue;
                    inner += f2[j2].w[r2] * H(r1, r2, f1[j1].tau, f2[j2].tau);
                }
                v += f1[j1].w[r1] * inner;
            }
            T.c[R.index(j1, j2)] = v;
        }
    for (int l = 0; l < lev1; ++l) T = tensor_derive1(T);
    for (int l = 0; l < lev2; ++l) T = tensor_derive2(T);
    assert(T.space.kv1.knots == S.kv1.knots && T.space.kv2.knots == S.kv2.knots);
    return T;
}

Smooth1D basis_smooth(const KnotVector& kv, int i) {
    return Smooth1D{[kv, i](int r, double z) {
        Eigen::MatrixXd tab;
        kv.eval_basis(z, r, tab);
        int first = kv.first_active(z);
        if (i < first || i > first + kv.p) return 0.0;
        return tab(i - first, r);
    }};
}

}  // namespace iga
