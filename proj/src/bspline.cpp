#include "iga/bspline.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>

namespace iga {

KnotVector KnotVector::from_breakpoints(int p, const std::vector<double>& breaks, int r) {
    assert(breaks.size() >= 2);
    assert(r >= -1 && r < p + 1);
    KnotVector kv;
    kv.p = p;
    int mult = p - r;
    kv.knots.insert(kv.knots.end(), p + 1, breaks.front());
    for (size_t k = 1; k + 1 < breaks.size(); ++k)
        kv.knots.insert(kv.knots.end(), mult, breaks[k]);
    kv.knots.insert(kv.knots.end(), p + 1, breaks.back());
    return kv;
}

KnotVector KnotVector::uniform(int p, int n_elems, int r) {
    std::vector<double> breaks(n_elems + 1);
    for (int i = 0; i <= n_elems; ++i) breaks[i] = static_cast<double>(i) / n_elems;
    return from_breakpoints(p, breaks, r);
}

int KnotVector::span_index(double z) const {
    int nn = n();
    auto it = std::upper_bound(knots.begin() + p, knots.begin() + nn + 1, z);
    int i = static_cast<int>(it - knots.begin()) - 1;
    return std::clamp(i, p, nn - 1);
}

void KnotVector::eval_basis(double z, int nders, Eigen::MatrixXd& out) const {
    int span = span_index(z);
    out.setZero(p + 1, nders + 1);

    Eigen::MatrixXd ndu(p + 1, p + 1);
    std::vector<double> left(p + 1), right(p + 1);
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = z - knots[span + 1 - j];
        right[j] = knots[span + j] - z;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];
            double temp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu(j, j) = saved;
    }
    for (int j = 0; j <= p; ++j) out(j, 0) = ndu(j, p);
    int kmax = std::min(nders, p);
    if (kmax == 0) return;

    Eigen::MatrixXd a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= kmax; ++k) {
            double d = 0.0;
            int rk = r - k, pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            int j1 = (rk >= -1) ? 1 : -rk;
            int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            out(r, k) = d;
            std::swap(s1, s2);
        }
    }
    double fac = p;
    for (int k = 1; k <= kmax; ++k) {
        for (int j = 0; j <= p; ++j) out(j, k) *= fac;
        fac *= (p - k);
    }
}

double KnotVector::eval_one(int i, double z) const {
    const double zend = domain_end();
    std::function<double(int, int)> rec = [&](int j, int d) -> double {
        if (d == 0) {
            bool in = knots[j] <= z && z < knots[j + 1];
            if (z == zend && knots[j] < knots[j + 1] && knots[j + 1] == zend) in = true;
            return in ? 1.0 : 0.0;
        }
        double v = 0.0;
        double den1 = knots[j + d] - knots[j];
        if (den1 > 0.0) v += (z - knots[j]) / den1 * rec(j, d - 1);
        double den2 = knots[j + d + 1] - knots[j + 1];
        if (den2 > 0.0) v += (knots[j + d + 1] - z) / den2 * rec(j + 1, d - 1);
        return v;
    };
    return rec(i, p);
}

std::vector<double> KnotVector::breakpoints() const {
    std::vector<double> b;
    for (double k : knots)
        if (b.empty() || k != b.back()) b.push_back(k);
    return b;
}

KnotVector derived_space(const KnotVector& kv) {
    KnotVector d;
    d.p = kv.p - 1;
    d.knots.assign(kv.knots.begin() + 1, kv.knots.end() - 1);
    return d;
}

KnotVector raised_space(const KnotVector& kv) {
    KnotVector r;
    r.p = kv.p + 1;
    r.knots.reserve(kv.knots.size() + 2);
    r.knots.push_back(kv.knots.front());
    r.knots.insert(r.knots.end(), kv.knots.begin(), kv.knots.end());
    r.knots.push_back(kv.knots.back());
    return r;
}

std::vector<double> derive_coeffs(const KnotVector& kv, const std::vector<double>& c) {
    assert(static_cast<int>(c.size()) == kv.n());
    std::vector<double> d(kv.n() - 1);
    for (int i = 0; i + 1 < kv.n(); ++i) {
        double den = kv.knots[i + kv.p + 1] - kv.knots[i + 1];
        d[i] = den > 0.0 ? kv.p * (c[i + 1] - c[i]) / den : 0.0;
    }
    return d;
}

std::vector<double> antiderive_coeffs(const KnotVector& kv, const std::vector<double>& c) {
    assert(static_cast<int>(c.size()) == kv.n());
    std::vector<double> C(kv.n() + 1);
    C[0] = 0.0;
    for (int j = 0; j < kv.n(); ++j)
        C[j + 1] = C[j] + c[j] * (kv.knots[j + kv.p + 1] - kv.knots[j]) / (kv.p + 1);
    return C;
}

double basis_integral(const KnotVector& kv, int a) {
    return (kv.knots[a + kv.p + 1] - kv.knots[a]) / (kv.p + 1);
}

namespace {
double eval_window(const KnotVector& kv, const Eigen::VectorXd& c, double z, int order) {
    Eigen::MatrixXd tab;
    kv.eval_basis(z, order, tab);
    int first = kv.first_active(z);
    double v = 0.0;
    for (int a = 0; a <= kv.p; ++a) v += c[first + a] * tab(a, order);
    return v;
}
}  // namespace

double Spline1D::value(double z) const { return eval_window(kv, c, z, 0); }
double Spline1D::deriv(double z, int order) const { return eval_window(kv, c, z, order); }

double TensorSpline::value(double z1, double z2, int d1, int d2) const {
    Eigen::MatrixXd t1, t2;
    space.kv1.eval_basis(z1, d1, t1);
    space.kv2.eval_basis(z2, d2, t2);
    int f1 = space.kv1.first_active(z1), f2 = space.kv2.first_active(z2);
    double v = 0.0;
    for (int b = 0; b <= space.kv2.p; ++b) {
        double row = 0.0;
        for (int a = 0; a <= space.kv1.p; ++a)
            row += c[space.index(f1 + a, f2 + b)] * t1(a, d1);
        v += row * t2(b, d2);
    }
    return v;
}

namespace {

// Apply a 1D coefficient map along direction 1 or 2.
template <typename Map>
TensorSpline apply_dir(const TensorSpline& f, int dir, const KnotVector& new_kv, Map&& m) {
    const auto& S = f.space;
    TensorSpace out_space = dir == 1 ? TensorSpace{new_kv, S.kv2} : TensorSpace{S.kv1, new_kv};
    TensorSpline out{out_space, Eigen::VectorXd::Zero(out_space.dim())};
    int n1 = S.kv1.n(), n2 = S.kv2.n();
    if (dir == 1) {
        std::vector<double> slice(n1);
        for (int j = 0; j < n2; ++j) {
            for (int i = 0; i < n1; ++i) slice[i] = f.c[S.index(i, j)];
            auto mapped = m(S.kv1, slice);
            for (size_t i = 0; i < mapped.size(); ++i)
                out.c[out_space.index(static_cast<int>(i), j)] = mapped[i];
        }
    } else {
        std::vector<double> slice(n2);
        for (int i = 0; i < n1; ++i) {
            for (int j = 0; j < n2; ++j) slice[j] = f.c[S.index(i, j)];
            auto mapped = m(S.kv2, slice);
            for (size_t j = 0; j < mapped.size(); ++j)
                out.c[out_space.index(i, static_cast<int>(j))] = mapped[j];
        }
    }
    return out;
}

}  // namespace

TensorSpline tensor_derive1(const TensorSpline& f) {
    return apply_dir(f, 1, derived_space(f.space.kv1), derive_coeffs);
}
TensorSpline tensor_derive2(const TensorSpline& f) {
    return apply_dir(f, 2, derived_space(f.space.kv2), derive_coeffs);
}
TensorSpline tensor_antiderive1(const TensorSpline& f) {
    return apply_dir(f, 1, raised_space(f.space.kv1), antiderive_coeffs);
}
TensorSpline tensor_antiderive2(const TensorSpline& f) {
    return apply_dir(f, 2, raised_space(f.space.kv2), antiderive_coeffs);
}

const GaussRule& gauss_rule(int q) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
    assert(q >= 1);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(q, q);
    for (int k = 1; k < q; ++k) {
        double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k - 1, k) = J(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussRule g;
    g.x.resize(q);
    g.w.resize(q);
    for (int i = 0; i < q; ++i) {
        g.x[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
        double v0 = es.eigenvectors()(0, i);
        g.w[i] = v0 * v0;
    }
    return cache.emplace(q, std::move(g)).first->second;
}

double integrate_to(const KnotVector& kv, int q, double t,
                    const std::function<double(double)>& f) {
    const auto& g = gauss_rule(q);
    auto bp = kv.breakpoints();
    double total = 0.0;
    for (size_t s = 0; s + 1 < bp.size(); ++s) {
        double a = bp[s];
        if (a >= t) break;
        double b = std::min(bp[s + 1], t);
        double h = b - a;
        for (int i = 0; i < q; ++i) total += h * g.w[i] * f(a + h * g.x[i]);
    }
    return total;
}

BasisTable1D tabulate(const KnotVector& kv, int n_elems, const GaussRule& rule, int nders) {
    BasisTable1D t;
    t.p = kv.p;
    t.n_elems = n_elems;
    t.nq = static_cast<int>(rule.x.size());
    t.nders = nders;
    t.first.resize(n_elems);
    t.data.assign(static_cast<size_t>(n_elems) * (kv.p + 1) * t.nq * (nders + 1), 0.0);
    Eigen::MatrixXd tab;
    for (int e = 0; e < n_elems; ++e) {
        t.first[e] = kv.first_active(mesh_point(n_elems, e, rule.x[0]));
        for (int g = 0; g < t.nq; ++g) {
            double z = mesh_point(n_elems, e, rule.x[g]);
            assert(kv.first_active(z) == t.first[e]);
            kv.eval_basis(z, nders, tab);
            for (int a = 0; a <= kv.p; ++a)
                for (int d = 0; d <= nders; ++d)
                    t.data[((static_cast<size_t>(e) * (kv.p + 1) + a) * t.nq + g) *
                               (nders + 1) +
                           d] = tab(a, d);
        }
    }
    return t;
}

}  // namespace iga
