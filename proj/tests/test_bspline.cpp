#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "iga/bspline.hpp"

using namespace iga;

namespace {

std::mt19937 rng(20240817);
double rand01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

TEST_CASE("open knot vector construction") {
    auto kv = KnotVector::from_breakpoints(2, {0.0, 0.5, 1.0}, 1);
    std::vector<double> expect{0, 0, 0, 0.5, 1, 1, 1};
    CHECK(kv.knots == expect);
    CHECK(kv.n() == 4);

    auto kv2 = KnotVector::from_breakpoints(3, {0.0, 0.25, 0.5, 0.75, 1.0}, 0);
    CHECK(kv2.n() == 13);

    // dim = (#interior breakpoints)(p - r) + p + 1
    for (int p = 1; p <= 4; ++p)
        for (int r = -1; r < p; ++r)
            for (int ne : {1, 2, 5, 8}) {
                auto u = KnotVector::uniform(p, ne, r);
                CHECK(u.n() == (ne - 1) * (p - r) + p + 1);
                CHECK(u.domain_start() == 0.0);
                CHECK(u.domain_end() == 1.0);
            }
}

TEST_CASE("span lookup respects right continuity and the left limit at 1") {
    auto kv = KnotVector::uniform(2, 4, 0);
    CHECK(kv.span_index(0.0) == 2);
    CHECK(kv.span_index(0.25) == 4);   // lands in [0.25, 0.5)
    CHECK(kv.span_index(0.5 - 1e-12) == 4);
    CHECK(kv.span_index(1.0) == kv.n() - 1);

    auto disc = KnotVector::uniform(1, 2, -1);  // knots 0,0,.5,.5,1,1
    CHECK(disc.span_index(0.5) == 3);
    CHECK(disc.span_index(1.0) == 3);
}

TEST_CASE("basis evaluation matches the direct recursion oracle") {
    Eigen::MatrixXd tab;
    for (int p : {1, 2, 3, 4}) {
        for (int r : {-1, 0, p - 1}) {
            if (r >= p) continue;
            auto kv = KnotVector::uniform(p, 5, r);
            for (int rep = 0; rep < 30; ++rep) {
                double z = (rep == 0) ? 0.0 : (rep == 1 ? 1.0 : rand01());
                kv.eval_basis(z, 0, tab);
                int first = kv.first_active(z);
                for (int i = 0; i < kv.n(); ++i) {
                    double direct = kv.eval_one(i, z);
                    double fast = (i >= first && i <= first + p) ? tab(i - first, 0) : 0.0;
                    CHECK(fast == doctest::Approx(direct).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("partition of unity and derivative sums") {
    for (int p : {2, 3, 4}) {
        auto kv = KnotVector::uniform(p, 6, p - 2);
        Eigen::MatrixXd tab;
        for (int rep = 0; rep < 25; ++rep) {
            double z = (rep == 0) ? 1.0 : rand01();
            kv.eval_basis(z, 2, tab);
            double s0 = tab.col(0).sum(), s1 = tab.col(1).sum(), s2 = tab.col(2).sum();
            CHECK(s0 == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(std::abs(s1) < 1e-9);
            CHECK(std::abs(s2) < 1e-7);
        }
    }
}

TEST_CASE("derivatives agree with central differences") {
    const double h = 1e-5;
    for (int p : {2, 3}) {
        auto kv = KnotVector::uniform(p, 4, 0);
        Eigen::MatrixXd tab, tp, tm;
        for (int rep = 0; rep < 20; ++rep) {
            double z = 0.05 + 0.9 * rand01();  // keep z +- h inside one span region
            kv.eval_basis(z, 1, tab);
            kv.eval_basis(z + h, 0, tp);
            kv.eval_basis(z - h, 0, tm);
            if (kv.span_index(z + h) != kv.span_index(z - h)) continue;
            for (int a = 0; a <= p; ++a) {
                double fd = (tp(a, 0) - tm(a, 0)) / (2 * h);
                CHECK(tab(a, 1) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
            }
        }
    }
}

TEST_CASE("derivative coefficient map") {
    auto kv = KnotVector::uniform(3, 5, 1);
    std::vector<double> c(kv.n());
    for (auto& v : c) v = 2 * rand01() - 1;
    auto kd = derived_space(kv);
    auto d = derive_coeffs(kv, c);
    CHECK(static_cast<int>(d.size()) == kd.n());
    CHECK(kd.p == kv.p - 1);
    CHECK(kd.breakpoints() == kv.breakpoints());

    Spline1D f{kv, Eigen::Map<Eigen::VectorXd>(c.data(), c.size())};
    Spline1D g{kd, Eigen::Map<Eigen::VectorXd>(d.data(), d.size())};
    for (int rep = 0; rep < 20; ++rep) {
        double z = rand01();
        CHECK(g.value(z) == doctest::Approx(f.deriv(z)).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("antiderivative coefficient map") {
    auto kv = KnotVector::uniform(2, 4, 0);
    std::vector<double> c(kv.n());
    for (auto& v : c) v = 2 * rand01() - 1;
    auto kr = raised_space(kv);
    auto C = antiderive_coeffs(kv, c);
    CHECK(static_cast<int>(C.size()) == kr.n());
    CHECK(kr.p == kv.p + 1);
    CHECK(C[0] == 0.0);

    // d/dz antiderivative = original function
    auto back = derive_coeffs(kr, C);
    REQUIRE(back.size() == c.size());
    for (size_t i = 0; i < c.size(); ++i)
        CHECK(back[i] == doctest::Approx(c[i]).epsilon(1e-13).scale(1.0));

    // value at t equals the composite Gauss integral over [0, t]
    Spline1D f{kv, Eigen::Map<Eigen::VectorXd>(c.data(), c.size())};
    Spline1D F{kr, Eigen::Map<Eigen::VectorXd>(C.data(), C.size())};
    for (double t : {0.3, 0.77, 1.0}) {
        double q = integrate_to(kv, kv.p + 2, t, [&](double z) { return f.value(z); });
        CHECK(F.value(t) == doctest::Approx(q).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("single basis antiderivative step") {
    auto kv = KnotVector::uniform(3, 4, 0);
    for (int a = 0; a < kv.n(); ++a) {
        double s = basis_integral(kv, a);
        double q = integrate_to(kv, kv.p + 2, 1.0,
                                [&](double z) { return kv.eval_one(a, z); });
        CHECK(s == doctest::Approx(q).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("tensor space dimensions and evaluation") {
    TensorSpace S{KnotVector::uniform(2, 4, 0), KnotVector::uniform(2, 4, 0)};
    CHECK(S.dim() == 81);

    TensorSpline f{S, Eigen::VectorXd::Random(S.dim())};
    // compare against the 1D factorization at a few points
    for (int rep = 0; rep < 10; ++rep) {
        double z1 = rand01(), z2 = rand01();
        Eigen::MatrixXd t1, t2;
        S.kv1.eval_basis(z1, 1, t1);
        S.kv2.eval_basis(z2, 1, t2);
        int f1 = S.kv1.first_active(z1), f2 = S.kv2.first_active(z2);
        double v = 0, d12 = 0;
        for (int a = 0; a <= S.kv1.p; ++a)
            for (int b = 0; b <= S.kv2.p; ++b) {
                double cab = f.c[S.index(f1 + a, f2 + b)];
                v += cab * t1(a, 0) * t2(b, 0);
                d12 += cab * t1(a, 1) * t2(b, 1);
            }
        CHECK(f.value(z1, z2) == doctest::Approx(v).epsilon(1e-13).scale(1.0));
        CHECK(f.value(z1, z2, 1, 1) == doctest::Approx(d12).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("gauss rules on [0,1]") {
    const auto& g1 = gauss_rule(1);
    CHECK(g1.x[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g1.w[0] == doctest::Approx(1.0).epsilon(1e-15));

    const auto& g2 = gauss_rule(2);
    CHECK(g2.x[0] == doctest::Approx(0.5 - 0.5 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(g2.x[1] == doctest::Approx(0.5 + 0.5 / std::sqrt(3.0)).epsilon(1e-14));

    const auto& g3 = gauss_rule(3);
    CHECK(g3.x[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g3.w[1] == doctest::Approx(4.0 / 9.0).epsilon(1e-14));

    // a q-point rule integrates monomials up to degree 2q-1 exactly
    for (int q = 1; q <= 6; ++q) {
        const auto& g = gauss_rule(q);
        for (int k = 0; k <= 2 * q - 1; ++k) {
            double s = 0;
            for (int i = 0; i < q; ++i) s += g.w[i] * std::pow(g.x[i], k);
            CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("composite integration with a partial final span") {
    auto kv = KnotVector::uniform(2, 5, 0);
    auto f = [](double z) { return std::exp(z); };
    for (double t : {0.13, 0.2, 0.5, 0.93, 1.0}) {
        double q = integrate_to(kv, 4, t, f);
        CHECK(q == doctest::Approx(std::exp(t) - 1.0).epsilon(1e-12));
    }
}

TEST_CASE("basis tables match pointwise evaluation") {
    int n = 6;
    auto kv = KnotVector::uniform(3, n, 1);
    const auto& rule = gauss_rule(4);
    auto tab = tabulate(kv, n, rule, 2);
    Eigen::MatrixXd ref;
    for (int e = 0; e < n; ++e)
        for (int g = 0; g < 4; ++g) {
            double z = mesh_point(n, e, rule.x[g]);
            kv.eval_basis(z, 2, ref);
            CHECK(tab.first[e] == kv.first_active(z));
            for (int a = 0; a <= kv.p; ++a)
                for (int d = 0; d <= 2; ++d)
                    CHECK(tab.der(e, a, g, d) ==
                          doctest::Approx(ref(a, d)).epsilon(1e-13).scale(1.0));
        }
}
