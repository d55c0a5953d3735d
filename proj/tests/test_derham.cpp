#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "iga/derham.hpp"

using namespace iga;

namespace {

std::mt19937 rng(4242);
double rand01() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::string data_file(const char* name) { return std::string(IGA_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("space dimensions") {
    auto s = DeRhamSpaces::make(2, 0, 4);
    CHECK(s.scalar.dim() == 81);
    CHECK(s.flux1.dim() == 9 * 8);
    CHECK(s.flux2.dim() == 8 * 9);
    CHECK(s.density.dim() == 64);
    CHECK(s.pressure.dim() == 25);

    auto s3 = DeRhamSpaces::make(3, 1, 4);
    CHECK(s3.scalar.kv1.n() == 3 * 2 + 4);
    CHECK(s3.flux1.kv2.p == 2);
    CHECK(s3.pressure.kv1.p == 2);
}

TEST_CASE("flux pullback commutes with divergence") {
    auto v = [](const Vec2& x) { return Vec2(std::sin(x[0] + 2 * x[1]), std::cos(x[0] - x[1])); };
    auto div_v = [](const Vec2& x) {
        return std::cos(x[0] + 2 * x[1]) + std::sin(x[0] - x[1]);
    };
    auto disk = load_patches(data_file("disk_five_patch.json"));
    std::vector<std::shared_ptr<GeometryMap>> maps{curved_square_map(), disk.patches[1],
                                                   disk.patches[0]};
    const double h = 1e-6;
    for (const auto& F : maps) {
        auto vhat = [&](const Vec2& z) { return pull_flux(F->jacobian(z), v(F->map(z))); };
        for (int rep = 0; rep < 10; ++rep) {
            Vec2 z(0.05 + 0.9 * rand01(), 0.05 + 0.9 * rand01());
            double fd = (vhat(z + Vec2(h, 0))[0] - vhat(z - Vec2(h, 0))[0]) / (2 * h) +
                        (vhat(z + Vec2(0, h))[1] - vhat(z - Vec2(0, h))[1]) / (2 * h);
            double want = pull_density(F->jacobian(z), div_v(F->map(z)));
            CHECK(std::abs(fd - want) < 1e-9 * (1 + std::abs(want)));
        }
    }
}

TEST_CASE("scalar pullback commutes with curl") {
    auto phi = [](const Vec2& x) { return std::sin(x[0]) * std::cos(2 * x[1]); };
    auto curl_phi = [](const Vec2& x) {
        // (d2 phi, -d1 phi)
        return Vec2(-2 * std::sin(x[0]) * std::sin(2 * x[1]),
                    -std::cos(x[0]) * std::cos(2 * x[1]));
    };
    auto disk = load_patches(data_file("disk_five_patch.json"));
    std::vector<std::shared_ptr<GeometryMap>> maps{curved_square_map(), disk.patches[2]};
    const double h = 1e-6;
    for (const auto& F : maps) {
        auto phat = [&](const Vec2& z) { return phi(F->map(z)); };
        for (int rep = 0; rep < 10; ++rep) {
            Vec2 z(0.05 + 0.9 * rand01(), 0.05 + 0.9 * rand01());
            Vec2 curl_hat((phat(z + Vec2(0, h)) - phat(z - Vec2(0, h))) / (2 * h),
                          -(phat(z + Vec2(h, 0)) - phat(z - Vec2(h, 0))) / (2 * h));
            Vec2 want = pull_flux(F->jacobian(z), curl_phi(F->map(z)));
            CHECK((curl_hat - want).norm() < 1e-9 * (1 + want.norm()));
        }
    }
}

TEST_CASE("row sums of adjugate partials vanish") {
    auto disk = load_patches(data_file("disk_five_patch.json"));
    auto four = load_patches(data_file("four_patch_square.json"));
    std::vector<std::shared_ptr<GeometryMap>> maps{curved_square_map(), four.patches[2],
                                                   disk.patches[0], disk.patches[3]};
    for (const auto& F : maps)
        for (int rep = 0; rep < 15; ++rep) {
            Vec2 z(rand01(), rand01());
            auto g = geom_at(*F, z);
            for (int k = 0; k < 2; ++k)
                CHECK(std::abs(g.dadj[0](0, k) + g.dadj[1](1, k)) < 1e-11);
        }
}

TEST_CASE("parametric divergence of flux bases lies in the density space") {
    for (int p : {2, 3}) {
        for (int r : {0, p - 2}) {
            auto s = DeRhamSpaces::make(p, r, 3);
            for (int comp = 1; comp <= 2; ++comp) {
                const auto& S = comp == 1 ? s.flux1 : s.flux2;
                for (int b = 0; b < S.dim(); ++b) {
                    TensorSpline f{S, Eigen::VectorXd::Zero(S.dim())};
                    f.c[b] = 1.0;
                    TensorSpline d = comp == 1 ? tensor_derive1(f) : tensor_derive2(f);
                    CHECK(d.space.kv1.p == s.density.kv1.p);
                    CHECK(d.space.kv2.p == s.density.kv2.p);
                    CHECK(d.space.kv1.knots == s.density.kv1.knots);
                    CHECK(d.space.kv2.knots == s.density.kv2.knots);
                    for (int rep = 0; rep < 3; ++rep) {
                        double z1 = rand01(), z2 = rand01();
                        double direct = comp == 1 ? f.value(z1, z2, 1, 0) : f.value(z1, z2, 0, 1);
                        CHECK(std::abs(d.value(z1, z2) - direct) < 1e-11);
                    }
                }
            }
        }
    }
}

TEST_CASE("identity rows pull back into the flux spaces of the four patch net") {
    auto four = load_patches(data_file("four_patch_square.json"));
    auto bez = DeRhamSpaces::make(2, 0, 1);
    for (const auto& P : four.patches) {
        auto sp = std::dynamic_pointer_cast<SplineMap>(P);
        REQUIRE(sp);
        // columns of adj(J) are (d2 F2, -d1 F2) and (-d2 F1, d1 F1)
        std::array<std::array<TensorSpline, 2>, 2> cols = {
            std::array<TensorSpline, 2>{tensor_derive2(sp->y), tensor_derive1(sp->y)},
            std::array<TensorSpline, 2>{tensor_derive2(sp->x), tensor_derive1(sp->x)}};
        std::array<std::array<double, 2>, 2> sgn = {std::array<double, 2>{1.0, -1.0},
                                                    std::array<double, 2>{-1.0, 1.0}};
        for (int k = 0; k < 2; ++k) {
            CHECK(cols[k][0].space.kv1.p == bez.flux1.kv1.p);
            CHECK(cols[k][0].space.kv2.p == bez.flux1.kv2.p);
            CHECK(cols[k][1].space.kv1.p == bez.flux2.kv1.p);
            CHECK(cols[k][1].space.kv2.p == bez.flux2.kv2.p);
            for (int rep = 0; rep < 20; ++rep) {
                Vec2 z(rand01(), rand01());
                Mat2 adj = adjugate(P->jacobian(z));
                Vec2 got(sgn[k][0] * cols[k][0].value(z[0], z[1]),
                         sgn[k][1] * cols[k][1].value(z[0], z[1]));
                CHECK((got - Vec2(adj(0, k), adj(1, k))).norm() < 1e-10);
            }
        }
    }
}
