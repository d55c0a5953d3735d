#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "iga/geometry.hpp"

using namespace iga;

namespace {

std::mt19937 rng(77);
double rand01() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// FD check of jacobian and jacobian_partials against map values.
void check_derivatives(const GeometryMap& F, double tol) {
    const double h = 1e-6;
    for (int rep = 0; rep < 12; ++rep) {
        Vec2 z(0.05 + 0.9 * rand01(), 0.05 + 0.9 * rand01());
        Mat2 J = F.jacobian(z);
        auto dJ = F.jacobian_partials(z);
        for (int k = 0; k < 2; ++k) {
            Vec2 e = Vec2::Zero();
            e[k] = h;
            Vec2 fd_col = (F.map(z + e) - F.map(z - e)) / (2 * h);
            CHECK((fd_col - J.col(k)).norm() < tol);
            Mat2 fd_J = (F.jacobian(z + e) - F.jacobian(z - e)) / (2 * h);
            CHECK((fd_J - dJ[k]).norm() < tol * 10);
        }
    }
}

std::string data_file(const char* name) { return std::string(IGA_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("curved square analytic map") {
    auto F = curved_square_map();
    Vec2 z(0.3, 0.4);
    CHECK(F->map(z)[0] == doctest::Approx(0.3));
    CHECK(F->map(z)[1] == doctest::Approx(0.09 + 0.4));
    CHECK(F->jacobian(z).determinant() == doctest::Approx(1.0));
    check_derivatives(*F, 1e-7);

    Mat2 A = adjugate(F->jacobian(z));
    CHECK((A * F->jacobian(z) - Mat2::Identity()).norm() < 1e-14);
}

TEST_CASE("curved square as spline patch matches the analytic map") {
    auto Fs = curved_square_spline();
    auto Fa = curved_square_map();
    for (int rep = 0; rep < 20; ++rep) {
        Vec2 z(rand01(), rand01());
        CHECK((Fs->map(z) - Fa->map(z)).norm() < 1e-14);
        CHECK((Fs->jacobian(z) - Fa->jacobian(z)).norm() < 1e-13);
        auto da = Fa->jacobian_partials(z);
        auto ds = Fs->jacobian_partials(z);
        CHECK((da[0] - ds[0]).norm() < 1e-12);
        CHECK((da[1] - ds[1]).norm() < 1e-12);
    }
}

TEST_CASE("rational quarter arc lies on the circle") {
    // 90 degree arc of radius 1: controls (1,0), (1,1) w, (0,1), w = sqrt(1/2),
    // swept linearly to radius 2 in direction 2.
    double w = std::sqrt(0.5);
    auto m = std::make_shared<RationalMap>();
    KnotVector ka{2, {0, 0, 0, 1, 1, 1}};
    KnotVector kr{1, {0, 0, 1, 1}};
    TensorSpace S{ka, kr};
    Eigen::VectorXd xw(6), yw(6), ww(6);
    const double px[3] = {1, 1, 0}, py[3] = {0, 1, 1}, pw[3] = {1, w, 1};
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 3; ++i) {
            double r = 1.0 + j;
            xw[S.index(i, j)] = r * px[i] * pw[i];
            yw[S.index(i, j)] = r * py[i] * pw[i];
            ww[S.index(i, j)] = pw[i];
        }
    m->xw = {S, xw};
    m->yw = {S, yw};
    m->w = {S, ww};

    for (int rep = 0; rep < 25; ++rep) {
        Vec2 z(rand01(), rand01());
        double r = m->map(z).norm();
        CHECK(r == doctest::Approx(1.0 + z[1]).epsilon(1e-13));
    }
    check_derivatives(*m, 2e-6);
}

TEST_CASE("newton inversion round trip") {
    for (auto F : {curved_square_map(), curved_square_spline()}) {
        for (int rep = 0; rep < 15; ++rep) {
            Vec2 z(rand01(), rand01());
            Vec2 back = invert_map(*F, F->map(z));
            CHECK((back - z).norm() < 1e-10);
        }
    }
}

TEST_CASE("four patch square net") {
    auto pc = load_patches(data_file("four_patch_square.json"));
    REQUIRE(pc.patches.size() == 4);
    REQUIRE(pc.interfaces.size() == 4);
    CHECK(interface_mismatch(pc, 50) < 1e-12);

    // corners of the big square are hit exactly
    CHECK((pc.patches[0]->map({0, 0}) - Vec2(-1, -1)).norm() < 1e-15);
    CHECK((pc.patches[1]->map({1, 0}) - Vec2(1, -1)).norm() < 1e-15);
    CHECK((pc.patches[2]->map({0, 1}) - Vec2(-1, 1)).norm() < 1e-15);
    CHECK((pc.patches[3]->map({1, 1}) - Vec2(1, 1)).norm() < 1e-15);

    // orientation preserving everywhere sampled
    for (const auto& P : pc.patches)
        for (int rep = 0; rep < 40; ++rep) {
            Vec2 z(rand01(), rand01());
            CHECK(P->jacobian(z).determinant() > 0.05);
        }

    CHECK(pc.boundary().size() == 8);
    check_derivatives(*pc.patches[0], 2e-6);
}

TEST_CASE("five patch disk net") {
    auto pc = load_patches(data_file("disk_five_patch.json"));
    REQUIRE(pc.patches.size() == 5);
    REQUIRE(pc.interfaces.size() == 8);
    CHECK(interface_mismatch(pc, 50) < 1e-12);

    // outer boundary is the circle of radius 2; boundary edges are the
    // outer edges of the four ring patches
    auto bd = pc.boundary();
    REQUIRE(bd.size() == 4);
    for (const auto& e : bd) {
        CHECK(e.patch >= 1);
        CHECK(e.edge == Edge::Right);
        for (int s = 0; s <= 20; ++s) {
            Vec2 z = edge_param(e.edge, s / 20.0);
            CHECK(pc.patches[e.patch]->map(z).norm() == doctest::Approx(2.0).epsilon(1e-13));
        }
    }

    for (const auto& P : pc.patches)
        for (int rep = 0; rep < 40; ++rep) {
            Vec2 z(rand01(), rand01());
            CHECK(P->jacobian(z).determinant() > 0.05);
        }
    check_derivatives(*pc.patches[1], 2e-5);
    check_derivatives(*pc.patches[0], 2e-6);

    // inversion works on a rational patch too
    for (int rep = 0; rep < 10; ++rep) {
        Vec2 z(rand01(), rand01());
        Vec2 back = invert_map(*pc.patches[1], pc.patches[1]->map(z));
        CHECK((pc.patches[1]->map(back) - pc.patches[1]->map(z)).norm() < 1e-11);
    }
}
