#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "iga/harness.hpp"
#include "json.hpp"

using namespace iga;

namespace {

ElasticBundle zero_exact(const Material& m) {
    return make_bundle(m, [](const D2&, const D2&) {
        return std::array<D2, 2>{d2_const(0.0), d2_const(0.0)};
    });
}

// Norms of the exact fields by mesh-doubling Gauss quadrature, refined until
// the relative change drops below reltol.  Independent of weak_errors.
std::array<double, 4> exact_norms(const ManufacturedCase& c, double reltol = 1e-11) {
    const GaussRule& rule = gauss_rule(6);
    auto pass = [&](int m) {
        std::array<double, 4> I{};
        for (const auto& P : c.domain.patches)
            for (int e1 = 0; e1 < m; ++e1)
                for (int e2 = 0; e2 < m; ++e2)
                    for (size_t g1 = 0; g1 < rule.x.size(); ++g1)
                        for (size_t g2 = 0; g2 < rule.x.size(); ++g2) {
                            Vec2 z((e1 + rule.x[g1]) / m, (e2 + rule.x[g2]) / m);
                            double w = rule.w[g1] * rule.w[g2] / (m * m) *
                                       P->jacobian(z).determinant();
                            Vec2 x = P->map(z);
                            I[0] += c.exact.stress(x).squaredNorm() * w;
                            I[1] += c.exact.body_force(x).squaredNorm() * w;
                            I[2] += c.exact.displacement(x).squaredNorm() * w;
                            double q = c.exact.multiplier(x);
                            I[3] += q * q * w;
                        }
        return I;
    };
    std::array<double, 4> prev = pass(4);
    for (int m = 8; m <= 64; m *= 2) {
        std::array<double, 4> cur = pass(m);
        double worst = 0;
        for (int k = 0; k < 4; ++k)
            worst = std::max(worst, std::abs(cur[k] - prev[k]) / std::max(cur[k], 1e-30));
        prev = cur;
        if (worst < reltol) break;
    }
    for (double& v : prev) v = std::sqrt(v);
    return prev;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("every builtin case is self consistent") {
    for (const std::string& name : builtin_case_names()) {
        ManufacturedCase c = builtin_case(name);
        double defect = bundle_defect(c);
        INFO(name, " divergence defect ", defect);
        CHECK(defect <= 1e-6);
        CHECK(c.exact.mat.mu == 1.0);
        for (const BoundaryEdge& be : c.traction_edges)
            CHECK(be.patch < static_cast<int>(c.domain.patches.size()));
    }
    CHECK(builtin_case_names().size() == 9);
    CHECK_THROWS(builtin_case("no-such-case"));
}

TEST_CASE("case presets and boundary splits") {
    auto mixed = builtin_case("curved-square-mixed");
    CHECK(mixed.default_p == 3);
    CHECK(mixed.traction_edges.size() == 3);
    CHECK(!mixed.supports_strong());
    CHECK_THROWS(mixed.strong_problem());

    auto disk = builtin_case("disk-load");
    CHECK(!disk.has_exact);
    CHECK(disk.domain.patches.size() == 5);
    // the load covers the upper-half arcs only, so two of the four outer
    // edges keep displacement data
    CHECK(disk.traction_edges.size() == 2);
    for (const BoundaryEdge& be : disk.traction_edges) {
        Vec2 mid = disk.domain.patches[be.patch]->map(edge_param(be.edge, 0.5));
        CHECK(mid[1] > 0.5);
    }

    auto strong = builtin_case("strongsym-curved");
    CHECK(strong.supports_strong());
    CHECK(strong.default_r == 1);
}

TEST_CASE("representable exact solution gives zero errors") {
    ManufacturedCase c = builtin_case("curved-square-dirichlet");
    c.exact = zero_exact(c.exact.mat);
    WeakSolution sol = solve_weak(c.weak_problem(), 2, 0, 3);
    LevelResult lv = compute_errors(c, sol);
    CHECK(lv.err.sigma_hdiv <= 1e-12);
    CHECK(lv.err.div_l2 <= 1e-12);
    CHECK(lv.err.u_l2 <= 1e-12);
    CHECK(lv.err.p_l2 <= 1e-12);
    CHECK(lv.n == 3);
    CHECK(lv.dof_sigma == sol.dofs.n_stress);
}

TEST_CASE("zero field errors match an independent quadrature of the exact norms") {
    ManufacturedCase c = builtin_case("curved-square-dirichlet");
    ManufacturedCase zero = c;
    zero.exact = zero_exact(c.exact.mat);
    // n = 8 so the fixed-order error quadrature resolves the trig fields.
    WeakSolution sol = solve_weak(zero.weak_problem(), 2, 0, 8);
    CHECK(sol.z.cwiseAbs().maxCoeff() <= 1e-12);

    LevelResult lv = compute_errors(c, sol);  // zero field against the real data
    auto ex = exact_norms(c);
    CHECK(lv.err.sigma_l2 == doctest::Approx(ex[0]).epsilon(1e-8));
    CHECK(lv.err.div_l2 == doctest::Approx(ex[1]).epsilon(1e-8));
    CHECK(lv.err.u_l2 == doctest::Approx(ex[2]).epsilon(1e-8));
    CHECK(lv.err.p_l2 == doctest::Approx(ex[3]).epsilon(1e-8));
    double hdiv = std::sqrt(ex[0] * ex[0] + ex[1] * ex[1]);
    CHECK(lv.err.sigma_hdiv == doctest::Approx(hdiv).epsilon(1e-8));
}

// Measured relative shifts at h = 1/8: about 4e-7 for p = 2 and 3e-8 for
// p = 3, both far below the discretization error the norms report.
TEST_CASE("reported errors are stable when the quadrature order doubles") {
    ManufacturedCase c = builtin_case("curved-square-dirichlet");
    WeakSolution sol = solve_weak(c.weak_problem(), 2, 0, 8);
    FieldErrors a = weak_errors(sol, c.exact, 4);
    FieldErrors b = weak_errors(sol, c.exact, 8);
    CHECK(std::abs(a.sigma_hdiv - b.sigma_hdiv) <= 1e-6 * b.sigma_hdiv);
    CHECK(std::abs(a.div_l2 - b.div_l2) <= 1e-6 * b.div_l2);
    CHECK(std::abs(a.u_l2 - b.u_l2) <= 1e-6 * b.u_l2);
    CHECK(std::abs(a.p_l2 - b.p_l2) <= 1e-6 * b.p_l2);

    WeakSolution sol3 = solve_weak(c.weak_problem(), 3, 1, 8);
    FieldErrors a3 = weak_errors(sol3, c.exact, 5);
    FieldErrors b3 = weak_errors(sol3, c.exact, 10);
    CHECK(std::abs(a3.sigma_hdiv - b3.sigma_hdiv) <= 1e-7 * b3.sigma_hdiv);
    CHECK(std::abs(a3.div_l2 - b3.div_l2) <= 1e-7 * b3.div_l2);
    CHECK(std::abs(a3.u_l2 - b3.u_l2) <= 1e-7 * b3.u_l2);
    CHECK(std::abs(a3.p_l2 - b3.p_l2) <= 1e-7 * b3.p_l2);
}

TEST_CASE("run_study writes deterministic csv and parsable artifacts") {
    std::string dir = (std::filesystem::temp_directory_path() / "iga_harness_t1").string();
    std::filesystem::remove_all(dir);

    StudyConfig cfg;
    cfg.case_name = "curved-square-dirichlet";
    cfg.levels = {2, 4};
    cfg.out_dir = dir;
    cfg.vtk = true;
    cfg.infsup = true;
    ConvergenceReport rep = run_study(cfg);

    CHECK(rep.p == 2);
    CHECK(rep.r == 0);
    REQUIRE(rep.levels.size() == 2);
    REQUIRE(rep.eoc.size() == 1);
    CHECK(rep.levels[0].n == 2);
    CHECK(rep.final_eoc()[0] > 1.5);
    CHECK(rep.levels[0].infsup_flux > 0.5);
    CHECK(rep.levels[0].infsup_th > 0.3);

    std::string stem = dir + "/curved-square-dirichlet-weak-p2-r0";
    std::string csv = slurp(stem + ".csv");
    CHECK(csv == csv_table(rep));
    std::istringstream lines(csv);
    std::string line;
    int rows = 0, cols = 0;
    while (std::getline(lines, line)) {
        ++rows;
        cols = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
        CHECK(cols == 17);
    }
    CHECK(rows == 3);

    auto j = nlohmann::json::parse(slurp(stem + ".json"));
    CHECK(j["case"] == "curved-square-dirichlet");
    CHECK(j["levels"].size() == 2);
    CHECK(j["levels"][1].contains("eoc_u_l2"));
    CHECK(j["levels"][0].contains("infsup_flux_density"));
    CHECK(j["final_eoc"]["sigma_hdiv"].get<double>() > 1.5);

    std::string vtk = slurp(stem + "-n4-patch0.vtk");
    CHECK(vtk.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
    CHECK(vtk.find("DATASET STRUCTURED_GRID") != std::string::npos);
    CHECK(vtk.find("DIMENSIONS 33 33 1") != std::string::npos);
    CHECK(vtk.find("VECTORS displacement double") != std::string::npos);
    CHECK(vtk.find("SCALARS stress_magnitude double 1") != std::string::npos);

    // bitwise repeatability
    ConvergenceReport rep2 = run_study(cfg);
    CHECK(csv_table(rep2) == csv);
    CHECK(json_summary(rep2) == json_summary(rep));
    CHECK(slurp(stem + ".csv") == csv);
}

TEST_CASE("strong formulation study converges on the identity map") {
    StudyConfig cfg;
    cfg.case_name = "strongsym-identity";
    cfg.formulation = "strong";
    cfg.levels = {4, 8};
    ConvergenceReport rep = run_study(cfg);
    CHECK(rep.p == 2);
    CHECK(rep.r == 1);
    CHECK(rep.levels[1].dof_p == 0);
    CHECK(rep.levels[1].dof_sigma == 298);
    auto fin = rep.final_eoc();
    CHECK(fin[0] >= 1.5);
    CHECK(fin[2] >= 1.5);
    CHECK(!std::isfinite(fin[3]));  // no multiplier field

    StudyConfig bad = cfg;
    bad.case_name = "curved-square-mixed";
    CHECK_THROWS(run_study(bad));
    bad.case_name = "curved-square-dirichlet";
    bad.formulation = "wrong";
    CHECK_THROWS(run_study(bad));
}

TEST_CASE("material overrides rebuild the manufactured solution") {
    ManufacturedCase big = builtin_case("quasi-incompressible-single");
    CHECK(big.exact.mat.lambda == 1e10);
    ManufacturedCase small = big;
    small.exact = small.remake({2.0, 1.0});
    Vec2 x = big.domain.patches[0]->map(Vec2(0.37, 0.41));
    // the 1/(1+lambda) terms shift the displacement itself
    CHECK((big.exact.displacement(x) - small.exact.displacement(x)).norm() > 1e-4);
    CHECK(bundle_defect(small) <= 1e-6);

    StudyConfig cfg;
    cfg.case_name = "quasi-incompressible-single";
    cfg.levels = {2};
    cfg.lambda = 2.0;
    ConvergenceReport rep = run_study(cfg);
    CHECK(rep.mat.lambda == 2.0);
    CHECK(rep.levels[0].err.u_l2 > 0);
}

TEST_CASE("demo loads produce nonzero fields and boundary stress peaks") {
    StudyConfig cfg;
    cfg.case_name = "disk-load";
    cfg.levels = {2, 3};
    ConvergenceReport rep = run_study(cfg);
    CHECK(!rep.has_exact);
    CHECK(rep.levels[1].err.sigma_hdiv > 1.0);     // field norm under the load
    CHECK(rep.levels[1].err.div_l2 <= 1e-9);       // no body force
    REQUIRE(rep.peaks.size() >= 2);
    for (const StressPeak& pk : rep.peaks) {
        CHECK(std::isfinite(pk.magnitude));
        MESSAGE("disk stress peak ", pk.magnitude, " at (", pk.x[0], ", ", pk.x[1], ")");
    }
    Vec2 left(-2, 0), right(2, 0);
    double dl = 1e9, dr = 1e9;
    for (const StressPeak& pk : rep.peaks) {
        dl = std::min(dl, (pk.x - left).norm());
        dr = std::min(dr, (pk.x - right).norm());
    }
    MESSAGE("closest peak to (-2,0): ", dl, ", to (2,0): ", dr);

    StudyConfig sq;
    sq.case_name = "square-top-load";
    sq.levels = {4};
    ConvergenceReport rp = run_study(sq);
    CHECK(rp.levels[0].err.u_l2 > 1e-3);
    REQUIRE(!rp.peaks.empty());
    MESSAGE("square-top-load peak at (", rp.peaks[0].x[0], ", ", rp.peaks[0].x[1], ")");
    CHECK(rp.peaks[0].x[1] == doctest::Approx(1.0).epsilon(1e-6));
}
