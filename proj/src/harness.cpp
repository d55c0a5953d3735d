#include "iga/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace iga {

namespace {

const double PI = 3.14159265358979323846;

std::string data_file(const char* name) { return std::string(IGA_DATA_DIR) + "/" + name; }

ElasticBundle sinsin_physical(const Material& m) {
    return make_bundle(m, [](const D2& x, const D2& y) {
        D2 u1 = sin(PI * x) * sin(PI * y);
        return std::array<D2, 2>{u1, -u1};
    });
}

// The Dirichlet case prescribes sin sin in the parametric coordinates of the
// curved square; composing with the inverse map gives this physical form.
ElasticBundle sinsin_curved(const Material& m) {
    return make_bundle(m, [](const D2& x, const D2& y) {
        D2 u1 = sin(PI * x) * sin(PI * (y - x * x));
        return std::array<D2, 2>{u1, -u1};
    });
}

// Leading part is divergence free, so the stress stays bounded for large
// lambda; the 1/(1+lambda) terms keep the pressure exactly representable.
ElasticBundle quasi_incompressible(const Material& m) {
    const double lam = m.lambda;
    ElasticBundle b = make_bundle(m, [lam](const D2& x, const D2& y) {
        D2 s = sin(PI * x) * sin(PI * y) / (1.0 + lam);
        D2 u1 = (cos(2 * PI * x) - 1.0) * sin(2 * PI * y) + s;
        D2 u2 = (1.0 - cos(2 * PI * y)) * sin(2 * PI * x) + 2.0 * s;
        return std::array<D2, 2>{u1, u2};
    });
    // The leading part is solenoidal, only the 1/(1+lam) term contributes.
    b.div_u = [lam](const D2& x, const D2& y) {
        return (PI * cos(PI * x) * sin(PI * y) + 2.0 * PI * sin(PI * x) * cos(PI * y)) /
               (1.0 + lam);
    };
    return b;
}

ElasticBundle zero_bundle(const Material& m) {
    return make_bundle(m, [](const D2&, const D2&) {
        return std::array<D2, 2>{d2_const(0.0), d2_const(0.0)};
    });
}

std::vector<BoundaryEdge> three_traction_edges() {
    return {{0, Edge::Right}, {0, Edge::Bottom}, {0, Edge::Top}};
}

// Boundary edges whose physical midpoint lies in the open upper half plane.
std::vector<BoundaryEdge> upper_half_edges(const PatchCollection& pc) {
    std::vector<BoundaryEdge> out;
    for (const BoundaryEdge& be : pc.boundary()) {
        Vec2 mid = pc.patches[be.patch]->map(edge_param(be.edge, 0.5));
        if (mid[1] > 0) out.push_back(be);
    }
    return out;
}

}  // namespace

bool ManufacturedCase::supports_strong() const {
    return domain.patches.size() == 1 && traction_edges.empty() && !traction_load;
}

WeakProblem ManufacturedCase::weak_problem() const {
    WeakProblem prob;
    prob.domain = domain;
    prob.exact = exact;
    prob.traction_edges = traction_edges;
    prob.traction = traction_load;
    return prob;
}

StrongProblem ManufacturedCase::strong_problem() const {
    if (!supports_strong())
        throw std::invalid_argument("case '" + name + "' has no strong formulation");
    StrongProblem prob;
    prob.F = domain.patches[0];
    prob.exact = exact;
    return prob;
}

const std::vector<std::string>& builtin_case_names() {
    static const std::vector<std::string> names = {
        "curved-square-dirichlet",      "curved-square-mixed",
        "fourpatch-dirichlet",          "quasi-incompressible-single",
        "quasi-incompressible-fourpatch", "disk-load",
        "square-top-load",              "strongsym-identity",
        "strongsym-curved"};
    return names;
}

ManufacturedCase builtin_case(const std::string& name) {
    ManufacturedCase c;
    c.name = name;
    if (name == "curved-square-dirichlet") {
        c.domain = single_patch(curved_square_map());
        c.remake = sinsin_curved;
    } else if (name == "curved-square-mixed") {
        c.domain = single_patch(curved_square_map());
        c.traction_edges = three_traction_edges();
        c.remake = sinsin_physical;
        c.default_p = 3;
        c.default_r = 1;
    } else if (name == "fourpatch-dirichlet") {
        c.domain = load_patches(data_file("four_patch_square.json"));
        c.remake = sinsin_physical;
    } else if (name == "quasi-incompressible-single") {
        c.domain = single_patch(curved_square_spline());
        c.traction_edges = three_traction_edges();  // left edge keeps displacement data
        c.remake = quasi_incompressible;
        c.exact = c.remake({1e10, 1.0});
    } else if (name == "quasi-incompressible-fourpatch") {
        c.domain = load_patches(data_file("four_patch_square.json"));
        c.remake = quasi_incompressible;
        c.exact = c.remake({1e10, 1.0});
    } else if (name == "disk-load") {
        c.domain = load_patches(data_file("disk_five_patch.json"));
        c.traction_edges = upper_half_edges(c.domain);
        c.traction_load = [](const Vec2& x, const Vec2&) {
            double s = (2 - x[0]) * (2 + x[0]);
            return Vec2(0.0, -0.1 * s * s);
        };
        c.has_exact = false;
        c.remake = zero_bundle;
        c.exact = c.remake({100.0, 1.0});
        c.default_p = 3;
    } else if (name == "square-top-load") {
        c.domain = single_patch(identity_map());
        c.traction_edges = {{0, Edge::Top}};
        c.traction_load = [](const Vec2&, const Vec2&) { return Vec2(-1.0, 0.0); };
        c.has_exact = false;
        c.remake = zero_bundle;
        c.exact = c.remake({10.0, 1.0});
        c.default_p = 3;
    } else if (name == "strongsym-identity") {
        c.domain = single_patch(identity_map());
        c.remake = sinsin_physical;
        c.default_r = 1;
    } else if (name == "strongsym-curved") {
        c.domain = single_patch(curved_square_map());
        c.remake = sinsin_curved;
        c.default_r = 1;
    } else {
        throw std::invalid_argument("unknown case '" + name + "'");
    }
    if (!c.exact.u) c.exact = c.remake({2.0, 1.0});
    return c;
}

double bundle_defect(const ManufacturedCase& c, int samples, double step) {
    std::mt19937 rng(97531);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int np = static_cast<int>(c.domain.patches.size());
    double worst = 0;
    for (int s = 0; s < samples; ++s) {
        const GeometryMap& F = *c.domain.patches[s % np];
        Vec2 x = F.map(Vec2(U(rng), U(rng)));
        Vec2 div = Vec2::Zero();
        for (int j = 0; j < 2; ++j) {
            Vec2 e = Vec2::Zero();
            e[j] = step;
            Mat2 d = (-c.exact.stress(x + 2 * e) + 8 * c.exact.stress(x + e) -
                      8 * c.exact.stress(x - e) + c.exact.stress(x - 2 * e)) /
                     (12 * step);
            div += d.col(j);
        }
        worst = std::max(worst, (div - c.exact.body_force(x)).norm());
    }
    return worst;
}

LevelResult compute_errors(const ManufacturedCase& c, const WeakSolution& sol) {
    LevelResult lv;
    const DeRhamSpaces& sp = sol.dofs.sp;
    lv.n = sp.n;
    lv.h = 1.0 / sp.n;
    lv.dof_sigma = sol.dofs.n_stress;
    lv.dof_u = sol.dofs.n_disp;
    lv.dof_p = sol.dofs.n_mult;
    lv.err = weak_errors(sol, c.exact, sp.p + 2);
    lv.residual = sol.residual;
    return lv;
}

LevelResult compute_errors(const ManufacturedCase& c, const StrongSolution& sol) {
    LevelResult lv;
    lv.n = sol.sp.n;
    lv.h = 1.0 / sol.sp.n;
    int dropped = sol.sp.n_stress() + sol.sp.n_disp() - sol.unknowns;
    lv.dof_sigma = sol.sp.n_stress() - dropped;
    lv.dof_u = sol.sp.n_disp();
    lv.dof_p = 0;
    lv.err = strong_errors(sol, c.exact, sol.sp.p + 2);
    lv.residual = sol.residual;
    return lv;
}

namespace {

double magnitude(const Mat2& s) {
    double s12 = 0.5 * (s(0, 1) + s(1, 0));
    return std::sqrt(s(0, 0) * s(0, 0) + 2 * s12 * s12 + s(1, 1) * s(1, 1));
}

}  // namespace

std::vector<StressPeak> stress_peaks(const WeakSolution& sol, int samples, int keep,
                                     double min_dist) {
    std::vector<StressPeak> all;
    for (int k = 0; k < static_cast<int>(sol.domain.patches.size()); ++k)
        for (int i = 0; i <= samples; ++i)
            for (int j = 0; j <= samples; ++j) {
                Vec2 z(double(i) / samples, double(j) / samples);
                StressPeak pk;
                pk.patch = k;
                pk.zeta = z;
                pk.x = sol.domain.patches[k]->map(z);
                pk.magnitude = magnitude(sol.stress_at(k, z));
                all.push_back(pk);
            }
    std::sort(all.begin(), all.end(),
              [](const StressPeak& a, const StressPeak& b) { return a.magnitude > b.magnitude; });
    std::vector<StressPeak> out;
    for (const StressPeak& pk : all) {
        if (static_cast<int>(out.size()) == keep) break;
        bool crowded = false;
        for (const StressPeak& q : out)
            if ((q.x - pk.x).norm() < min_dist) crowded = true;
        if (!crowded) out.push_back(pk);
    }
    return out;
}

std::array<double, 4> ConvergenceReport::final_eoc() const {
    if (eoc.empty()) {
        double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, nan, nan};
    }
    return eoc.back();
}

namespace {

std::array<double, 4> pair_eoc(const LevelResult& a, const LevelResult& b) {
    auto rate = [&](double e0, double e1) {
        if (!(e0 > 0) || !(e1 > 0) || a.h == b.h)
            return std::numeric_limits<double>::quiet_NaN();
        return std::log(e0 / e1) / std::log(a.h / b.h);
    };
    return {rate(a.err.sigma_hdiv, b.err.sigma_hdiv), rate(a.err.div_l2, b.err.div_l2),
            rate(a.err.u_l2, b.err.u_l2), rate(a.err.p_l2, b.err.p_l2)};
}

std::string vtk_grid(const std::string& title, const GeometryMap& F,
                     const std::function<Vec2(const Vec2&)>& disp,
                     const std::function<Mat2(const Vec2&)>& stress, int samples) {
    const int m = samples;
    std::string out;
    char buf[256];
    out += "# vtk DataFile Version 3.0\n" + title + "\nASCII\nDATASET STRUCTURED_GRID\n";
    snprintf(buf, sizeof buf, "DIMENSIONS %d %d 1\nPOINTS %d double\n", m, m, m * m);
    out += buf;
    auto at = [&](int i, int j) { return Vec2(double(i) / (m - 1), double(j) / (m - 1)); };
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            Vec2 x = F.map(at(i, j));
            snprintf(buf, sizeof buf, "%.9g %.9g 0\n", x[0], x[1]);
            out += buf;
        }
    snprintf(buf, sizeof buf, "POINT_DATA %d\nVECTORS displacement double\n", m * m);
    out += buf;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            Vec2 u = disp(at(i, j));
            snprintf(buf, sizeof buf, "%.9g %.9g 0\n", u[0], u[1]);
            out += buf;
        }
    out += "SCALARS stress_magnitude double 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            snprintf(buf, sizeof buf, "%.9g\n", magnitude(stress(at(i, j))));
            out += buf;
        }
    return out;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << body;
}

}  // namespace

ConvergenceReport run_study(const StudyConfig& cfg) {
    ManufacturedCase c = builtin_case(cfg.case_name);
    Material mat = c.exact.mat;
    if (std::isfinite(cfg.lambda)) mat.lambda = cfg.lambda;
    if (std::isfinite(cfg.mu)) mat.mu = cfg.mu;
    c.exact = c.remake(mat);

    ConvergenceReport rep;
    rep.case_name = c.name;
    rep.formulation = cfg.formulation;
    rep.p = cfg.p > 0 ? cfg.p : c.default_p;
    rep.r = cfg.r >= 0 ? cfg.r : c.default_r;
    rep.mat = mat;
    rep.has_exact = c.has_exact;
    const bool strong = cfg.formulation == "strong";
    if (!strong && cfg.formulation != "weak")
        throw std::invalid_argument("formulation must be weak or strong");
    if (strong && !c.supports_strong())
        throw std::invalid_argument("case '" + c.name + "' has no strong formulation");

    std::string stem;
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        stem = cfg.out_dir + "/" + c.name + "-" + cfg.formulation + "-p" +
               std::to_string(rep.p) + "-r" + std::to_string(rep.r);
    }

    for (size_t li = 0; li < cfg.levels.size(); ++li) {
        int n = cfg.levels[li];
        LevelResult lv;
        std::string title = c.name + " " + cfg.formulation + " n=" + std::to_string(n);
        auto vtk_path = [&](int patch) {
            return stem + "-n" + std::to_string(n) + "-patch" + std::to_string(patch) + ".vtk";
        };
        if (strong) {
            StrongSolution sol = solve_strong(c.strong_problem(), rep.p, rep.r, n, cfg.quad_pts);
            lv = compute_errors(c, sol);
            if (cfg.vtk && !stem.empty()) {
                write_file(vtk_path(0),
                           vtk_grid(title, *c.domain.patches[0],
                                    [&](const Vec2& z) { return sol.displacement_at(z); },
                                    [&](const Vec2& z) { return sol.stress_at(z); },
                                    cfg.vtk_samples));
                rep.artifacts.push_back(vtk_path(0));
            }
        } else {
            WeakSolution sol = solve_weak(c.weak_problem(), rep.p, rep.r, n, cfg.quad_pts);
            lv = compute_errors(c, sol);
            if (!c.has_exact && li + 1 == cfg.levels.size()) rep.peaks = stress_peaks(sol);
            if (cfg.vtk && !stem.empty())
                for (int k = 0; k < static_cast<int>(c.domain.patches.size()); ++k) {
                    write_file(vtk_path(k),
                               vtk_grid(title, *c.domain.patches[k],
                                        [&](const Vec2& z) { return sol.displacement_at(k, z); },
                                        [&](const Vec2& z) { return sol.stress_at(k, z); },
                                        cfg.vtk_samples));
                    rep.artifacts.push_back(vtk_path(k));
                }
        }
        if (cfg.infsup) {
            if (rep.r <= rep.p - 2) lv.infsup_th = infsup_taylor_hood(rep.p, rep.r, n);
            lv.infsup_flux = infsup_flux_density(rep.p, rep.r, n);
        }
        rep.levels.push_back(lv);
    }
    for (size_t i = 0; i + 1 < rep.levels.size(); ++i)
        rep.eoc.push_back(pair_eoc(rep.levels[i], rep.levels[i + 1]));

    if (!stem.empty()) {
        write_file(stem + ".csv", csv_table(rep));
        rep.artifacts.push_back(stem + ".csv");
        write_file(stem + ".json", json_summary(rep));
        rep.artifacts.push_back(stem + ".json");
    }
    return rep;
}

std::string csv_table(const ConvergenceReport& rep) {
    std::string out =
        "case,formulation,p,r,n,h,dof_sigma,dof_u,dof_p,"
        "err_sigma_hdiv,err_divsigma_l2,err_u_l2,err_p_l2,"
        "eoc_sigma_hdiv,eoc_divsigma_l2,eoc_u_l2,eoc_p_l2\n";
    char buf[512];
    for (size_t i = 0; i < rep.levels.size(); ++i) {
        const LevelResult& lv = rep.levels[i];
        snprintf(buf, sizeof buf, "%s,%s,%d,%d,%d,%.10g,%d,%d,%d,%.12e,%.12e,%.12e,%.12e",
                 rep.case_name.c_str(), rep.formulation.c_str(), rep.p, rep.r, lv.n, lv.h,
                 lv.dof_sigma, lv.dof_u, lv.dof_p, lv.err.sigma_hdiv, lv.err.div_l2, lv.err.u_l2,
                 lv.err.p_l2);
        out += buf;
        for (int k = 0; k < 4; ++k) {
            out += ',';
            if (i > 0 && std::isfinite(rep.eoc[i - 1][k])) {
                snprintf(buf, sizeof buf, "%.6f", rep.eoc[i - 1][k]);
                out += buf;
            }
        }
        out += '\n';
    }
    return out;
}

std::string json_summary(const ConvergenceReport& rep) {
    using nlohmann::json;
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(); };
    json j;
    j["case"] = rep.case_name;
    j["formulation"] = rep.formulation;
    j["p"] = rep.p;
    j["r"] = rep.r;
    j["lambda"] = rep.mat.lambda;
    j["mu"] = rep.mat.mu;
    j["has_exact"] = rep.has_exact;
    j["levels"] = json::array();
    for (size_t i = 0; i < rep.levels.size(); ++i) {
        const LevelResult& lv = rep.levels[i];
        json row;
        row["n"] = lv.n;
        row["h"] = lv.h;
        row["dof_sigma"] = lv.dof_sigma;
        row["dof_u"] = lv.dof_u;
        row["dof_p"] = lv.dof_p;
        row["err_sigma_l2"] = lv.err.sigma_l2;
        row["err_sigma_hdiv"] = lv.err.sigma_hdiv;
        row["err_divsigma_l2"] = lv.err.div_l2;
        row["err_u_l2"] = lv.err.u_l2;
        row["err_p_l2"] = lv.err.p_l2;
        row["residual"] = lv.residual;
        if (i > 0) {
            row["eoc_sigma_hdiv"] = num(rep.eoc[i - 1][0]);
            row["eoc_divsigma_l2"] = num(rep.eoc[i - 1][1]);
            row["eoc_u_l2"] = num(rep.eoc[i - 1][2]);
            row["eoc_p_l2"] = num(rep.eoc[i - 1][3]);
        }
        if (std::isfinite(lv.infsup_th)) row["infsup_taylor_hood"] = lv.infsup_th;
        if (std::isfinite(lv.infsup_flux)) row["infsup_flux_density"] = lv.infsup_flux;
        j["levels"].push_back(row);
    }
    if (!rep.eoc.empty()) {
        auto fin = rep.final_eoc();
        j["final_eoc"] = {{"sigma_hdiv", num(fin[0])},
                          {"divsigma_l2", num(fin[1])},
                          {"u_l2", num(fin[2])},
                          {"p_l2", num(fin[3])}};
    }
    for (const StressPeak& pk : rep.peaks)
        j["stress_peaks"].push_back({{"patch", pk.patch},
                                     {"x", {pk.x[0], pk.x[1]}},
                                     {"magnitude", pk.magnitude}});
    return j.dump(2) + "\n";
}

}  // namespace iga
