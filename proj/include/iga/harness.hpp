#pragma once

#include <limits>
#include <string>

#include "iga/strongsym.hpp"

namespace iga {

// A named experiment: geometry, manufactured data, boundary split, material.
// Demo cases carry a prescribed boundary load instead of a manufactured
// solution; their exact bundle is the zero field and reported "errors" are
// then plain field norms.
struct ManufacturedCase {
    std::string name;
    PatchCollection domain;
    ElasticBundle exact;
    std::vector<BoundaryEdge> traction_edges;
    std::function<Vec2(const Vec2&, const Vec2&)> traction_load;  // demo cases only
    bool has_exact = true;
    int default_p = 2, default_r = 0;
    // Rebuilds the exact bundle for other material constants; the
    // quasi-incompressible displacement depends on lambda itself.
    std::function<ElasticBundle(const Material&)> remake;

    bool supports_strong() const;
    WeakProblem weak_problem() const;
    StrongProblem strong_problem() const;  // requires supports_strong()
};

ManufacturedCase builtin_case(const std::string& name);
const std::vector<std::string>& builtin_case_names();

// Largest |div sigma - f| over fixed pseudo-random physical sample points,
// with the divergence taken by fourth order central differences of the
// stress closure.  Self-consistency check of a manufactured bundle.
double bundle_defect(const ManufacturedCase& c, int samples = 100, double step = 1e-3);

struct LevelResult {
    int n = 0;
    double h = 0;
    int dof_sigma = 0, dof_u = 0, dof_p = 0;
    FieldErrors err;
    double residual = 0;
    // Inf-sup probe estimates on the identity square, NaN unless requested.
    double infsup_th = std::numeric_limits<double>::quiet_NaN();
    double infsup_flux = std::numeric_limits<double>::quiet_NaN();
};

// Mesh size, DOF counts, and error norms filled from a solved level; norms
// use p+2 Gauss points per direction.
LevelResult compute_errors(const ManufacturedCase& c, const WeakSolution& sol);
LevelResult compute_errors(const ManufacturedCase& c, const StrongSolution& sol);

// Sample-grid local maxima of the stress magnitude
// sqrt(s11^2 + 2 s12^2 + s22^2), strongest first, separated by at least
// min_dist in physical distance.  Used to report where demo loads peak.
struct StressPeak {
    int patch = 0;
    Vec2 zeta = Vec2::Zero();
    Vec2 x = Vec2::Zero();
    double magnitude = 0;
};
std::vector<StressPeak> stress_peaks(const WeakSolution& sol, int samples = 48, int keep = 4,
                                     double min_dist = 0.5);

struct ConvergenceReport {
    std::string case_name, formulation;
    int p = 0, r = 0;
    Material mat;
    bool has_exact = true;
    std::vector<LevelResult> levels;
    // eoc[i] pairs levels i and i+1; entries ordered sigma_hdiv,
    // divsigma_l2, u_l2, p_l2.  NaN where a level error vanishes.
    std::vector<std::array<double, 4>> eoc;
    std::vector<StressPeak> peaks;       // demo cases, finest level
    std::vector<std::string> artifacts;  // files written by run_study

    std::array<double, 4> final_eoc() const;  // between the two finest levels
};

struct StudyConfig {
    std::string case_name = "curved-square-dirichlet";
    std::string formulation = "weak";  // weak | strong
    int p = 0;   // <= 0 picks the case preset
    int r = -1;  // < 0 picks the case preset
    std::vector<int> levels = {4, 8, 16};
    double lambda = std::numeric_limits<double>::quiet_NaN();  // override when finite
    double mu = std::numeric_limits<double>::quiet_NaN();
    std::string out_dir;  // empty writes no files
    bool vtk = false;
    bool infsup = false;
    int quad_pts = 0;  // assembly override, 0 keeps the formulation default
    int vtk_samples = 33;
};

// Solves the ladder h = 1/n level by level and collects errors and rates.
// With out_dir set, writes <case>-<formulation>-p<p>-r<r>.csv and .json and,
// with vtk on, one legacy ASCII grid per level and patch carrying the
// displacement and the stress magnitude as point data.
ConvergenceReport run_study(const StudyConfig& cfg);

// Serialized forms of the report; run_study writes exactly these bytes, so
// repeated runs of one config produce identical files.
std::string csv_table(const ConvergenceReport& rep);
std::string json_summary(const ConvergenceReport& rep);

}  // namespace iga
