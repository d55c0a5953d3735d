#include "iga/geometry.hpp"

#include <cassert>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace iga {

std::shared_ptr<GeometryMap> curved_square_map() {
    auto m = std::make_shared<AnalyticMap>();
    m->f = [](const Vec2& z) { return Vec2(z[0], z[0] * z[0] + z[1]); };
    m->jac = [](const Vec2& z) {
        Mat2 J;
        J << 1, 0, 2 * z[0], 1;
        return J;
    };
    m->jac_partials = [](const Vec2&) {
        Mat2 d1 = Mat2::Zero(), d2 = Mat2::Zero();
        d1(1, 0) = 2;
        return std::array<Mat2, 2>{d1, d2};
    };
    return m;
}

std::shared_ptr<GeometryMap> identity_map() {
    auto m = std::make_shared<AnalyticMap>();
    m->f = [](const Vec2& z) { return z; };
    m->jac = [](const Vec2&) { return Mat2::Identity(); };
    m->jac_partials = [](const Vec2&) {
        return std::array<Mat2, 2>{Mat2::Zero(), Mat2::Zero()};
    };
    return m;
}

Vec2 SplineMap::map(const Vec2& z) const {
    return {x.value(z[0], z[1]), y.value(z[0], z[1])};
}

Mat2 SplineMap::jacobian(const Vec2& z) const {
    Mat2 J;
    J << x.value(z[0], z[1], 1, 0), x.value(z[0], z[1], 0, 1),
        y.value(z[0], z[1], 1, 0), y.value(z[0], z[1], 0, 1);
    return J;
}

std::array<Mat2, 2> SplineMap::jacobian_partials(const Vec2& z) const {
    Mat2 d1, d2;
    d1 << x.value(z[0], z[1], 2, 0), x.value(z[0], z[1], 1, 1),
        y.value(z[0], z[1], 2, 0), y.value(z[0], z[1], 1, 1);
    d2 << x.value(z[0], z[1], 1, 1), x.value(z[0], z[1], 0, 2),
        y.value(z[0], z[1], 1, 1), y.value(z[0], z[1], 0, 2);
    return {d1, d2};
}

namespace {

struct RationalDerivs {
    Vec2 f, f10, f01, f20, f11, f02;
};

RationalDerivs rational_derivs(const RationalMap& m, const Vec2& z) {
    auto part = [&](const TensorSpline& s, int a, int b) { return s.value(z[0], z[1], a, b); };
    Vec2 N{part(m.xw, 0, 0), part(m.yw, 0, 0)};
    Vec2 N10{part(m.xw, 1, 0), part(m.yw, 1, 0)};
    Vec2 N01{part(m.xw, 0, 1), part(m.yw, 0, 1)};
    Vec2 N20{part(m.xw, 2, 0), part(m.yw, 2, 0)};
    Vec2 N11{part(m.xw, 1, 1), part(m.yw, 1, 1)};
    Vec2 N02{part(m.xw, 0, 2), part(m.yw, 0, 2)};
    double w = part(m.w, 0, 0), w10 = part(m.w, 1, 0), w01 = part(m.w, 0, 1);
    double w20 = part(m.w, 2, 0), w11 = part(m.w, 1, 1), w02 = part(m.w, 0, 2);

    RationalDerivs r;
    r.f = N / w;
    r.f10 = (N10 - r.f * w10) / w;
    r.f01 = (N01 - r.f * w01) / w;
    r.f20 = (N20 - 2 * r.f10 * w10 - r.f * w20) / w;
    r.f11 = (N11 - r.f10 * w01 - r.f01 * w10 - r.f * w11) / w;
    r.f02 = (N02 - 2 * r.f01 * w01 - r.f * w02) / w;
    return r;
}

}  // namespace

Vec2 RationalMap::map(const Vec2& z) const {
    return Vec2{xw.value(z[0], z[1]), yw.value(z[0], z[1])} / w.value(z[0], z[1]);
}

Mat2 RationalMap::jacobian(const Vec2& z) const {
    auto d = rational_derivs(*this, z);
    Mat2 J;
    J << d.f10[0], d.f01[0], d.f10[1], d.f01[1];
    return J;
}

std::array<Mat2, 2> RationalMap::jacobian_partials(const Vec2& z) const {
    auto d = rational_derivs(*this, z);
    Mat2 d1, d2;
    d1 << d.f20[0], d.f11[0], d.f20[1], d.f11[1];
    d2 << d.f11[0], d.f02[0], d.f11[1], d.f02[1];
    return {d1, d2};
}

std::shared_ptr<GeometryMap> curved_square_spline() {
    auto m = std::make_shared<SplineMap>();
    KnotVector kb{2, {0, 0, 0, 1, 1, 1}};
    TensorSpace S{kb, kb};
    Eigen::VectorXd cx(9), cy(9);
    const double gx[3] = {0.0, 0.5, 1.0};   // Bezier coefficients of z
    const double gq[3] = {0.0, 0.0, 1.0};   // Bezier coefficients of z^2
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            cx[S.index(i, j)] = gx[i];
            cy[S.index(i, j)] = gq[i] + gx[j];
        }
    m->x = {S, cx};
    m->y = {S, cy};
    return m;
}

Vec2 invert_map(const GeometryMap& F, const Vec2& x, double tol) {
    Vec2 best = Vec2(0.5, 0.5);
    double bestr = (F.map(best) - x).norm();
    const int k = 8;
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j) {
            Vec2 z(static_cast<double>(i) / k, static_cast<double>(j) / k);
            double r = (F.map(z) - x).norm();
            if (r < bestr) {
                bestr = r;
                best = z;
            }
        }
    Vec2 z = best;
    double res = bestr;
    for (int it = 0; it < 50 && res > tol; ++it) {
        Vec2 rhs = x - F.map(z);
        Vec2 dz = F.jacobian(z).partialPivLu().solve(rhs);
        double alpha = 1.0;
        while (alpha > 1e-4) {
            Vec2 zn = (z + alpha * dz).cwiseMax(0.0).cwiseMin(1.0);
            double rn = (F.map(zn) - x).norm();
            if (rn < res) {
                z = zn;
                res = rn;
                break;
            }
            alpha *= 0.5;
        }
        if (alpha <= 1e-4) break;
    }
    assert(res <= tol);
    return z;
}

Vec2 edge_param(Edge e, double t) {
    switch (e) {
        case Edge::Left: return {0.0, t};
        case Edge::Right: return {1.0, t};
        case Edge::Bottom: return {t, 0.0};
        case Edge::Top: return {t, 1.0};
    }
    return {0, 0};
}

Vec2 edge_normal(Edge e) {
    switch (e) {
        case Edge::Left: return {-1.0, 0.0};
        case Edge::Right: return {1.0, 0.0};
        case Edge::Bottom: return {0.0, -1.0};
        case Edge::Top: return {0.0, 1.0};
    }
    return {0, 0};
}

Vec2 edge_tangent(Edge e) {
    return (e == Edge::Left || e == Edge::Right) ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
}

std::vector<BoundaryEdge> PatchCollection::boundary() const {
    std::set<std::pair<int, int>> used;
    for (const auto& ifc : interfaces) {
        used.insert({ifc.patch_a, static_cast<int>(ifc.edge_a)});
        used.insert({ifc.patch_b, static_cast<int>(ifc.edge_b)});
    }
    std::vector<BoundaryEdge> out;
    for (int p = 0; p < static_cast<int>(patches.size()); ++p)
        for (int e = 0; e < 4; ++e)
            if (!used.count({p, e})) out.push_back({p, static_cast<Edge>(e)});
    return out;
}

PatchCollection single_patch(std::shared_ptr<GeometryMap> map) {
    PatchCollection pc;
    pc.patches.push_back(std::move(map));
    return pc;
}

namespace {

Edge edge_from_string(const std::string& s) {
    if (s == "left") return Edge::Left;
    if (s == "right") return Edge::Right;
    if (s == "bottom") return Edge::Bottom;
    if (s == "top") return Edge::Top;
    throw std::runtime_error("unknown edge name: " + s);
}

std::vector<double> parse_numbers(const nlohmann::json& arr) {
    std::vector<double> out;
    for (const auto& v : arr) out.push_back(std::stod(v.get<std::string>()));
    return out;
}

}  // namespace

PatchCollection load_patches(const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) throw std::runtime_error("cannot open " + json_path);
    nlohmann::json j;
    in >> j;

    PatchCollection pc;
    for (const auto& jp : j.at("patches")) {
        KnotVector kv1{jp.at("degree")[0].get<int>(), parse_numbers(jp.at("knots1"))};
        KnotVector kv2{jp.at("degree")[1].get<int>(), parse_numbers(jp.at("knots2"))};
        TensorSpace S{kv1, kv2};
        int dim = S.dim();
        if (static_cast<int>(jp.at("points").size()) != dim)
            throw std::runtime_error("control net size mismatch in " + json_path);
        Eigen::VectorXd px(dim), py(dim);
        for (int i = 0; i < dim; ++i) {
            px[i] = std::stod(jp.at("points")[i][0].get<std::string>());
            py[i] = std::stod(jp.at("points")[i][1].get<std::string>());
        }
        if (jp.contains("weights")) {
            auto wts = parse_numbers(jp.at("weights"));
            if (static_cast<int>(wts.size()) != dim)
                throw std::runtime_error("weight count mismatch in " + json_path);
            Eigen::VectorXd w(dim);
            for (int i = 0; i < dim; ++i) {
                if (wts[i] <= 0.0) throw std::runtime_error("nonpositive weight");
                w[i] = wts[i];
            }
            auto m = std::make_shared<RationalMap>();
            m->xw = {S, px.cwiseProduct(w)};
            m->yw = {S, py.cwiseProduct(w)};
            m->w = {S, w};
            pc.patches.push_back(std::move(m));
        } else {
            auto m = std::make_shared<SplineMap>();
            m->x = {S, px};
            m->y = {S, py};
            pc.patches.push_back(std::move(m));
        }
    }
    if (j.contains("interfaces"))
        for (const auto& ji : j.at("interfaces")) {
            Interface ifc;
            ifc.patch_a = ji.at("a").get<int>();
            ifc.edge_a = edge_from_string(ji.at("edge_a").get<std::string>());
            ifc.patch_b = ji.at("b").get<int>();
            ifc.edge_b = edge_from_string(ji.at("edge_b").get<std::string>());
            ifc.reversed = ji.at("reversed").get<bool>();
            pc.interfaces.push_back(ifc);
        }
    return pc;
}

double interface_mismatch(const PatchCollection& pc, int samples) {
    double worst = 0.0;
    for (const auto& ifc : pc.interfaces) {
        for (int s = 0; s < samples; ++s) {
            double t = static_cast<double>(s) / (samples - 1);
            double tb = ifc.reversed ? 1.0 - t : t;
            Vec2 xa = pc.patches[ifc.patch_a]->map(edge_param(ifc.edge_a, t));
            Vec2 xb = pc.patches[ifc.patch_b]->map(edge_param(ifc.edge_b, tb));
            worst = std::max(worst, (xa - xb).norm());
        }
    }
    return worst;
}

}  // namespace iga
