#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "iga/bspline.hpp"

namespace iga {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Planar patch parametrization F : [0,1]^2 -> Omega with derivatives up to
// second order.  jacobian_partials()[k] is the partial of the Jacobian in
// direction k, so its entries are second derivatives of F.
struct GeometryMap {
    virtual ~GeometryMap() = default;
    virtual Vec2 map(const Vec2& z) const = 0;
    virtual Mat2 jacobian(const Vec2& z) const = 0;
    virtual std::array<Mat2, 2> jacobian_partials(const Vec2& z) const = 0;
};

// adj(J) satisfies adj(J) J = det(J) I; rows are the flux pullback of the
// physical unit vectors.
inline Mat2 adjugate(const Mat2& J) {
    Mat2 A;
    A << J(1, 1), -J(0, 1), -J(1, 0), J(0, 0);
    return A;
}

struct AnalyticMap final : GeometryMap {
    std::function<Vec2(const Vec2&)> f;
    std::function<Mat2(const Vec2&)> jac;
    std::function<std::array<Mat2, 2>(const Vec2&)> jac_partials;
    Vec2 map(const Vec2& z) const override { return f(z); }
    Mat2 jacobian(const Vec2& z) const override { return jac(z); }
    std::array<Mat2, 2> jacobian_partials(const Vec2& z) const override {
        return jac_partials(z);
    }
};

// F(z) = (z1, z1^2 + z2); det J = 1.
std::shared_ptr<GeometryMap> curved_square_map();
std::shared_ptr<GeometryMap> identity_map();

// Polynomial tensor spline patch; x and y share one space.
struct SplineMap final : GeometryMap {
    TensorSpline x, y;
    Vec2 map(const Vec2& z) const override;
    Mat2 jacobian(const Vec2& z) const override;
    std::array<Mat2, 2> jacobian_partials(const Vec2& z) const override;
};

// NURBS patch stored in homogeneous form: numerators already carry weights.
struct RationalMap final : GeometryMap {
    TensorSpline xw, yw, w;
    Vec2 map(const Vec2& z) const override;
    Mat2 jacobian(const Vec2& z) const override;
    std::array<Mat2, 2> jacobian_partials(const Vec2& z) const override;
};

// The curved square encoded as a biquadratic Bezier patch; identical to
// curved_square_map() up to rounding.
std::shared_ptr<GeometryMap> curved_square_spline();

// Grid-seeded damped Newton; asserts convergence to |F(z) - x| <= tol.
Vec2 invert_map(const GeometryMap& F, const Vec2& x, double tol = 1e-12);

enum class Edge { Left, Right, Bottom, Top };

// Parametric point on an edge at arclength parameter t of the edge trace.
Vec2 edge_param(Edge e, double t);
// Outward unit normal of [0,1]^2 on the edge.
Vec2 edge_normal(Edge e);
// Tangent direction of the edge trace in the parametric domain.
Vec2 edge_tangent(Edge e);

struct Interface {
    int patch_a = 0;
    Edge edge_a = Edge::Left;
    int patch_b = 0;
    Edge edge_b = Edge::Left;
    bool reversed = false;  // parameter runs opposite ways on the two sides
};

struct BoundaryEdge {
    int patch = 0;
    Edge edge = Edge::Left;
};

struct PatchCollection {
    std::vector<std::shared_ptr<GeometryMap>> patches;
    std::vector<Interface> interfaces;
    std::vector<BoundaryEdge> boundary() const;  // edges not on any interface
};

PatchCollection single_patch(std::shared_ptr<GeometryMap> map);
PatchCollection load_patches(const std::string& json_path);

// Largest pointwise mismatch of patch traces over all interfaces.
double interface_mismatch(const PatchCollection& pc, int samples = 50);

}  // namespace iga
