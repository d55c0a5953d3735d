#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace iga {

// Open knot vector of degree p on [0,1].  Knot values are produced by the
// same i/n double divisions everywhere, so exact FP comparisons are safe.
struct KnotVector {
    int p = 0;
    std::vector<double> knots;

    int n() const { return static_cast<int>(knots.size()) - p - 1; }
    double domain_start() const { return knots[p]; }
    double domain_end() const { return knots[n()]; }

    // Breakpoints with interior multiplicity p - r (r = -1 gives a fully
    // discontinuous space), boundary multiplicity p + 1.
    static KnotVector from_breakpoints(int p, const std::vector<double>& breaks, int r);
    // Uniform n-element mesh on [0,1].
    static KnotVector uniform(int p, int n_elems, int r);

    // Index i with knots[i] <= z < knots[i+1]; z at the right end of the
    // domain falls in the last nonempty span (left limit convention).
    int span_index(double z) const;

    // Values and derivatives of the p+1 basis functions active at z.
    // out(a, d) = d-th derivative of basis first_active(z)+a.  out is
    // resized to (p+1) x (nders+1).
    void eval_basis(double z, int nders, Eigen::MatrixXd& out) const;
    int first_active(double z) const { return span_index(z) - p; }

    // Single basis function by direct recursion with the 0/0 = 0 convention.
    // Slow; used as an independent oracle in tests.
    double eval_one(int i, double z) const;

    std::vector<double> breakpoints() const;
};

// Degree p-1 space containing derivatives: drop first and last knot.
KnotVector derived_space(const KnotVector& kv);
// Degree p+1 space containing antiderivatives: repeat first and last knot.
KnotVector raised_space(const KnotVector& kv);

// Coefficients of the derivative in derived_space(kv); size n-1.
std::vector<double> derive_coeffs(const KnotVector& kv, const std::vector<double>& c);
// Coefficients of the antiderivative vanishing at 0 in raised_space(kv); size n+1.
std::vector<double> antiderive_coeffs(const KnotVector& kv, const std::vector<double>& c);
// The antiderivative of basis a is a step in raised coefficients: 0 for
// j <= a and this constant for j > a.  Equals its total integral.
double basis_integral(const KnotVector& kv, int a);

struct Spline1D {
    KnotVector kv;
    Eigen::VectorXd c;
    double value(double z) const;
    double deriv(double z, int order = 1) const;
};

// Tensor product space; index i1 runs fastest.
struct TensorSpace {
    KnotVector kv1, kv2;
    int dim() const { return kv1.n() * kv2.n(); }
    int index(int i1, int i2) const { return i1 + kv1.n() * i2; }
};

struct TensorSpline {
    TensorSpace space;
    Eigen::VectorXd c;
    // Mixed partial of order (d1, d2).
    double value(double z1, double z2, int d1 = 0, int d2 = 0) const;
};

// Coefficient-level partial derivative / antiderivative along one direction.
// The antiderivative vanishes on the starting edge of that direction.
TensorSpline tensor_derive1(const TensorSpline& f);
TensorSpline tensor_derive2(const TensorSpline& f);
TensorSpline tensor_antiderive1(const TensorSpline& f);
TensorSpline tensor_antiderive2(const TensorSpline& f);

// Gauss-Legendre rule with q points on [0,1].  Cached per q.
struct GaussRule {
    Eigen::VectorXd x, w;
};
const GaussRule& gauss_rule(int q);

// Composite Gauss integral of f over [0, t], following the knot spans of kv
// with a partial final span; q points per (partial) span.
double integrate_to(const KnotVector& kv, int q, double t,
                    const std::function<double(double)>& f);

// Per-element tables of 1D basis values on the uniform n-element mesh.
// Space breakpoints must be a subset of the mesh points.
struct BasisTable1D {
    int p = 0, n_elems = 0, nq = 0, nders = 0;
    std::vector<int> first;        // first active basis index per element
    // value(e, a, g, d): d-th derivative of local basis a at point g of
    // element e; flattened as ((e * (p+1) + a) * nq + g) * (nders+1) + d.
    std::vector<double> data;
    double der(int e, int a, int g, int d) const {
        return data[((static_cast<size_t>(e) * (p + 1) + a) * nq + g) * (nders + 1) + d];
    }
    double val(int e, int a, int g) const { return der(e, a, g, 0); }
};
BasisTable1D tabulate(const KnotVector& kv, int n_elems, const GaussRule& rule, int nders);

// Quadrature points of the uniform mesh in one direction: x(e,g) = (e + x_g)/n.
inline double mesh_point(int n_elems, int e, double xg) { return (e + xg) / n_elems; }

}  // namespace iga
