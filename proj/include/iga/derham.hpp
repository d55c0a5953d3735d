#pragma once

#include "iga/geometry.hpp"

namespace iga {

// Parametric spaces of the discrete complex on the uniform n x n mesh:
//   grad-type scalars, flux vectors (component spaces), densities, and the
//   Taylor-Hood pressure space used by the multiplier.
struct DeRhamSpaces {
    int p = 2, r = 0, n = 1;
    TensorSpace scalar;    // S^{r,r}_{p,p}
    TensorSpace flux1;     // S^{r,r-1}_{p,p-1}
    TensorSpace flux2;     // S^{r-1,r}_{p-1,p}
    TensorSpace density;   // S^{r-1,r-1}_{p-1,p-1}
    TensorSpace pressure;  // S^{r,r}_{p-1,p-1}, needs r <= p - 2
    static DeRhamSpaces make(int p, int r, int n);
};

// Evaluation-side transforms between a physical field and its parametric
// proxy at one point; J is the geometry Jacobian there.
inline double push_scalar(double qhat) { return qhat; }
inline Vec2 push_grad(const Mat2& J, const Vec2& vhat) {
    return J.transpose().inverse() * vhat;
}
inline Vec2 push_flux(const Mat2& J, const Vec2& vhat) { return J * vhat / J.determinant(); }
inline double push_density(const Mat2& J, double qhat) { return qhat / J.determinant(); }

inline Vec2 pull_grad(const Mat2& J, const Vec2& v) { return J.transpose() * v; }
inline Vec2 pull_flux(const Mat2& J, const Vec2& v) { return adjugate(J) * v; }
inline double pull_density(const Mat2& J, double q) { return J.determinant() * q; }

// Geometry bundle at one parametric point.
struct GeomData {
    Vec2 x;
    Mat2 J;
    Mat2 adj;                 // adj(J)
    double det = 0;
    std::array<Mat2, 2> dJ;   // partials of J
    std::array<Mat2, 2> dadj; // partials of adj(J)
};
GeomData geom_at(const GeometryMap& F, const Vec2& z);

}  // namespace iga
