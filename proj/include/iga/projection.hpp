#pragma once

#include "iga/bspline.hpp"
#include "iga/smooth.hpp"

namespace iga {

// Dual functional of one basis function: lambda(f) = sum_r w[r] f^(r)(tau),
// exact on splines of the space (tau sits mid-span inside the support).
struct DualFunctional {
    double tau = 0.0;
    std::vector<double> w;
};
std::vector<DualFunctional> deboor_fix_functionals(const KnotVector& kv);

// Coefficients lambda_i(f) of the quasi-interpolant in kv.
Eigen::VectorXd deboor_fix(const KnotVector& kv, const Smooth1D& f);

// Level-l projector onto kv: antidifferentiate l times, project onto the
// l-times raised space, then differentiate at the coefficient level.  Level
// l projectors absorb l derivatives: (P_{l} on raised(kv)) then d/dz equals
// P_{l+1} on kv applied to the derivative.
Spline1D project_1d(const KnotVector& kv, int level, const Smooth1D& f);

// Tensor product projector with a level per direction.
TensorSpline project_2d(const TensorSpace& S, int lev1, int lev2, const Smooth2D& f);

// Basis function wrapped as a smooth closure (for duality tests).
Smooth1D basis_smooth(const KnotVector& kv, int i);

}  // namespace iga
