#pragma once

#include <Eigen/Sparse>

#include "iga/derham.hpp"

namespace iga {

struct SolveReport {
    double residual = 0.0;  // |Ax - b|_inf after the solve
    int unknowns = 0;
};

// Direct sparse LU; the residual is recomputed from the inputs.
Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                             SolveReport* report = nullptr);

// Dense partial-pivoting LU for the saddle systems whose transformed bases
// couple along whole parameter lines; A is left untouched.
Eigen::VectorXd solve_dense(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                            SolveReport* report = nullptr);

// Smallest positive generalized eigenvalue of (B X^{-1} B^T) z = mu M z;
// the inf-sup constant is its square root.
double infsup_constant(const Eigen::MatrixXd& B, const Eigen::MatrixXd& X,
                       const Eigen::MatrixXd& M);

// Inf-sup probes for (div v, q) pairs on the identity unit square.
// Taylor-Hood: velocity (S^{r,r}_{p,p})^2 vanishing on the bottom edge with
// H1 gram; pressure S^{r,r}_{p-1,p-1} with L2 gram.
double infsup_taylor_hood(int p, int r, int n);
// Flux pair: flux space with H(div) gram against the density L2 gram.
double infsup_flux_density(int p, int r, int n);

// 1D integrals of derivative da of row-space basis against derivative db of
// column-space basis over the uniform n-element mesh.
Eigen::MatrixXd cross_1d(const KnotVector& row, int da, const KnotVector& col, int db,
                         int n_elems, int q);

// Tensor assembly convenience: out[(i1,i2),(j1,j2)] = A1(i1,j1) * A2(i2,j2)
// with direction-1 indices fastest.
Eigen::MatrixXd tensor_product_matrix(const Eigen::MatrixXd& A1, const Eigen::MatrixXd& A2);

}  // namespace iga
