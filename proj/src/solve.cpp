#include "iga/solve.hpp"

#include <cassert>
#include <stdexcept>

namespace iga {

Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                             SolveReport* report) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) throw std::runtime_error("sparse factorization failed");
    Eigen::VectorXd x = lu.solve(b);
    if (report) {
        report->residual = (A * x - b).cwiseAbs().maxCoeff();
        report->unknowns = static_cast<int>(A.rows());
    }
    return x;
}

Eigen::VectorXd solve_dense(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                            SolveReport* report) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd x = lu.solve(b);
    if (report) {
        report->residual = (A * x - b).cwiseAbs().maxCoeff();
        report->unknowns = static_cast<int>(A.rows());
    }
    return x;
}

double infsup_constant(const Eigen::MatrixXd& B, const Eigen::MatrixXd& X,
                       const Eigen::MatrixXd& M) {
    Eigen::LLT<Eigen::MatrixXd> llt(X);
    if (llt.info() != Eigen::Success) throw std::runtime_error("norm matrix not SPD");
    Eigen::MatrixXd S = B * llt.solve(B.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(S, M);
    const auto& ev = es.eigenvalues();
    double cutoff = 1e-10 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    for (int i = 0; i < ev.size(); ++i)
        if (ev[i] > cutoff) return std::sqrt(ev[i]);
    throw std::runtime_error("coupling matrix has no positive spectrum");
}

Eigen::MatrixXd cross_1d(const KnotVector& row, int da, const KnotVector& col, int db,
                         int n_elems, int q) {
    const auto& rule = gauss_rule(q);
    auto tr = tabulate(row, n_elems, rule, da);
    auto tc = tabulate(col, n_elems, rule, db);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(row.n(), col.n());
    double h = 1.0 / n_elems;
    for (int e = 0; e < n_elems; ++e)
        for (int g = 0; g < q; ++g) {
            double wq = rule.w[g] * h;
            for (int a = 0; a <= row.p; ++a)
                for (int b = 0; b <= col.p; ++b)
                    M(tr.first[e] + a, tc.first[e] + b) +=
                        wq * tr.der(e, a, g, da) * tc.der(e, b, g, db);
        }
    return M;
}

Eigen::MatrixXd tensor_product_matrix(const Eigen::MatrixXd& A1, const Eigen::MatrixXd& A2) {
    Eigen::MatrixXd out(A1.rows() * A2.rows(), A1.cols() * A2.cols());
    for (Eigen::Index j2 = 0; j2 < A2.cols(); ++j2)
        for (Eigen::Index j1 = 0; j1 < A1.cols(); ++j1)
            for (Eigen::Index i2 = 0; i2 < A2.rows(); ++i2)
                for (Eigen::Index i1 = 0; i1 < A1.rows(); ++i1)
                    out(i1 + A1.rows() * i2, j1 + A1.cols() * j2) = A1(i1, j1) * A2(i2, j2);
    return out;
}

double infsup_taylor_hood(int p, int r, int n) {
    auto s = DeRhamSpaces::make(p, r, n);
    const auto& V = s.scalar;
    const auto& Q = s.pressure;
    int nv = V.dim(), np = Q.dim();
    assert(2 * nv + np <= 5000);
    int q = p + 1;

    Eigen::MatrixXd Mv1 = cross_1d(V.kv1, 0, V.kv1, 0, n, q);
    Eigen::MatrixXd Mv2 = cross_1d(V.kv2, 0, V.kv2, 0, n, q);
    Eigen::MatrixXd Kv1 = cross_1d(V.kv1, 1, V.kv1, 1, n, q);
    Eigen::MatrixXd Kv2 = cross_1d(V.kv2, 1, V.kv2, 1, n, q);
    Eigen::MatrixXd H1 = tensor_product_matrix(Mv1, Mv2) + tensor_product_matrix(Kv1, Mv2) +
                         tensor_product_matrix(Mv1, Kv2);

    Eigen::MatrixXd Mp1 = cross_1d(Q.kv1, 0, Q.kv1, 0, n, q);
    Eigen::MatrixXd Mp2 = cross_1d(Q.kv2, 0, Q.kv2, 0, n, q);
    Eigen::MatrixXd Mq = tensor_product_matrix(Mp1, Mp2);

    // b(v, q) = (div v, q); component c contributes its c-derivative
    Eigen::MatrixXd C1 = cross_1d(Q.kv1, 0, V.kv1, 1, n, q);
    Eigen::MatrixXd C2 = cross_1d(Q.kv2, 0, V.kv2, 1, n, q);
    Eigen::MatrixXd M1 = cross_1d(Q.kv1, 0, V.kv1, 0, n, q);
    Eigen::MatrixXd M2 = cross_1d(Q.kv2, 0, V.kv2, 0, n, q);
    Eigen::MatrixXd B1 = tensor_product_matrix(C1, M2);  // d1 of component 1
    Eigen::MatrixXd B2 = tensor_product_matrix(M1, C2);  // d2 of component 2

    // velocity vanishes on the bottom edge: drop i2 = 0 rows of both components
    std::vector<int> keep;
    for (int i2 = 1; i2 < V.kv2.n(); ++i2)
        for (int i1 = 0; i1 < V.kv1.n(); ++i1) keep.push_back(V.index(i1, i2));
    int nf = static_cast<int>(keep.size());
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(2 * nf, 2 * nf);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(np, 2 * nf);
    for (int a = 0; a < nf; ++a) {
        for (int b = 0; b < nf; ++b) {
            X(a, b) = H1(keep[a], keep[b]);
            X(nf + a, nf + b) = H1(keep[a], keep[b]);
        }
        B.block(0, a, np, 1) = B1.col(keep[a]);
        B.block(0, nf + a, np, 1) = B2.col(keep[a]);
    }
    return infsup_constant(B, X, Mq);
}

double infsup_flux_density(int p, int r, int n) {
    auto s = DeRhamSpaces::make(p, r, n);
    const auto& W1 = s.flux1;
    const auto& W2 = s.flux2;
    const auto& Q = s.density;
    int n1 = W1.dim(), n2 = W2.dim(), np = Q.dim();
    assert(n1 + n2 + np <= 5000);
    int q = p + 1;

    auto mass2d = [&](const TensorSpace& A) {
        return tensor_product_matrix(cross_1d(A.kv1, 0, A.kv1, 0, n, q),
                                     cross_1d(A.kv2, 0, A.kv2, 0, n, q));
    };
    // H(div) gram: L2 of components plus L2 of the divergence
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
    X.topLeftCorner(n1, n1) =
        mass2d(W1) + tensor_product_matrix(cross_1d(W1.kv1, 1, W1.kv1, 1, n, q),
                                           cross_1d(W1.kv2, 0, W1.kv2, 0, n, q));
    X.bottomRightCorner(n2, n2) =
        mass2d(W2) + tensor_product_matrix(cross_1d(W2.kv1, 0, W2.kv1, 0, n, q),
                                           cross_1d(W2.kv2, 1, W2.kv2, 1, n, q));
    Eigen::MatrixXd cross12 =
        tensor_product_matrix(cross_1d(W1.kv1, 1, W2.kv1, 0, n, q),
                              cross_1d(W1.kv2, 0, W2.kv2, 1, n, q));
    X.topRightCorner(n1, n2) = cross12;
    X.bottomLeftCorner(n2, n1) = cross12.transpose();

    Eigen::MatrixXd B(np, n1 + n2);
    B.leftCols(n1) = tensor_product_matrix(cross_1d(Q.kv1, 0, W1.kv1, 1, n, q),
                                           cross_1d(Q.kv2, 0, W1.kv2, 0, n, q));
    B.rightCols(n2) = tensor_product_matrix(cross_1d(Q.kv1, 0, W2.kv1, 0, n, q),
                                            cross_1d(Q.kv2, 0, W2.kv2, 1, n, q));
    return infsup_constant(B, X, mass2d(Q));
}

}  // namespace iga
