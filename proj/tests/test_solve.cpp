#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "iga/solve.hpp"

using namespace iga;

TEST_CASE("sparse solve recovers a dense solution") {
    int n = 40;
    Eigen::MatrixXd D = Eigen::MatrixXd::Random(n, n);
    D = (D + D.transpose()).eval();
    D.diagonal().array() += 2.0 * n;
    Eigen::VectorXd b = Eigen::VectorXd::Random(n);
    Eigen::SparseMatrix<double> A = D.sparseView();

    SolveReport rep;
    Eigen::VectorXd x = solve_sparse(A, b, &rep);
    Eigen::VectorXd xd = D.partialPivLu().solve(b);
    CHECK((x - xd).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(rep.residual < 1e-10);
    CHECK(rep.unknowns == n);
}

TEST_CASE("inf-sup constant on explicit small problems") {
    // with B = X = M = 1 the constant is exactly 1
    Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
    CHECK(infsup_constant(one, one, one) == doctest::Approx(1.0));

    // scaling the norm matrix by 4 halves the constant
    CHECK(infsup_constant(one, 4.0 * one, one) == doctest::Approx(0.5));

    // a singular direction in B is skipped by the positive-spectrum filter
    Eigen::MatrixXd B(2, 2);
    B << 1, 0, 0, 0;
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
    CHECK(infsup_constant(B, I, I) == doctest::Approx(1.0));
}

TEST_CASE("1d cross integrals") {
    auto kv = KnotVector::uniform(2, 2, 1);
    // partition of unity: row sums of the mass matrix integrate each basis
    Eigen::MatrixXd M = cross_1d(kv, 0, kv, 0, 2, 4);
    double total = M.sum();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    // derivatives sum to zero, so each row of the cross block does too
    Eigen::MatrixXd C = cross_1d(kv, 0, kv, 1, 2, 4);
    CHECK(C.rowwise().sum().cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("taylor hood probe behaves like a stable pair") {
    double b2 = infsup_taylor_hood(2, 0, 2);
    double b4 = infsup_taylor_hood(2, 0, 4);
    CHECK(b2 > 0.05);
    CHECK(b2 < 1.5);
    CHECK(b4 > 0.05);
    CHECK(std::abs(b4 - b2) / b2 < 0.5);
}

TEST_CASE("flux against density probe behaves like a stable pair") {
    double b2 = infsup_flux_density(2, 0, 2);
    double b4 = infsup_flux_density(2, 0, 4);
    CHECK(b2 > 0.05);
    CHECK(b4 > 0.05);
    CHECK(std::abs(b4 - b2) / b2 < 0.5);
}
