#include <doctest.h>

#include <Eigen/Dense>

#include "nvist/krylov.hpp"

using namespace nvist;

TEST_CASE("complex GMRES solves a diagonally dominant system") {
  const int n = 60;
  std::srand(3);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Random(n, n) * 0.05;
  A.diagonal().array() += Eigen::dcomplex(1.0, 0.3);
  const Eigen::VectorXcd b = Eigen::VectorXcd::Random(n);
  Eigen::VectorXcd x;
  const auto res = gmres([&](const Eigen::VectorXcd& v, Eigen::VectorXcd& out) { out = A * v; }, b, x,
                         KrylovOptions{1e-12, 300, 10});
  CHECK(res.converged);
  CHECK((A * x - b).norm() <= 1e-11 * b.norm());
  CHECK((x - A.lu().solve(b)).norm() <= 1e-9 * x.norm());
}

TEST_CASE("real GMRES on a nonsymmetric system with restarts") {
  const int n = 80;
  std::srand(5);
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(n, n) * 0.1 + 2.0 * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd b = Eigen::VectorXd::Random(n);
  Eigen::VectorXd x;
  const auto res = gmres([&](const Eigen::VectorXd& v, Eigen::VectorXd& out) { out = A * v; }, b, x,
                         KrylovOptions{1e-10, 400, 5});
  CHECK(res.converged);
  CHECK(res.residual <= 1e-10);
  CHECK((A * x - b).norm() <= 1e-9 * b.norm());
}

TEST_CASE("GMRES with zero right-hand side returns zero immediately") {
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(10), x;
  const auto res = gmres([](const Eigen::VectorXcd& v, Eigen::VectorXcd& out) { out = v; }, b, x,
                         KrylovOptions{});
  CHECK(res.converged);
  CHECK(res.iterations == 0);
  CHECK(x.norm() == 0.0);
}

TEST_CASE("GMRES reports non-convergence when the budget runs out") {
  const int n = 50;
  Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(n, 1.0, 1e6);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd x;
  const auto res = gmres([&](const Eigen::VectorXd& v, Eigen::VectorXd& out) { out = d.cwiseProduct(v); },
                         b, x, KrylovOptions{1e-14, 3, 3});
  CHECK_FALSE(res.converged);
  CHECK(res.iterations == 3);
}

TEST_CASE("preconditioned CG on an SPD system") {
  const int n = 40;
  std::srand(9);
  Eigen::MatrixXd M = Eigen::MatrixXd::Random(n, n);
  Eigen::MatrixXd A = M * M.transpose() + n * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd b = Eigen::VectorXd::Random(n);
  const Eigen::VectorXd diag = A.diagonal();
  Eigen::VectorXd x;
  const auto res = pcg([&](const Eigen::VectorXd& v, Eigen::VectorXd& out) { out = A * v; },
                       [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) { out = v.cwiseQuotient(diag); },
                       b, x, KrylovOptions{1e-12, 500, 0});
  CHECK(res.converged);
  CHECK((A * x - b).norm() <= 1e-11 * b.norm());
}
