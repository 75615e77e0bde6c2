#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ttlr/tlinalg.hpp"

using namespace ttlr;

namespace {

Tensor3 random_tensor(int i1, int i2, int i3, std::mt19937_64& rng) {
  return gauss_tensor(i1, i2, i3, GaussKind::Full, rng);
}

double rel(const Tensor3& got, const Tensor3& want) {
  const double nw = fro_norm(want);
  return fro_norm(sub(got, want)) / (nw > 0 ? nw : 1.0);
}

bool is_orthonormal(const Tensor3& q, double tol = 1e-10) {
  Tensor3 g = t_product(t_transpose(q), q);
  return rel(g, identity_tensor(q.cols(), q.depth())) < tol;
}

Tensor3 lowrank(int n, int r, int i3, std::mt19937_64& rng) {
  return t_product(random_tensor(n, r, i3, rng), random_tensor(r, n, i3, rng));
}

}  // namespace

TEST_CASE("t_qr reconstruction, orthogonality, triangularity") {
  std::mt19937_64 rng(1);
  for (auto [i1, i2, i3] : {std::tuple{6, 4, 5}, {4, 6, 3}, {5, 5, 1}}) {
    Tensor3 x = random_tensor(i1, i2, i3, rng);
    QrFactors f = t_qr(x);
    CHECK(rel(t_product(f.Q, f.R), x) < 1e-12);
    CHECK(is_orthonormal(f.Q));
    FourierTensor rf = fft_mode3(f.R);
    for (int s = 0; s < rf.half_count(); ++s)
      for (int i = 1; i < rf.half(s).rows(); ++i)
        for (int j = 0; j < std::min<long>(i, rf.half(s).cols()); ++j)
          CHECK(std::abs(rf.half(s)(i, j)) < 1e-10);
  }
}

TEST_CASE("t_qr depth-1 matches the matrix factorization") {
  std::mt19937_64 rng(2);
  Tensor3 x = random_tensor(5, 3, 1, rng);
  QrFactors f = t_qr(x);
  Eigen::HouseholderQR<MatrixXd> qr(MatrixXd(x.slice(0)));
  MatrixXd r = qr.matrixQR().topRows(3).triangularView<Eigen::Upper>();
  // Q columns are sign-free; compare |R| rows instead
  CHECK((f.R.slice(0).cwiseAbs() - r.cwiseAbs()).norm() < 1e-10);
}

TEST_CASE("orth drops dependent columns") {
  std::mt19937_64 rng(3);
  Tensor3 base = random_tensor(8, 3, 4, rng);
  Tensor3 dup = concat(base, base, 2);  // 6 columns, rank 3
  Tensor3 q = orth(dup);
  CHECK(q.cols() == 3);
  CHECK(is_orthonormal(q));
  CHECK(fro_norm(orth(Tensor3(5, 4, 3))) == 0.0);
  CHECK(orth(Tensor3(5, 4, 3)).cols() == 0);
}

TEST_CASE("t_svd reconstruction and singular tube ordering") {
  std::mt19937_64 rng(4);
  Tensor3 x = random_tensor(7, 5, 6, rng);
  TsvdFactors f = t_svd(x);
  CHECK(rel(reconstruct(f), x) < 1e-12);
  CHECK(is_orthonormal(f.U));
  CHECK(is_orthonormal(f.V));
  FourierTensor sf = fft_mode3(f.S);
  for (int s = 0; s < sf.half_count(); ++s)
    for (int i = 1; i < 5; ++i)
      CHECK(sf.half(s)(i, i).real() <= sf.half(s)(i - 1, i - 1).real() + 1e-12);
}

TEST_CASE("t_svd_truncated exact on low rank, errors on bad rank") {
  std::mt19937_64 rng(5);
  Tensor3 x = lowrank(9, 3, 5, rng);
  TsvdFactors f = t_svd_truncated(x, 3);
  CHECK(rel(reconstruct(f), x) < 1e-10);
  CHECK_THROWS_AS(t_svd_truncated(x, 0), RankOutOfRange);
  CHECK_THROWS_AS(t_svd_truncated(x, 10), RankOutOfRange);
}

TEST_CASE("t_lu reconstruction and structure") {
  std::mt19937_64 rng(6);
  for (auto [i1, i2, i3] : {std::tuple{6, 4, 5}, {4, 6, 4}, {5, 5, 1}}) {
    Tensor3 x = random_tensor(i1, i2, i3, rng);
    auto [l, u] = t_lu(x);
    CHECK(rel(t_product(l, u), x) < 1e-11);
    FourierTensor uf = fft_mode3(u);
    for (int s = 0; s < uf.half_count(); ++s)
      for (int i = 1; i < uf.half(s).rows(); ++i)
        for (int j = 0; j < std::min<long>(i, uf.half(s).cols()); ++j)
          CHECK(std::abs(uf.half(s)(i, j)) < 1e-10);
  }
}

TEST_CASE("t_lu depth-1 matches Eigen's pivoted factorization") {
  std::mt19937_64 rng(7);
  Tensor3 x = random_tensor(5, 5, 1, rng);
  auto [l, u] = t_lu(x);
  Eigen::PartialPivLU<MatrixXd> lu(MatrixXd(x.slice(0)));
  MatrixXd pl = lu.permutationP().transpose() *
                MatrixXd(lu.matrixLU().triangularView<Eigen::UnitLower>());
  CHECK((l.slice(0) - pl).norm() < 1e-10);
  CHECK((u.slice(0) - MatrixXd(lu.matrixLU().triangularView<Eigen::Upper>())).norm() <
        1e-10);
}

TEST_CASE("t_lu singular slice") {
  Tensor3 z(3, 3, 2);
  CHECK_THROWS_AS(t_lu(z), SingularSlice);
}

TEST_CASE("t_eig on a Gram tensor") {
  std::mt19937_64 rng(8);
  Tensor3 a = random_tensor(6, 4, 5, rng);
  Tensor3 g = t_product(t_transpose(a), a);
  EigFactors f = t_eig(g);
  CHECK(rel(t_product(t_product(f.V, f.D), t_transpose(f.V)), g) < 1e-11);
  CHECK(is_orthonormal(f.V));
  FourierTensor df = fft_mode3(f.D);
  for (int s = 0; s < df.half_count(); ++s)
    for (int i = 1; i < 4; ++i)  // ascending
      CHECK(df.half(s)(i, i).real() >= df.half(s)(i - 1, i - 1).real() - 1e-12);
  CHECK_THROWS_AS(t_eig(a), NotSymmetric);
  Tensor3 ns = random_tensor(4, 4, 3, rng);
  CHECK_THROWS_AS(t_eig(ns), NotSymmetric);
}

TEST_CASE("fdiag_sqrt squares back") {
  std::mt19937_64 rng(9);
  Tensor3 a = random_tensor(5, 3, 4, rng);
  Tensor3 s = t_svd(a).S;  // nonnegative spectrum by construction
  Tensor3 r = fdiag_sqrt(s);
  CHECK(rel(t_product(r, r), s) < 1e-10);

  Tensor3 neg(2, 2, 1);
  neg(0, 0, 0) = -1.0;
  neg(1, 1, 0) = 1.0;
  CHECK_THROWS_AS(fdiag_sqrt(neg), NegativeSpectrum);
}

TEST_CASE("t_pinv satisfies the four Moore-Penrose identities") {
  std::mt19937_64 rng(10);
  for (auto [i1, i2, i3] : {std::tuple{6, 4, 5}, {4, 6, 3}, {5, 5, 4}}) {
    Tensor3 x = random_tensor(i1, i2, i3, rng);
    Tensor3 p = t_pinv(x);
    CHECK(rel(t_product(t_product(x, p), x), x) < 1e-11);
    CHECK(rel(t_product(t_product(p, x), p), p) < 1e-11);
    Tensor3 xp = t_product(x, p);
    Tensor3 px = t_product(p, x);
    CHECK(rel(t_transpose(xp), xp) < 1e-11);
    CHECK(rel(t_transpose(px), px) < 1e-11);
  }
}

TEST_CASE("t_inv inverts and detects singularity") {
  std::mt19937_64 rng(11);
  Tensor3 x = random_tensor(5, 5, 4, rng);
  Tensor3 xi = t_inv(x);
  CHECK(rel(t_product(x, xi), identity_tensor(5, 4)) < 1e-11);
  CHECK(rel(t_product(xi, x), identity_tensor(5, 4)) < 1e-11);

  Tensor3 sing = lowrank(5, 2, 4, rng);  // tubal rank 2 < 5
  CHECK_THROWS_AS(t_inv(sing), SingularTensor);
  CHECK_THROWS_AS(t_inv(random_tensor(4, 5, 3, rng)), DimMismatch);
}

TEST_CASE("tubal_rank") {
  std::mt19937_64 rng(12);
  Tensor3 x = lowrank(12, 4, 5, rng);
  CHECK(tubal_rank(x, 1e-8) == 4);
  CHECK(tubal_rank(Tensor3(4, 4, 4), 1e-8) == 0);
  CHECK(tubal_rank(random_tensor(6, 6, 3, rng), 1e-8) == 6);
  CHECK_THROWS_AS(tubal_rank(x, -1.0), std::invalid_argument);
}

TEST_CASE("trace_first_slice") {
  Tensor3 x(3, 3, 2);
  x(0, 0, 0) = 1;
  x(1, 1, 0) = 2;
  x(2, 2, 0) = 4;
  x(0, 1, 0) = 9;  // off-diagonal ignored
  CHECK(trace_first_slice(x) == doctest::Approx(7.0));
  CHECK_THROWS_AS(trace_first_slice(Tensor3(2, 3, 2)), DimMismatch);
}
