#include <doctest.h>

#include <cmath>

#include "ncsq/common.hpp"
#include "ncsq/matrix.hpp"

using namespace ncsq;

namespace {

Mat random_hermitian(int m, std::uint64_t seed) {
  Rng rng(seed);
  Mat a(m);
  for (auto& z : a.data()) z = rng.cnormal();
  return a.hermitized();
}

Mat random_general(int m, std::uint64_t seed) {
  Rng rng(seed);
  Mat a(m);
  for (auto& z : a.data()) z = rng.cnormal();
  return a;
}

Mat random_psd(int m, std::uint64_t seed) {
  Mat b = random_general(m, seed);
  return (b * b.adjoint()).hermitized();
}

double reconstruction_residual(const Mat& a) {
  EigResult e = eig_hermitian(a);
  const int m = a.dim();
  Mat rec(m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        rec.at(i, j) += e.values[k] * e.vectors.at(i, k) * std::conj(e.vectors.at(j, k));
  return (rec - a.hermitized()).fro_norm();
}

}  // namespace

TEST_CASE("eig identity and diagonal") {
  EigResult e = eig_hermitian(Mat::identity(3));
  for (double v : e.values) CHECK(v == doctest::Approx(1.0));

  Mat d(2);
  d.at(0, 0) = 3.0;
  d.at(1, 1) = 1.0;
  EigResult e2 = eig_hermitian(d);
  CHECK(e2.values[0] == doctest::Approx(1.0));
  CHECK(e2.values[1] == doctest::Approx(3.0));
}

TEST_CASE("eig reconstruction") {
  for (int m : {1, 2, 3, 5, 8, 16}) {
    const Mat a = random_hermitian(m, 7 + m);
    const double res = reconstruction_residual(a);
    CHECK(res <= 1e-10 * std::max(1.0, a.fro_norm()));
    // unitarity of the eigenvector matrix
    EigResult e = eig_hermitian(a);
    const Mat gram = e.vectors.adjoint() * e.vectors;
    CHECK((gram - Mat::identity(m)).fro_norm() <= 1e-10);
  }
  Mat bad(2);
  bad.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(eig_hermitian(bad));
}

TEST_CASE("spectral projection") {
  Mat d(2);
  d.at(0, 0) = 0.5;
  d.at(1, 1) = 2.0;
  const Mat p = spectral_projection(d, SpectralInterval::PosToLambda, 1.0);
  CHECK(p.at(0, 0).real() == doctest::Approx(1.0));
  CHECK(p.at(1, 1).real() == doctest::Approx(0.0));

  const Mat z = spectral_projection(Mat::zero(3), SpectralInterval::AboveLambda, 1.0);
  CHECK(z.fro_norm() == doctest::Approx(0.0));

  // rank counts from the eigenvalue list
  const Mat a = random_psd(4, 3);
  EigResult e = eig_hermitian(a);
  const double lambda = e.values[2];
  const Mat proj = spectral_projection(a, SpectralInterval::PosToLambda, lambda);
  int expect = 0;
  const double eps = 1e-12 * std::max(1.0, e.values.back());
  for (double v : e.values)
    if (v > eps && v <= lambda * (1 + 1e-12)) ++expect;
  CHECK(proj.trace().real() == doctest::Approx(expect));

  // partition of the identity
  const Mat p1 = spectral_projection(a, SpectralInterval::PosToLambda, lambda);
  const Mat p2 = spectral_projection(a, SpectralInterval::AboveLambda, lambda);
  const Mat p0 = kernel_projection(a);
  CHECK(((p1 + p2 + p0) - Mat::identity(4)).fro_norm() <= 1e-9);

  // commutes with its argument
  const Mat comm = p1 * a - a * p1;
  CHECK(comm.fro_norm() <= 1e-9 * std::max(1.0, a.fro_norm()));
}

TEST_CASE("matrix abs") {
  const Mat psd = random_psd(3, 11);
  CHECK((matrix_abs(psd) - psd).fro_norm() <= 1e-9 * psd.fro_norm());

  Mat nil(2);
  nil.at(0, 1) = 1.0;
  const Mat a = matrix_abs(nil);
  CHECK(a.at(0, 0).real() == doctest::Approx(0.0));
  CHECK(a.at(1, 1).real() == doctest::Approx(1.0));

  // unitary invariance of the spectrum of |x|
  const Mat x = random_general(3, 13);
  EigResult eu = eig_hermitian(random_hermitian(3, 17));
  const Mat u = eu.vectors;  // unitary
  const auto s1 = singular_values(x);
  const auto s2 = singular_values(u * x);
  for (std::size_t i = 0; i < s1.size(); ++i)
    CHECK(s1[i] == doctest::Approx(s2[i]).epsilon(1e-8));
}

TEST_CASE("psd order") {
  CHECK(psd_leq(Mat::identity(2), Mat::identity(2).scaled(2.0), 0.0));
  const Mat a = random_hermitian(3, 19);
  CHECK(psd_leq(a, a, 1e-12));
  // rank-one negative perturbation breaks the order
  Mat b = a;
  b.at(0, 0) -= 1.0;
  CHECK(!psd_leq(a, b, 1e-6));
}

TEST_CASE("proj_join") {
  Mat p1(2), p2(2);
  p1.at(0, 0) = 1.0;
  p2.at(1, 1) = 1.0;
  const Mat both[] = {p1, p2};
  const Mat j = proj_join(both);
  CHECK((j - Mat::identity(2)).fro_norm() <= 1e-10);

  const Mat same[] = {p1, p1};
  CHECK((proj_join(same) - p1).fro_norm() <= 1e-10);

  // join of random projections spans the union of ranges
  Rng rng(23);
  Mat h = random_hermitian(4, 29);
  EigResult e = eig_hermitian(h);
  Mat q1(4), q2(4);
  for (int i = 0; i < 4; ++i)
    for (int j2 = 0; j2 < 4; ++j2) {
      q1.at(i, j2) = e.vectors.at(i, 0) * std::conj(e.vectors.at(j2, 0));
      q2.at(i, j2) = e.vectors.at(i, 1) * std::conj(e.vectors.at(j2, 1));
    }
  const Mat pair[] = {q1, q2};
  const Mat join = proj_join(pair);
  CHECK(join.trace().real() == doctest::Approx(2.0));
  CHECK((join * q1 - q1).fro_norm() <= 1e-9);
  CHECK((join * q2 - q2).fro_norm() <= 1e-9);
}

TEST_CASE("proj_join lattice behaviour") {
  // idempotent, commutative, monotone in range
  Rng rng(41);
  Mat h1 = random_hermitian(4, 43);
  Mat h2 = random_hermitian(4, 47);
  EigResult e1 = eig_hermitian(h1), e2 = eig_hermitian(h2);
  auto rank1 = [](const EigResult& e, int k) {
    const int m = e.vectors.dim();
    Mat p(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        p.at(i, j) = e.vectors.at(i, k) * std::conj(e.vectors.at(j, k));
    return p;
  };
  const Mat a = rank1(e1, 0), b = rank1(e2, 1), c = rank1(e2, 3);

  const Mat ab[] = {a, b};
  const Mat ba[] = {b, a};
  CHECK((proj_join(ab) - proj_join(ba)).fro_norm() <= 1e-9);

  const Mat j1 = proj_join(ab);
  const Mat jj[] = {j1, j1};
  CHECK((proj_join(jj) - j1).fro_norm() <= 1e-9);

  const Mat abc[] = {a, b, c};
  const Mat j2 = proj_join(abc);
  // monotone: the larger join dominates the smaller one
  CHECK((j2 * j1 - j1).fro_norm() <= 1e-8);
}

TEST_CASE("schatten norms") {
  CHECK(schatten_norm(Mat::identity(3), 1.0) == doctest::Approx(3.0));
  Mat p(3);
  p.at(0, 0) = 1.0;
  for (double q : {1.0, 1.5, 2.0, 7.0}) CHECK(schatten_norm(p, q) == doctest::Approx(1.0));

  const Mat x = random_general(4, 31);
  double fro = 0.0;
  for (const auto& z : x.data()) fro += std::norm(z);
  CHECK(schatten_norm(x, 2.0) == doctest::Approx(std::sqrt(fro)));
  CHECK_THROWS(schatten_norm(x, 0.5));
}
