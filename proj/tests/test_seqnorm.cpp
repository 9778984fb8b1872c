#include <doctest.h>

#include <cmath>

#include "ncsq/operators.hpp"
#include "ncsq/seqnorm.hpp"

using namespace ncsq;

namespace {

MatrixField random_field(const Grid& g, std::uint64_t seed) {
  Rng rng(seed);
  MatrixField f = MatrixField::zeros(g);
  for (auto& z : f.data) z = rng.cnormal();
  return f;
}

MatrixField hermitian_field(const Grid& g, std::uint64_t seed) {
  MatrixField f = random_field(g, seed);
  for (int y = 0; y < g.cells(); ++y) f.set_cell(y, f.cell(y).hermitized());
  return f;
}

FieldSequence random_seq(const Grid& g, int len, std::uint64_t seed) {
  FieldSequence s;
  for (int k = 0; k < len; ++k) s.push_back(random_field(g, seed + k));
  return s;
}

}  // namespace

TEST_CASE("row and column basics") {
  Grid g{1, 3, 2};
  const Weight w = make_weight_random_a1(g, 2, 4.0);
  const MatrixField f = random_field(g, 3);

  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    CHECK(column_norm({f}, p, &w) == doctest::Approx(lp_norm(f, p, &w)));
    CHECK(row_norm({f}, p, &w) == doctest::Approx(lp_norm(f, p, &w)));
  }

  // hermitian sequences have equal row and column norms
  FieldSequence hs = {hermitian_field(g, 5), hermitian_field(g, 6)};
  for (double p : {1.0, 2.0, 3.0})
    CHECK(row_norm(hs, p, &w) == doctest::Approx(column_norm(hs, p, &w)));

  // row of the sequence equals column of the adjoint sequence
  FieldSequence seq = random_seq(g, 3, 11);
  FieldSequence adj;
  for (const auto& x : seq) adj.push_back(adjoint_field(x));
  for (double p : {1.0, 1.7, 2.5})
    CHECK(row_norm(seq, p, &w) == doctest::Approx(column_norm(adj, p, &w)));

  // homogeneity
  FieldSequence scaled2;
  for (const auto& x : seq) scaled2.push_back(scaled(x, -2.0));
  CHECK(column_norm(scaled2, 1.5, &w) ==
        doctest::Approx(2.0 * column_norm(seq, 1.5, &w)));

  // scalar sequences with disjoint supports combine in l2
  Grid gs{1, 2, 1};
  MatrixField a = MatrixField::zeros(gs), b = MatrixField::zeros(gs);
  a.cell_ptr(0, 0)[0] = 3.0;
  b.cell_ptr(0, 1)[0] = 4.0;
  // disjoint cells: column sqrt is 3 on cell 0 and 4 on cell 1
  CHECK(column_norm({a, b}, 1.0) == doctest::Approx((3.0 + 4.0) / 4.0));
  MatrixField c = MatrixField::zeros(gs);
  c.cell_ptr(0, 0)[0] = 4.0;
  CHECK(column_norm({a, c}, 1.0) == doctest::Approx(5.0 / 4.0));
}

TEST_CASE("rc norm p >= 2 exact") {
  Grid g{1, 3, 2};
  const Weight w = make_weight_random_a1(g, 21, 4.0);
  FieldSequence seq = random_seq(g, 4, 22);

  const Bracket b2 = rc_norm(seq, 2.0, &w);
  CHECK(b2.lower == b2.upper);
  CHECK(b2.upper == doctest::Approx(std::max(row_norm(seq, 2.0, &w),
                                             column_norm(seq, 2.0, &w))));
  // Hilbert-space case: row = column = (sum of squared 2-norms)^(1/2)
  double sq = 0.0;
  for (const auto& x : seq) sq += std::pow(lp_norm(x, 2.0, &w), 2.0);
  CHECK(b2.upper == doctest::Approx(std::sqrt(sq)));
}

TEST_CASE("rc bracket p < 2") {
  Grid g{1, 2, 2};
  const Weight w = make_weight_random_a1(g, 31, 4.0);
  RcOptions opts;
  opts.iters = 200;

  for (double p : {1.0, 1.5}) {
    FieldSequence seq = random_seq(g, 3, 33);
    const Bracket b = rc_norm(seq, p, &w, opts);
    CHECK(b.lower <= b.upper + 1e-6 * std::max(1.0, b.upper));
    CHECK(b.upper <= std::min(column_norm(seq, p, &w), row_norm(seq, p, &w)) + 1e-9);
    CHECK(b.lower > 0.0);
  }

  // single element: the bracket collapses at every p
  const MatrixField f = random_field(g, 41);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const Bracket b = rc_norm({f}, p, &w, opts);
    CHECK(std::abs(b.upper - b.lower) <= 1e-8 * std::max(1.0, b.upper));
    CHECK(b.upper == doctest::Approx(lp_norm(f, p, &w)).epsilon(1e-8));
  }

  // scalar sequences at p = 1: duality closes the bracket
  Grid gs{1, 3, 1};
  const Weight ws = make_weight_constant(gs, 1.0);
  FieldSequence sseq = random_seq(gs, 4, 51);
  const Bracket bs = rc_norm(sseq, 1.0, &ws, opts);
  CHECK(bs.lower == doctest::Approx(column_norm(sseq, 1.0, &ws)).epsilon(1e-7));
  CHECK(bs.upper == doctest::Approx(column_norm(sseq, 1.0, &ws)).epsilon(1e-7));
}

TEST_CASE("rc upper monotone under zero padding") {
  Grid g{1, 2, 2};
  FieldSequence seq = random_seq(g, 2, 61);
  RcOptions opts;
  opts.iters = 60;
  const Bracket b1 = rc_norm(seq, 1.0, nullptr, opts);
  seq.push_back(MatrixField::zeros(g));
  const Bracket b2 = rc_norm(seq, 1.0, nullptr, opts);
  CHECK(b2.upper <= b1.upper * (1 + 1e-9) + 1e-12);
}

TEST_CASE("khintchine identity at p=2") {
  Grid g{1, 3, 2};
  const Weight w = make_weight_random_a1(g, 71, 4.0);
  const MatrixField f = random_field(g, 72);
  FieldSequence seq;
  for (int k = 0; k <= g.J; ++k) seq.push_back(t_op(f, k));

  const SignSample ex = SignSample::all_patterns(g.J);
  MatrixField acc = MatrixField::zeros(g, ex.R);
  for (int s = 0; s < ex.R; ++s)
    for (int k = 0; k <= g.J; ++k) {
      MatrixField term = scaled(seq[k], ex.sign(s, k));
      for (int y = 0; y < g.cells(); ++y) {
        Mat cur = acc.cell(s, y);
        acc.set_cell(s, y, cur + term.cell(y));
      }
    }
  const double randomized = std::pow(lp_norm(acc, 2.0, &w), 2.0);
  const double colsq = std::pow(column_norm(seq, 2.0, &w), 2.0);
  CHECK(randomized == doctest::Approx(colsq).epsilon(1e-10));
}

TEST_CASE("weak rc bracket") {
  Grid g{1, 2, 2};
  const Weight w = make_weight_random_a1(g, 81, 4.0);
  RcOptions opts;
  opts.iters = 80;

  FieldSequence zeros = {MatrixField::zeros(g), MatrixField::zeros(g)};
  const Bracket z = weak_rc_quasinorm(zeros, &w, opts);
  CHECK(z.lower == 0.0);
  CHECK(z.upper == 0.0);

  const MatrixField h = hermitian_field(g, 82);
  const Bracket single = weak_rc_quasinorm({h}, &w, opts);
  CHECK(single.upper <= weak_l1_quasinorm(h, &w) * (1 + 1e-9));
  CHECK(single.lower >= 0.5 * single.upper * (1 - 1e-9) - 1e-12);

  // weak bracket below the strong p=1 bracket
  for (std::uint64_t s = 0; s < 5; ++s) {
    FieldSequence seq = random_seq(g, 3, 90 + s);
    const Bracket weak = weak_rc_quasinorm(seq, &w, opts);
    const Bracket strong = rc_norm(seq, 1.0, &w, opts);
    CHECK(weak.upper <= strong.upper * (1 + 1e-9));
    CHECK(weak.lower <= weak.upper + 1e-12);
  }
}
