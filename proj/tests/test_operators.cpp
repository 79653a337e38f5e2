// Copyright 2026 The spinwave Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <bit>
#include <complex>
#include <random>
#include <sstream>
#include <vector>

#include "catch_amalgamated.hpp"

#include "spinwave/operators.hpp"

using namespace spinwave;

namespace {

using cplx = std::complex<double>;

// Oracle: sum over bonds of -1/2 (sigma_i . sigma_j - 1) built from Pauli
// matrix elements on the full 2^v space, then restricted to a sector. Bit i
// of a full-space index is 1 when site i is up (sigma^z = +1).
Eigen::MatrixXcd pauli_sector_hamiltonian(const Lattice& lat, int r) {
  const int v = lat.num_vertices();
  const SectorBasis basis(v, r);
  const auto states = basis.states();
  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  const Index full = Index{1} << v;
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(full), static_cast<Eigen::Index>(full));
  for (Mask b = 0; b < full; ++b) {
    for (const Edge& e : lat.edges()) {
      const bool up_i = (b >> e.a) & 1, up_j = (b >> e.b) & 1;
      const Mask flipped = b ^ (Mask{1} << e.a) ^ (Mask{1} << e.b);
      const cplx yi = up_i ? cplx(0, 1) : cplx(0, -1);
      const cplx yj = up_j ? cplx(0, 1) : cplx(0, -1);
      const double zz = (up_i ? 1.0 : -1.0) * (up_j ? 1.0 : -1.0);
      const auto col = static_cast<Eigen::Index>(b);
      big(static_cast<Eigen::Index>(flipped), col) += -0.5 * (cplx(1.0) + yi * yj);  // xx + yy
      big(col, col) += -0.5 * (zz - 1.0);
    }
  }
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = 0; c < n; ++c)
      h(a, c) = big(static_cast<Eigen::Index>(states[static_cast<std::size_t>(a)]),
                    static_cast<Eigen::Index>(states[static_cast<std::size_t>(c)]));
  return h;
}

std::vector<std::int64_t> random_ints(std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<std::int64_t> d(-1000, 1000);
  std::vector<std::int64_t> x(n);
  for (auto& e : x) e = d(rng);
  return x;
}

const std::vector<Lattice>& small_lattices() {
  static const std::vector<Lattice> lats = {
      build_rectangular({1, 2}, Boundary::open),     build_rectangular({1, 3}, Boundary::open),
      build_rectangular({1, 6}, Boundary::open),     build_rectangular({2, 3}, Boundary::open),
      build_rectangular({3, 4}, Boundary::open),     build_rectangular({3, 3}, Boundary::periodic),
      build_rectangular({2, 2, 3}, Boundary::open),  build_rectangular({1}, Boundary::open),
  };
  return lats;
}

}  // namespace

TEST_CASE("two-site Hamiltonian", "[operators]") {
  const auto h = assemble_hamiltonian(build_rectangular({1, 2}, Boundary::open), 1);
  CHECK(to_dense(h.matrix) == (Eigen::MatrixXd(2, 2) << 1, -1, -1, 1).finished());
  for (const auto& lat : small_lattices()) {
    const auto h0 = assemble_hamiltonian(lat, 0);
    CHECK(h0.dim() == 1);
    CHECK(h0.matrix.entry(0, 0) == 0);
  }
}

TEST_CASE("assembled Hamiltonian matches the Pauli-matrix form", "[operators][oracle]") {
  for (const auto& lat : small_lattices()) {
    if (lat.num_vertices() > 9) continue;
    for (int r = 0; r <= lat.num_vertices(); ++r) {
      INFO(lat.label() << " r=" << r);
      const Eigen::MatrixXcd oracle = pauli_sector_hamiltonian(lat, r);
      CHECK(oracle.imag().cwiseAbs().maxCoeff() == 0.0);
      CHECK((oracle.real() - to_dense(assemble_hamiltonian(lat, r).matrix)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("sector Hamiltonian structure", "[operators][property]") {
  for (const auto& lat : small_lattices()) {
    for (int r = 0; r <= lat.num_vertices(); ++r) {
      INFO(lat.label() << " r=" << r);
      const auto h = assemble_hamiltonian(lat, r);
      const SectorBasis basis(lat.num_vertices(), r);
      bool ok = true;
      for (Index a = 0; a < h.dim(); ++a) {
        const Mask sa = basis.state(a);
        std::int64_t row_sum = 0;
        std::int64_t cut = 0;
        for (const Edge& e : lat.edges()) cut += std::popcount(sa & ((Mask{1} << e.a) | (Mask{1} << e.b))) == 1;
        for (Index p = h.matrix.row_ptr[a]; p < h.matrix.row_ptr[a + 1]; ++p) {
          const Index b = h.matrix.col[p];
          row_sum += h.matrix.val[p];
          ok = ok && h.matrix.entry(b, a) == h.matrix.val[p];
          if (b == a) {
            ok = ok && h.matrix.val[p] == cut;
          } else {
            const Mask diff = sa ^ basis.state(b);
            bool is_bond = false;
            for (const Edge& e : lat.edges()) is_bond |= diff == ((Mask{1} << e.a) | (Mask{1} << e.b));
            ok = ok && is_bond && h.matrix.val[p] == -1;
          }
          if (p > h.matrix.row_ptr[a]) ok = ok && h.matrix.col[p - 1] < b;
        }
        ok = ok && row_sum == 0;
      }
      CHECK(ok);
    }
  }
}

TEST_CASE("matrix-free apply agrees with the assembled operator", "[operators]") {
  const auto pair = build_rectangular({1, 2}, Boundary::open);
  const std::vector<std::int64_t> e0 = {1, 0};
  CHECK(apply_hamiltonian<std::int64_t>(pair, 1, e0) == std::vector<std::int64_t>{1, -1});

  std::mt19937 rng(11);
  for (const auto& lat : small_lattices()) {
    for (int r = 0; r <= lat.num_vertices(); ++r) {
      const auto h = assemble_hamiltonian(lat, r);
      const std::vector<std::int64_t> ones(h.dim(), 1);
      CHECK(apply_hamiltonian<std::int64_t>(lat, r, ones) == std::vector<std::int64_t>(h.dim(), 0));
      const auto x = random_ints(h.dim(), rng);
      CHECK(apply_hamiltonian<std::int64_t>(lat, r, x) == multiply(h.matrix, std::span<const std::int64_t>(x)));

      std::vector<double> xd(h.dim());
      std::uniform_real_distribution<double> u(-1, 1);
      for (auto& e : xd) e = u(rng);
      const auto got = apply_hamiltonian<double>(lat, r, xd);
      const auto want = multiply(h.matrix, std::span<const double>(xd));
      double diff = 0, scale = 0;
      for (std::size_t n = 0; n < got.size(); ++n) {
        diff = std::max(diff, std::abs(got[n] - want[n]));
        scale = std::max(scale, std::abs(want[n]));
      }
      CHECK(diff <= 1e-14 * std::max(scale, 1.0));
    }
  }
  CHECK_THROWS_AS(apply_hamiltonian<std::int64_t>(pair, 1, std::vector<std::int64_t>{1, 2, 3}), ValidationError);
}

TEST_CASE("inclusion operator examples", "[operators]") {
  const auto t = assemble_intertwiner(3, 2, 1);
  CHECK(to_dense(t.matrix) == (Eigen::MatrixXd(3, 3) << 1, 1, 0, 1, 0, 1, 0, 1, 1).finished());
  // Against the stated colex rows: {0}->{01},{02}; {1}->{01},{12}; {2}->{02},{12}.
  CHECK(t.matrix.entry(0, rank(0b011, 2)) == 1);
  CHECK(t.matrix.entry(0, rank(0b101, 2)) == 1);
  CHECK(t.matrix.entry(1, rank(0b110, 2)) == 1);
  CHECK(t.matrix.entry(2, rank(0b011, 2)) == 0);

  for (int v = 0; v <= 8; ++v)
    for (int r = 0; r <= v; ++r) {
      const auto id = assemble_intertwiner(v, r, r);
      CHECK(to_dense(id.matrix) == Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(binomial(v, r)),
                                                             static_cast<Eigen::Index>(binomial(v, r))));
    }
  CHECK_THROWS_AS(assemble_intertwiner(5, 2, 3), ValidationError);
  CHECK_THROWS_AS(assemble_intertwiner(20, 10, 9, 1000), CapacityError);
}

TEST_CASE("inclusion operator matches brute-force subset test", "[operators][oracle]") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int v = std::uniform_int_distribution<int>(1, 12)(rng);
    const int r = std::uniform_int_distribution<int>(0, v)(rng);
    const int s = std::uniform_int_distribution<int>(0, r)(rng);
    INFO("v=" << v << " r=" << r << " s=" << s);
    const auto t = assemble_intertwiner(v, r, s);
    const SectorBasis src(v, r), dst(v, s);
    for (Index i = 0; i < t.matrix.rows; ++i)
      CHECK(t.matrix.row_ptr[i + 1] - t.matrix.row_ptr[i] == binomial(v - s, r - s));
    std::vector<Index> col_count(t.matrix.cols, 0);
    for (Index c : t.matrix.col) ++col_count[c];
    CHECK(std::all_of(col_count.begin(), col_count.end(), [&](Index c) { return c == binomial(r, s); }));
    if (v <= 8) {
      bool ok = true;
      for (Index i = 0; i < dst.dim(); ++i)
        for (Index j = 0; j < src.dim(); ++j)
          ok = ok && t.matrix.entry(i, j) == ((dst.state(i) & ~src.state(j)) == 0 ? 1 : 0);
      CHECK(ok);
    }
  }
}

TEST_CASE("composition of inclusion operators", "[operators]") {
  // v=6, r=3, s=2, t=1 checked against an explicit chain count.
  const auto c = compose_intertwiners(assemble_intertwiner(6, 2, 1), assemble_intertwiner(6, 3, 2));
  CHECK(c.factor == 2);
  const auto product = multiply(assemble_intertwiner(6, 2, 1).matrix, assemble_intertwiner(6, 3, 2).matrix);
  const SectorBasis b3(6, 3), b2(6, 2), b1(6, 1);
  bool ok = true;
  for (Index i = 0; i < b1.dim(); ++i)
    for (Index j = 0; j < b3.dim(); ++j) {
      std::int64_t chains = 0;
      for (Index m = 0; m < b2.dim(); ++m)
        chains += (b1.state(i) & ~b2.state(m)) == 0 && (b2.state(m) & ~b3.state(j)) == 0;
      ok = ok && product.entry(i, j) == chains;
    }
  CHECK(ok);

  CHECK(compose_intertwiners(assemble_intertwiner(7, 3, 3), assemble_intertwiner(7, 3, 3)).factor == 1);
  CHECK(compose_intertwiners(assemble_intertwiner(7, 4, 2), assemble_intertwiner(7, 5, 4)).factor ==
        static_cast<std::int64_t>(binomial(3, 2)));
  CHECK_THROWS_AS(compose_intertwiners(assemble_intertwiner(7, 4, 2), assemble_intertwiner(7, 5, 3)),
                  ValidationError);

  auto corrupted = assemble_intertwiner(5, 2, 1);
  corrupted.matrix.val[0] = 2;
  CHECK_THROWS_AS(compose_intertwiners(corrupted, assemble_intertwiner(5, 3, 2)), VerificationError);
}

TEST_CASE("Hamiltonian commutes with inclusion operators", "[operators]") {
  const auto chain = build_rectangular({1, 3}, Boundary::open);
  auto chk = check_intertwining(chain, 2, 1);
  CHECK(chk.holds);
  CHECK(chk.max_residual == 0);

  const auto grid = build_rectangular({2, 3}, Boundary::open);
  for (int r = 0; r <= 6; ++r)
    for (int s = 0; s <= r; ++s) {
      INFO("r=" << r << " s=" << s);
      CHECK(check_intertwining(grid, r, s).holds);
    }

  auto h1 = assemble_hamiltonian(grid, 3);
  h1.matrix.stored(0, 0) += 1;
  const auto bad = check_intertwining(assemble_hamiltonian(grid, 2), assemble_intertwiner(6, 3, 2), h1);
  CHECK_FALSE(bad.holds);
  CHECK(bad.max_residual == 1);
}

TEST_CASE("Matrix Market export", "[operators][io]") {
  std::ostringstream os;
  write_matrix_market(os, assemble_hamiltonian(build_rectangular({1, 2}, Boundary::open), 1).matrix, true);
  CHECK(os.str() == "%%MatrixMarket matrix coordinate integer symmetric\n2 2 3\n1 1 1\n2 1 -1\n2 2 1\n");
  std::ostringstream gs;
  write_matrix_market(gs, assemble_intertwiner(2, 1, 0).matrix, false);
  CHECK(gs.str() == "%%MatrixMarket matrix coordinate integer general\n1 2 2\n1 1 1\n1 2 1\n");
}
