#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "qlatt/band_hamiltonian.hpp"
#include "qlatt/basis.hpp"
#include "qlatt/dense_solver.hpp"
#include "qlatt/disorder.hpp"
#include "qlatt/full_hamiltonian.hpp"
#include "qlatt/lattice.hpp"

using namespace qlatt;

TEST_CASE("lattice bond counts and invariants") {
    const auto l33 = build_lattice(3, 3);
    CHECK(l33.n == 9);
    CHECK(l33.bonds.size() == 18);

    const auto l44 = build_lattice(4, 4);
    CHECK(l44.n == 16);
    CHECK(l44.bonds.size() == 32);

    // wraparound duplicates collapse on 2-wide lattices
    const auto l22 = build_lattice(2, 2);
    CHECK(l22.n == 4);
    CHECK(l22.bonds.size() == 4);
    CHECK(l22.wraparound_duplicates);

    for (const auto& lat : {l33, l44, l22}) {
        std::set<std::pair<int, int>> seen;
        for (auto [a, b] : lat.bonds) {
            CHECK(a != b);
            CHECK(a >= 0);
            CHECK(b < lat.n);
            CHECK(seen.insert(std::minmax(a, b)).second);
        }
    }
    // 2n bonds whenever min(rows, cols) >= 3
    for (int r = 3; r <= 5; ++r)
        for (int c = 3; c <= 5; ++c)
            CHECK(build_lattice(r, c).bonds.size() == static_cast<std::size_t>(2 * r * c));

    CHECK_THROWS_AS(build_lattice(1, 5), std::invalid_argument);
    CHECK_THROWS_AS(build_lattice(3, 1), std::invalid_argument);
}

TEST_CASE("disorder sampling: determinism, support, zero-J") {
    const auto lat = build_lattice(3, 3);
    const ModelParams params{1.0, 0.0, 0.0};
    const auto a = sample_disorder(params, lat, 42);
    const auto b = sample_disorder(params, lat, 42);
    CHECK(a.deltas == b.deltas);
    CHECK(a.couplings == b.couplings);
    for (double j : a.couplings) CHECK(j == 0.0);

    const ModelParams pj{1.0, 0.3, 0.0};
    const auto c = sample_disorder(pj, lat, 7);
    CHECK(c.deltas.size() == 9);
    CHECK(c.couplings.size() == 18);
    for (double d : c.deltas) {
        CHECK(d >= -0.5);
        CHECK(d <= 0.5);
    }
    for (double j : c.couplings) {
        CHECK(j >= -0.3);
        CHECK(j <= 0.3);
    }
    CHECK(sample_disorder(pj, lat, 8).deltas != c.deltas);
}

TEST_CASE("disorder sampling: uniform moments over many seeds") {
    const auto lat = build_lattice(3, 3);
    const ModelParams params{1.0, 0.0, 0.0};
    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        const auto real = sample_disorder(params, lat, seed);
        for (double d : real.deltas) {
            sum += d;
            sum2 += d * d;
            ++count;
        }
    }
    const double mean = sum / static_cast<double>(count);
    const double var = sum2 / static_cast<double>(count) - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0 / 12.0) < 0.05 / 12.0);
}

TEST_CASE("band basis enumeration and rank lookup") {
    const BandBasis b42(4, 2);
    CHECK(b42.dimension() == 6);
    CHECK(b42.states() == std::vector<std::uint32_t>{0b0011, 0b0101, 0b0110, 0b1001, 0b1010,
                                                     0b1100});

    CHECK(BandBasis(9, 4).dimension() == 126);
    CHECK(BandBasis(16, 8).dimension() == 12870);

    const BandBasis b(12, 6);
    const auto& states = b.states();
    CHECK(std::is_sorted(states.begin(), states.end()));
    for (std::size_t k = 0; k < b.dimension(); ++k) {
        CHECK(std::popcount(states[k]) == 6);
        CHECK(b.rank(states[k]) == k);
    }

    CHECK(central_n_up(9) == 4);
    CHECK(central_n_up(12) == 6);
    CHECK_THROWS_AS(BandBasis(40, 20), std::invalid_argument);
    CHECK_THROWS_AS(BandBasis(4, 5), std::invalid_argument);
}

TEST_CASE("band hamiltonian diagonal and structure") {
    // state up,up,down,down on a 2x2 lattice
    const auto lat = build_lattice(2, 2);
    DisorderRealization real;
    real.deltas = {0.1, -0.2, 0.3, 0.4};
    real.couplings.assign(lat.bonds.size(), 0.05);
    const BandBasis basis(4, 2);
    const auto h = build_band_hamiltonian(lat, real, basis);

    const auto k = basis.rank(0b0011); // sites 0,1 up
    CHECK(h.diag[k] == Catch::Approx(0.1 - 0.2 - 0.3 - 0.4).margin(1e-15));

    // symmetric storage with row < col, partners inside the band
    for (const auto& e : h.offdiag) {
        CHECK(e.row < e.col);
        CHECK(std::popcount(basis.state(e.row)) == 2);
        CHECK(std::popcount(basis.state(e.col)) == 2);
        CHECK(std::popcount(basis.state(e.row) ^ basis.state(e.col)) == 2);
    }
    CHECK(h.sum_deltas == Catch::Approx(0.6));
}

TEST_CASE("J=0 band spectrum equals the diagonal multiset") {
    const auto lat = build_lattice(3, 3);
    const auto real = sample_disorder({1.0, 0.0, 0.0}, lat, 11);
    const BandBasis basis(9, 4);
    const auto h = build_band_hamiltonian(lat, real, basis);
    for (const auto& e : h.offdiag) CHECK(e.value == 0.0);
    auto diag = h.diag;
    std::sort(diag.begin(), diag.end());
    const auto spec = dense_full_diag(h, false);
    for (std::size_t k = 0; k < diag.size(); ++k)
        CHECK(spec.eigenvalues[k] == Catch::Approx(diag[k]).margin(1e-12));
}

TEST_CASE("hermiticity of the assembled operator, entry by entry") {
    const auto lat = build_lattice(2, 3);
    const auto real = sample_disorder({1.0, 0.4, 0.0}, lat, 5);
    const BandBasis basis(6, 3);
    const auto h = build_band_hamiltonian(lat, real, basis);
    const std::size_t n = h.dimension;
    std::vector<double> dense(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) dense[k * n + k] = h.diag[k];
    for (const auto& e : h.offdiag) {
        dense[e.row * n + e.col] += e.value;
        dense[e.col * n + e.row] += e.value;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            CHECK(dense[i * n + j] == dense[j * n + i]);
}

TEST_CASE("matvec conserves magnetization") {
    const auto lat = build_lattice(3, 3);
    const auto real = sample_disorder({1.0, 0.5, 0.0}, lat, 3);
    const BandBasis basis(9, 4);
    const auto h = build_band_hamiltonian(lat, real, basis);
    // the image of any band basis vector has support only on band masks
    std::vector<double> e_k(h.dimension, 0.0);
    e_k[17] = 1.0;
    const auto y = h.matvec(e_k);
    for (std::size_t k = 0; k < h.dimension; ++k)
        if (y[k] != 0.0) CHECK(std::popcount(basis.state(k)) == basis.n_up());
}

TEST_CASE("shifted energy identities") {
    CHECK(shifted_energy(-0.6, 0.6) == Catch::Approx(0.0).margin(1e-15));

    const auto lat = build_lattice(3, 3);
    const auto real = sample_disorder({1.0, 0.0, 0.0}, lat, 21);
    const BandBasis basis(9, 4);
    const auto h = build_band_hamiltonian(lat, real, basis);
    // for J=0 eigenstates E' equals the sum of delta_i over up spins
    for (std::size_t k = 0; k < basis.dimension(); k += 7) {
        double up_sum = 0.0;
        for (int i = 0; i < 9; ++i)
            if ((basis.state(k) >> i) & 1u) up_sum += real.deltas[i];
        CHECK(shifted_energy(h.diag[k], h.sum_deltas) == Catch::Approx(up_sum).margin(1e-12));
    }
}

TEST_CASE("full hamiltonian: J=0 band structure") {
    const auto lat = build_lattice(2, 2);
    const auto real = sample_disorder({1.0, 0.0, 0.0}, lat, 9);
    const double delta0 = 25.0;
    const auto h = build_full_hamiltonian(lat, real, delta0);
    CHECK(h.dimension == 16);
    for (const auto& e : h.offdiag) CHECK(e.value == 0.0);

    // eigenvalues sum_i (+-Gamma_i) group into n+1 bands ~2*delta0 apart
    std::vector<double> eigs = h.diag;
    std::sort(eigs.begin(), eigs.end());
    std::set<int> sectors;
    for (std::uint32_t mask = 0; mask < 16; ++mask) sectors.insert(std::popcount(mask));
    CHECK(sectors.size() == 5); // n+1 magnetization sectors

    int gaps = 0;
    for (std::size_t i = 1; i < eigs.size(); ++i)
        if (eigs[i] - eigs[i - 1] > delta0) ++gaps;
    CHECK(gaps == 4); // n+1 bands means n wide gaps

    CHECK_THROWS_AS(build_full_hamiltonian(build_lattice(4, 4), sample_disorder({1.0, 0.0, 0.0},
                                                                                build_lattice(4, 4), 1), 25.0),
                    std::length_error);
}

TEST_CASE("band projection matches the full hamiltonian central band") {
    const auto lat = build_lattice(3, 3);
    const ModelParams params{1.0, 0.2, 25.0};
    const auto real = sample_disorder(params, lat, 77);
    const BandBasis basis(9, 4);

    const auto hp = build_band_hamiltonian(lat, real, basis);
    const auto band = dense_full_diag(hp, false);

    const auto full = build_full_hamiltonian(lat, real, params.delta0);
    const auto all = detail::dense_eig(full, false, 1 << 14);

    // pick the 126 full-H eigenvalues nearest the band center -delta0
    // (odd n: the band at E = -delta0), shift to band-relative energies
    const double center = -params.delta0;
    std::vector<double> central;
    for (double e : all.eigenvalues)
        if (std::abs(e - center) < params.delta0) central.push_back(e - center);
    REQUIRE(central.size() == basis.dimension());

    const double tol = 5.0 * (params.delta + params.J) * (params.delta + params.J) / params.delta0;
    for (std::size_t k = 0; k < central.size(); ++k)
        CHECK(std::abs(central[k] - band.eigenvalues[k]) < tol);
}
