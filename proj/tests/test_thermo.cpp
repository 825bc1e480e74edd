#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "qlatt/band_hamiltonian.hpp"
#include "qlatt/basis.hpp"
#include "qlatt/dense_solver.hpp"
#include "qlatt/disorder.hpp"
#include "qlatt/lattice.hpp"
#include "qlatt/thermo.hpp"

using namespace qlatt;

TEST_CASE("eigenstate entropy: pure, pair, uniform") {
    CHECK(eigenstate_entropy({1.0}) == 0.0);
    CHECK(eigenstate_entropy({0.5, 0.5}) == Catch::Approx(1.0));
    const std::size_t nb = 126;
    std::vector<double> uniform(nb, 1.0 / static_cast<double>(nb));
    CHECK(eigenstate_entropy(uniform) == Catch::Approx(std::log2(126.0)).epsilon(1e-12));
    CHECK(eigenstate_entropy({0.0, 1.0, 0.0}) == 0.0);

    CHECK_THROWS_AS(eigenstate_entropy({0.4, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(eigenstate_entropy({-0.1, 1.1}), std::invalid_argument);

    std::vector<double> amp(nb, 1.0 / std::sqrt(static_cast<double>(nb)));
    CHECK(eigenstate_entropy_from_vector(amp.data(), nb) ==
          Catch::Approx(std::log2(126.0)).epsilon(1e-12));
    std::vector<double> bad(nb, 0.1);
    CHECK_THROWS_AS(eigenstate_entropy_from_vector(bad.data(), nb), std::invalid_argument);
}

TEST_CASE("occupation numbers: basis states, uniform state, sum rule") {
    const BandBasis basis(9, 4);
    const std::size_t dim = basis.dimension();

    // a single computational basis state has 0/1 occupations
    std::vector<double> e_k(dim, 0.0);
    const std::size_t k = 37;
    e_k[k] = 1.0;
    const auto occ = occupation_numbers(e_k.data(), basis);
    for (int i = 0; i < 9; ++i)
        CHECK(occ[i] == ((basis.state(k) >> i) & 1u ? 1.0 : 0.0));

    // the uniform superposition gives n_i = n_up / n at every site
    std::vector<double> uni(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    const auto occ_u = occupation_numbers(uni.data(), basis);
    for (double v : occ_u) CHECK(v == Catch::Approx(4.0 / 9.0).epsilon(1e-12));

    // sum rule: sum_i n_i = n_up for any unit vector
    std::mt19937_64 gen(3);
    std::normal_distribution<double> g;
    std::vector<double> v(dim);
    double norm = 0.0;
    for (double& x : v) {
        x = g(gen);
        norm += x * x;
    }
    for (double& x : v) x /= std::sqrt(norm);
    const auto occ_r = occupation_numbers(v.data(), basis);
    double total = 0.0;
    for (double x : occ_r) total += x;
    CHECK(std::abs(total - 4.0) < 1e-8);
}

TEST_CASE("chemical potential solver: limits and symmetry") {
    const std::vector<double> eps = {-0.4, -0.1, 0.2, 0.3};

    // beta = 0 convention
    CHECK(fd_mu_solve(0.0, eps, 2.0, 1.0) == 0.5);

    // symmetric level set at half filling: mu sits at the midpoint
    const std::vector<double> sym = {-0.3, -0.1, 0.1, 0.3};
    for (double beta : {0.7, 5.0, -4.0})
        CHECK(fd_mu_solve(beta, sym, 2.0, 1.0) == Catch::Approx(0.0).margin(1e-9));

    // the filling constraint holds at the returned mu
    for (double beta : {0.5, 3.0, 40.0, -2.0, -30.0}) {
        for (double target : {1.0, 2.0, 3.5}) {
            const double mu = fd_mu_solve(beta, eps, target, 1.0);
            double filling = 0.0;
            for (double e : eps) filling += fd_occupation(beta, mu, e);
            CHECK(filling == Catch::Approx(target).margin(1e-8));
        }
    }

    // large |beta| pushes mu toward the step position
    const double mu_big = fd_mu_solve(500.0, eps, 2.0, 1.0);
    CHECK(mu_big > -0.1);
    CHECK(mu_big < 0.2);

    CHECK_THROWS_AS(fd_mu_solve(1.0, eps, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fd_mu_solve(1.0, eps, 4.0, 1.0), std::invalid_argument);
}

TEST_CASE("Fermi-Dirac fit: round trip recovers beta") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<double> eps(12);
    for (double& e : eps) e = u(gen);
    const double target = 6.0;

    for (double beta : {4.0, 0.8, 15.0, -3.0, -25.0, 50.0, -50.0}) {
        const double mu = fd_mu_solve(beta, eps, target, 1.0);
        std::vector<double> occ(12);
        for (int i = 0; i < 12; ++i) occ[i] = fd_occupation(beta, mu, eps[i]);
        const auto fit = fd_fit(occ, eps, target, 1.0);
        CHECK_FALSE(fit.flat_profile);
        CHECK(std::abs(fit.beta - beta) <= 1e-3);
        CHECK(fit.mu == Catch::Approx(mu).margin(1e-4));
        CHECK(fit.sigma_fd < 1e-6);
        CHECK(fit.t_fd == Catch::Approx(1.0 / beta).epsilon(1e-3));
    }
}

TEST_CASE("Fermi-Dirac fit: flat profile and the sigma <= 1/2 bound") {
    std::vector<double> eps = {-0.45, -0.2, 0.05, 0.3, 0.42, -0.1};

    // exactly flat occupations: beta = 0, T infinite, perfect fit
    std::vector<double> flat(6, 0.5);
    const auto f0 = fd_fit(flat, eps, 3.0, 1.0);
    CHECK(f0.flat_profile);
    CHECK(f0.beta == 0.0);
    CHECK(std::isinf(f0.t_fd));
    CHECK(f0.sigma_fd == Catch::Approx(0.0).margin(1e-12));

    // arbitrary profiles can never beat the beta = 0 grid point by more
    // than the profile's own distance to 1/2, so sigma_fd <= 1/2
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> occ(6);
        double sum = 0.0;
        for (double& o : occ) sum += o = u(gen);
        const auto fit = fd_fit(occ, eps, sum, 1.0);
        CHECK(fit.sigma_fd <= 0.5 + 1e-12);
        CHECK(fit.sigma_fd == Catch::Approx(sigma_fd(occ, eps, fit)).margin(1e-12));
    }
}

TEST_CASE("Fermi-Dirac fit: particle-hole conjugation flips mu") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<double> eps(9);
    for (double& e : eps) e = u(gen);

    const double beta = 6.0, target = 4.0;
    const double mu = fd_mu_solve(beta, eps, target, 1.0);
    std::vector<double> occ(9), occ_c(9), eps_c(9);
    for (int i = 0; i < 9; ++i) {
        occ[i] = fd_occupation(beta, mu, eps[i]);
        occ_c[i] = 1.0 - occ[i]; // hole occupations
        eps_c[i] = -eps[i];
    }
    const auto fit = fd_fit(occ, eps, target, 1.0);
    const auto fit_c = fd_fit(occ_c, eps_c, 9.0 - target, 1.0);
    CHECK(fit_c.beta == Catch::Approx(fit.beta).margin(2e-3));
    CHECK(fit_c.mu == Catch::Approx(-fit.mu).margin(1e-3));
}

TEST_CASE("sigma_s: hand values") {
    CHECK(sigma_s({0.2, 0.8, 0.5}, {0.2, 0.8, 0.5}) == 0.0);
    CHECK(sigma_s({0.0, 0.0}, {1.0, 1.0}) == Catch::Approx(1.0));
    CHECK(sigma_s({0.0, 0.0, 0.0, 0.0}, {0.2, 0.0, 0.0, 0.0}) == Catch::Approx(0.1));
    CHECK_THROWS_AS(sigma_s({0.1}, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("canonical temperature: two-level closed form") {
    const double a = 0.7;
    const std::vector<double> energies = {-a, a};
    std::vector<double> shifted = {-a / 2.0, a / 2.0}; // E' = E/2

    for (double e : {-0.5, -0.2, 0.2, 0.55}) {
        const auto res = t_canonical(energies, shifted, e);
        CHECK_FALSE(res.out_of_range);
        CHECK_FALSE(res.clamped);
        const double expected = -a / (2.0 * std::atanh(e / a));
        CHECK(res.t_can == Catch::Approx(expected).epsilon(1e-8));
        CHECK(res.t_can * ((e < 0.0) ? 1.0 : -1.0) > 0.0); // sign flips at band center
    }

    // at the mean energy beta -> 0 and T diverges
    const auto mid = t_canonical(energies, shifted, 1e-14);
    CHECK(std::abs(mid.beta_can) < 1e-10);

    // outside the spectral range
    CHECK(t_canonical(energies, shifted, 1.0).out_of_range);
    CHECK(t_canonical(energies, shifted, 1.0).t_can == -std::numeric_limits<double>::infinity());
    CHECK(t_canonical(energies, shifted, -1.0).t_can == std::numeric_limits<double>::infinity());
}

TEST_CASE("canonical temperature: monotone in the target energy") {
    // a realistic band spectrum
    const auto lat = build_lattice(3, 3);
    const auto real = sample_disorder({1.0, 0.3, 0.0}, lat, 31);
    const BandBasis basis(9, 4);
    const auto h = build_band_hamiltonian(lat, real, basis);
    const auto spec = dense_full_diag(h, false);
    std::vector<double> shifted(spec.dim);
    for (std::size_t m = 0; m < spec.dim; ++m)
        shifted[m] = shifted_energy(spec.eigenvalues[m], h.sum_deltas);

    double prev_beta = std::numeric_limits<double>::infinity();
    for (double frac : {0.05, 0.15, 0.3, 0.45, 0.6, 0.75, 0.95}) {
        const double target =
            spec.eigenvalues.front() +
            frac * (spec.eigenvalues.back() - spec.eigenvalues.front());
        const auto res = t_canonical(spec.eigenvalues, shifted, target);
        if (res.clamped) continue;
        CHECK(res.beta_can < prev_beta); // beta decreases with energy
        prev_beta = res.beta_can;
        // energy-matching residual
        const double e_back = detail::canonical_energy(spec.eigenvalues, shifted, res.beta_can);
        CHECK(e_back == Catch::Approx(target).margin(1e-6));
    }
}

TEST_CASE("density-of-states fit and thermodynamic temperature") {
    const auto fit = dos_fit({-1.0, 1.0});
    CHECK(fit.mean == 0.0);
    CHECK(fit.sigma2 == Catch::Approx(1.0));

    const auto f2 = dos_fit({1.0, 2.0, 3.0, 4.0});
    CHECK(f2.mean == Catch::Approx(2.5));
    CHECK(f2.sigma2 == Catch::Approx(1.25));

    CHECK(t_thermodynamic(fit, -0.5) == Catch::Approx(2.0));  // below the peak: positive
    CHECK(t_thermodynamic(fit, 0.5) == Catch::Approx(-2.0));  // above the peak: negative
    CHECK(std::isinf(t_thermodynamic(fit, 0.0)));             // divergence at the peak

    CHECK_THROWS_AS(dos_fit({3.0}), std::invalid_argument);
    CHECK_THROWS(dos_fit({2.0, 2.0}));
}

TEST_CASE("band spectra map to their particle-hole conjugates") {
    const auto lat = build_lattice(3, 3);
    auto real = sample_disorder({1.0, 0.25, 0.0}, lat, 13);
    const BandBasis basis(9, 4);
    const auto h = build_band_hamiltonian(lat, real, basis);
    const auto spec = dense_full_diag(h, false);

    DisorderRealization flipped = real;
    for (double& d : flipped.deltas) d = -d;
    for (double& j : flipped.couplings) j = -j;
    const auto hf = build_band_hamiltonian(lat, flipped, basis);
    const auto spec_f = dense_full_diag(hf, false);

    // H(-delta, -J) = -H(delta, J): the spectrum is mirrored
    const std::size_t dim = spec.dim;
    for (std::size_t m = 0; m < dim; m += 5)
        CHECK(spec_f.eigenvalues[m] ==
              Catch::Approx(-spec.eigenvalues[dim - 1 - m]).margin(1e-10));
}
