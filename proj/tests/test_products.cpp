#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "krein/products.hpp"

using namespace krein;
using test::jordan_block;
using test::mat;

namespace {

FactorPair random_pair(test::SeededRng& rng, Eigen::Index p, Eigen::Index q) {
    return FactorPair(rng.complex_gaussian(p, q), rng.complex_gaussian(q, p));
}

} // namespace

TEST_CASE("factor pair validates composability") {
    CHECK_NOTHROW(FactorPair(Matrix::Zero(2, 3), Matrix::Zero(3, 2)));
    CHECK_THROWS_AS(FactorPair(Matrix::Zero(2, 3), Matrix::Zero(2, 3)), DimensionMismatch);
    const FactorPair P(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
    CHECK(P.p() == 2);
    CHECK(P.q() == 2);
}

TEST_CASE("nonzero spectra of the canonical inclusion pair agree") {
    // A = [1 0], B = [[1],[0]]: AB = [1] while BA = diag(1, 0).  The extra
    // zero of BA is outside the comparison.
    const FactorPair P(mat({{1, 0}}), mat({{1}, {0}}));
    const auto report = compare_nonzero_spectra(P);
    REQUIRE(report.nonzero_ab.size() == 1);
    REQUIRE(report.nonzero_ba.size() == 1);
    CHECK(std::abs(report.nonzero_ab[0].value - 1.0) < 1e-12);
    CHECK(report.matched);
    CHECK(report.weyr_match);
    CHECK(report.max_value_discrepancy < 1e-12);
}

TEST_CASE("spectra comparison matches planted defective structure") {
    // AB = J_2(5) + separated eigenvalue; BA = B A shares it with equal Weyr.
    test::SeededRng rng(21);
    Matrix K = Matrix::Zero(3, 3);
    K.topLeftCorner(2, 2) = jordan_block(2, 5.0);
    K(2, 2) = 1.0;
    const Matrix A = test::random_invertible(rng, 3);
    const Matrix B = A.inverse() * K; // AB = K up to roundoff, BA = A^{-1} K A

    SpectrumCompareOptions opt;
    opt.eig.cluster_tol = 1e-5; // planted double eigenvalues split by ~sqrt(eps)
    const auto report = compare_nonzero_spectra(FactorPair(A, B), opt);
    REQUIRE(report.nonzero_ab.size() == 2);
    CHECK(report.matched);
    CHECK(report.weyr_match);
    for (const auto& pair : report.pairs) {
        CHECK(pair.ab.weyr == pair.ba.weyr);
        if (std::abs(pair.ab.value - 5.0) < 1e-3) CHECK(pair.ab.weyr == std::vector<int>{1, 1});
    }
}

TEST_CASE("spectra comparison over a seeded corpus of rectangular pairs") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        test::SeededRng rng(test::SeededRng::mix(500, seed));
        const auto p = static_cast<Eigen::Index>(2 + rng.uniform() * 4);
        const auto q = static_cast<Eigen::Index>(2 + rng.uniform() * 4);
        const FactorPair P = random_pair(rng, p, q);
        const auto report = compare_nonzero_spectra(P);
        CHECK(report.matched);
        CHECK(report.weyr_match);
        CHECK(report.max_value_discrepancy <= report.match_tolerance);
    }
}

TEST_CASE("eigenvalues inside the zero band are excluded from the comparison") {
    const FactorPair P(mat({{1e-12}}), mat({{1.0}}));
    const auto report = compare_nonzero_spectra(P);
    CHECK(report.nonzero_ab.empty());
    CHECK(report.nonzero_ba.empty());
    CHECK(report.matched); // vacuously
}

TEST_CASE("transport carries a diagonal eigenspace across the products") {
    const FactorPair P(mat({{2, 0}, {0, 3}}), Matrix::Identity(2, 2));
    const auto report = eigenspace_transport(P, Complex(2, 0), 1);
    CHECK(report.dim == 1);
    CHECK(report.span_residual < 1e-12);
    REQUIRE(report.roundtrip_residual.has_value());
    CHECK(*report.roundtrip_residual < 1e-12);
    // forward and inverse are mutually inverse 1x1 maps.
    CHECK(std::abs(report.forward(0, 0) * report.inverse(0, 0) - 1.0) < 1e-12);
}

TEST_CASE("transport matches kernels of higher powers at a planted Jordan eigenvalue") {
    test::SeededRng rng(33);
    Matrix K = Matrix::Zero(3, 3);
    K.topLeftCorner(2, 2) = jordan_block(2, 3.0);
    K(2, 2) = -2.0;
    const Matrix A = test::random_invertible(rng, 3);
    const Matrix B = A.inverse() * K; // BA = A^{-1} K A, AB = K up to roundoff

    TransportOptions opt;
    opt.cluster_tol = 1e-5;
    opt.span_tol = 1e-6;
    for (int power = 1; power <= 2; ++power) {
        const auto report = eigenspace_transport(FactorPair(A, B), Complex(3, 0), power, opt);
        CHECK(report.dim == power);
        CHECK(report.span_residual < 1e-6);
        CHECK(report.basis_ab.cols() == power);
        CHECK(report.basis_ba.cols() == power);
        if (power == 1) {
            REQUIRE(report.roundtrip_residual.has_value());
            CHECK(*report.roundtrip_residual < 1e-8);
        } else {
            CHECK_FALSE(report.roundtrip_residual.has_value());
        }
    }
}

TEST_CASE("transport round-trip is exact on a seeded corpus of eigenvalues") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        test::SeededRng rng(test::SeededRng::mix(900, seed));
        const auto p = static_cast<Eigen::Index>(2 + rng.uniform() * 3);
        const auto q = static_cast<Eigen::Index>(2 + rng.uniform() * 3);
        const FactorPair P = random_pair(rng, p, q);
        const auto spectra = compare_nonzero_spectra(P);
        for (const auto& pair : spectra.pairs) {
            const auto report = eigenspace_transport(P, pair.ba.value, 1);
            CHECK(report.dim == pair.ba.geometric_mult());
            CHECK(report.span_residual < 1e-7);
            REQUIRE(report.roundtrip_residual.has_value());
            CHECK(*report.roundtrip_residual < 1e-8);
        }
    }
}

TEST_CASE("transport rejects non-eigenvalues and the zero band") {
    const FactorPair P(mat({{2, 0}, {0, 3}}), Matrix::Identity(2, 2));
    CHECK_THROWS_AS(eigenspace_transport(P, Complex(7, 0), 1), NotAnEigenvalue);
    CHECK_THROWS_AS(eigenspace_transport(P, Complex(0, 0), 1), NotAnEigenvalue);

    // A fixture with inevitable roundoff, so an absurd span tolerance trips.
    test::SeededRng rng(91);
    const FactorPair Q = random_pair(rng, 4, 4);
    const Complex lambda = compare_nonzero_spectra(Q).nonzero_ba.front().value;
    TransportOptions strict;
    strict.span_tol = 1e-18;
    CHECK_THROWS_AS(eigenspace_transport(Q, lambda, 1, strict), TransportFailure);
}

TEST_CASE("resolvent identity residuals vanish for the hand-computed inclusion pair") {
    const FactorPair P(mat({{1, 0}}), mat({{1}, {0}}));
    const Complex lambda(2, 0);
    // (BA - 2)^{-1} = diag(-1, -1/2) exactly.
    const Matrix R = resolvent(P.ba(), lambda);
    CHECK(operator_norm(R - mat({{-1, 0}, {0, -0.5}})) < 1e-14);
    const auto res = resolvent_identity_residuals(P, lambda, Complex(0.5, 0.5));
    CHECK(res.one_param < 1e-14);
    CHECK(res.two_param < 1e-14);
}

TEST_CASE("resolvent identity residuals are tiny relative to the resolvent norm") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        test::SeededRng rng(test::SeededRng::mix(1300, seed));
        const auto p = static_cast<Eigen::Index>(1 + rng.uniform() * 4);
        const auto q = static_cast<Eigen::Index>(1 + rng.uniform() * 4);
        const FactorPair P = random_pair(rng, p, q);
        const Complex lambda(1.5 + rng.uniform(), 1.0 + rng.uniform());
        const Complex mu(-1.0 - rng.uniform(), 2.0 * rng.uniform() - 1.0);
        const auto res = resolvent_identity_residuals(P, lambda, mu);
        const double scale = resolvent_norm(P.ba(), lambda);
        CHECK(res.one_param <= 1e-9 * scale);
        CHECK(res.two_param <= 1e-9 * scale);
    }
}

TEST_CASE("resolvent identities reject lambda = 0 and spectral parameters") {
    const FactorPair P(mat({{1, 0}}), mat({{1}, {0}}));
    CHECK_THROWS_AS(resolvent_identity_residuals(P, Complex(0, 0), Complex(1, 1)),
                    ValidationError);
    CHECK_THROWS_AS(resolvent_identity_residuals(P, Complex(1, 0), Complex(5, 5)), SpectrumHit);
}

TEST_CASE("domination constant of the canonical inclusion pair is one half") {
    const FactorPair P(mat({{1, 0}}), mat({{1}, {0}}));
    const auto dom = domination_constants(P);
    CHECK(dom.c1 == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(dom.c2 == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(dom.C == 1.0); // max(1, 1/4)
}

TEST_CASE("domination constants on identity and zero factors") {
    const auto dom_id =
        domination_constants(FactorPair(Matrix::Identity(1, 1), Matrix::Identity(1, 1)));
    CHECK(dom_id.c1 == doctest::Approx(0.5).epsilon(1e-8));

    const auto dom_zero = domination_constants(FactorPair(mat({{2}}), mat({{0}})));
    CHECK(dom_zero.c1 == doctest::Approx(0.0));
    CHECK(dom_zero.c2 == doctest::Approx(2.0).epsilon(1e-8)); // sup 2|y| / |y|
}

TEST_CASE("domination ascent beats dense sphere sampling") {
    test::SeededRng rng(55);
    const FactorPair P = random_pair(rng, 2, 2);
    const auto dom = domination_constants(P);

    test::SeededRng sampler(77);
    double best = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const Vector x = sampler.unit_vector(2);
        best = std::max(best, (P.B * x).norm() / ((P.A * (P.B * x)).norm() + 1.0));
    }
    CHECK(dom.c1 >= best - 1e-4);
    CHECK(dom.c1 <= operator_norm(P.B) + 1e-9); // crude upper bound

    // The witness reproduces the reported value.
    const Vector w = dom.witness1;
    CHECK(std::abs(w.norm() - 1.0) < 1e-9);
    const double value = (P.B * w).norm() / ((P.A * (P.B * w)).norm() + 1.0);
    CHECK(value == doctest::Approx(dom.c1).epsilon(1e-9));
}

TEST_CASE("two-parameter resolvent bound holds with computed domination constants") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        test::SeededRng rng(test::SeededRng::mix(2100, seed));
        const auto p = static_cast<Eigen::Index>(1 + rng.uniform() * 4);
        const auto q = static_cast<Eigen::Index>(1 + rng.uniform() * 4);
        const FactorPair P = random_pair(rng, p, q);
        DominationOptions dopt;
        dopt.seed = seed;
        const auto dom = domination_constants(P, dopt);
        for (int s = 0; s < 5; ++s) {
            const Complex lambda(2.0 * rng.uniform() - 1.0, 1.0 + rng.uniform());
            const Complex mu(2.0 * rng.uniform() - 1.0, -1.0 - rng.uniform());
            const auto check = resolvent_bound_check(P, lambda, mu, dom);
            CHECK(check.holds);
            CHECK(check.m1 >= 1.0);
            CHECK(check.m2 >= 1.0);
            // The envelope has the documented closed form.
            const double expected = check.m1 * check.m2 * dom.C / std::abs(lambda) *
                                    (std::abs(mu) + std::abs(lambda - mu) *
                                                        (2.0 + std::abs(lambda)) *
                                                        (2.0 + std::abs(mu)));
            CHECK(check.rhs == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("resolvent bound check rejects lambda = 0") {
    const FactorPair P(mat({{1, 0}}), mat({{1}, {0}}));
    CHECK_THROWS_AS(resolvent_bound_check(P, Complex(0, 0), Complex(1, 1)), ValidationError);
}

TEST_CASE("zero pole order distinguishes the two inclusion directions") {
    // AB = [1]: zero is in rho(AB); BA = diag(1, 0): zero is a simple
    // eigenvalue of BA, so the pole-order-one conclusion applies.
    const auto inc = zero_pole_order(FactorPair(mat({{1, 0}}), mat({{1}, {0}})));
    CHECK(inc.order_ab == 0);
    CHECK(inc.order_ba == 1);
    CHECK(inc.zero_in_resolvent_set_ab);
    CHECK(inc.zero_in_spectrum_ba);
    CHECK(inc.semisimple_zero_expected);

    // Reversed: AB = diag(1, 0) is singular, so the conclusion does not apply.
    const auto rev = zero_pole_order(FactorPair(mat({{1}, {0}}), mat({{1, 0}})));
    CHECK(rev.order_ab == 1);
    CHECK(rev.order_ba == 0);
    CHECK_FALSE(rev.zero_in_resolvent_set_ab);
    CHECK_FALSE(rev.semisimple_zero_expected);
}

TEST_CASE("zero pole order sees defective zeros") {
    const auto report =
        zero_pole_order(FactorPair(jordan_block(2, 0.0), Matrix::Identity(2, 2)));
    CHECK(report.order_ab == 2);
    CHECK(report.order_ba == 2);
    CHECK_FALSE(report.semisimple_zero_expected);
}

TEST_CASE("invertible wide-times-tall products force a semisimple zero") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        test::SeededRng rng(test::SeededRng::mix(2500, seed));
        const auto p = static_cast<Eigen::Index>(1 + rng.uniform() * 3);
        const auto q = static_cast<Eigen::Index>(p + 1 + rng.uniform() * 3);
        const FactorPair P = random_pair(rng, p, q);
        if (smallest_singular_value(P.ab()) < 1e-3) continue; // AB must be invertible
        const auto report = zero_pole_order(P);
        CHECK(report.semisimple_zero_expected);
        CHECK(report.order_ba == 1);
    }
}
