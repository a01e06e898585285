#include <doctest.h>

#include <cmath>

#include "cqmimo/quantizer.hpp"
#include "cqmimo/rng.hpp"
#include "oracles.hpp"

using namespace cqmimo;

namespace {

// Published Bussgang gains of the step-optimized uniform quantizer.
constexpr double kDelta[] = {0.9387, 0.9811, 0.9942, 0.9983, 0.9995};

ComplexMatrix normalized_random_precoder(std::size_t nb, std::size_t nu, double p_total,
                                         std::uint64_t seed) {
    Rng rng(seed, {0xabc});
    ComplexMatrix p = oracles::random_matrix(nb, nu, rng);
    return (std::sqrt(p_total) / frobenius_norm(p)) * p;
}

}  // namespace

TEST_CASE("bussgang gain table for 2 to 6 bits") {
    for (unsigned b = 2; b <= 6; ++b) {
        const QuantizerSpec q = build_quantizer(b, 64, 16.0);
        CHECK(std::abs(q.delta - kDelta[b - 2]) <= 1e-3);
        CHECK(q.j_levels == (1u << b));
        CHECK(q.gamma > 0.0);
        CHECK(q.alpha > 0.0);
    }
    CHECK_THROWS_AS(build_quantizer(1, 64, 16.0), DomainError);
    CHECK_THROWS_AS(build_quantizer(13, 64, 16.0), DomainError);
}

TEST_CASE("gain depends only on the bit depth, not on antenna count or power") {
    const double d1 = build_quantizer(4, 64, 16.0).delta;
    const double d2 = build_quantizer(4, 7, 3.3).delta;
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-9));
}

TEST_CASE("gain increases strictly with resolution") {
    double prev = 0.0;
    for (unsigned b = 2; b <= 8; ++b) {
        const double d = build_quantizer(b, 64, 16.0).delta;
        CHECK(d > prev);
        CHECK(d < 1.0);
        prev = d;
    }
}

TEST_CASE("mid-rise staircase has no zero level and saturates") {
    const QuantizerSpec q = build_quantizer(3, 4, 4.0);
    const double half = 0.5 * q.alpha * q.gamma;
    const double top = 0.5 * q.alpha * q.gamma * static_cast<double>(q.j_levels - 1);

    const auto zero = quantize({cx(0.0, 0.0)}, q);
    CHECK(zero[0].real() == doctest::Approx(half).epsilon(1e-15));
    CHECK(zero[0].imag() == doctest::Approx(half).epsilon(1e-15));

    const auto sat = quantize({cx(1e9, -1e9)}, q);
    CHECK(sat[0].real() == doctest::Approx(top).epsilon(1e-15));
    CHECK(sat[0].imag() == doctest::Approx(-top).epsilon(1e-15));

    // Negative side of the staircase.
    const auto neg = quantize({cx(-0.3 * q.gamma, 0.0)}, q);
    CHECK(neg[0].real() == doctest::Approx(-half).epsilon(1e-15));
}

TEST_CASE("full-resolution sentinel is the identity") {
    const QuantizerSpec fr = QuantizerSpec::make_full_resolution(8, 8.0);
    CHECK(fr.full_resolution());
    CHECK(fr.delta == 1.0);
    Rng rng(5);
    std::vector<cx> x(8);
    for (auto& v : x) v = rng.complex_normal();
    CHECK(quantize(x, fr) == x);
}

TEST_CASE("re-quantizing the unscaled output reproduces the same levels") {
    const QuantizerSpec q = build_quantizer(4, 16, 16.0);
    Rng rng(77);
    std::vector<cx> x(512);
    for (auto& v : x) v = 3.0 * rng.complex_normal();

    const std::vector<cx> once = quantize(x, q);
    std::vector<cx> unscaled = once;
    for (auto& v : unscaled) v /= q.alpha;
    const std::vector<cx> twice = quantize(unscaled, q);
    CHECK(twice == once);
}

TEST_CASE("scalar distortion power matches 1 - delta^2 at 3 bits") {
    const std::size_t nb = 16;
    const double p_total = 16.0;
    const QuantizerSpec q = build_quantizer(3, nb, p_total);
    const double sigma2 = p_total / static_cast<double>(nb);
    const double sd_re = std::sqrt(sigma2 / 2.0);

    Rng rng(123);
    double num = 0.0, den = 0.0;
    std::vector<cx> x(1), xq;
    for (int i = 0; i < 1000000; ++i) {
        x[0] = cx(sd_re * rng.normal(), sd_re * rng.normal());
        xq = quantize(x, q);
        num += std::norm(xq[0] - q.delta * x[0]);
        den += std::norm(x[0]);
    }
    const double ratio = num / den;
    const double expected = 1.0 - q.delta * q.delta;
    CHECK(std::abs(ratio - expected) < 5e-4);
    CHECK(ratio == doctest::Approx(0.0374).epsilon(0.03));
}

TEST_CASE("quantized transmit power stays on the configured budget") {
    const std::size_t nb = 64, nu = 16;
    const double p_total = 16.0;
    const QuantizerSpec q = build_quantizer(4, nb, p_total);
    const ComplexMatrix p = normalized_random_precoder(nb, nu, p_total, 9);

    Rng rng(31);
    double sum = 0.0;
    const std::size_t n_samples = 20000;
    std::vector<cx> s(nu), x(nb);
    for (std::size_t n = 0; n < n_samples; ++n) {
        for (auto& v : s) v = rng.complex_normal();
        for (std::size_t i = 0; i < nb; ++i) {
            cx acc(0.0, 0.0);
            for (std::size_t k = 0; k < nu; ++k) acc += p(i, k) * s[k];
            x[i] = acc;
        }
        for (const cx& v : quantize(x, q)) sum += std::norm(v);
    }
    const double avg = sum / static_cast<double>(n_samples);
    CHECK(std::abs(avg - p_total) / p_total < 0.02);
}

TEST_CASE("verify_bussgang is exactly zero at full resolution") {
    const QuantizerSpec fr = QuantizerSpec::make_full_resolution(8, 4.0);
    const ComplexMatrix p = normalized_random_precoder(8, 4, 4.0, 3);
    const BussgangStats st = verify_bussgang(fr, p, 1000, 1);
    CHECK(st.cross_corr_norm == 0.0);
    CHECK(st.rff_error == 0.0);
}

TEST_CASE("distortion decorrelates from the symbols as samples grow") {
    const std::size_t nb = 16, nu = 4;
    const double p_total = 4.0;
    const QuantizerSpec q = build_quantizer(3, nb, p_total);
    const ComplexMatrix p = normalized_random_precoder(nb, nu, p_total, 17);

    const double c3 = verify_bussgang(q, p, 1000, 7).cross_corr_norm;
    const double c4 = verify_bussgang(q, p, 10000, 7).cross_corr_norm;
    const double c5 = verify_bussgang(q, p, 100000, 7).cross_corr_norm;
    CHECK(c4 < c3);
    CHECK(c5 < c4);
}

TEST_CASE("bussgang figures of merit at 5 and 2 bits") {
    const std::size_t nb = 64, nu = 16;
    const double p_total = 16.0;
    const ComplexMatrix p = normalized_random_precoder(nb, nu, p_total, 29);

    SUBCASE("5 bits: cross-correlation within 2% of the linear-term scale") {
        const QuantizerSpec q = build_quantizer(5, nb, p_total);
        const BussgangStats st = verify_bussgang(q, p, 100000, 11);
        CHECK(st.cross_corr_norm <= 0.02 * q.delta * frobenius_norm(p));
        CHECK(st.rff_error <= 0.10);
    }

    SUBCASE("2 bits: covariance identity holds loosely") {
        // The modeled distortion covariance is exact on the diagonal but its
        // off-diagonal part is an approximation; at 2 bits the Monte Carlo
        // error floor sits at ~0.103 of the signal-covariance scale,
        // independent of the sample count and of the precoder draw.
        const QuantizerSpec q = build_quantizer(2, nb, p_total);
        const BussgangStats st = verify_bussgang(q, p, 100000, 11);
        CHECK(st.rff_error <= 0.11);
        CHECK(st.rff_error >= 0.08);
    }
}
