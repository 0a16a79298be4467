#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rollgeo/catalog.hpp"
#include "rollgeo/geometry.hpp"

using namespace rollgeo;

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

Vec randomDomainPoint(const ChartManifold& M, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Vec x(M.dim());
    do {
        for (int k = 0; k < M.dim(); ++k)
            x[k] = M.sample_lo[k] + uni(rng) * (M.sample_hi[k] - M.sample_lo[k]);
    } while (!M.inDomain(x));
    return x;
}

// S^2(1) in the spherical chart (theta, phi), used as an independent
// symbolic oracle for coordinate Christoffel symbols.
ChartManifold sphericalChart() {
    auto metric = [](const Vec& x) -> Mat {
        Mat g = Mat::Zero(2, 2);
        g(0, 0) = 1.0;
        g(1, 1) = std::sin(x[0]) * std::sin(x[0]);
        return g;
    };
    auto domain = [](const Vec& x) { return x[0] > 0.2 && x[0] < M_PI - 0.2; };
    return ChartManifold::fromMetric("sphere_spherical", 2, metric, domain);
}

}  // namespace

TEST_CASE("coordinate Christoffel symbols: flat charts vanish") {
    auto M = catalog::euclidean(3);
    Tensor g = christoffelCoords(M, vec3(0.3, -1.0, 2.0));
    CHECK(g.maxAbs() < 1e-12);

    // Rescaled flat metric, constant coefficients.
    auto M4 = ChartManifold::fromMetric(
        "flat4", 2, [](const Vec&) { return 4.0 * Mat::Identity(2, 2); },
        nullptr);
    CHECK(christoffelCoords(M4, vec2(0.7, -0.2)).maxAbs() < 1e-10);
}

TEST_CASE("coordinate Christoffel symbols: spherical chart oracle") {
    auto M = sphericalChart();
    // Symbolic: Gamma^theta_{phi phi} = -sin cos, Gamma^phi_{theta phi} = cot.
    for (double th : {M_PI / 2, 1.0, 2.0}) {
        Tensor g = christoffelCoords(M, vec2(th, 0.4));
        CHECK(g(0, 1, 1) ==
              doctest::Approx(-std::sin(th) * std::cos(th)).epsilon(1e-6));
        CHECK(g(1, 0, 1) ==
              doctest::Approx(std::cos(th) / std::sin(th)).epsilon(1e-6));
        CHECK(g(1, 0, 1) == doctest::Approx(g(1, 1, 0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(christoffelCoords(M, vec2(-0.5, 0.0)), DomainError);
}

TEST_CASE("frame Christoffel symbols: antisymmetry and bump formula") {
    auto M = catalog::bumpSurface();
    Tensor fc0 = frameChristoffel(M, vec2(0.0, 0.3));
    CHECK(std::abs(fc0(0, 1, 1)) < 1e-10);  // f'(0) = 0

    double x1 = 1.2;
    double f = catalog::bumpProfile(x1), fp = catalog::bumpProfileD1(x1);
    double expected = fp / ((1.0 - f) * std::sqrt(1.0 + fp * fp));
    Tensor fc = frameChristoffel(M, vec2(x1, -0.7));
    CHECK(fc(0, 1, 1) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(std::abs(fc(0, 0, 1)) < 1e-10);  // Gamma^1_{12} = 0

    // Constant frame on flat space.
    CHECK(frameChristoffel(catalog::euclidean(4),
                           Vec::Constant(4, 0.3)).maxAbs() < 1e-12);

    // Antisymmetry in (a, b) at random points.
    std::mt19937_64 rng(11);
    auto S = catalog::sphereTimesLine();
    for (int t = 0; t < 5; ++t) {
        Vec x = randomDomainPoint(S, rng);
        Tensor fc2 = frameChristoffel(S, x);
        double r = 0;
        for (int a = 0; a < 3; ++a)
            for (int j = 0; j < 3; ++j)
                for (int b = 0; b < 3; ++b)
                    r = std::max(r, std::abs(fc2(a, j, b) + fc2(b, j, a)));
        CHECK(r < 1e-9);
    }
}

TEST_CASE("Riemann tensor: constant curvature and flat cases") {
    std::mt19937_64 rng(23);
    auto S = catalog::sphere(2, 2.0);
    Vec x = randomDomainPoint(S, rng);
    CurvatureData cd = riemann(S, x);
    CHECK(cd.sectional(vec2(1, 0), vec2(0, 1)) ==
          doctest::Approx(0.25).epsilon(1e-8));

    CHECK(riemann(catalog::euclidean(3), vec3(1, 2, -1)).R.maxAbs() < 1e-12);

    // Convention check: the unit sphere comes out at +1.
    auto S1 = catalog::sphere(2, 1.0);
    CurvatureData cd1 = riemann(S1, randomDomainPoint(S1, rng));
    CHECK(cd1.sectional(vec2(1, 0), vec2(0, 1)) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(cd1.R(0, 1, 1, 0) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Riemann tensor: bump surface Gaussian curvature") {
    auto M = catalog::bumpSurface();
    CHECK(riemann(M, vec2(0.5, 0.1)).R.maxAbs() < 1e-10);
    for (double x1 : {1.1, 1.2, 1.3, 1.4, -1.2}) {
        double kappa = riemann(M, vec2(x1, 0.2)).sectional(vec2(1, 0),
                                                           vec2(0, 1));
        CHECK(kappa == doctest::Approx(catalog::bumpGaussianCurvature(x1))
                           .epsilon(1e-6));
        CHECK(kappa > 0.0);
    }
}

TEST_CASE("nabla R: locally symmetric spaces and the bump surface") {
    std::mt19937_64 rng(31);
    auto S = catalog::sphere(3, 1.5);
    CHECK(nablaRiemann(S, randomDomainPoint(S, rng)).maxAbs() < 1e-6);
    CHECK(nablaRiemann(catalog::euclidean(2), vec2(0.1, 0.2)).maxAbs() < 1e-9);

    auto B = catalog::bumpSurface();
    CHECK(nablaRiemann(B, vec2(1.3, 0.0)).maxAbs() > 1e-2);
}

TEST_CASE("iterated curvature tensor R^l") {
    std::mt19937_64 rng(37);
    // Flat: zero at any order.
    auto E = catalog::euclidean(2);
    CHECK(rPower(E, vec2(0.4, 0.4), 3).tensor.maxAbs() < 1e-12);

    // l = 1 is the recursion base.
    auto S = catalog::sphere(2, 1.0);
    Vec x = randomDomainPoint(S, rng);
    Tensor R = riemann(S, x).R;
    IteratedCurvature r1 = rPower(S, x, 1);
    for (std::size_t i = 0; i < R.size(); ++i)
        CHECK(r1.tensor.data()[i] == doctest::Approx(R.data()[i]));

    // Brute-force contraction oracle with an independent loop order.
    for (const ChartManifold& M :
         {catalog::sphere(2, 1.0), catalog::sphereTimesLine()}) {
        Vec y = randomDomainPoint(M, rng);
        const int n = M.dim();
        Tensor Rm = riemann(M, y).R;
        Tensor r2 = rPower(M, y, 2).tensor;
        double worst = 0;
        for (int i4 = 0; i4 < n; ++i4)
            for (int i3 = 0; i3 < n; ++i3)
                for (int i2 = 0; i2 < n; ++i2)
                    for (int i1 = 0; i1 < n; ++i1)
                        for (int b = 0; b < n; ++b)
                            for (int a = 0; a < n; ++a) {
                                double v = 0;
                                for (int s = n - 1; s >= 0; --s)
                                    v += Rm(a, b, i1, s) * Rm(s, i2, i3, i4);
                                worst = std::max(
                                    worst, std::abs(v - r2(a, b, i1, i2, i3,
                                                           i4)));
                            }
        CHECK(worst < 1e-12);
    }

    // S^2(1): R^2(e1,e2,e1,e2,e1,e2) via the 6-tensor recursion.
    Tensor r2 = rPower(S, x, 2).tensor;
    double expect = 0;
    for (int s = 0; s < 2; ++s)
        expect += R(0, 1, 0, s) * R(s, 1, 0, 1);
    CHECK(r2(0, 1, 0, 1, 0, 1) == doctest::Approx(expect).epsilon(1e-12));

    CHECK_THROWS_AS(rPower(S, x, 0), ArgumentError);
}

TEST_CASE("sectional curvature: catalog values and basis invariance") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    auto S = catalog::sphere(3, 2.0);
    Vec x = randomDomainPoint(S, rng);
    CurvatureData cd = riemann(S, x);
    for (int t = 0; t < 5; ++t) {
        Vec u(3), v(3);
        for (int k = 0; k < 3; ++k) {
            u[k] = uni(rng);
            v[k] = uni(rng);
        }
        CHECK(cd.sectional(u, v) == doctest::Approx(0.25).epsilon(1e-7));
    }

    auto H = catalog::hyperbolic(2, 2.0);
    CHECK(sectional(H, vec2(0.2, -0.1), vec2(1, 0), vec2(0, 1)) ==
          doctest::Approx(-0.25).epsilon(1e-7));

    // S^2 x R: mixed planes are flat, the sphere plane has curvature 1.
    auto P = catalog::sphereTimesLine();
    Vec y = randomDomainPoint(P, rng);
    CurvatureData cp = riemann(P, y);
    CHECK(cp.sectional(vec3(1, 0, 0), vec3(0, 0, 1)) ==
          doctest::Approx(0.0).epsilon(1e-8));
    CHECK(std::abs(cp.sectional(vec3(0, 1, 0), vec3(0, 0, 1))) < 1e-8);
    CHECK(cp.sectional(vec3(1, 0, 0), vec3(0, 1, 0)) ==
          doctest::Approx(1.0).epsilon(1e-7));

    // Invariance under an invertible change of plane basis.
    Vec u = vec3(1, 0.3, -0.2), v = vec3(0, 1, 0.5);
    double base = cp.sectional(u, v);
    for (int t = 0; t < 10; ++t) {
        double a = uni(rng), b = uni(rng), c = uni(rng), d = uni(rng);
        if (std::abs(a * d - b * c) < 0.1) continue;
        CHECK(cp.sectional(a * u + b * v, c * u + d * v) ==
              doctest::Approx(base).epsilon(1e-9));
    }

    CHECK_THROWS_AS(cp.sectional(u, 2.0 * u), DegeneracyError);
}

TEST_CASE("locally symmetric check") {
    std::mt19937_64 rng(43);
    auto S = catalog::sphere(2, 1.7);
    std::vector<Vec> pts;
    for (int t = 0; t < 5; ++t) pts.push_back(randomDomainPoint(S, rng));
    CHECK(isLocallySymmetric(S, pts).locallySymmetric);

    auto E = catalog::euclidean(3);
    CHECK(isLocallySymmetric(E, {vec3(0, 1, 2)}).locallySymmetric);

    auto B = catalog::bumpSurface();
    std::vector<Vec> bpts;
    for (double x1 = 0.0; x1 <= 1.4; x1 += 0.2)
        bpts.push_back(vec2(x1, 0.3));
    CHECK_FALSE(isLocallySymmetric(B, bpts).locallySymmetric);

    CHECK_THROWS_AS(isLocallySymmetric(S, {}), ArgumentError);
}

TEST_CASE("curvature symmetries across the catalog") {
    std::mt19937_64 rng(47);
    std::vector<ChartManifold> cat;
    for (const auto& name : catalog::names()) cat.push_back(catalog::byName(name, {3, 1.3}));
    for (const ChartManifold& M : cat) {
        for (int t = 0; t < 100; ++t) {
            Vec x = randomDomainPoint(M, rng);
            CHECK(M.gramResidual(x) < 1e-10);
        }
        for (int t = 0; t < 10; ++t) {
            Vec x = randomDomainPoint(M, rng);
            CurvatureData cd = riemann(M, x);
            CHECK(cd.antisymmetryResidual() < 1e-8);
            CHECK(cd.pairSymmetryResidual() < 1e-8);
            CHECK(cd.firstBianchiResidual() < 1e-8);
        }
        // Second Bianchi residual at a couple of points.
        for (int t = 0; t < 2; ++t) {
            Vec x = randomDomainPoint(M, rng);
            CHECK(secondBianchiResidual(nablaRiemann(M, x)) < 1e-5);
        }
    }
}

TEST_CASE("FD frame derivatives agree with the analytic path") {
    std::mt19937_64 rng(53);
    for (const auto& name : catalog::names()) {
        ChartManifold M = catalog::byName(name, {2, 1.4});
        ChartManifold F = M;  // strip the analytic jet
        auto frame = [&M](const Vec& x) { return M.frameAt(x); };
        auto domain = [&M](const Vec& x) { return M.inDomain(x); };
        ChartManifold fd(M.name() + "_fd", M.dim(), frame, domain);
        fd.sample_lo = M.sample_lo;
        fd.sample_hi = M.sample_hi;
        for (int t = 0; t < 3; ++t) {
            Vec x = randomDomainPoint(M, rng);
            Tensor ra = riemann(M, x).R;
            Tensor rf = riemann(fd, x).R;
            double scale = std::max(1.0, ra.maxAbs());
            double worst = 0;
            for (std::size_t i = 0; i < ra.size(); ++i)
                worst = std::max(worst,
                                 std::abs(ra.data()[i] - rf.data()[i]));
            CHECK(worst / scale < 1e-5);
        }
    }
}

TEST_CASE("catalog metadata re-verification") {
    for (const auto& name : catalog::names()) {
        ChartManifold M = catalog::byName(name, {3, 1.1});
        auto rep = catalog::verifyMetadata(M);
        CHECK(rep.ok);
    }
}

TEST_CASE("three-angle SO(3) parametrization") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    for (int t = 0; t < 20; ++t) {
        double th = uni(rng), ph = uni(rng), ps = uni(rng);
        Mat q = catalog::so3FromAngles(th, ph, ps);
        CHECK((q.transpose() * q - Mat::Identity(3, 3)).norm() < 1e-12);
        CHECK(q.determinant() == doctest::Approx(1.0).epsilon(1e-12));
        // Entrywise against the explicit matrix.
        double ct = std::cos(th), st = std::sin(th), cf = std::cos(ph),
               sf = std::sin(ph), cp = std::cos(ps), sp = std::sin(ps);
        CHECK(q(0, 0) == doctest::Approx(ct * cf).epsilon(1e-12));
        CHECK(q(0, 1) == doctest::Approx(st * cp - ct * sf * sp).epsilon(1e-12));
        CHECK(q(0, 2) == doctest::Approx(st * sp + ct * sf * cp).epsilon(1e-12));
        CHECK(q(1, 0) == doctest::Approx(-st * cf).epsilon(1e-12));
        CHECK(q(2, 0) == doctest::Approx(-sf).epsilon(1e-12));
        CHECK(q(2, 1) == doctest::Approx(-sp * cf).epsilon(1e-12));
        CHECK(q(2, 2) == doctest::Approx(cf * cp).epsilon(1e-12));
    }
}
