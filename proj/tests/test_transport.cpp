#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rollgeo/catalog.hpp"
#include "rollgeo/transport.hpp"

using namespace rollgeo;

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

// Circle of polar angle theta on S^2 in the stereographic chart:
// coordinate circle of radius tan(theta/2).
BaseCurve latitudeCircle(double theta) {
    double rho = std::tan(theta / 2.0);
    return BaseCurve{
        2.0 * M_PI,
        [rho](double t) { return vec2(rho * std::cos(t), rho * std::sin(t)); },
        [rho](double t) {
            return vec2(-rho * std::sin(t), rho * std::cos(t));
        }};
}

double signedAngle(const Vec& a, const Vec& b) {
    return std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
}

}  // namespace

TEST_CASE("parallel transport: flat space keeps components") {
    auto E = catalog::euclidean(3);
    BaseCurve c{1.0,
                [](double t) {
                    Vec x(3);
                    x << std::sin(3 * t), t * t, -t;
                    return x;
                },
                nullptr};
    Vec v0(3);
    v0 << 1.0, -2.0, 0.5;
    auto tv = parallelTransport(E, c, v0);
    CHECK((tv.values.back() - v0).norm() < 1e-10);

    // Linearity: v0 = 0 stays 0.
    auto tz = parallelTransport(E, c, Vec::Zero(3));
    CHECK(tz.values.back().norm() < 1e-14);
}

TEST_CASE("parallel transport: spherical cap holonomy") {
    auto S = catalog::sphere(2, 1.0);
    for (double theta : {M_PI / 4, M_PI / 3}) {
        BaseCurve c = latitudeCircle(theta);
        Vec v0 = vec2(1.0, 0.0);
        auto tv = parallelTransport(S, c, v0, 2000);
        // Conformal chart: metric angles are Euclidean angles.
        double angle = std::abs(signedAngle(v0, tv.values.back()));
        double expected = 2.0 * M_PI * (1.0 - std::cos(theta));
        if (expected > M_PI) expected = 2.0 * M_PI - expected;
        CHECK(angle == doctest::Approx(expected).epsilon(1e-6));
        // Norm preserved (conformal factor equal at start and end).
        CHECK(tv.values.back().norm() ==
              doctest::Approx(v0.norm()).epsilon(1e-8));
    }
}

TEST_CASE("parallel transport: orthogonality drift") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    auto S = catalog::sphere(2, 1.0);
    BaseCurve c{1.0,
                [](double t) { return vec2(0.3 * std::cos(2 * t) - 0.1,
                                           0.4 * std::sin(3 * t)); },
                nullptr};
    for (int trial = 0; trial < 5; ++trial) {
        Vec v = vec2(uni(rng), uni(rng)), w = vec2(uni(rng), uni(rng));
        auto tv = parallelTransport(S, c, v);
        auto tw = parallelTransport(S, c, w);
        double ip0 =
            v.dot(S.metricAt(c.pos(0.0)) * w);
        double drift = 0;
        for (std::size_t i = 0; i < tv.ts.size(); i += 100) {
            Mat g = S.metricAt(c.pos(tv.ts[i]));
            drift = std::max(drift,
                             std::abs(tv.values[i].dot(g * tw.values[i]) - ip0));
        }
        CHECK(drift < 1e-7);
    }
}

TEST_CASE("parallel transport: domain exit is reported") {
    auto H = catalog::hyperbolic(2, 1.0);
    BaseCurve c{2.0, [](double t) { return vec2(0.9 * t, 0.0); }, nullptr};
    CHECK_THROWS_AS(parallelTransport(H, c, vec2(1, 0)), DomainError);
}

TEST_CASE("anti-development: geodesics go straight") {
    auto S = catalog::sphere(2, 1.0);
    Vec x0 = vec2(0.1, -0.2);
    Mat e = S.frameAt(x0);
    double T = 1.3;
    BaseCurve geo = geodesic(S, x0, e.col(0), T);  // unit speed
    auto ad = antiDevelop(S, geo, e);
    Vec uT = ad.u.back();
    CHECK(uT.norm() == doctest::Approx(T).epsilon(1e-7));
    // Deviation from the chord line.
    Vec dir = uT / uT.norm();
    double dev = 0;
    for (const Vec& u : ad.u) {
        Vec perp = u - u.dot(dir) * dir;
        dev = std::max(dev, perp.norm());
    }
    CHECK(dev < 1e-6);

    // Flat space with identity frame: u(t) = m(t) - m(0).
    auto E = catalog::euclidean(2);
    BaseCurve c{1.0, [](double t) { return vec2(t * t, std::sin(t)); },
                nullptr};
    auto adE = antiDevelop(E, c, Mat::Identity(2, 2));
    CHECK((adE.u.back() - (c.pos(1.0) - c.pos(0.0))).norm() < 1e-9);

    // Constant curve: u identically 0.
    BaseCurve cc{1.0, [](double) { return vec2(0.2, 0.3); },
                 [](double) { return vec2(0, 0); }};
    auto adc = antiDevelop(S, cc, S.frameAt(vec2(0.2, 0.3)));
    CHECK(adc.u.back().norm() < 1e-12);
}

TEST_CASE("development: straight segments become geodesics") {
    auto S = catalog::sphere(2, 1.0);
    Vec x0 = vec2(0.0, 0.0);
    Mat f0 = S.frameAt(x0);
    double T = 1.1;
    Vec dir = vec2(std::cos(0.7), std::sin(0.7));
    Development dev = developInto(S, straightSegment(T * dir, T), x0, f0);
    BaseCurve geo = geodesic(S, x0, f0 * dir, T);
    double worst = 0;
    for (double t = 0; t <= T; t += T / 50)
        worst = std::max(worst, (dev.curve.pos(t) - geo.pos(t)).norm());
    CHECK(worst < 1e-6);

    // u = 0: constant curve and frame.
    Development dz = developInto(S, straightSegment(Vec::Zero(2), 1.0), x0, f0);
    CHECK((dz.curve.pos(1.0) - x0).norm() < 1e-12);
    CHECK((dz.frame.frames.back() - f0).norm() < 1e-12);

    // Into flat space with identity frame: reproduces u.
    auto E = catalog::euclidean(2);
    Development de = developInto(E, straightSegment(T * dir, T),
                                 Vec::Zero(2), Mat::Identity(2, 2));
    CHECK((de.curve.pos(T) - T * dir).norm() < 1e-10);
}

TEST_CASE("round trip: develop after anti-develop is the identity") {
    auto S = catalog::sphere(2, 1.3);
    BaseCurve c{1.0,
                [](double t) {
                    return vec2(0.4 * std::sin(2 * t), 0.3 * (1 - std::cos(t)));
                },
                nullptr};
    Mat f0 = S.frameAt(c.pos(0.0));
    auto ad = antiDevelop(S, c, f0);
    Development dev = developInto(S, ad.asCurve(), c.pos(0.0), f0);
    double worst = 0;
    for (double t = 0; t <= 1.0; t += 0.02)
        worst = std::max(worst, (dev.curve.pos(t) - c.pos(t)).norm());
    CHECK(worst < 1e-6);

    // Arc length is preserved by anti-development.
    double lenM = 0, lenU = 0;
    for (std::size_t i = 1; i < ad.ts.size(); ++i) {
        double dt = ad.ts[i] - ad.ts[i - 1];
        Vec xd = c.vel(ad.ts[i]);
        Mat g = S.metricAt(c.pos(ad.ts[i]));
        lenM += std::sqrt(xd.dot(g * xd)) * dt;
        lenU += ad.udot[i].norm() * dt;
    }
    CHECK(lenM == doctest::Approx(lenU).epsilon(1e-6));
}

TEST_CASE("geodesics: closed forms and invariants") {
    auto E = catalog::euclidean(3);
    Vec x0 = Vec::Zero(3), v0(3);
    v0 << 1, 2, 0;
    BaseCurve line = geodesic(E, x0, v0, 2.0);
    CHECK((line.pos(2.0) - 2.0 * v0).norm() < 1e-9);

    // Unit-speed great circle from the chart origin: |x(T)| = tan(T/2).
    auto S = catalog::sphere(2, 1.0);
    Mat f0 = S.frameAt(Vec::Zero(2));
    BaseCurve gc = geodesic(S, Vec::Zero(2), f0.col(1), M_PI / 2);
    CHECK(gc.pos(M_PI / 2).norm() ==
          doctest::Approx(std::tan(M_PI / 4)).epsilon(1e-8));

    // Constant speed along the way.
    for (double t = 0; t <= M_PI / 2; t += 0.1) {
        Vec v = gc.vel(t);
        Mat g = S.metricAt(gc.pos(t));
        CHECK(std::sqrt(v.dot(g * v)) == doctest::Approx(1.0).epsilon(1e-6));
    }

    // Zero velocity: constant curve.
    BaseCurve cst = geodesic(S, vec2(0.3, 0.1), Vec::Zero(2), 1.0);
    CHECK((cst.pos(1.0) - vec2(0.3, 0.1)).norm() < 1e-12);
}
