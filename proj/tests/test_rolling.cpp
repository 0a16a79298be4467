#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rollgeo/catalog.hpp"
#include "rollgeo/rolling.hpp"

using namespace rollgeo;

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Mat rot2(double angle) {
    Mat R(2, 2);
    R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return R;
}

double rotationAngle(const Mat& Q) { return std::atan2(Q(1, 0), Q(0, 0)); }

// Chain rollings over consecutive curve segments (the segments may meet
// with a velocity kink, which a single integration pass would smear).
RollingCurve rollChain(const ChartManifold& M, const ChartManifold& Mhat,
                       const std::vector<BaseCurve>& legs,
                       const Configuration& q0, int stepsPerLeg) {
    Configuration q = q0;
    RollingCurve last;
    for (const BaseCurve& leg : legs) {
        q.x = leg.pos(0.0);
        last = rollAlong(M, Mhat, leg, q, stepsPerLeg);
        q = last.configs.back();
    }
    return last;
}

// Geodesic triangle on the unit sphere with three quarter-circle sides:
// each corner turns the velocity by 90 degrees in the tangent plane.
std::vector<BaseCurve> octantTriangle(const ChartManifold& S) {
    std::vector<BaseCurve> legs;
    Vec x = Vec::Zero(2);
    Vec v = S.frameAt(x).col(0);
    for (int leg = 0; leg < 3; ++leg) {
        legs.push_back(geodesic(S, x, v, M_PI / 2));
        x = legs.back().pos(M_PI / 2);
        Vec vEnd = legs.back().vel(M_PI / 2);
        Vec a = S.frameAt(x).partialPivLu().solve(vEnd);
        v = S.frameAt(x) * (rot2(M_PI / 2) * a);
    }
    return legs;
}

double curveLength(const ChartManifold& M, const BaseCurve& c, int samples) {
    double len = 0, h = c.tau / samples;
    for (int i = 0; i <= samples; ++i) {
        double w = (i == 0 || i == samples) ? 0.5 : 1.0;
        Vec xd = c.vel(i * h);
        len += w * h * std::sqrt(xd.dot(M.metricAt(c.pos(i * h)) * xd));
    }
    return len;
}

}  // namespace

TEST_CASE("rolling: flat on flat is a rigid motion") {
    auto E = catalog::euclidean(2);
    BaseCurve c{1.5,
                [](double t) { return vec2(std::sin(t), t * t - 0.3 * t); },
                nullptr};
    Vec xhat0 = vec2(2.0, -1.0);
    Mat Q0 = rot2(0.8);
    auto rc = rollAlong(E, E, c, Configuration{c.pos(0.0), xhat0, Q0});
    for (std::size_t i = 0; i < rc.ts.size(); i += 100) {
        const Configuration& q = rc.configs[i];
        CHECK((q.Q - Q0).norm() < 1e-9);
        CHECK((q.xhat - (xhat0 + Q0 * (q.x - c.pos(0.0)))).norm() < 1e-9);
    }
}

TEST_CASE("rolling: equal spheres return after a closed loop") {
    auto S = catalog::sphere(2, 1.0);
    double rho = std::tan(M_PI / 6);
    BaseCurve loop{2 * M_PI,
                   [rho](double t) {
                       return vec2(rho * std::cos(t), rho * std::sin(t));
                   },
                   [rho](double t) {
                       return vec2(-rho * std::sin(t), rho * std::cos(t));
                   }};

    SUBCASE("aligned start stays on the diagonal") {
        Configuration q0{loop.pos(0.0), loop.pos(0.0), Mat::Identity(2, 2)};
        auto rc = rollAlong(S, S, loop, q0, 2000);
        for (std::size_t i = 0; i < rc.ts.size(); i += 100) {
            CHECK((rc.configs[i].xhat - rc.configs[i].x).norm() < 1e-7);
            CHECK((rc.configs[i].Q - Mat::Identity(2, 2)).norm() < 1e-7);
        }
    }

    SUBCASE("generic start comes back to it") {
        Configuration q0{loop.pos(0.0), vec2(0.2, -0.1), rot2(0.7)};
        auto rc = rollAlong(S, S, loop, q0, 2000);
        CHECK((rc.configs.back().xhat - q0.xhat).norm() < 1e-5);
        CHECK((rc.configs.back().Q - q0.Q).norm() < 1e-5);
    }
}

TEST_CASE("rolling: octant holonomy on the plane") {
    auto S = catalog::sphere(2, 1.0);
    auto E = catalog::euclidean(2);
    auto legs = octantTriangle(S);
    // The triangle closes up.
    CHECK((legs.back().pos(M_PI / 2) - legs.front().pos(0.0)).norm() < 1e-6);

    Configuration q0{legs[0].pos(0.0), Vec::Zero(2), Mat::Identity(2, 2)};
    auto rc = rollChain(S, E, legs, q0, 1000);
    double angle = rotationAngle(rc.configs.back().Q);
    CHECK(std::abs(std::abs(angle) - M_PI / 2) < 1e-4);
    // Total contact-path length is preserved: three quarter circles.
    double lenHat = curveLength(E, rc.baseHat, 2000);
    CHECK(lenHat == doctest::Approx(M_PI / 2).epsilon(1e-6));
}

TEST_CASE("rolling: kinematic conditions hold and violations are flagged") {
    auto S = catalog::sphere(2, 1.0);
    auto E = catalog::euclidean(2);
    BaseCurve c{2.0,
                [](double t) {
                    return vec2(0.5 * std::sin(t), 0.4 * (1 - std::cos(1.3 * t)));
                },
                nullptr};
    Configuration q0{c.pos(0.0), vec2(0.3, 0.1), rot2(-0.4)};
    auto rc = rollAlong(S, E, c, q0);
    auto res = verifyRolling(S, E, rc);
    CHECK(res.noSlip < 1e-5);
    CHECK(res.noTwist < 1e-5);
    CHECK(res.soDrift < 1e-8);
    CHECK(res.pass);

    // Arc length of contact paths agrees.
    CHECK(curveLength(S, rc.base, 2000) ==
          doctest::Approx(curveLength(E, rc.baseHat, 2000)).epsilon(1e-6));

    // Freezing the frame relation while the contact point moves breaks
    // the no-twist condition visibly.
    RollingCurve frozen = rc;
    for (auto& cfg : frozen.configs) cfg.Q = q0.Q;
    auto bad = verifyRolling(S, E, frozen);
    CHECK(bad.noTwist > 1e-2);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("rolling: composition through flat space matches the direct roll") {
    auto S1 = catalog::sphere(2, 1.0);
    auto S2 = catalog::sphere(2, 2.0);
    auto E = catalog::euclidean(2);
    BaseCurve c{1.0,
                [](double t) {
                    return vec2(0.4 * std::sin(2 * t), 0.3 * t * (1 - t));
                },
                nullptr};
    Mat Qt = rot2(0.3), Qh = rot2(-0.5);
    Vec xhh0 = vec2(0.1, 0.2);

    auto tilde = rollAlong(S1, E, c, Configuration{c.pos(0.0), Vec::Zero(2), Qt},
                           1000);
    auto hat = rollAlong(E, S2, tilde.baseHat,
                         Configuration{Vec::Zero(2), xhh0, Qh}, 1000);
    auto composed = composeRollings(tilde, hat);
    auto direct =
        rollAlong(S1, S2, c, Configuration{c.pos(0.0), xhh0, Qh * Qt}, 1000);

    CHECK((composed.configs.back().xhat - direct.configs.back().xhat).norm() <
          1e-6);
    CHECK((composed.configs.back().Q - direct.configs.back().Q).norm() < 1e-6);
    auto res = verifyRolling(S1, S2, composed);
    CHECK(res.pass);

    // Mismatched base curves are rejected.
    BaseCurve other{1.0, [](double t) { return vec2(t, 0.5 * t); }, nullptr};
    auto hatBad = rollAlong(E, S2, other, Configuration{other.pos(0.0), xhh0, Qh},
                            1000);
    CHECK_THROWS_AS(composeRollings(tilde, hatBad), CompositionError);
}

TEST_CASE("rolling: isometry bookkeeping and input validation") {
    auto S = catalog::sphere(2, 1.0);
    auto H = catalog::hyperbolic(2, 1.0);
    Configuration q{vec2(0.2, -0.3), vec2(0.1, 0.4), rot2(1.1)};
    CHECK(q.soResidual() < 1e-12);

    // Frame-component map preserves the Euclidean norm, coordinate map
    // preserves the metric norm; the two directions invert each other.
    Vec a = vec2(0.7, -0.2);
    CHECK(applyIsometry(q, a).norm() == doctest::Approx(a.norm()));
    CHECK((applyIsometry(q, applyIsometry(q, a), MapDirection::Inverse) - a)
              .norm() < 1e-12);
    Vec v = vec2(-0.3, 0.9);
    Vec vh = applyIsometryCoords(S, H, q, v);
    double nrm = v.dot(S.metricAt(q.x) * v);
    CHECK(vh.dot(H.metricAt(q.xhat) * vh) == doctest::Approx(nrm).epsilon(1e-12));
    CHECK((applyIsometryCoords(S, H, q, vh, MapDirection::Inverse) - v).norm() <
          1e-12);

    // projectSO cleans small drift but rejects reflections.
    Mat noisy = rot2(0.4) + 1e-6 * Mat::Random(2, 2);
    Mat cleaned = projectSO(noisy);
    CHECK((cleaned.transpose() * cleaned - Mat::Identity(2, 2)).norm() < 1e-12);
    Mat refl(2, 2);
    refl << 1, 0, 0, -1;
    CHECK_THROWS_AS(projectSO(refl), DegeneracyError);

    BaseCurve c{1.0, [](double t) { return vec2(0.1 * t, 0.0); }, nullptr};
    Configuration off{vec2(5.0, 5.0), vec2(0, 0), Mat::Identity(2, 2)};
    CHECK_THROWS_AS(rollAlong(S, S, c, off), ArgumentError);
    Configuration notSO{c.pos(0.0), vec2(0, 0), 2.0 * Mat::Identity(2, 2)};
    CHECK_THROWS_AS(rollAlong(S, S, c, notSO), ArgumentError);
}
