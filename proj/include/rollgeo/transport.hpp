#pragma once

#include <functional>
#include <vector>

#include "rollgeo/manifold.hpp"

namespace rollgeo {

// Absolutely continuous curve in a chart (or in R^n), t in [0, tau].
// velocity may be null, in which case a central difference in t is used.
struct BaseCurve {
    double tau = 0.0;
    std::function<Vec(double)> position;
    std::function<Vec(double)> velocity;

    Vec pos(double t) const { return position(t); }
    Vec vel(double t) const;
};

// Dense-grid curve with cubic Hermite interpolation between nodes.
BaseCurve makeSampledCurve(std::vector<double> ts, std::vector<Vec> xs,
                           std::vector<Vec> vs);

// Straight segment u(t) = t/tau * endpoint (an R^n curve).
BaseCurve straightSegment(const Vec& endpoint, double tau);

struct MovingFrame {
    std::vector<double> ts;
    std::vector<Mat> frames;  // columns f_j in coordinate basis
};

struct TransportedVector {
    std::vector<double> ts;
    std::vector<Vec> values;  // coordinate components along the curve
};

struct AntiDevelopment {
    std::vector<double> ts;
    std::vector<Vec> u;      // R^n curve, u(0) = 0
    std::vector<Vec> udot;   // f^{-1}(t) mdot(t) at the grid nodes
    MovingFrame frame;       // parallel frame along the base curve
    BaseCurve asCurve() const;
};

struct Development {
    BaseCurve curve;     // resulting curve on the target manifold
    MovingFrame frame;   // parallel frame along it
};

// Integrator step count for a horizon tau (fixed-step RK4, default
// step 1e-3 * tau).
int defaultSteps(double tau);

// Parallel transport of v0 along the curve (no-twist primitive).
TransportedVector parallelTransport(const ChartManifold& M,
                                    const BaseCurve& curve, const Vec& v0,
                                    int steps = 0);

// Anti-development: u(t) = int_0^t f^{-1}(s) mdot(s) ds with f parallel,
// f(0) = f0 (columns in coordinate basis).
AntiDevelopment antiDevelop(const ChartManifold& M, const BaseCurve& curve,
                            const Mat& f0, int steps = 0);

// Development of an R^n curve u into M starting at x0 with parallel
// frame f0: mdot = f(t) udot(t).
Development developInto(const ChartManifold& M, const BaseCurve& u,
                        const Vec& x0, const Mat& f0, int steps = 0);

// Geodesic from x0 with initial velocity v0 (coordinate components)
// over [0, T].
BaseCurve geodesic(const ChartManifold& M, const Vec& x0, const Vec& v0,
                   double T, int steps = 0);

// Gram-Schmidt of the columns of F in the metric g, fixed column order.
Mat metricGramSchmidt(const Mat& F, const Mat& g);

}  // namespace rollgeo
