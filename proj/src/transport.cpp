#include "rollgeo/transport.hpp"

#include <cmath>
#include <sstream>

#include "rollgeo/geometry.hpp"

namespace rollgeo {

namespace {

// Gamma(x)(a, b)^k = Gamma^k_{ij} a_i b_j.
Vec christoffelApply(const Tensor& gamma, const Vec& a, const Vec& b) {
    const int n = a.size();
    Vec out = Vec::Zero(n);
    for (int k = 0; k < n; ++k) {
        double v = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) v += gamma(k, i, j) * a[i] * b[j];
        out[k] = v;
    }
    return out;
}

using OdeFn = std::function<Vec(double, const Vec&)>;

Vec rk4Step(const OdeFn& f, double t, const Vec& y, double h) {
    Vec k1 = f(t, y);
    Vec k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    Vec k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    Vec k4 = f(t + h, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

[[noreturn]] void throwExit(const ChartManifold& M, double t) {
    std::ostringstream os;
    os << "curve exits the chart domain of " << M.name() << " at t = " << t;
    throw DomainError(os.str());
}

}  // namespace

Vec BaseCurve::vel(double t) const {
    if (velocity) return velocity(t);
    double h = 1e-6 * std::max(1.0, tau);
    double a = std::max(0.0, t - h), b = std::min(tau, t + h);
    return (position(b) - position(a)) / (b - a);
}

BaseCurve makeSampledCurve(std::vector<double> ts, std::vector<Vec> xs,
                           std::vector<Vec> vs) {
    if (ts.size() < 2 || ts.size() != xs.size() || ts.size() != vs.size())
        throw ArgumentError("sampled curve needs matching grids of size >= 2");
    double tau = ts.back();
    auto locate = [ts](double t) {
        auto it = std::upper_bound(ts.begin(), ts.end(), t);
        std::size_t i = it - ts.begin();
        if (i == 0) i = 1;
        if (i >= ts.size()) i = ts.size() - 1;
        return i - 1;
    };
    auto pos = [ts, xs, vs, locate](double t) -> Vec {
        std::size_t i = locate(t);
        double h = ts[i + 1] - ts[i], s = (t - ts[i]) / h;
        double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * xs[i] + (s3 - 2 * s2 + s) * h * vs[i] +
               (-2 * s3 + 3 * s2) * xs[i + 1] + (s3 - s2) * h * vs[i + 1];
    };
    auto vel = [ts, xs, vs, locate](double t) -> Vec {
        std::size_t i = locate(t);
        double h = ts[i + 1] - ts[i], s = (t - ts[i]) / h;
        return ((6 * s * s - 6 * s) * (xs[i] - xs[i + 1])) / h +
               (3 * s * s - 4 * s + 1) * vs[i] + (3 * s * s - 2 * s) * vs[i + 1];
    };
    return BaseCurve{tau, pos, vel};
}

BaseCurve straightSegment(const Vec& endpoint, double tau) {
    Vec e = endpoint;
    return BaseCurve{tau, [e, tau](double t) -> Vec { return (t / tau) * e; },
                     [e, tau](double) -> Vec { return e / tau; }};
}

BaseCurve AntiDevelopment::asCurve() const {
    return makeSampledCurve(ts, u, udot);
}

int defaultSteps(double tau) {
    (void)tau;
    return 1000;
}

Mat metricGramSchmidt(const Mat& F, const Mat& g) {
    const int n = F.cols();
    Mat out = F;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            double proj = out.col(i).dot(g * out.col(j));
            out.col(j) -= proj * out.col(i);
        }
        double nrm = std::sqrt(out.col(j).dot(g * out.col(j)));
        if (nrm < 1e-14)
            throw DegeneracyError("frame collapsed during orthonormalization");
        out.col(j) /= nrm;
    }
    return out;
}

TransportedVector parallelTransport(const ChartManifold& M,
                                    const BaseCurve& curve, const Vec& v0,
                                    int steps) {
    M.requireDomain(curve.pos(0.0));
    if (steps <= 0) steps = defaultSteps(curve.tau);
    const double h = curve.tau / steps;

    auto rhs = [&](double t, const Vec& v) -> Vec {
        Vec x = curve.pos(t);
        if (!M.inDomain(x)) throwExit(M, t);
        Tensor gamma = christoffelCoords(M, x);
        return -christoffelApply(gamma, curve.vel(t), v);
    };

    TransportedVector out;
    out.ts.reserve(steps + 1);
    out.values.reserve(steps + 1);
    Vec v = v0;
    out.ts.push_back(0.0);
    out.values.push_back(v);
    for (int s = 0; s < steps; ++s) {
        double t = s * h;
        v = rk4Step(rhs, t, v, h);
        out.ts.push_back(t + h);
        out.values.push_back(v);
    }
    return out;
}

AntiDevelopment antiDevelop(const ChartManifold& M, const BaseCurve& curve,
                            const Mat& f0, int steps) {
    const int n = M.dim();
    Vec x0 = curve.pos(0.0);
    M.requireDomain(x0);
    if (steps <= 0) steps = defaultSteps(curve.tau);
    const double h = curve.tau / steps;

    // State: [F (n*n, column major), u (n)].
    auto rhs = [&](double t, const Vec& y) -> Vec {
        Vec x = curve.pos(t);
        if (!M.inDomain(x)) throwExit(M, t);
        Mat F = Eigen::Map<const Mat>(y.data(), n, n);
        Vec xdot = curve.vel(t);
        Tensor gamma = christoffelCoords(M, x);
        Vec dy(n * n + n);
        Mat dF(n, n);
        for (int j = 0; j < n; ++j)
            dF.col(j) = -christoffelApply(gamma, xdot, F.col(j));
        Eigen::Map<Mat>(dy.data(), n, n) = dF;
        dy.tail(n) = F.partialPivLu().solve(xdot);
        return dy;
    };

    AntiDevelopment out;
    Vec y(n * n + n);
    Eigen::Map<Mat>(y.data(), n, n) = f0;
    y.tail(n).setZero();
    out.ts.push_back(0.0);
    out.u.push_back(Vec::Zero(n));
    out.udot.push_back(f0.partialPivLu().solve(curve.vel(0.0)));
    out.frame.ts.push_back(0.0);
    out.frame.frames.push_back(f0);
    for (int s = 0; s < steps; ++s) {
        double t = s * h;
        y = rk4Step(rhs, t, y, h);
        Mat F = Eigen::Map<Mat>(y.data(), n, n);
        F = metricGramSchmidt(F, M.metricAt(curve.pos(t + h)));
        Eigen::Map<Mat>(y.data(), n, n) = F;
        out.ts.push_back(t + h);
        out.u.push_back(y.tail(n));
        out.udot.push_back(F.partialPivLu().solve(curve.vel(t + h)));
        out.frame.ts.push_back(t + h);
        out.frame.frames.push_back(F);
    }
    return out;
}

Development developInto(const ChartManifold& M, const BaseCurve& u,
                        const Vec& x0, const Mat& f0, int steps) {
    const int n = M.dim();
    M.requireDomain(x0);
    if (steps <= 0) steps = defaultSteps(u.tau);
    const double h = u.tau / steps;

    // State: [x (n), F (n*n)].
    auto rhs = [&](double t, const Vec& y) -> Vec {
        Vec x = y.head(n);
        if (!M.inDomain(x)) throwExit(M, t);
        Mat F = Eigen::Map<const Mat>(y.data() + n, n, n);
        Vec xdot = F * u.vel(t);
        Tensor gamma = christoffelCoords(M, x);
        Vec dy(n + n * n);
        dy.head(n) = xdot;
        Mat dF(n, n);
        for (int j = 0; j < n; ++j)
            dF.col(j) = -christoffelApply(gamma, xdot, F.col(j));
        Eigen::Map<Mat>(dy.data() + n, n, n) = dF;
        return dy;
    };

    std::vector<double> ts{0.0};
    std::vector<Vec> xs{x0}, vs{f0 * u.vel(0.0)};
    Development out;
    out.frame.ts.push_back(0.0);
    out.frame.frames.push_back(f0);

    Vec y(n + n * n);
    y.head(n) = x0;
    Eigen::Map<Mat>(y.data() + n, n, n) = f0;
    for (int s = 0; s < steps; ++s) {
        double t = s * h;
        y = rk4Step(rhs, t, y, h);
        Vec x = y.head(n);
        if (!M.inDomain(x)) throwExit(M, t + h);
        Mat F = Eigen::Map<Mat>(y.data() + n, n, n);
        F = metricGramSchmidt(F, M.metricAt(x));
        Eigen::Map<Mat>(y.data() + n, n, n) = F;
        ts.push_back(t + h);
        xs.push_back(x);
        vs.push_back(F * u.vel(t + h));
        out.frame.ts.push_back(t + h);
        out.frame.frames.push_back(F);
    }
    out.curve = makeSampledCurve(std::move(ts), std::move(xs), std::move(vs));
    return out;
}

BaseCurve geodesic(const ChartManifold& M, const Vec& x0, const Vec& v0,
                   double T, int steps) {
    const int n = M.dim();
    M.requireDomain(x0);
    if (steps <= 0) steps = defaultSteps(T);
    const double h = T / steps;

    auto rhs = [&](double t, const Vec& y) -> Vec {
        Vec x = y.head(n);
        if (!M.inDomain(x)) throwExit(M, t);
        Vec v = y.tail(n);
        Tensor gamma = christoffelCoords(M, x);
        Vec dy(2 * n);
        dy.head(n) = v;
        dy.tail(n) = -christoffelApply(gamma, v, v);
        return dy;
    };

    std::vector<double> ts{0.0};
    std::vector<Vec> xs{x0}, vs{v0};
    Vec y(2 * n);
    y.head(n) = x0;
    y.tail(n) = v0;
    for (int s = 0; s < steps; ++s) {
        double t = s * h;
        y = rk4Step(rhs, t, y, h);
        if (!M.inDomain(y.head(n))) throwExit(M, t + h);
        ts.push_back(t + h);
        xs.push_back(y.head(n));
        vs.push_back(y.tail(n));
    }
    return makeSampledCurve(std::move(ts), std::move(xs), std::move(vs));
}

}  // namespace rollgeo
