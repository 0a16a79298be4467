#include "rollgeo/rolling.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "rollgeo/geometry.hpp"

namespace rollgeo {

namespace {

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

// Frame components of a coordinate vector: solves E a = v.
Vec frameComponents(const Mat& E, const Vec& v) {
    return E.partialPivLu().solve(v);
}

}  // namespace

double Configuration::soResidual() const {
    const int n = Q.rows();
    double ortho = (Q.transpose() * Q - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
    return ortho + std::abs(Q.determinant() - 1.0);
}

Mat projectSO(const Mat& Q) {
    Mat out = metricGramSchmidt(Q, Mat::Identity(Q.rows(), Q.cols()));
    if (out.determinant() < 0)
        throw DegeneracyError("frame relation has negative orientation");
    return out;
}

Vec applyIsometry(const Configuration& q, const Vec& vFrame, MapDirection dir) {
    if (dir == MapDirection::Forward) return q.Q * vFrame;
    return q.Q.transpose() * vFrame;
}

Vec applyIsometryCoords(const ChartManifold& M, const ChartManifold& Mhat,
                        const Configuration& q, const Vec& vCoord,
                        MapDirection dir) {
    Mat E = M.frameAt(q.x);
    Mat Eh = Mhat.frameAt(q.xhat);
    if (dir == MapDirection::Forward)
        return Eh * (q.Q * frameComponents(E, vCoord));
    return E * (q.Q.transpose() * frameComponents(Eh, vCoord));
}

RollingCurve rollAlong(const ChartManifold& M, const ChartManifold& Mhat,
                       const BaseCurve& base, const Configuration& q0,
                       int steps) {
    const int n = M.dim();
    if (Mhat.dim() != n)
        throw ArgumentError("rolling needs manifolds of equal dimension");
    Vec x0 = base.pos(0.0);
    if ((q0.x - x0).norm() > 1e-9)
        throw ArgumentError("initial configuration does not sit on the base curve");
    if (q0.soResidual() > 1e-9)
        throw ArgumentError("initial frame relation is not special orthogonal");
    M.requireDomain(x0);
    Mhat.requireDomain(q0.xhat);
    if (steps <= 0) steps = defaultSteps(base.tau);
    const double h = base.tau / steps;

    // State: [F (n*n), xhat (n), Fhat (n*n)]. F is a parallel frame along
    // the base curve, Fhat its image under the rolling; the frame relation
    // at time t is Q(t) = (Ehat^{-1} Fhat)(E^{-1} F)^T.
    auto rhs = [&](double t, const Vec& y) -> Vec {
        Vec x = base.pos(t);
        if (!M.inDomain(x)) {
            std::ostringstream os;
            os << "base curve exits the chart domain of " << M.name()
               << " at t = " << t;
            throw DomainError(os.str());
        }
        Mat F = Eigen::Map<const Mat>(y.data(), n, n);
        Vec xhat = y.segment(n * n, n);
        if (!Mhat.inDomain(xhat)) {
            std::ostringstream os;
            os << "developed curve exits the chart domain of " << Mhat.name()
               << " at t = " << t;
            throw DomainError(os.str());
        }
        Mat Fhat = Eigen::Map<const Mat>(y.data() + n * n + n, n, n);
        Vec xdot = base.vel(t);
        Tensor gamma = christoffelCoords(M, x);
        Vec udot = F.partialPivLu().solve(xdot);
        Vec xhatdot = Fhat * udot;
        Tensor gammah = christoffelCoords(Mhat, xhat);
        Vec dy(2 * n * n + n);
        Mat dF(n, n), dFh(n, n);
        for (int j = 0; j < n; ++j) {
            dF.col(j) = -christoffelApply(gamma, xdot, F.col(j));
            dFh.col(j) = -christoffelApply(gammah, xhatdot, Fhat.col(j));
        }
        Eigen::Map<Mat>(dy.data(), n, n) = dF;
        dy.segment(n * n, n) = xhatdot;
        Eigen::Map<Mat>(dy.data() + n * n + n, n, n) = dFh;
        return dy;
    };

    RollingCurve out;
    out.base = base;
    std::vector<Vec> xhats;
    std::vector<Vec> vhats;

    Vec y(2 * n * n + n);
    Mat F = M.frameAt(x0);
    Mat Fhat = Mhat.frameAt(q0.xhat) * q0.Q;
    Eigen::Map<Mat>(y.data(), n, n) = F;
    y.segment(n * n, n) = q0.xhat;
    Eigen::Map<Mat>(y.data() + n * n + n, n, n) = Fhat;

    auto record = [&](double t) {
        Vec x = base.pos(t);
        Vec xhat = y.segment(n * n, n);
        Mat Fc = M.frameAt(x).partialPivLu().solve(
            Eigen::Map<const Mat>(y.data(), n, n));
        Mat Fhc = Mhat.frameAt(xhat).partialPivLu().solve(
            Eigen::Map<const Mat>(y.data() + n * n + n, n, n));
        out.ts.push_back(t);
        out.configs.push_back(Configuration{x, xhat, Fhc * Fc.transpose()});
        Vec udot = Eigen::Map<const Mat>(y.data(), n, n)
                       .partialPivLu()
                       .solve(base.vel(t));
        xhats.push_back(xhat);
        vhats.push_back(Eigen::Map<const Mat>(y.data() + n * n + n, n, n) *
                        udot);
    };
    record(0.0);
    for (int s = 0; s < steps; ++s) {
        double t = s * h;
        y = rk4Step(rhs, t, y, h);
        Vec xhat = y.segment(n * n, n);
        if (!Mhat.inDomain(xhat)) {
            std::ostringstream os;
            os << "developed curve exits the chart domain of " << Mhat.name()
               << " at t = " << (t + h);
            throw DomainError(os.str());
        }
        Mat Fn = Eigen::Map<Mat>(y.data(), n, n);
        Fn = metricGramSchmidt(Fn, M.metricAt(base.pos(t + h)));
        Eigen::Map<Mat>(y.data(), n, n) = Fn;
        Mat Fhn = Eigen::Map<Mat>(y.data() + n * n + n, n, n);
        Fhn = metricGramSchmidt(Fhn, Mhat.metricAt(xhat));
        Eigen::Map<Mat>(y.data() + n * n + n, n, n) = Fhn;
        record(t + h);
    }
    out.baseHat = makeSampledCurve(out.ts, std::move(xhats), std::move(vhats));
    return out;
}

RollingResiduals verifyRolling(const ChartManifold& M,
                               const ChartManifold& Mhat,
                               const RollingCurve& rc, double tol,
                               unsigned seed) {
    const int n = M.dim();
    const std::size_t N = rc.ts.size();
    if (N < 3) throw ArgumentError("rolling curve has too few samples");
    RollingResiduals res;

    // No-slip: compare Q(t) mdot(t) with a finite difference of the
    // developed samples, in the respective frame components.
    for (std::size_t i = 1; i + 1 < N; ++i) {
        const Configuration& c = rc.configs[i];
        Vec xhd = (rc.configs[i + 1].xhat - rc.configs[i - 1].xhat) /
                  (rc.ts[i + 1] - rc.ts[i - 1]);
        Vec a = frameComponents(M.frameAt(c.x), rc.base.vel(rc.ts[i]));
        Vec ah = frameComponents(Mhat.frameAt(c.xhat), xhd);
        res.noSlip = std::max(res.noSlip, (ah - c.Q * a).norm());
        res.soDrift = std::max(res.soDrift, c.soResidual());
    }

    // No-twist: parallel fields along m must map to parallel fields
    // along mhat under q(t).
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Configuration& c0 = rc.configs.front();
    Mat E0 = M.frameAt(c0.x);
    Mat Eh0 = Mhat.frameAt(c0.xhat);
    for (int trial = 0; trial < 3; ++trial) {
        Vec a0(n);
        for (int i = 0; i < n; ++i) a0[i] = gauss(rng);
        a0.normalize();
        auto tv = parallelTransport(M, rc.base, E0 * a0, int(N) - 1);
        auto tw = parallelTransport(Mhat, rc.baseHat, Eh0 * (c0.Q * a0),
                                    int(N) - 1);
        for (std::size_t i = 0; i < N; i += 25) {
            const Configuration& c = rc.configs[i];
            Vec pred = c.Q * frameComponents(M.frameAt(c.x), tv.values[i]);
            Vec act = frameComponents(Mhat.frameAt(c.xhat), tw.values[i]);
            res.noTwist = std::max(res.noTwist, (act - pred).norm());
        }
    }

    res.pass = res.noSlip < tol && res.noTwist < tol && res.soDrift < tol;
    return res;
}

RollingCurve composeRollings(const RollingCurve& tilde,
                             const RollingCurve& hat, double tol) {
    if (tilde.ts.size() != hat.ts.size())
        throw CompositionError("composition factors have different grids");
    double mismatch = 0;
    for (std::size_t i = 0; i < tilde.ts.size(); ++i) {
        if (std::abs(tilde.ts[i] - hat.ts[i]) > 1e-12 * (1.0 + tilde.ts.back()))
            throw CompositionError("composition factors have different grids");
        mismatch = std::max(
            mismatch, (tilde.configs[i].xhat - hat.configs[i].x).norm());
    }
    if (mismatch > tol) {
        std::ostringstream os;
        os << "base curves do not match: max deviation " << mismatch;
        throw CompositionError(os.str());
    }
    RollingCurve out;
    out.ts = tilde.ts;
    out.base = tilde.base;
    out.baseHat = hat.baseHat;
    out.configs.reserve(tilde.configs.size());
    for (std::size_t i = 0; i < tilde.configs.size(); ++i)
        out.configs.push_back(Configuration{tilde.configs[i].x,
                                            hat.configs[i].xhat,
                                            hat.configs[i].Q *
                                                tilde.configs[i].Q});
    return out;
}

BaseCurve concatCurves(const std::vector<BaseCurve>& segments) {
    if (segments.empty()) throw ArgumentError("nothing to concatenate");
    std::vector<double> starts{0.0};
    for (const BaseCurve& s : segments) starts.push_back(starts.back() + s.tau);
    double tau = starts.back();
    auto locate = [starts](double t) {
        std::size_t i = 1;
        while (i + 1 < starts.size() && t >= starts[i]) ++i;
        return i - 1;
    };
    auto pos = [segments, starts, locate](double t) -> Vec {
        std::size_t i = locate(t);
        return segments[i].pos(std::min(t - starts[i], segments[i].tau));
    };
    auto vel = [segments, starts, locate](double t) -> Vec {
        std::size_t i = locate(t);
        return segments[i].vel(std::min(t - starts[i], segments[i].tau));
    };
    return BaseCurve{tau, pos, vel};
}

}  // namespace rollgeo
