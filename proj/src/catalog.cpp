#include "rollgeo/catalog.hpp"

#include <cmath>
#include <random>

#include "rollgeo/geometry.hpp"

namespace rollgeo {
namespace catalog {

ChartManifold euclidean(int n) {
    auto frame = [n](const Vec&) { return Mat::Identity(n, n); };
    auto jet = [n](const Vec&) {
        return std::vector<Mat>(n, Mat::Zero(n, n));
    };
    ChartManifold m("euclidean", n, frame, nullptr, jet);
    m.complete = true;
    m.locallySymmetric = true;
    m.flat = true;
    m.params = {static_cast<double>(n)};
    m.sample_lo = Vec::Constant(n, -2.0);
    m.sample_hi = Vec::Constant(n, 2.0);
    return m;
}

ChartManifold sphere(int n, double r) {
    if (r <= 0) throw ArgumentError("sphere radius must be positive");
    // Conformal factor lambda = 2r/(1+|x|^2); frame (1/lambda) I.
    auto frame = [n, r](const Vec& x) -> Mat {
        double s = x.squaredNorm();
        return Mat::Identity(n, n) * ((1.0 + s) / (2.0 * r));
    };
    auto jet = [n, r](const Vec& x) {
        std::vector<Mat> out(n);
        for (int k = 0; k < n; ++k)
            out[k] = Mat::Identity(n, n) * (x[k] / r);
        return out;
    };
    ChartManifold m("sphere", n, frame, nullptr, jet);
    m.complete = true;
    m.locallySymmetric = true;
    m.flat = false;
    m.params = {static_cast<double>(n), r};
    m.sample_lo = Vec::Constant(n, -0.6);
    m.sample_hi = Vec::Constant(n, 0.6);
    return m;
}

ChartManifold hyperbolic(int n, double r) {
    if (r <= 0) throw ArgumentError("hyperbolic radius must be positive");
    auto frame = [n, r](const Vec& x) -> Mat {
        double s = x.squaredNorm();
        return Mat::Identity(n, n) * ((1.0 - s) / (2.0 * r));
    };
    auto jet = [n, r](const Vec& x) {
        std::vector<Mat> out(n);
        for (int k = 0; k < n; ++k)
            out[k] = Mat::Identity(n, n) * (-x[k] / r);
        return out;
    };
    auto domain = [](const Vec& x) { return x.squaredNorm() < 1.0; };
    ChartManifold m("hyperbolic", n, frame, domain, jet);
    m.complete = true;
    m.locallySymmetric = true;
    m.flat = false;
    m.params = {static_cast<double>(n), r};
    m.sample_lo = Vec::Constant(n, -0.4);
    m.sample_hi = Vec::Constant(n, 0.4);
    return m;
}

ChartManifold sphereTimesLine() {
    const int n = 3;
    auto frame = [](const Vec& x) -> Mat {
        double x0 = x[0], x1 = x[1];
        double rho2 = 1.0 - x0 * x0;
        double rho = std::sqrt(rho2);
        double x2 = std::sqrt(rho2 - x1 * x1);
        Mat e = Mat::Zero(3, 3);
        e(0, 0) = rho;
        e(1, 0) = -x0 * x1 / rho;
        e(1, 1) = -x2 / rho;
        e(2, 2) = 1.0;
        return e;
    };
    auto jet = [](const Vec& x) {
        double x0 = x[0], x1 = x[1];
        double rho2 = 1.0 - x0 * x0;
        double rho = std::sqrt(rho2);
        double x2 = std::sqrt(rho2 - x1 * x1);
        std::vector<Mat> out(3, Mat::Zero(3, 3));
        out[0](0, 0) = -x0 / rho;
        out[0](1, 0) = -x1 / (rho * rho2);
        out[0](1, 1) = x0 * x1 * x1 / (rho * rho2 * x2);
        out[1](1, 0) = -x0 / rho;
        out[1](1, 1) = x1 / (x2 * rho);
        return out;
    };
    auto domain = [](const Vec& x) {
        return x[0] * x[0] + x[1] * x[1] < 1.0;
    };
    ChartManifold m("sphere_times_line", n, frame, domain, jet);
    m.complete = true;
    m.locallySymmetric = true;
    m.flat = false;
    m.params = {};
    m.sample_lo = Vec::Zero(3);
    m.sample_hi = Vec::Zero(3);
    m.sample_lo << -0.5, -0.5, -1.0;
    m.sample_hi << 0.5, 0.5, 1.0;
    return m;
}

double bumpProfile(double x1) {
    double s = std::abs(x1) - 1.0;
    if (s <= 0.0) return 0.0;
    return std::exp(-1.0 / (s * s));
}

double bumpProfileD1(double x1) {
    double s = std::abs(x1) - 1.0;
    if (s <= 0.0) return 0.0;
    double f = std::exp(-1.0 / (s * s));
    double d = 2.0 * f / (s * s * s);
    return x1 > 0 ? d : -d;
}

double bumpProfileD2(double x1) {
    double s = std::abs(x1) - 1.0;
    if (s <= 0.0) return 0.0;
    double f = std::exp(-1.0 / (s * s));
    double s4 = s * s * s * s;
    return f * (4.0 / (s4 * s * s) - 6.0 / s4);
}

double bumpGaussianCurvature(double x1) {
    double fp = bumpProfileD1(x1);
    double w = 1.0 + fp * fp;
    return bumpProfileD2(x1) / (w * w * (1.0 - bumpProfile(x1)));
}

ChartManifold bumpSurface() {
    // Chart (x1, angle); metric diag(1+f'^2, (1-f)^2).
    auto frame = [](const Vec& x) -> Mat {
        double fp = bumpProfileD1(x[0]);
        Mat e = Mat::Zero(2, 2);
        e(0, 0) = 1.0 / std::sqrt(1.0 + fp * fp);
        e(1, 1) = 1.0 / (1.0 - bumpProfile(x[0]));
        return e;
    };
    auto jet = [](const Vec& x) {
        double f = bumpProfile(x[0]);
        double fp = bumpProfileD1(x[0]);
        double fpp = bumpProfileD2(x[0]);
        double w = 1.0 + fp * fp;
        std::vector<Mat> out(2, Mat::Zero(2, 2));
        out[0](0, 0) = -fp * fpp / (w * std::sqrt(w));
        out[0](1, 1) = fp / ((1.0 - f) * (1.0 - f));
        return out;
    };
    auto domain = [](const Vec& x) { return std::abs(x[0]) < 1.5; };
    ChartManifold m("bump_surface", 2, frame, domain, jet);
    m.complete = false;
    m.locallySymmetric = false;
    m.flat = false;
    m.params = {};
    m.sample_lo = Vec::Zero(2);
    m.sample_hi = Vec::Zero(2);
    m.sample_lo << -1.4, -1.0;
    m.sample_hi << 1.4, 1.0;
    return m;
}

ChartManifold byName(const std::string& name,
                     const std::vector<double>& params) {
    auto geti = [&](std::size_t i, int dflt) {
        return i < params.size() ? static_cast<int>(params[i]) : dflt;
    };
    auto getd = [&](std::size_t i, double dflt) {
        return i < params.size() ? params[i] : dflt;
    };
    if (name == "euclidean") return euclidean(geti(0, 2));
    if (name == "sphere") return sphere(geti(0, 2), getd(1, 1.0));
    if (name == "hyperbolic") return hyperbolic(geti(0, 2), getd(1, 1.0));
    if (name == "sphere_times_line") return sphereTimesLine();
    if (name == "bump_surface") return bumpSurface();
    throw ArgumentError("unknown catalog manifold: " + name);
}

std::vector<std::string> names() {
    return {"euclidean", "sphere", "hyperbolic", "sphere_times_line",
            "bump_surface"};
}

MetadataReport verifyMetadata(const ChartManifold& M, int points, double tol,
                              unsigned seed) {
    MetadataReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int p = 0; p < points; ++p) {
        Vec x(M.dim());
        do {
            for (int k = 0; k < M.dim(); ++k)
                x[k] = M.sample_lo[k] +
                       uni(rng) * (M.sample_hi[k] - M.sample_lo[k]);
        } while (!M.inDomain(x));
        rep.maxGramResidual = std::max(rep.maxGramResidual, M.gramResidual(x));
        if (M.flat)
            rep.maxFlatResidual =
                std::max(rep.maxFlatResidual, riemann(M, x).R.maxAbs());
        if (M.locallySymmetric)
            rep.maxSymmetryResidual = std::max(rep.maxSymmetryResidual,
                                               nablaRiemann(M, x).maxAbs());
    }
    rep.ok = rep.maxGramResidual < 1e-10 && rep.maxFlatResidual < tol &&
             rep.maxSymmetryResidual < tol;
    return rep;
}

Mat so3FromAngles(double theta, double phi, double psi) {
    Mat rz(3, 3), ry(3, 3), rx(3, 3);
    rz << std::cos(theta), std::sin(theta), 0, -std::sin(theta),
        std::cos(theta), 0, 0, 0, 1;
    ry << std::cos(phi), 0, std::sin(phi), 0, 1, 0, -std::sin(phi), 0,
        std::cos(phi);
    rx << 1, 0, 0, 0, std::cos(psi), std::sin(psi), 0, -std::sin(psi),
        std::cos(psi);
    return rz * ry * rx;
}

}  // namespace catalog
}  // namespace rollgeo
