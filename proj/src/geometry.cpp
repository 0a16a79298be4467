#include "rollgeo/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace rollgeo {

namespace {

// Step used when differentiating quantities that are themselves exact
// or near-exact (Christoffel symbols, frame curvature components).
constexpr double kCurvatureStep = 1e-3;

Tensor coordChristoffelAt(const ChartManifold& M, const Vec& x) {
    const int n = M.dim();
    Mat g = M.metricAt(x);
    Eigen::LDLT<Mat> ldlt(g);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw DegeneracyError("singular metric at chart point");
    std::vector<Mat> dg = M.metricJetAt(x);

    Tensor gamma(3, n);  // (k, i, j)
    Mat rhs(n, 1);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            for (int l = 0; l < n; ++l)
                rhs(l, 0) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
            Mat sol = ldlt.solve(rhs);
            for (int k = 0; k < n; ++k) {
                gamma(k, i, j) = sol(k, 0);
                gamma(k, j, i) = sol(k, 0);
            }
        }
    }
    return gamma;
}

}  // namespace

Tensor christoffelCoords(const ChartManifold& M, const Vec& x) {
    M.requireDomain(x);
    return coordChristoffelAt(M, x);
}

Tensor frameChristoffel(const ChartManifold& M, const Vec& x) {
    M.requireDomain(x);
    const int n = M.dim();
    Mat e = M.frameAt(x);
    Mat g = M.metricAt(x);
    std::vector<Mat> de = M.frameJetAt(x);
    Tensor gamma = coordChristoffelAt(M, x);

    Tensor fc(3, n);  // (a, j, b)
    for (int j = 0; j < n; ++j) {
        for (int b = 0; b < n; ++b) {
            // nabla_{e_j} e_b in coordinates.
            Vec cov = Vec::Zero(n);
            for (int k = 0; k < n; ++k) cov += e(k, j) * de[k].col(b);
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int l = 0; l < n; ++l)
                        cov[k] += gamma(k, i, l) * e(i, j) * e(l, b);
            Vec comp = e.transpose() * (g * cov);
            for (int a = 0; a < n; ++a) fc(a, j, b) = comp[a];
        }
    }
    return fc;
}

CurvatureData riemann(const ChartManifold& M, const Vec& x, bool withNabla) {
    M.requireDomain(x);
    const int n = M.dim();

    // Coordinate curvature R^l_{ijk} from a 4th-order central difference
    // of the Christoffel symbols.
    std::vector<Tensor> dGamma(n);
    for (int i = 0; i < n; ++i) {
        double h = fdScaledStep(kCurvatureStep, x[i]);
        Vec xp = x, xm = x, xpp = x, xmm = x;
        xp[i] += h;
        xm[i] -= h;
        xpp[i] += 2 * h;
        xmm[i] -= 2 * h;
        if (!M.inDomain(xpp) || !M.inDomain(xmm))
            throw DomainError("curvature stencil leaves chart domain of " +
                              M.name());
        Tensor gpp = coordChristoffelAt(M, xpp);
        Tensor gp = coordChristoffelAt(M, xp);
        Tensor gm = coordChristoffelAt(M, xm);
        Tensor gmm = coordChristoffelAt(M, xmm);
        Tensor d(3, n);
        for (std::size_t f = 0; f < d.size(); ++f)
            d.data()[f] = (-gpp.data()[f] + 8 * gp.data()[f] -
                           8 * gm.data()[f] + gmm.data()[f]) /
                          (12 * h);
        dGamma[i] = std::move(d);
    }
    Tensor gamma = coordChristoffelAt(M, x);
    Mat g = M.metricAt(x);
    Mat e = M.frameAt(x);

    Tensor rUp(4, n);  // (l, i, j, k): <R(d_i, d_j) d_k, dual l>
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = dGamma[i](l, j, k) - dGamma[j](l, i, k);
                    for (int s = 0; s < n; ++s)
                        v += gamma(l, i, s) * gamma(s, j, k) -
                             gamma(l, j, s) * gamma(s, i, k);
                    rUp(l, i, j, k) = v;
                }

    // Lower the upper index and contract into the orthonormal frame.
    Tensor rCoord(4, n);  // (i, j, k, m)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int m = 0; m < n; ++m) {
                    double v = 0;
                    for (int l = 0; l < n; ++l)
                        v += rUp(l, i, j, k) * g(l, m);
                    rCoord(i, j, k, m) = v;
                }

    CurvatureData out;
    out.R = Tensor(4, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double v = 0;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            for (int k = 0; k < n; ++k)
                                for (int m = 0; m < n; ++m)
                                    v += e(i, a) * e(j, b) * e(k, c) *
                                         e(m, d) * rCoord(i, j, k, m);
                    out.R(a, b, c, d) = v;
                }
    if (withNabla) out.nablaR = nablaRiemann(M, x);
    return out;
}

Tensor nablaRiemann(const ChartManifold& M, const Vec& x) {
    M.requireDomain(x);
    const int n = M.dim();
    Mat e = M.frameAt(x);
    Tensor fc = frameChristoffel(M, x);

    // Coordinate partials of the frame components of R.
    std::vector<Tensor> dR(n);
    for (int i = 0; i < n; ++i) {
        double h = fdScaledStep(kCurvatureStep, x[i]);
        Vec xp = x, xm = x, xpp = x, xmm = x;
        xp[i] += h;
        xm[i] -= h;
        xpp[i] += 2 * h;
        xmm[i] -= 2 * h;
        Tensor rpp = riemann(M, xpp).R;
        Tensor rp = riemann(M, xp).R;
        Tensor rm = riemann(M, xm).R;
        Tensor rmm = riemann(M, xmm).R;
        Tensor d(4, n);
        for (std::size_t f = 0; f < d.size(); ++f)
            d.data()[f] = (-rpp.data()[f] + 8 * rp.data()[f] -
                           8 * rm.data()[f] + rmm.data()[f]) /
                          (12 * h);
        dR[i] = std::move(d);
    }
    Tensor R = riemann(M, x).R;

    Tensor nr(5, n);  // (a, b, c, d, k)
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    for (int k = 0; k < n; ++k) {
                        double v = 0;
                        for (int i = 0; i < n; ++i)
                            v += e(i, k) * dR[i](a, b, c, d);
                        for (int s = 0; s < n; ++s)
                            v -= fc(s, k, a) * R(s, b, c, d) +
                                 fc(s, k, b) * R(a, s, c, d) +
                                 fc(s, k, c) * R(a, b, s, d) +
                                 fc(s, k, d) * R(a, b, c, s);
                        nr(a, b, c, d, k) = v;
                    }
    return nr;
}

IteratedCurvature rPower(const Tensor& R, int l) {
    if (l < 1) throw ArgumentError("rPower order must be >= 1");
    const int n = R.dim();
    IteratedCurvature out;
    out.order = 1;
    out.tensor = R;
    std::vector<int> idx;
    for (int ord = 2; ord <= l; ++ord) {
        Tensor next(2 * ord + 2, n);
        const Tensor& prev = out.tensor;
        // next(a,b,i1,rest...) = sum_s R(a,b,i1,s) prev(s,rest...)
        idx.assign(2 * ord + 2, 0);
        std::vector<int> pidx(2 * ord, 0);
        bool done = false;
        while (!done) {
            double v = 0;
            for (int s = 0; s < n; ++s) {
                pidx[0] = s;
                for (int t = 3; t < 2 * ord + 2; ++t) pidx[t - 2] = idx[t];
                v += R(idx[0], idx[1], idx[2], s) * prev.at(pidx);
            }
            next.at(idx) = v;
            int p = 2 * ord + 1;
            while (p >= 0 && ++idx[p] == n) idx[p--] = 0;
            done = p < 0;
        }
        out.order = ord;
        out.tensor = std::move(next);
    }
    return out;
}

IteratedCurvature rPower(const ChartManifold& M, const Vec& x, int l) {
    return rPower(riemann(M, x).R, l);
}

double CurvatureData::sectional(const Vec& u, const Vec& v) const {
    const int n = R.dim();
    double uu = u.squaredNorm(), vv = v.squaredNorm(), uv = u.dot(v);
    double area2 = uu * vv - uv * uv;
    if (area2 <= 1e-14 * uu * vv)
        throw DegeneracyError("degenerate plane for sectional curvature");
    double num = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    num += R(a, b, c, d) * u[a] * v[b] * v[c] * u[d];
    return num / area2;
}

double CurvatureData::antisymmetryResidual() const {
    const int n = R.dim();
    double r = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    r = std::max(r, std::abs(R(a, b, c, d) + R(b, a, c, d)));
                    r = std::max(r, std::abs(R(a, b, c, d) + R(a, b, d, c)));
                }
    return r;
}

double CurvatureData::pairSymmetryResidual() const {
    const int n = R.dim();
    double r = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    r = std::max(r, std::abs(R(a, b, c, d) - R(c, d, a, b)));
    return r;
}

double CurvatureData::firstBianchiResidual() const {
    const int n = R.dim();
    double r = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    r = std::max(r, std::abs(R(a, b, c, d) + R(b, c, a, d) +
                                             R(c, a, b, d)));
    return r;
}

double secondBianchiResidual(const Tensor& nablaR) {
    const int n = nablaR.dim();
    double r = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    for (int k = 0; k < n; ++k)
                        r = std::max(r, std::abs(nablaR(a, b, c, d, k) +
                                                 nablaR(a, b, d, k, c) +
                                                 nablaR(a, b, k, c, d)));
    return r;
}

double sectional(const ChartManifold& M, const Vec& x, const Vec& u,
                 const Vec& v) {
    return riemann(M, x).sectional(u, v);
}

SymmetryCheck isLocallySymmetric(const ChartManifold& M,
                                 const std::vector<Vec>& samples,
                                 double tol) {
    if (samples.empty())
        throw ArgumentError("isLocallySymmetric needs at least one sample");
    SymmetryCheck out;
    for (const Vec& x : samples)
        out.maxResidual = std::max(out.maxResidual, nablaRiemann(M, x).maxAbs());
    out.locallySymmetric = out.maxResidual <= tol;
    return out;
}

}  // namespace rollgeo
