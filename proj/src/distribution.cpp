#include "rollgeo/distribution.hpp"

#include <cmath>
#include <sstream>

namespace rollgeo {

namespace {

Mat antisymPart(const Mat& B) { return 0.5 * (B - B.transpose()); }

// Elementary antisymmetric matrix with +1 at (a,b), -1 at (b,a).
Mat wMatrix(int n, int a, int b) {
    Mat w = Mat::Zero(n, n);
    w(a, b) = 1.0;
    w(b, a) = -1.0;
    return w;
}

// G_j with entries (a,b) -> Gamma^a_{jb}, antisymmetric in (a,b).
Mat christoffelSlice(const Tensor& fc, int j) {
    const int n = fc.dim();
    Mat G(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) G(a, b) = fc(a, j, b);
    return G;
}

// Sum_t d_t Gamma^a_{tb}: connection matrix of the hat frame along the
// direction with hat-frame components d.
Mat christoffelAlong(const Tensor& fc, const Vec& d) {
    const int n = fc.dim();
    Mat G = Mat::Zero(n, n);
    for (int t = 0; t < n; ++t)
        if (d[t] != 0.0) G += d[t] * christoffelSlice(fc, t);
    return G;
}

Vec packAmbient(int n, const Vec& xdot, const Vec& xhatdot, const Mat& V) {
    Vec amb(2 * n + n * n);
    amb.head(n) = xdot;
    amb.segment(n, n) = xhatdot;
    Eigen::Map<Mat>(amb.data() + 2 * n, n, n) = V;
    return amb;
}

}  // namespace

// Contracts every index of S with Q on the left, one index at a time.
Tensor pullbackAll(const Tensor& S, const Mat& Q) {
    const int n = S.dim();
    Tensor cur = S;
    std::vector<int> idx(S.rank(), 0);
    for (int pos = 0; pos < S.rank(); ++pos) {
        Tensor next(S.rank(), n);
        std::fill(idx.begin(), idx.end(), 0);
        for (std::size_t flat = 0; flat < next.size(); ++flat) {
            double v = 0;
            std::vector<int> src = idx;
            for (int p = 0; p < n; ++p) {
                src[pos] = p;
                v += Q(p, idx[pos]) * cur.at(src);
            }
            next.at(idx) = v;
            for (int k = S.rank() - 1; k >= 0; --k) {
                if (++idx[k] < n) break;
                idx[k] = 0;
            }
        }
        cur = std::move(next);
    }
    return cur;
}

Vec TangentQ::intrinsic() const {
    const int n = u.size();
    Vec out(dimQ(n));
    out.head(n) = u;
    out.segment(n, n) = uhat;
    int k = 2 * n;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) out[k++] = A(a, b);
    return out;
}

Vec ambientCoords(const Configuration& q) {
    return packAmbient(q.x.size(), q.x, q.xhat, q.Q);
}

Configuration configFromAmbient(int n, const Vec& amb) {
    Configuration q;
    q.x = amb.head(n);
    q.xhat = amb.segment(n, n);
    q.Q = Eigen::Map<const Mat>(amb.data() + 2 * n, n, n);
    return q;
}

TangentQ QVectorField::at(const Configuration& q) const {
    const int n = M->dim();
    Vec amb = ambient(q);
    TangentQ t;
    t.u = M->frameAt(q.x).partialPivLu().solve(amb.head(n));
    t.uhat = Mhat->frameAt(q.xhat).partialPivLu().solve(amb.segment(n, n));
    Mat V = Eigen::Map<const Mat>(amb.data() + 2 * n, n, n);
    t.A = antisymPart(q.Q.transpose() * V);
    return t;
}

double QVectorField::tangencyResidual(const Configuration& q) const {
    const int n = M->dim();
    Vec amb = ambient(q);
    Mat V = Eigen::Map<const Mat>(amb.data() + 2 * n, n, n);
    Mat B = q.Q.transpose() * V;
    return (0.5 * (B + B.transpose())).cwiseAbs().maxCoeff();
}

std::vector<QVectorField> rollingBasis(const ChartManifold& M,
                                       const ChartManifold& Mhat) {
    if (M.dim() != Mhat.dim())
        throw ArgumentError("rolling needs manifolds of equal dimension");
    const int n = M.dim();
    std::vector<QVectorField> out;
    for (int j = 0; j < n; ++j) {
        QVectorField f;
        f.M = &M;
        f.Mhat = &Mhat;
        f.depth = 1;
        std::ostringstream os;
        os << "e" << (j + 1);
        f.label = os.str();
        const ChartManifold* Mp = &M;
        const ChartManifold* Mhp = &Mhat;
        f.ambient = [Mp, Mhp, j, n](const Configuration& q) -> Vec {
            Mp->requireDomain(q.x);
            Mhp->requireDomain(q.xhat);
            Mat E = Mp->frameAt(q.x);
            Mat Eh = Mhp->frameAt(q.xhat);
            Mat G = christoffelSlice(frameChristoffel(*Mp, q.x), j);
            Mat Gh = christoffelAlong(frameChristoffel(*Mhp, q.xhat),
                                      q.Q.col(j));
            Mat V = q.Q * G - Gh * q.Q;
            return packAmbient(n, E.col(j), Eh * q.Q.col(j), V);
        };
        out.push_back(std::move(f));
    }
    return out;
}

namespace {

QVectorField wField(const ChartManifold& M, const ChartManifold& Mhat, int a,
                    int b, bool left) {
    const int n = M.dim();
    if (a < 0 || b < 0 || a >= n || b >= n)
        throw ArgumentError("vertical field index out of range");
    if (a >= b) throw ArgumentError("vertical field needs indices a < b");
    QVectorField f;
    f.M = &M;
    f.Mhat = &Mhat;
    f.depth = 1;
    std::ostringstream os;
    os << "W" << (left ? "l" : "r") << (a + 1) << (b + 1);
    f.label = os.str();
    Mat w = wMatrix(n, a, b);
    f.ambient = [n, w, left](const Configuration& q) -> Vec {
        Mat V = left ? Mat(q.Q * w) : Mat(w * q.Q);
        return packAmbient(n, Vec::Zero(n), Vec::Zero(n), V);
    };
    return f;
}

}  // namespace

QVectorField wLeft(const ChartManifold& M, const ChartManifold& Mhat, int a,
                   int b) {
    return wField(M, Mhat, a, b, true);
}

QVectorField wRight(const ChartManifold& M, const ChartManifold& Mhat, int a,
                    int b) {
    return wField(M, Mhat, a, b, false);
}

double bracketStep(int depth) {
    double h = 1e-3;
    for (int d = 2; d < depth; ++d) h *= 5.0;
    return h;
}

QVectorField lieBracketField(const QVectorField& X, const QVectorField& Y,
                             double h) {
    QVectorField f;
    f.M = X.M;
    f.Mhat = X.Mhat;
    f.depth = std::max(X.depth, Y.depth) + 1;
    f.label = "[" + X.label + "," + Y.label + "]";
    if (h <= 0) h = bracketStep(f.depth);
    const int n = X.M->dim();
    auto Xa = X.ambient;
    auto Ya = Y.ambient;
    f.ambient = [Xa, Ya, h, n](const Configuration& q) -> Vec {
        Vec a = packAmbient(n, q.x, q.xhat, q.Q);
        Vec Xq = Xa(q), Yq = Ya(q);
        auto shifted = [&](const Vec& dir, double s) {
            return configFromAmbient(n, Vec(a + s * dir));
        };
        auto commutator = [&](double hh) -> Vec {
            Vec dY = Ya(shifted(Xq, hh)) - Ya(shifted(Xq, -hh));
            Vec dX = Xa(shifted(Yq, hh)) - Xa(shifted(Yq, -hh));
            return (dY - dX) / (2.0 * hh);
        };
        return (4.0 * commutator(0.5 * h) - commutator(h)) / 3.0;
    };
    return f;
}

TangentQ lieBracket(const QVectorField& X, const QVectorField& Y,
                    const Configuration& at, double h) {
    return lieBracketField(X, Y, h).at(at);
}

std::vector<TangentQ> closedFormD2(const ChartManifold& M,
                                   const ChartManifold& Mhat,
                                   const Configuration& at) {
    const int n = M.dim();
    Tensor R = riemann(M, at.x).R;
    Tensor Rbar = R;
    Rbar -= pullbackAll(riemann(Mhat, at.xhat).R, at.Q);
    std::vector<TangentQ> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            TangentQ t;
            t.u = Vec::Zero(n);
            t.uhat = Vec::Zero(n);
            t.A = Mat::Zero(n, n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) t.A(a, b) = Rbar(a, b, i, j);
            out.push_back(std::move(t));
        }
    return out;
}

std::vector<TangentQ> closedFormD3(const ChartManifold& M,
                                   const ChartManifold& Mhat,
                                   const Configuration& at) {
    const int n = M.dim();
    std::vector<TangentQ> out = closedFormD2(M, Mhat, at);

    CurvatureData cd = riemann(M, at.x, true);
    CurvatureData cdh = riemann(Mhat, at.xhat, true);
    Tensor Rhat = pullbackAll(cdh.R, at.Q);
    Tensor nRbar = cd.nablaR;
    nRbar -= pullbackAll(cdh.nablaR, at.Q);
    Tensor fch = frameChristoffel(Mhat, at.xhat);

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                // Vertical nabla-R-bar generator.
                TangentQ tv;
                tv.u = Vec::Zero(n);
                tv.uhat = Vec::Zero(n);
                tv.A = Mat::Zero(n, n);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        tv.A(a, b) = nRbar(a, b, i, j, k);
                out.push_back(std::move(tv));

                // Mixed generator with base direction
                // q R(e_i,e_j)e_k - Rhat(qe_i,qe_j)qe_k.
                Vec c(n);
                for (int s = 0; s < n; ++s)
                    c[s] = cd.R(i, j, k, s) - Rhat(i, j, k, s);
                Vec d = at.Q * c;
                Mat Gh = christoffelAlong(fch, d);
                TangentQ tm;
                tm.u = Vec::Zero(n);
                tm.uhat = d;
                tm.A = -at.Q.transpose() * Gh * at.Q;
                out.push_back(std::move(tm));
            }
    return out;
}

int numericalRank(const Mat& columns, double tol,
                  std::vector<double>* spectrum) {
    if (columns.cols() == 0) {
        if (spectrum) spectrum->clear();
        return 0;
    }
    Eigen::JacobiSVD<Mat> svd(columns);
    Vec sv = svd.singularValues();
    if (spectrum)
        spectrum->assign(sv.data(), sv.data() + sv.size());
    double smax = sv.size() ? sv[0] : 0.0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tol * smax) ++r;
    return smax > 0 ? r : 0;
}

double subspaceAngle(const Mat& A, const Mat& B, double tol) {
    auto orthobasis = [tol](const Mat& X) -> Mat {
        Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeThinU);
        int r = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > tol * svd.singularValues()[0]) ++r;
        return svd.matrixU().leftCols(r);
    };
    Mat U = orthobasis(A), V = orthobasis(B);
    if (U.cols() != V.cols())
        return M_PI / 2;  // different dimensions: maximal angle
    if (U.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(U.transpose() * V);
    double c = svd.singularValues().minCoeff();
    return std::acos(std::min(1.0, std::max(-1.0, c)));
}

Filtration filtration(const ChartManifold& M, const ChartManifold& Mhat,
                      const Configuration& at, int k_max, double svd_tol,
                      double h_scale) {
    if (k_max < 1) throw ArgumentError("filtration needs k_max >= 1");
    const int n = M.dim();
    Filtration out;
    out.at = at;
    out.dimQ = TangentQ::dimQ(n);

    std::vector<QVectorField> basis = rollingBasis(M, Mhat);
    std::vector<QVectorField> layer = basis;

    Mat span(out.dimQ, 0);
    auto appendLayer = [&](const std::vector<QVectorField>& fields) {
        std::vector<std::string> labels;
        for (const QVectorField& f : fields) {
            span.conservativeResize(Eigen::NoChange, span.cols() + 1);
            span.col(span.cols() - 1) = f.at(at).intrinsic();
            labels.push_back(f.label);
        }
        out.words.push_back(std::move(labels));
        std::vector<double> spectrum;
        int r = numericalRank(span, svd_tol, &spectrum);
        out.ranks.push_back(r);
        out.spectra.push_back(std::move(spectrum));
        return r;
    };

    int r = appendLayer(layer);
    for (int d = 2; d <= k_max; ++d) {
        if (r == out.dimQ) break;
        std::vector<QVectorField> next;
        for (const QVectorField& g : layer)
            for (const QVectorField& e : basis)
                next.push_back(
                    lieBracketField(e, g, h_scale * bracketStep(g.depth + 1)));
        int rNew = appendLayer(next);
        layer = std::move(next);
        if (rNew == out.dimQ) {
            out.step = d;
            out.bracketGenerating = true;
        } else if (rNew == r) {
            if (out.step < 0)
                out.step = d - 1;  // stabilized: D^{d-1} = D^d (evidence)
        } else if (out.step >= 0) {
            out.step = -1;  // rank grew after an apparent stabilization
        }
        r = rNew;
    }
    if (r == out.dimQ && out.ranks.size() == 1) {
        out.step = 1;
        out.bracketGenerating = true;
    }
    return out;
}

Mat haarSO(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = gauss(rng);
    Eigen::HouseholderQR<Mat> qr(G);
    Mat Q = qr.householderQ();
    Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (R(j, j) < 0) Q.col(j) = -Q.col(j);
    if (Q.determinant() < 0) Q.col(n - 1) = -Q.col(n - 1);
    return Q;
}

Configuration randomConfiguration(const ChartManifold& M,
                                  const ChartManifold& Mhat,
                                  std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto sample = [&](const ChartManifold& man) -> Vec {
        if (man.sample_lo.size() != man.dim())
            throw ArgumentError("manifold has no sampling box");
        for (int attempt = 0; attempt < 1000; ++attempt) {
            Vec x(man.dim());
            for (int i = 0; i < man.dim(); ++i)
                x[i] = man.sample_lo[i] +
                       uni(rng) * (man.sample_hi[i] - man.sample_lo[i]);
            if (man.inDomain(x)) return x;
        }
        throw DomainError("could not sample a point in the chart domain");
    };
    Configuration q;
    q.x = sample(M);
    q.xhat = sample(Mhat);
    q.Q = haarSO(M.dim(), rng);
    return q;
}

}  // namespace rollgeo
