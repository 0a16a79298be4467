#include "rollgeo/controllability.hpp"

#include <cmath>
#include <sstream>

#include "rollgeo/transport.hpp"

namespace rollgeo {

namespace {

// Ordered index pairs (a,b), a < b, in row-major order.
std::vector<std::pair<int, int>> indexPairs(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    return pairs;
}

// Local symmetry near a point: metadata flag, or nabla R negligible at
// the point and at small coordinate offsets around it.
bool locallySymmetricNear(const ChartManifold& M, const Vec& x,
                          double tol = 1e-5) {
    if (M.locallySymmetric) return true;
    std::vector<Vec> probes{x};
    for (int i = 0; i < M.dim(); ++i) {
        for (double s : {-0.01, 0.01}) {
            Vec y = x;
            y[i] += s;
            if (M.inDomain(y)) probes.push_back(y);
        }
    }
    for (const Vec& y : probes)
        if (nablaRiemann(M, y).maxAbs() > tol) return false;
    return true;
}

Vec sampleChartPoint(const ChartManifold& M, std::mt19937_64& rng) {
    if (M.sample_lo.size() != M.dim())
        throw ArgumentError("manifold has no sampling box");
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Vec x(M.dim());
        for (int i = 0; i < M.dim(); ++i)
            x[i] = M.sample_lo[i] +
                   uni(rng) * (M.sample_hi[i] - M.sample_lo[i]);
        if (M.inDomain(x)) return x;
    }
    throw DomainError("could not sample a point in the chart domain");
}

// Absolute floor below which curvature-gap data counts as exactly zero:
// numerically identical geometries leave FD noise of order 1e-12, far
// below any genuine gap the tests care about (>= 1e-7 on the catalog).
constexpr double kZeroFloor = 1e-10;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

int CurvatureGap::rank(double svd_tol) const {
    double smax = singularValues.size() ? singularValues.maxCoeff() : 0.0;
    if (smax <= kZeroFloor) return 0;
    int r = 0;
    for (int i = 0; i < singularValues.size(); ++i)
        if (singularValues[i] > svd_tol * smax) ++r;
    return r;
}

bool CurvatureGap::nonzero(double det_tol) const {
    double smax = singularValues.size() ? singularValues.maxCoeff() : 0.0;
    if (smax <= kZeroFloor) return false;
    const int N = matrix.rows();
    return std::abs(det) > det_tol * std::pow(smax, N);
}

CurvatureGap curvatureGap(const ChartManifold& M, const ChartManifold& Mhat,
                          const Configuration& at) {
    const int n = M.dim();
    Tensor Rbar = riemann(M, at.x).R;
    Rbar -= pullbackAll(riemann(Mhat, at.xhat).R, at.Q);
    auto pairs = indexPairs(n);
    const int N = static_cast<int>(pairs.size());
    CurvatureGap gap;
    gap.matrix = Mat(N, N);
    // Column index order (j,i) makes the diagonal the sectional gaps
    // R-bar(a,b,b,a) of the coordinate planes.
    for (int p = 0; p < N; ++p)
        for (int c = 0; c < N; ++c)
            gap.matrix(p, c) = Rbar(pairs[p].first, pairs[p].second,
                                    pairs[c].second, pairs[c].first);
    gap.det = gap.matrix.determinant();
    gap.singularValues = Eigen::JacobiSVD<Mat>(gap.matrix).singularValues();
    return gap;
}

SectionalGap sectionalGap(const ChartManifold& M, const ChartManifold& Mhat,
                          const Configuration& at, int randomPlanes,
                          unsigned seed) {
    const int n = M.dim();
    CurvatureData cd = riemann(M, at.x);
    CurvatureData cdh = riemann(Mhat, at.xhat);
    SectionalGap out;
    out.lo = std::numeric_limits<double>::infinity();
    out.hi = -out.lo;
    auto record = [&](const Vec& u, const Vec& v) {
        double kbar =
            cd.sectional(u, v) - cdh.sectional(at.Q * u, at.Q * v);
        out.lo = std::min(out.lo, kbar);
        out.hi = std::max(out.hi, kbar);
        ++out.planes;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            record(Vec::Unit(n, i), Vec::Unit(n, j));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int done = 0;
    while (done < randomPlanes) {
        Vec u(n), v(n);
        for (int i = 0; i < n; ++i) {
            u[i] = gauss(rng);
            v[i] = gauss(rng);
        }
        // Reject nearly collinear draws: the plane is ill-defined.
        Vec w = v - u * (u.dot(v) / u.squaredNorm());
        if (w.norm() < 1e-3 * v.norm()) continue;
        record(u, v);
        ++done;
    }
    return out;
}

XiRankBound xiRankBound(const ChartManifold& M, const ChartManifold& Mhat,
                        const Configuration& at, double svd_tol) {
    const int n = M.dim();
    XiRankBound out;
    out.n = n;
    out.rankGap = curvatureGap(M, Mhat, at).rank(svd_tol);

    Tensor R = riemann(M, at.x).R;
    Tensor Rhat = pullbackAll(riemann(Mhat, at.xhat).R, at.Q);
    auto pairs = indexPairs(n);
    Mat xi(n, static_cast<int>(pairs.size()) * n);
    int col = 0;
    for (auto [i, j] : pairs)
        for (int k = 0; k < n; ++k, ++col)
            for (int s = 0; s < n; ++s)
                xi(s, col) = R(i, j, k, s) - Rhat(i, j, k, s);
    out.rankXi =
        xi.cwiseAbs().maxCoeff() <= kZeroFloor ? 0 : numericalRank(xi, svd_tol);
    out.bound = n + out.rankGap + out.rankXi;
    return out;
}

std::string outcomeName(TestOutcome o) {
    switch (o) {
        case TestOutcome::Pass: return "pass";
        case TestOutcome::Fail: return "fail";
        case TestOutcome::Inconclusive: return "inconclusive";
        case TestOutcome::NotApplicable: return "not-applicable";
    }
    return "unknown";
}

std::string verdictName(Verdict v) {
    switch (v) {
        case Verdict::BracketGeneratingStep3:
            return "bracket-generating-step-3";
        case Verdict::BracketGeneratingStepK:
            return "bracket-generating-step-k";
        case Verdict::RankDeficient: return "rank-deficient";
        case Verdict::InvolutiveEvidence: return "involutive-evidence";
    }
    return "unknown";
}

TestResult flatPartnerTest(const ChartManifold& M, const ChartManifold& Mhat,
                           const Configuration& at, double det_tol) {
    TestResult r;
    r.name = "flat-partner";
    if (!Mhat.flat) {
        r.outcome = TestOutcome::NotApplicable;
        r.detail = "partner manifold is not flat";
        return r;
    }
    CurvatureGap gap = curvatureGap(M, Mhat, at);
    r.value = gap.det;
    bool locSym = locallySymmetricNear(M, at.x);
    if (gap.nonzero(det_tol)) {
        r.outcome = TestOutcome::Pass;
        r.detail = "bracket generating (step <= 3), det = " + fmt(gap.det) +
                   (locSym ? " [iff criterion]" : " [sufficient direction]");
    } else if (locSym) {
        r.outcome = TestOutcome::Fail;
        r.detail =
            "determinant zero: not bracket generating at this "
            "configuration (iff criterion, orbit dimension n)";
    } else {
        r.outcome = TestOutcome::Inconclusive;
        r.detail =
            "determinant zero and base not locally symmetric near the "
            "point: criterion is only sufficient here";
    }
    return r;
}

TestResult locallySymmetricTest(const ChartManifold& M,
                                const ChartManifold& Mhat,
                                const Configuration& at, int l_max,
                                double svd_tol) {
    TestResult r;
    r.name = "locally-symmetric";
    if (l_max < 1) throw ArgumentError("locallySymmetricTest needs l_max >= 1");
    if (!locallySymmetricNear(M, at.x) ||
        !locallySymmetricNear(Mhat, at.xhat)) {
        r.outcome = TestOutcome::Inconclusive;
        r.detail = "hypotheses unmet: both manifolds must be locally "
                   "symmetric";
        return r;
    }
    const int n = M.dim();
    auto pairs = indexPairs(n);
    const int N = static_cast<int>(pairs.size());

    // Accumulate the vertical coefficient vectors of the iterated gap
    // tensors over all multi-indices, for l = 1..l_max.
    Mat span(N, 0);
    for (int l = 1; l <= l_max; ++l) {
        Tensor Tbar = rPower(M, at.x, l).tensor;
        Tbar -= pullbackAll(rPower(Mhat, at.xhat, l).tensor, at.Q);
        const int restRank = 2 * l;
        std::vector<int> idx(Tbar.rank(), 0);
        std::size_t count = 1;
        for (int i = 0; i < restRank; ++i) count *= n;
        for (std::size_t flat = 0; flat < count; ++flat) {
            span.conservativeResize(Eigen::NoChange, span.cols() + 1);
            for (int p = 0; p < N; ++p) {
                idx[0] = pairs[p].first;
                idx[1] = pairs[p].second;
                span(p, span.cols() - 1) = Tbar.at(idx);
            }
            for (int k = restRank + 1; k >= 2; --k) {
                if (++idx[k] < n) break;
                idx[k] = 0;
            }
        }
    }
    int rank = span.cwiseAbs().maxCoeff() <= kZeroFloor
                   ? 0
                   : numericalRank(span, svd_tol);
    r.value = rank;
    if (rank == N) {
        r.outcome = TestOutcome::Pass;
        r.detail = "vertical span full: bracket generating (accumulated "
                   "rank " + fmt(rank) + " = n(n-1)/2)";
    } else {
        r.outcome = TestOutcome::Fail;
        r.detail = "not bracket generating: accumulated vertical rank " +
                   fmt(rank) + " < " + fmt(N);
    }
    return r;
}

TestResult twoDimTest(const ChartManifold& M, const ChartManifold& Mhat,
                      const Configuration& at, int sweepCurves,
                      unsigned seed) {
    TestResult r;
    r.name = "two-dim";
    if (M.dim() != 2) {
        r.outcome = TestOutcome::NotApplicable;
        r.detail = "dichotomy applies to surfaces only";
        return r;
    }
    auto kbar = [&](const Vec& x, const Vec& xhat) {
        return sectional(M, x, Vec::Unit(2, 0), Vec::Unit(2, 1)) -
               sectional(Mhat, xhat, Vec::Unit(2, 0), Vec::Unit(2, 1));
    };
    const double tol = 1e-8;
    double here = kbar(at.x, at.xhat);
    r.value = here;
    if (std::abs(here) > tol) {
        r.outcome = TestOutcome::Pass;
        r.detail = "orbit dimension 5: kappa-bar = " + fmt(here) +
                   " at the configuration";
        return r;
    }

    // Gap vanishes here; the dichotomy needs it on the whole orbit.
    // Sweep rollings along evenly spread (jittered) geodesic directions
    // and look for a reachable configuration with nonzero gap.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    double best = 0.0;
    int visited = 0;
    for (int c = 0; c < sweepCurves; ++c) {
        double angle = 2.0 * M_PI * c / sweepCurves + jitter(rng);
        Vec dir = M.frameAt(at.x) *
                  Vec(Eigen::Vector2d(std::cos(angle), std::sin(angle)));
        double T = 1.4;
        for (int attempt = 0; attempt < 4; ++attempt) {
            try {
                RollingCurve rc = rollAlong(M, Mhat, geodesic(M, at.x, dir, T),
                                            at);
                for (std::size_t i = 0; i < rc.configs.size(); i += 100) {
                    double k = kbar(rc.configs[i].x, rc.configs[i].xhat);
                    if (std::abs(k) > std::abs(best)) best = k;
                    ++visited;
                }
                break;
            } catch (const DomainError&) {
                T *= 0.5;  // curve left a chart; retry shorter
            }
        }
    }
    if (std::abs(best) > tol) {
        r.outcome = TestOutcome::Pass;
        r.value = best;
        r.detail = "orbit dimension 5: sampled rolling reached kappa-bar = " +
                   fmt(best);
    } else {
        r.outcome = TestOutcome::Fail;
        r.detail = "dimension-2 evidence: kappa-bar zero at all " +
                   fmt(visited) + " sampled orbit configurations (sampled, "
                   "not certified)";
    }
    return r;
}

ControllabilityReport analyze(const ChartManifold& M,
                              const ChartManifold& Mhat,
                              const Configuration& at, int k_max,
                              double svd_tol, double det_tol, unsigned seed) {
    ControllabilityReport rep;
    rep.at = at;
    rep.seed = seed;

    Filtration f = filtration(M, Mhat, at, k_max, svd_tol);
    rep.step = f.step;
    rep.ranks = f.ranks;
    rep.dimQ = f.dimQ;

    rep.gap = curvatureGap(M, Mhat, at);
    rep.sectional = sectionalGap(M, Mhat, at, 64, seed);
    rep.xi = xiRankBound(M, Mhat, at, svd_tol);

    TestResult gapTest;
    gapTest.name = "curvature-gap";
    gapTest.value = rep.gap.det;
    if (rep.gap.nonzero(det_tol)) {
        gapTest.outcome = TestOutcome::Pass;
        gapTest.detail = "gap matrix is an isomorphism: bracket generating "
                         "of step 3, det = " + fmt(rep.gap.det);
    } else {
        gapTest.outcome = TestOutcome::Inconclusive;
        gapTest.detail = "determinant below threshold (sufficient "
                         "condition only), det = " + fmt(rep.gap.det);
    }
    rep.tests.push_back(gapTest);

    TestResult secTest;
    secTest.name = "sectional-gap";
    secTest.value = rep.sectional.definite() ? rep.sectional.lo
                                             : rep.sectional.hi;
    if (rep.sectional.definite()) {
        secTest.outcome = TestOutcome::Pass;
        secTest.detail = "sectional gap has a strict sign on all sampled "
                         "planes: [" + fmt(rep.sectional.lo) + ", " +
                         fmt(rep.sectional.hi) + "]";
    } else {
        secTest.outcome = TestOutcome::Inconclusive;
        secTest.detail = "sampled interval [" + fmt(rep.sectional.lo) + ", " +
                         fmt(rep.sectional.hi) + "] does not have a strict "
                         "sign (sufficient condition only)";
    }
    rep.tests.push_back(secTest);

    rep.tests.push_back(flatPartnerTest(M, Mhat, at, det_tol));
    rep.tests.push_back(locallySymmetricTest(M, Mhat, at, 3, svd_tol));
    rep.tests.push_back(twoDimTest(M, Mhat, at, 8, seed));

    rep.verdict = verdictFor(f, rep.gap, det_tol);
    return rep;
}

Verdict verdictFor(const Filtration& f, const CurvatureGap& gap,
                   double det_tol) {
    const int n = f.ranks.empty() ? 0 : f.ranks.front();
    if (gap.nonzero(det_tol)) return Verdict::BracketGeneratingStep3;
    if (f.bracketGenerating)
        return f.step == 3 ? Verdict::BracketGeneratingStep3
                           : Verdict::BracketGeneratingStepK;
    if (f.step > 0 && !f.ranks.empty() && f.ranks.back() == n)
        return Verdict::InvolutiveEvidence;
    return Verdict::RankDeficient;
}

TestResult promoteComplete(const ChartManifold& M, const ChartManifold& Mhat,
                           const Vec& m, int fiberSamples, unsigned seed,
                           double det_tol) {
    TestResult r;
    r.name = "promote-complete";
    if (!Mhat.complete) {
        r.outcome = TestOutcome::NotApplicable;
        r.detail = "partner manifold not flagged complete";
        return r;
    }
    M.requireDomain(m);
    std::mt19937_64 rng(seed);
    int generating = 0;
    for (int k = 0; k < fiberSamples; ++k) {
        Configuration q;
        q.x = m;
        q.xhat = sampleChartPoint(Mhat, rng);
        q.Q = haarSO(M.dim(), rng);
        bool gen = curvatureGap(M, Mhat, q).nonzero(det_tol);
        if (!gen) gen = filtration(M, Mhat, q, 3).bracketGenerating;
        if (gen) ++generating;
    }
    r.value = generating;
    if (generating == fiberSamples) {
        r.outcome = TestOutcome::Pass;
        r.detail = "completely controllable (sampled evidence, " +
                   fmt(fiberSamples) + " fiber points)";
    } else {
        r.outcome = TestOutcome::Fail;
        r.detail = "fiber point without bracket generation found (" +
                   fmt(generating) + "/" + fmt(fiberSamples) +
                   " generating)";
    }
    return r;
}

}  // namespace rollgeo
