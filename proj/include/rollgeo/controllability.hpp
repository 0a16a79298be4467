#pragma once

#include "rollgeo/distribution.hpp"

namespace rollgeo {

// N x N curvature-gap matrix over ordered index pairs a < b, with
// N = n(n-1)/2. Entries are arranged so that diagonal entries are
// sectional-curvature gaps kappa - kappa-hat of corresponding planes;
// a nonzero determinant certifies step-3 bracket generation.
struct CurvatureGap {
    Mat matrix;
    double det = 0.0;
    Vec singularValues;

    int rank(double svd_tol = 1e-6) const;
    // Scale-aware determinant test: |det| > det_tol * sigma_max^N.
    bool nonzero(double det_tol = 1e-8) const;
};

CurvatureGap curvatureGap(const ChartManifold& M, const ChartManifold& Mhat,
                          const Configuration& at);

// Sampled interval of the sectional-curvature gap over all coordinate
// planes plus seeded random planes.
struct SectionalGap {
    double lo = 0.0;
    double hi = 0.0;
    int planes = 0;

    bool definite(double tol = 1e-8) const {
        return lo > tol || hi < -tol;
    }
};

SectionalGap sectionalGap(const ChartManifold& M, const ChartManifold& Mhat,
                          const Configuration& at, int randomPlanes = 64,
                          unsigned seed = 5);

// Lower bound n + rank(R-bar map) + rank(Xi-bar) for dim D^3.
struct XiRankBound {
    int n = 0;
    int rankGap = 0;
    int rankXi = 0;
    int bound = 0;
};

XiRankBound xiRankBound(const ChartManifold& M, const ChartManifold& Mhat,
                        const Configuration& at, double svd_tol = 1e-6);

enum class TestOutcome { Pass, Fail, Inconclusive, NotApplicable };

std::string outcomeName(TestOutcome o);

struct TestResult {
    std::string name;
    TestOutcome outcome = TestOutcome::Inconclusive;
    double value = 0.0;   // primary numeric witness
    std::string detail;
};

// Flat-partner criterion: with a flat partner and a locally symmetric
// base, D is at most step 3 and generating iff the gap determinant is
// nonzero; without local symmetry a nonzero determinant stays
// sufficient.
TestResult flatPartnerTest(const ChartManifold& M, const ChartManifold& Mhat,
                           const Configuration& at, double det_tol = 1e-8);

// Both locally symmetric: generating iff the accumulated vertical spans
// of the iterated gap tensors R-bar^l, l = 1..l_max, fill so(n).
TestResult locallySymmetricTest(const ChartManifold& M,
                                const ChartManifold& Mhat,
                                const Configuration& at, int l_max = 3,
                                double svd_tol = 1e-6);

// n = 2 dichotomy: kappa-bar != 0 somewhere on the orbit iff dim 5. A
// zero at the configuration triggers a sampled sweep along rollings.
TestResult twoDimTest(const ChartManifold& M, const ChartManifold& Mhat,
                      const Configuration& at, int sweepCurves = 8,
                      unsigned seed = 13);

enum class Verdict {
    BracketGeneratingStep3,
    BracketGeneratingStepK,
    RankDeficient,
    InvolutiveEvidence,
};

std::string verdictName(Verdict v);

// Aggregates the filtration ranks and the determinant test into a
// verdict (the sufficient conditions combine by OR).
Verdict verdictFor(const Filtration& f, const CurvatureGap& gap,
                   double det_tol = 1e-8);

struct ControllabilityReport {
    Configuration at;
    Verdict verdict = Verdict::RankDeficient;
    int step = -1;
    std::vector<int> ranks;
    int dimQ = 0;
    CurvatureGap gap;
    SectionalGap sectional;
    XiRankBound xi;
    std::vector<TestResult> tests;
    bool promoted = false;
    std::string promotion;
    unsigned seed = 0;
};

// Runs the filtration and all applicable tests and aggregates a verdict.
// Sufficient conditions combine by OR; the verdict is consistent with
// the measured filtration ranks.
ControllabilityReport analyze(const ChartManifold& M,
                              const ChartManifold& Mhat,
                              const Configuration& at, int k_max = 4,
                              double svd_tol = 1e-6, double det_tol = 1e-8,
                              unsigned seed = 17);

// Complete-partner promotion: samples the fiber over the base point m
// and reports completely-controllable evidence if every sampled fiber
// configuration is bracket generating.
TestResult promoteComplete(const ChartManifold& M, const ChartManifold& Mhat,
                           const Vec& m, int fiberSamples = 50,
                           unsigned seed = 29, double det_tol = 1e-8);

}  // namespace rollgeo
