#pragma once

#include <random>

#include "rollgeo/geometry.hpp"
#include "rollgeo/rolling.hpp"

namespace rollgeo {

// Tangent vector to the configuration space in intrinsic components:
// frame components of the base velocities and the antisymmetric matrix
// of vertical (W^l) coefficients, so that the fiber velocity is V = Q A.
struct TangentQ {
    Vec u;
    Vec uhat;
    Mat A;

    // (u, uhat, strict upper triangle of A), dimension 2n + n(n-1)/2.
    Vec intrinsic() const;

    static int dimQ(int n) { return 2 * n + n * (n - 1) / 2; }
};

// Vector field on the configuration space, stored through its ambient
// coordinate representation (xdot, xhatdot, vec Qdot) in R^{2n+n^2}.
// The manifolds are held by pointer and must outlive the field.
struct QVectorField {
    const ChartManifold* M = nullptr;
    const ChartManifold* Mhat = nullptr;
    std::string label;
    int depth = 1;
    std::function<Vec(const Configuration&)> ambient;

    TangentQ at(const Configuration& q) const;
    // || symmetric part of Q^T V ||_inf: tangency to SO(n).
    double tangencyResidual(const Configuration& q) const;
};

// Ambient coordinate packing of a configuration and its inverse.
Vec ambientCoords(const Configuration& q);
Configuration configFromAmbient(int n, const Vec& amb);

// Pullback of a frame tensor along the frame relation Q: contracts every
// index with Q on the left, T(a,b,..) = sum Q(p,a) Q(r,b) ... S(p,r,..).
Tensor pullbackAll(const Tensor& S, const Mat& Q);

// The local basis of the rolling distribution, fields e-bar_1..e-bar_n.
std::vector<QVectorField> rollingBasis(const ChartManifold& M,
                                       const ChartManifold& Mhat);

// Elementary vertical fields: W^l has V = Q w_{ab}, W^r has V = w_{ab} Q,
// where w_{ab} is the elementary antisymmetric matrix. Requires a < b.
QVectorField wLeft(const ChartManifold& M, const ChartManifold& Mhat,
                   int a, int b);
QVectorField wRight(const ChartManifold& M, const ChartManifold& Mhat,
                    int a, int b);

// FD step used for a bracket whose result has the given depth.
double bracketStep(int depth);

// Lie bracket as a field (lazy central-difference commutator of the
// ambient representations, Richardson-extrapolated once). h <= 0 picks
// the depth-based default step.
QVectorField lieBracketField(const QVectorField& X, const QVectorField& Y,
                             double h = 0.0);
TangentQ lieBracket(const QVectorField& X, const QVectorField& Y,
                    const Configuration& at, double h = 0.0);

// Closed-form generators of D^2 and D^3 beyond the basis:
// vertical R-bar fields for D^2; vertical nabla-R-bar fields plus the
// mixed base/vertical generators for D^3 (the returned D^3 list includes
// the D^2 generators).
std::vector<TangentQ> closedFormD2(const ChartManifold& M,
                                   const ChartManifold& Mhat,
                                   const Configuration& at);
std::vector<TangentQ> closedFormD3(const ChartManifold& M,
                                   const ChartManifold& Mhat,
                                   const Configuration& at);

struct Filtration {
    Configuration at;
    int dimQ = 0;
    std::vector<int> ranks;                        // ranks[k-1] = dim D^k
    int step = -1;                                 // -1 if undetermined
    bool bracketGenerating = false;
    std::vector<std::vector<double>> spectra;      // singular values per level
    std::vector<std::vector<std::string>> words;   // bracket words per level
};

// Rank filtration D^1 <= D^2 <= ... at a configuration, via left-normed
// bracket words of the basis fields evaluated by finite differences.
// h_scale rescales the depth-based FD steps (for stability checks).
Filtration filtration(const ChartManifold& M, const ChartManifold& Mhat,
                      const Configuration& at, int k_max = 4,
                      double svd_tol = 1e-6, double h_scale = 1.0);

// Rank = number of singular values > tol * sigma_max (0 for empty input).
int numericalRank(const Mat& columns, double tol,
                  std::vector<double>* spectrum = nullptr);

// Largest principal angle between the column spans (radians).
double subspaceAngle(const Mat& A, const Mat& B, double tol = 1e-9);

// Haar-distributed rotation (QR of a Gaussian matrix, sign-corrected).
Mat haarSO(int n, std::mt19937_64& rng);

// Random configuration: chart points uniform in the sample boxes,
// Haar-random frame relation.
Configuration randomConfiguration(const ChartManifold& M,
                                  const ChartManifold& Mhat,
                                  std::mt19937_64& rng);

}  // namespace rollgeo
