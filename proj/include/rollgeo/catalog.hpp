#pragma once

#include "rollgeo/manifold.hpp"

namespace rollgeo {
namespace catalog {

// Flat R^n in Cartesian coordinates, identity frame.
ChartManifold euclidean(int n);

// Round sphere of radius r in stereographic coordinates (conformal
// metric 4r^2/(1+|x|^2)^2 * I). The chart covers everything except one
// point; the chart origin is the point of polar angle 0 and a
// coordinate circle |x| = tan(theta/2) is the circle of polar angle
// theta.
ChartManifold sphere(int n, double r);

// Hyperbolic space of curvature -1/r^2, Poincare ball coordinates
// (conformal metric 4r^2/(1-|x|^2)^2 * I on |x| < 1).
ChartManifold hyperbolic(int n, double r);

// S^2 x R as the subset x0^2+x1^2+x2^2 = 1 of R^4, chart coordinates
// (x0, x1, x3) on the half x2 > 0, with the explicit orthonormal frame
//   e1 = -sqrt(x1^2+x2^2) (-d_x0 + x0/(x1^2+x2^2) (x1 d_x1 + x2 d_x2))
//   e2 = x2/sqrt(x1^2+x2^2) (-d_x1 + (x1/x2) d_x2),  e3 = d_x3.
ChartManifold sphereTimesLine();

// Surface of revolution sqrt(x2^2+x3^2) = 1 - f(x1), |x1| < 3/2, with
// f = 0 on |x1| <= 1 and exp(-1/(|x1|-1)^2) outside; chart coordinates
// (x1, angle). Flat on |x1| <= 1, strictly positive Gaussian curvature
// outside; not complete.
ChartManifold bumpSurface();

// Bump profile f and the closed-form Gaussian curvature
// kappa = f'' / ((1+f'^2)^2 (1-f)).
double bumpProfile(double x1);
double bumpProfileD1(double x1);
double bumpProfileD2(double x1);
double bumpGaussianCurvature(double x1);

// Construct an entry by name: "euclidean", "sphere", "hyperbolic",
// "sphere_times_line", "bump_surface". Unused parameters are ignored.
ChartManifold byName(const std::string& name,
                     const std::vector<double>& params);

std::vector<std::string> names();

// Re-verifies the metadata flags (flat, locally symmetric, frame
// orthonormality) against computed residuals at random domain points.
struct MetadataReport {
    bool ok = true;
    double maxGramResidual = 0.0;
    double maxFlatResidual = 0.0;       // only if flagged flat
    double maxSymmetryResidual = 0.0;   // only if flagged locally symmetric
};
MetadataReport verifyMetadata(const ChartManifold& M, int points = 20,
                              double tol = 1e-6, unsigned seed = 7);

// The three-angle SO(3) parametrization used for rolling S^2 x R on
// itself: Rz(theta) * Ry(phi) * Rx(psi) acting on frame indices.
Mat so3FromAngles(double theta, double phi, double psi);

}  // namespace catalog
}  // namespace rollgeo
