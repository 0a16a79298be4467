#pragma once

#include "rollgeo/manifold.hpp"
#include "rollgeo/transport.hpp"

namespace rollgeo {

struct CompositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A point of the configuration space Q in local coordinates: chart
// points on both manifolds and the special-orthogonal matrix
// Q_ij = <ehat_i, q e_j> relating the two catalog frames.
struct Configuration {
    Vec x;
    Vec xhat;
    Mat Q;

    double soResidual() const;
};

// Projection to SO(n): modified Gram-Schmidt on columns, then a
// determinant sign check.
Mat projectSO(const Mat& Q);

enum class MapDirection { Forward, Inverse };

// The isometry q: T_x M -> T_xhat Mhat on frame components (Forward is
// v |-> Qv, Inverse is Q^T).
Vec applyIsometry(const Configuration& q, const Vec& vFrame,
                  MapDirection dir = MapDirection::Forward);

// Same on coordinate components of the tangent vectors.
Vec applyIsometryCoords(const ChartManifold& M, const ChartManifold& Mhat,
                        const Configuration& q, const Vec& vCoord,
                        MapDirection dir = MapDirection::Forward);

struct RollingCurve {
    std::vector<double> ts;
    std::vector<Configuration> configs;
    BaseCurve base;      // m(t) on M
    BaseCurve baseHat;   // mhat(t) on Mhat, produced by the development
};

// Rolling of M on Mhat along the base curve, starting at q0 (whose x
// must be the base start). Anti-develops m(t) through a parallel frame,
// develops into Mhat, and reads off Q(t) = Fhat(t) F(t)^{-1}.
RollingCurve rollAlong(const ChartManifold& M, const ChartManifold& Mhat,
                       const BaseCurve& base, const Configuration& q0,
                       int steps = 0);

struct RollingResiduals {
    double noSlip = 0.0;
    double noTwist = 0.0;
    double soDrift = 0.0;
    bool pass = false;
};

// No-slip residual max |mhatdot - q mdot| and no-twist residual
// (transport a vector along m, map by q(t), compare with transport
// along mhat), both in frame components.
RollingResiduals verifyRolling(const ChartManifold& M,
                               const ChartManifold& Mhat,
                               const RollingCurve& rc, double tol = 1e-5,
                               unsigned seed = 17);

// q(t) = qhat(t) o qtilde(t): composition of a rolling of M on R^n with
// a rolling of R^n on Mhat along the same developed curve.
RollingCurve composeRollings(const RollingCurve& tilde,
                             const RollingCurve& hat, double tol = 1e-6);

// Concatenation of curve segments (time grids appended end to end).
BaseCurve concatCurves(const std::vector<BaseCurve>& segments);

}  // namespace rollgeo
