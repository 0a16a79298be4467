#pragma once

#include "rollgeo/manifold.hpp"
#include "rollgeo/tensor.hpp"

namespace rollgeo {

// Riemann tensor and its covariant derivative at a point, expressed in
// the orthonormal frame. Convention: R(Y1,Y2) = [nabla_1, nabla_2] -
// nabla_[Y1,Y2], R(Y1,Y2,Y3,Y4) = <R(Y1,Y2)Y3, Y4>, so the sectional
// curvature of a plane {u,v} is R(u,v,v,u).
struct CurvatureData {
    Tensor R;       // indices (a,b,c,d)
    Tensor nablaR;  // indices (a,b,c,d,k); empty unless requested

    // Sectional curvature of the plane spanned by two vectors given in
    // frame coordinates.
    double sectional(const Vec& u, const Vec& v) const;

    double antisymmetryResidual() const;
    double pairSymmetryResidual() const;
    double firstBianchiResidual() const;
};

struct IteratedCurvature {
    int order = 0;   // l
    Tensor tensor;   // rank 2l+2
};

struct SymmetryCheck {
    bool locallySymmetric = false;
    double maxResidual = 0.0;
};

// Levi-Civita Christoffel symbols Gamma^k_{ij} in chart coordinates,
// index order (k,i,j).
Tensor christoffelCoords(const ChartManifold& M, const Vec& x);

// Frame Christoffel symbols Gamma^a_{jb} = <e_a, nabla_{e_j} e_b>,
// index order (a,j,b); antisymmetric in (a,b).
Tensor frameChristoffel(const ChartManifold& M, const Vec& x);

// Riemann tensor in the orthonormal frame. withNabla also fills nablaR.
CurvatureData riemann(const ChartManifold& M, const Vec& x,
                      bool withNabla = false);

// nabla R in the orthonormal frame, indices (a,b,c,d,k).
Tensor nablaRiemann(const ChartManifold& M, const Vec& x);

// Iterated curvature tensor R^l, rank 2l+2:
// R^l(Ya,Yb,Y1,...) = R^{l-1}(R(Ya,Yb)Y1, ...), R^1 = R.
IteratedCurvature rPower(const ChartManifold& M, const Vec& x, int l);
IteratedCurvature rPower(const Tensor& R, int l);

double sectional(const ChartManifold& M, const Vec& x, const Vec& u,
                 const Vec& v);

SymmetryCheck isLocallySymmetric(const ChartManifold& M,
                                 const std::vector<Vec>& samples,
                                 double tol = 1e-5);

// Second Bianchi cyclic-sum residual of a (4+1)-tensor nablaR.
double secondBianchiResidual(const Tensor& nablaR);

}  // namespace rollgeo
