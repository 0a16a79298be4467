#include "rollgeo/manifold.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace rollgeo {

double fdScaledStep(double base, double coord) {
    return base * std::max(1.0, std::abs(coord));
}

ChartManifold::ChartManifold(std::string name, int n, FrameFn frame,
                             DomainFn domain, FrameJetFn frame_jet)
    : name_(std::move(name)),
      n_(n),
      frame_(std::move(frame)),
      frame_jet_(std::move(frame_jet)),
      domain_(std::move(domain)) {
    if (n_ < 2) throw ArgumentError("manifold dimension must be >= 2");
    sample_lo = Vec::Constant(n_, -0.5);
    sample_hi = Vec::Constant(n_, 0.5);
}

ChartManifold ChartManifold::fromMetric(std::string name, int n,
                                        MetricFn metric, DomainFn domain) {
    // Frame by Gram-Schmidt of the coordinate basis in g with fixed
    // column order: E = L^{-T} for g = L L^T.
    auto frame = [metric](const Vec& x) -> Mat {
        Mat g = metric(x);
        Eigen::LLT<Mat> llt(g);
        if (llt.info() != Eigen::Success)
            throw DegeneracyError("metric not positive definite");
        Mat L = llt.matrixL();
        return L.transpose()
            .triangularView<Eigen::Upper>()
            .solve(Mat::Identity(g.rows(), g.cols()));
    };
    ChartManifold m(std::move(name), n, frame, std::move(domain));
    m.metric_ = std::move(metric);
    return m;
}

bool ChartManifold::inDomain(const Vec& x) const {
    if (x.size() != n_) return false;
    return domain_ ? domain_(x) : true;
}

void ChartManifold::requireDomain(const Vec& x) const {
    if (!inDomain(x))
        throw DomainError("point outside chart domain of " + name_);
}

Mat ChartManifold::frameAt(const Vec& x) const { return frame_(x); }

Mat ChartManifold::metricAt(const Vec& x) const {
    if (metric_) return metric_(x);
    Mat e = frame_(x);
    Mat ee = e * e.transpose();
    Eigen::LLT<Mat> llt(ee);
    if (llt.info() != Eigen::Success)
        throw DegeneracyError("frame is singular at a chart point");
    return llt.solve(Mat::Identity(n_, n_));
}

std::vector<Mat> ChartManifold::frameJetAt(const Vec& x) const {
    if (frame_jet_) return frame_jet_(x);
    std::vector<Mat> jet(n_);
    for (int k = 0; k < n_; ++k) {
        double h = fdScaledStep(fd_step_, x[k]);
        Vec xp = x, xm = x, xpp = x, xmm = x;
        xp[k] += h;
        xm[k] -= h;
        xpp[k] += 2 * h;
        xmm[k] -= 2 * h;
        jet[k] = (-frame_(xpp) + 8.0 * frame_(xp) - 8.0 * frame_(xm) +
                  frame_(xmm)) /
                 (12.0 * h);
    }
    return jet;
}

std::vector<Mat> ChartManifold::metricJetAt(const Vec& x) const {
    if (metric_ && !frame_jet_) {
        std::vector<Mat> jet(n_);
        for (int k = 0; k < n_; ++k) {
            double h = fdScaledStep(fd_step_, x[k]);
            Vec xp = x, xm = x, xpp = x, xmm = x;
            xp[k] += h;
            xm[k] -= h;
            xpp[k] += 2 * h;
            xmm[k] -= 2 * h;
            jet[k] = (-metric_(xpp) + 8.0 * metric_(xp) - 8.0 * metric_(xm) +
                      metric_(xmm)) /
                     (12.0 * h);
        }
        return jet;
    }
    // g = (E E^T)^{-1}, so dg = -g d(E E^T) g.
    Mat e = frame_(x);
    Mat g = metricAt(x);
    std::vector<Mat> de = frameJetAt(x);
    std::vector<Mat> jet(n_);
    for (int k = 0; k < n_; ++k) {
        Mat ds = de[k] * e.transpose() + e * de[k].transpose();
        jet[k] = -g * ds * g;
    }
    return jet;
}

double ChartManifold::gramResidual(const Vec& x) const {
    Mat e = frameAt(x);
    Mat g = metricAt(x);
    Mat gram = e.transpose() * g * e;
    return (gram - Mat::Identity(n_, n_)).cwiseAbs().maxCoeff();
}

}  // namespace rollgeo
