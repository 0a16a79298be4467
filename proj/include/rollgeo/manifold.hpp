#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rollgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ArgumentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DerivativeMode { Analytic, FiniteDifference };

// An n-dimensional Riemannian manifold given by a single chart.
//
// The frame callback returns an n x n matrix whose columns are the
// components of an orthonormal frame e_1..e_n in the coordinate basis.
// Either the frame or the metric may be supplied; the other is derived
// (g = (E E^T)^{-1}, or E by metric Gram-Schmidt with fixed column order).
// frame_jet, when present, returns the analytic partials d E / d x_k.
class ChartManifold {
public:
    using FrameFn = std::function<Mat(const Vec&)>;
    using MetricFn = std::function<Mat(const Vec&)>;
    using FrameJetFn = std::function<std::vector<Mat>(const Vec&)>;
    using DomainFn = std::function<bool(const Vec&)>;

    ChartManifold() = default;
    ChartManifold(std::string name, int n, FrameFn frame, DomainFn domain,
                  FrameJetFn frame_jet = nullptr);

    static ChartManifold fromMetric(std::string name, int n, MetricFn metric,
                                    DomainFn domain);

    const std::string& name() const { return name_; }
    int dim() const { return n_; }

    bool inDomain(const Vec& x) const;
    void requireDomain(const Vec& x) const;

    // Orthonormal frame columns in coordinate basis.
    Mat frameAt(const Vec& x) const;
    // Metric g(x), symmetric positive definite.
    Mat metricAt(const Vec& x) const;
    // d E / d x_k for k = 0..n-1; analytic when a jet was supplied,
    // 4th-order central differences otherwise.
    std::vector<Mat> frameJetAt(const Vec& x) const;
    // d g / d x_k, derived from the frame jet or by FD on the metric.
    std::vector<Mat> metricJetAt(const Vec& x) const;

    DerivativeMode derivativeMode() const {
        return frame_jet_ ? DerivativeMode::Analytic
                          : DerivativeMode::FiniteDifference;
    }
    double fdStep() const { return fd_step_; }
    void setFdStep(double h) { fd_step_ = h; }

    // Residual of frame g-orthonormality, ||E^T g E - I||_inf.
    double gramResidual(const Vec& x) const;

    // Catalog metadata; not computed, only asserted by constructors.
    bool complete = false;
    bool locallySymmetric = false;
    bool flat = false;
    // Constructor parameters for the declarative config.
    std::vector<double> params;

    // Box used when sampling random chart points (per coordinate).
    Vec sample_lo, sample_hi;

private:
    std::string name_;
    int n_ = 0;
    FrameFn frame_;
    MetricFn metric_;
    FrameJetFn frame_jet_;
    DomainFn domain_;
    double fd_step_ = 1e-4;
};

// Step for a 4th-order central difference in coordinate k, scaled by
// the coordinate magnitude.
double fdScaledStep(double base, double coord);

}  // namespace rollgeo
