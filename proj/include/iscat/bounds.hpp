#pragma once

#include <Eigen/Core>

namespace iscat {

// Per-entry admissible box for a degree-of-freedom vector.
struct Bounds {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    Eigen::Index size() const { return lower.size(); }

    bool valid() const {
        return lower.size() == upper.size() && lower.allFinite() && upper.allFinite() &&
               (lower.array() <= upper.array()).all();
    }

    bool contains(const Eigen::VectorXd& v, double slack = 0.0) const {
        if (v.size() != lower.size()) return false;
        return (v.array() >= lower.array() - slack).all() &&
               (v.array() <= upper.array() + slack).all();
    }

    // Span per entry, degenerate (frozen) entries mapped to 1 so that
    // normalized coordinates stay finite.
    Eigen::VectorXd range_safe() const {
        Eigen::VectorXd r = upper - lower;
        for (Eigen::Index k = 0; k < r.size(); ++k) {
            if (r[k] <= 0.0) r[k] = 1.0;
        }
        return r;
    }

    // Maps v into [0,1]^K using the box.
    Eigen::VectorXd normalize(const Eigen::VectorXd& v) const {
        return (v - lower).cwiseQuotient(range_safe());
    }

    Eigen::VectorXd clamp(const Eigen::VectorXd& v) const {
        return v.cwiseMax(lower).cwiseMin(upper);
    }
};

}  // namespace iscat
