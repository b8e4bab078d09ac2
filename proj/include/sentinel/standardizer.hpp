#ifndef SENTINEL_STANDARDIZER_HPP
#define SENTINEL_STANDARDIZER_HPP

#include <cmath>
#include <vector>

#include "sentinel/common.hpp"

namespace sentinel::ml {

// Online feature standardizer: transforms with the statistics accumulated
// *before* ingesting the sample, then updates. The very first sample is
// returned unchanged.
class Standardizer {
public:
    static constexpr double kStdFloor = 1e-12;

    std::vector<double> transform_update(const std::vector<double>& x) {
        if (n_ == 0) {
            mean_.assign(x.size(), 0.0);
            m2_.assign(x.size(), 0.0);
            update(x);
            return x;
        }
        if (x.size() != mean_.size())
            throw UsageError("standardizer: feature dimension mismatch");
        std::vector<double> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            double sd = std::sqrt(m2_[i] / static_cast<double>(n_));
            out[i] = (x[i] - mean_[i]) / std::max(sd, kStdFloor);
        }
        update(x);
        return out;
    }

    // read-only transform with the current statistics (for prediction)
    std::vector<double> transform(const std::vector<double>& x) const {
        if (n_ == 0) return x;
        if (x.size() != mean_.size())
            throw UsageError("standardizer: feature dimension mismatch");
        std::vector<double> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            double sd = std::sqrt(m2_[i] / static_cast<double>(n_));
            out[i] = (x[i] - mean_[i]) / std::max(sd, kStdFloor);
        }
        return out;
    }

    std::uint64_t count() const { return n_; }
    const std::vector<double>& means() const { return mean_; }
    std::vector<double> variances() const {
        std::vector<double> v(m2_.size());
        for (std::size_t i = 0; i < m2_.size(); ++i)
            v[i] = n_ ? m2_[i] / static_cast<double>(n_) : 0.0;
        return v;
    }

    void restore(std::uint64_t n, std::vector<double> mean, std::vector<double> m2) {
        n_ = n;
        mean_ = std::move(mean);
        m2_ = std::move(m2);
    }
    const std::vector<double>& raw_m2() const { return m2_; }

private:
    void update(const std::vector<double>& x) {
        ++n_;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double delta = x[i] - mean_[i];
            mean_[i] += delta / static_cast<double>(n_);
            m2_[i] += delta * (x[i] - mean_[i]);
        }
    }

    std::uint64_t n_ = 0;
    std::vector<double> mean_, m2_;
};

} // namespace sentinel::ml

#endif
