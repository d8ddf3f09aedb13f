#include "cohmms/policy.hpp"

#include <sstream>

namespace cohmms {

std::string GroupingWarning::to_string() const {
    std::ostringstream os;
    os << "grouping gap " << gap << " is within a decade of the split threshold " << threshold;
    return os.str();
}

std::vector<int> group_doubles(const std::vector<double>& values, double tol_group,
                               std::vector<GroupingWarning>* warnings) {
    const size_t n = values.size();
    std::vector<int> ids(n, 0);
    if (n == 0) return ids;

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });

    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    const double threshold = tol_group * scale;

    int gid = 0;
    ids[order[0]] = 0;
    for (size_t k = 1; k < n; ++k) {
        const double gap = values[order[k]] - values[order[k - 1]];
        if (gap > threshold) ++gid;
        ids[order[k]] = gid;
        if (warnings && threshold > 0.0 && gap > 0.1 * threshold && gap < 10.0 * threshold) {
            warnings->push_back({gap, threshold});
        }
    }
    return ids;
}

std::vector<int> group_rationals(const std::vector<Rational>& values) {
    std::vector<int> ids(values.size(), 0);
    std::map<Rational, int> seen;
    for (const Rational& v : values) seen.emplace(v, 0);
    int gid = 0;
    for (auto& [value, id] : seen) id = gid++;
    for (size_t k = 0; k < values.size(); ++k) ids[k] = seen.at(values[k]);
    return ids;
}

} // namespace cohmms
