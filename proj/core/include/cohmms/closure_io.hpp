#pragma once

#include <string>

#include "cohmms/closure.hpp"

namespace cohmms {

/// JSON export: {"class_of": n x n ints, "class_count": r, "full": bool,
/// "warnings": [...]}.
std::string partition_to_json(const CoherentPartition<double>& part);
std::string partition_to_json(const CoherentPartition<Rational>& part);

/// CSV export: one row (x_label, y_label, class_id) per cell.
std::string partition_to_csv(const CoherentPartition<double>& part);
std::string partition_to_csv(const CoherentPartition<Rational>& part);

/// Kernel debug render: header row of labels, then one CSV row per point.
std::string kernel_to_csv(const Kernel<double>& kernel);
std::string kernel_to_csv(const Kernel<Rational>& kernel);

} // namespace cohmms
