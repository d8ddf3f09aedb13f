#include "cohmms/closure_io.hpp"

#include <sstream>

#include <json.hpp>

#include "cohmms/format.hpp"

namespace cohmms {

namespace {

template <class T>
std::string partition_json_impl(const CoherentPartition<T>& part) {
    nlohmann::json doc;
    const int n = part.class_of.rows();
    nlohmann::json rows = nlohmann::json::array();
    for (int x = 0; x < n; ++x) {
        nlohmann::json row = nlohmann::json::array();
        for (int y = 0; y < n; ++y) row.push_back(part.class_of(x, y));
        rows.push_back(std::move(row));
    }
    doc["class_of"] = std::move(rows);
    doc["class_count"] = part.class_count;
    doc["full"] = part.class_count == part.cells();
    doc["rounds"] = part.rounds;
    doc["warnings"] = part.warnings;
    return doc.dump(2) + "\n";
}

template <class T>
std::string partition_csv_impl(const CoherentPartition<T>& part) {
    std::ostringstream os;
    os << "x_label,y_label,class_id\n";
    const int n = part.class_of.rows();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            os << part.space->labels[x] << ',' << part.space->labels[y] << ','
               << part.class_of(x, y) << '\n';
    return os.str();
}

std::string entry_string(double v) { return format_double(v); }
std::string entry_string(const Rational& v) { return rational_to_string(v); }

template <class T>
std::string kernel_csv_impl(const Kernel<T>& kernel) {
    std::ostringstream os;
    const int n = kernel.size();
    const auto& labels = kernel.space->labels;
    os << "label";
    for (int j = 0; j < n; ++j) os << ',' << labels[j];
    os << '\n';
    for (int i = 0; i < n; ++i) {
        os << labels[i];
        for (int j = 0; j < n; ++j) os << ',' << entry_string(kernel.values(i, j));
        os << '\n';
    }
    return os.str();
}

} // namespace

std::string partition_to_json(const CoherentPartition<double>& part) {
    return partition_json_impl(part);
}
std::string partition_to_json(const CoherentPartition<Rational>& part) {
    return partition_json_impl(part);
}

std::string partition_to_csv(const CoherentPartition<double>& part) {
    return partition_csv_impl(part);
}
std::string partition_to_csv(const CoherentPartition<Rational>& part) {
    return partition_csv_impl(part);
}

std::string kernel_to_csv(const Kernel<double>& kernel) { return kernel_csv_impl(kernel); }
std::string kernel_to_csv(const Kernel<Rational>& kernel) { return kernel_csv_impl(kernel); }

} // namespace cohmms
