#include "cohmms/space_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cohmms {

namespace {

using nlohmann::json;

json parse_document(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw StructuralError("malformed JSON document");
    if (!doc.is_object()) throw StructuralError("space document must be a JSON object");
    return doc;
}

double entry_to_double(const json& v, const std::string& field) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
    throw StructuralError("field '" + field + "' contains a non-numeric entry");
}

Rational entry_to_rational(const json& v, const std::string& field) {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number()) return rational_from_double(v.get<double>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw StructuralError("field '" + field + "' contains a non-numeric entry");
}

template <class T, class Conv>
FiniteMMS<T> read_space(const std::string& text, Conv conv) {
    json doc = parse_document(text);
    if (!doc.contains("labels") || !doc["labels"].is_array()) {
        throw StructuralError("field 'labels' missing or not an array");
    }
    if (!doc.contains("dist") || !doc["dist"].is_array()) {
        throw StructuralError("field 'dist' missing or not an array of arrays");
    }
    if (!doc.contains("mu") || !doc["mu"].is_array()) {
        throw StructuralError("field 'mu' missing or not an array");
    }

    std::vector<std::string> labels;
    for (const auto& l : doc["labels"]) {
        if (!l.is_string()) throw StructuralError("field 'labels' must contain strings");
        labels.push_back(l.get<std::string>());
    }
    const int n = static_cast<int>(labels.size());
    if (n < 1) throw StructuralError("field 'labels' must not be empty");

    if (static_cast<int>(doc["dist"].size()) != n) {
        throw StructuralError("field 'dist' must have one row per label");
    }
    Matrix<T> dist = Matrix<T>::square(n);
    for (int i = 0; i < n; ++i) {
        const auto& row = doc["dist"][i];
        if (!row.is_array() || static_cast<int>(row.size()) != n) {
            throw StructuralError("field 'dist' row " + std::to_string(i) + " must have length " +
                                  std::to_string(n));
        }
        for (int j = 0; j < n; ++j) dist(i, j) = conv(row[j], "dist");
    }

    if (static_cast<int>(doc["mu"].size()) != n) {
        throw StructuralError("field 'mu' must have one entry per label");
    }
    std::vector<T> mu(n);
    for (int i = 0; i < n; ++i) mu[i] = conv(doc["mu"][i], "mu");

    std::string name;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw StructuralError("field 'name' must be a string");
        name = doc["name"].get<std::string>();
    }
    return make_space(std::move(labels), std::move(dist), std::move(mu), std::move(name));
}

} // namespace

FiniteMMS<double> read_space_json_float(const std::string& text) {
    return read_space<double>(text, entry_to_double);
}

FiniteMMS<Rational> read_space_json_exact(const std::string& text) {
    return read_space<Rational>(text, entry_to_rational);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StructuralError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StructuralError("cannot write '" + path + "'");
    out << content;
}

FiniteMMS<double> load_space_float(const std::string& path) {
    return read_space_json_float(read_text_file(path));
}

FiniteMMS<Rational> load_space_exact(const std::string& path) {
    return read_space_json_exact(read_text_file(path));
}

std::string write_space_json(const FiniteMMS<double>& space) {
    json doc;
    doc["labels"] = space.labels;
    json dist = json::array();
    const int n = space.size();
    for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int j = 0; j < n; ++j) row.push_back(space.dist(i, j));
        dist.push_back(std::move(row));
    }
    doc["dist"] = std::move(dist);
    doc["mu"] = space.mu;
    if (!space.name.empty()) doc["name"] = space.name;
    return doc.dump(2) + "\n";
}

std::string write_space_json(const FiniteMMS<Rational>& space) {
    json doc;
    doc["labels"] = space.labels;
    json dist = json::array();
    const int n = space.size();
    for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int j = 0; j < n; ++j) row.push_back(rational_to_string(space.dist(i, j)));
        dist.push_back(std::move(row));
    }
    doc["dist"] = std::move(dist);
    json mu = json::array();
    for (int i = 0; i < n; ++i) mu.push_back(rational_to_string(space.mu[i]));
    doc["mu"] = std::move(mu);
    if (!space.name.empty()) doc["name"] = space.name;
    return doc.dump(2) + "\n";
}

void save_space(const FiniteMMS<double>& space, const std::string& path) {
    write_text_file(path, write_space_json(space));
}

void save_space(const FiniteMMS<Rational>& space, const std::string& path) {
    write_text_file(path, write_space_json(space));
}

} // namespace cohmms
