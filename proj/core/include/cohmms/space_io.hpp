#pragma once

#include <iosfwd>
#include <string>

#include "cohmms/space.hpp"

namespace cohmms {

// JSON space format: {"labels": [...], "dist": [[...]], "mu": [...],
// "name": optional}. Entries are numbers or "p/q" strings; both are accepted
// in both modes. In exact mode plain numbers are converted to their exact
// binary value.

FiniteMMS<double> read_space_json_float(const std::string& text);
FiniteMMS<Rational> read_space_json_exact(const std::string& text);

FiniteMMS<double> load_space_float(const std::string& path);
FiniteMMS<Rational> load_space_exact(const std::string& path);

std::string write_space_json(const FiniteMMS<double>& space);
std::string write_space_json(const FiniteMMS<Rational>& space);

void save_space(const FiniteMMS<double>& space, const std::string& path);
void save_space(const FiniteMMS<Rational>& space, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace cohmms
