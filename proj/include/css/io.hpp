#pragma once

#include <string>

#include "css/field.hpp"

namespace css {

// CSV with columns r, re, im and a one-line header `# m=<int> n=<int> r_max=<float>`.
void write_field_csv(const std::string& path, const ComplexField& f);
ComplexField read_field_csv(const std::string& path);

void write_text_atomic(const std::string& path, const std::string& content);

// Fixed-format double for byte-stable outputs.
std::string fmt_g17(double x);

} // namespace css
