#pragma once

#include <optional>
#include <string>

namespace confdist {

// Real formatted with 10 significant digits ("%.10g"); the format every CSV uses.
std::string csv_real(double v);
std::string csv_real(std::optional<double> v);  // empty field when absent

}  // namespace confdist
