#include "confdist/csv.hpp"

#include <cstdio>

namespace confdist {

std::string csv_real(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);  // no "-0"
    return buf;
}

std::string csv_real(std::optional<double> v) { return v ? csv_real(*v) : std::string{}; }

}  // namespace confdist
