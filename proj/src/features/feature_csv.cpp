#include "encod/features/feature_csv.hpp"

#include <cstdio>

namespace encod::features {

void write_feature_csv_header(std::ostream& out) {
    for (std::size_t i = 0; i < kFeatureWidth; ++i) out << 'f' << i << ',';
    out << "label,size\n";
}

void write_feature_csv_row(std::ostream& out, const FeatureVector& v, const std::string& label,
                           std::size_t size) {
    char buf[32];
    for (double x : v.values) {
        std::snprintf(buf, sizeof buf, "%.17g,", x);
        out << buf;
    }
    out << label << ',' << size << '\n';
}

}  // namespace encod::features
