#pragma once

#include <ostream>
#include <string>

#include "encod/features/histogram.hpp"

namespace encod::features {

/// Header row: f0,...,f255,label,size
void write_feature_csv_header(std::ostream& out);
void write_feature_csv_row(std::ostream& out, const FeatureVector& v, const std::string& label,
                           std::size_t size);

}  // namespace encod::features
