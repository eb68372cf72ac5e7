#pragma once

#include <iosfwd>

#include <json.hpp>

#include "ergomet/measures.hpp"
#include "ergomet/symbolic.hpp"

namespace ergomet {

nlohmann::json point_to_json(const Point& p);
Point point_from_json(const nlohmann::json& j);

nlohmann::json measure_to_json(const MeasureSpec& m);
MeasureSpec measure_from_json(const nlohmann::json& j);

Subsequence subsequence_from_json(const nlohmann::json& j);

// CSV rows (word, probability) in lexicographic word order.
void write_block_csv(const BlockDistribution& d, std::ostream& os);

}  // namespace ergomet
