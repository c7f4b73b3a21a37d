#pragma once

#include <string>

#include "json.hpp"
#include "spectral/banded.hpp"
#include "spectral/covering.hpp"
#include "spectral/cmv.hpp"
#include "spectral/measures.hpp"

namespace spectral::io {

using json = nlohmann::ordered_json;

// {offset, n, w, side, diags}: diags[k] is diagonal k-w, row-ordered,
// natural length n - |k-w|.  Round-trips bit-exactly (shortest decimal
// representation on write, exact binary on read).
json window_to_json(const BandedWindow& a);
BandedWindow window_from_json(const json& j);

json covering_to_json(const BranchingData& b);
BranchingData covering_from_json(const json& j);  // sigmas are 1-based in JSON

json measure_to_json(const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(const json& j);

VerblunskySeq verblunsky_from_json(const json& j);  // list of [re, im]
json verblunsky_to_json(const VerblunskySeq& a);

// (support,weight) rows; bit-stable ordering and shortest float formatting.
std::string measure_to_csv(const DiscreteMeasure& m);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace spectral::io
