#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "subid/joint_table.hpp"
#include "subid/sem.hpp"

namespace subid {

// CSV with a header row naming the variables and one integer code per cell.
void write_csv(const Dataset& d, std::ostream& out);
Dataset read_csv(std::istream& in);  // InputError on malformed input

// Plug-in joint table from relative frequencies. Cardinalities are inferred
// as (max observed value + 1), floored at 2, unless given explicitly.
JointTable empirical_joint(const Dataset& d, const std::vector<int>& cards = {});

}  // namespace subid
