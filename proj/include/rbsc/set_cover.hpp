#ifndef RBSC_SET_COVER_HPP
#define RBSC_SET_COVER_HPP

#include <vector>

namespace rbsc {

// Optimum of the covering LP min sum z_h s.t. every universe element is
// fractionally covered; +infinity when some element belongs to no set.
double fractional_set_cover_value(const std::vector<int>& universe,
                                  const std::vector<std::vector<int>>& sets);

// Classic greedy cover; chosen set indices in pick order.
// Throws UncoverableError when an element belongs to no set.
std::vector<int> greedy_set_cover(const std::vector<int>& universe,
                                  const std::vector<std::vector<int>>& sets);

}  // namespace rbsc

#endif  // RBSC_SET_COVER_HPP
