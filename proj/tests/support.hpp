#pragma once

#include <vector>

#include "auction/model.hpp"
#include "oracles.hpp"

namespace testing_support {

/// Two buyers, two goods: v_1K = s_1K + s_2K / 2 and v_2K = s_2K + s_1K / 3.
inline auction::LinearValuationModel example2()
{
   return {2, 2, {1.0 / 3.0, 0.5}, {0.0, 0.0}, {3.0, 2.0}, {0.0, 0.0}};
}

/// Three buyers, two goods with f = (x/2, x/2, x/3) and c = (2, 2, 3).
inline auction::LinearValuationModel three_buyer()
{
   return {3, 2, {0.5, 0.5, 1.0 / 3.0}, {0.0, 0.0, 0.0}, {2.0, 2.0, 3.0}, {0.0, 0.0, 0.0}};
}

inline oracle::Model to_oracle(const auction::LinearValuationModel& m)
{
   return {m.f_slope, m.f_intercept, m.c, m.d};
}

inline oracle::Grid to_grid(const auction::Matrix& s)
{
   oracle::Grid g(s.rows());
   for(std::size_t r = 0; r < s.rows(); ++r) {
      g[r] = s.row(r);
   }
   return g;
}

inline auction::Allocation owners(const std::vector<std::size_t>& owner)
{
   auction::Allocation a(owner.size());
   for(std::size_t k = 0; k < owner.size(); ++k) {
      a.assigned[k] = owner[k];
   }
   return a;
}

}  // namespace testing_support
