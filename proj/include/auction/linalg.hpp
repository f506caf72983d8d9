#pragma once

#include <numeric>
#include <vector>

#include "auction/core.hpp"

namespace auction::linalg {

enum class Pivoting { partial, complete };

/// Solves A x = b by Gaussian elimination. Small dense systems only.
///
/// Throws SingularSystemError when the best available pivot falls below `pivot_floor`.
inline std::vector<double> solve(Matrix a, std::vector<double> b,
                                 Pivoting pivoting = Pivoting::partial,
                                 double pivot_floor = kPivotFloor)
{
   const std::size_t n = a.rows();
   if(a.cols() != n || b.size() != n) {
      throw ShapeError("solve expects a square system");
   }
   // column permutation from complete pivoting
   std::vector<std::size_t> col(n);
   std::iota(col.begin(), col.end(), std::size_t{0});

   for(std::size_t k = 0; k < n; ++k) {
      std::size_t pr = k;
      std::size_t pc = k;
      double best = std::abs(a(k, col[k]));
      const std::size_t last_col = pivoting == Pivoting::complete ? n : k + 1;
      for(std::size_t r = k; r < n; ++r) {
         for(std::size_t c = k; c < last_col; ++c) {
            const double mag = std::abs(a(r, col[c]));
            if(mag > best) {
               best = mag;
               pr = r;
               pc = c;
            }
         }
      }
      if(best < pivot_floor) {
         throw SingularSystemError("pivot below floor at step " + std::to_string(k));
      }
      if(pr != k) {
         for(std::size_t c = 0; c < n; ++c) {
            std::swap(a(k, c), a(pr, c));
         }
         std::swap(b[k], b[pr]);
      }
      std::swap(col[k], col[pc]);

      const double pivot = a(k, col[k]);
      for(std::size_t r = k + 1; r < n; ++r) {
         const double factor = a(r, col[k]) / pivot;
         if(factor == 0.0) {
            continue;
         }
         for(std::size_t c = k; c < n; ++c) {
            a(r, col[c]) -= factor * a(k, col[c]);
         }
         b[r] -= factor * b[k];
      }
   }

   std::vector<double> x(n, 0.0);
   for(std::size_t k = n; k-- > 0;) {
      double acc = b[k];
      for(std::size_t c = k + 1; c < n; ++c) {
         acc -= a(k, col[c]) * x[col[c]];
      }
      x[col[k]] = acc / a(k, col[k]);
   }
   return x;
}

inline std::vector<double> multiply(const Matrix& a, const std::vector<double>& x)
{
   std::vector<double> y(a.rows(), 0.0);
   for(std::size_t r = 0; r < a.rows(); ++r) {
      for(std::size_t c = 0; c < a.cols(); ++c) {
         y[r] += a(r, c) * x[c];
      }
   }
   return y;
}

inline double max_abs_residual(const Matrix& a, const std::vector<double>& x,
                               const std::vector<double>& b)
{
   const auto ax = multiply(a, x);
   double worst = 0.0;
   for(std::size_t r = 0; r < b.size(); ++r) {
      worst = std::max(worst, std::abs(ax[r] - b[r]));
   }
   return worst;
}

}  // namespace auction::linalg
