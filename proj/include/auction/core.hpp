#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace auction {

using Buyer = std::size_t;
using Good = std::size_t;

/// Absolute tolerance used for every comparison between computed reals.
inline constexpr double kDefaultEpsilon = 1e-9;

/// Pivots below this magnitude are treated as singular.
inline constexpr double kPivotFloor = 1e-12;

inline bool approx_equal(double a, double b, double eps = kDefaultEpsilon)
{
   return std::abs(a - b) <= eps;
}

/// Mixed absolute/relative comparison for ratios recovered from bids.
inline bool approx_equal_mixed(double a, double b, double abs_eps = kDefaultEpsilon,
                               double rel_eps = kDefaultEpsilon)
{
   const double diff = std::abs(a - b);
   return diff <= abs_eps || diff <= rel_eps * std::max(std::abs(a), std::abs(b));
}

// Error hierarchy. The CLI maps each kind onto a distinct exit code.

class Error : public std::runtime_error {
  public:
   using std::runtime_error::runtime_error;
};

/// Dimensions or mechanism/instance shapes do not fit together.
class ShapeError : public Error {
  public:
   using Error::Error;
};

/// Inputs violate a structural requirement of the valuation model.
class ValidationError : public Error {
  public:
   using Error::Error;
};

/// Problem exceeds the exhaustive solvers' size guard.
class SizeGuardError : public Error {
  public:
   using Error::Error;
};

/// A linear system that should be regular turned out singular.
class SingularSystemError : public Error {
  public:
   using Error::Error;
};

/// Scenario text is malformed, mistyped, or names an unknown field.
class ParseError : public Error {
  public:
   using Error::Error;
};

/// Dense row-major matrix of reals.
class Matrix {
  public:
   Matrix() = default;
   Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
       : rows_(rows), cols_(cols), data_(rows * cols, fill)
   {
   }
   Matrix(std::initializer_list<std::initializer_list<double>> init)
   {
      rows_ = init.size();
      cols_ = rows_ == 0 ? 0 : init.begin()->size();
      data_.reserve(rows_ * cols_);
      for(const auto& row : init) {
         if(row.size() != cols_) {
            throw ShapeError("ragged matrix initializer");
         }
         data_.insert(data_.end(), row.begin(), row.end());
      }
   }

   [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
   [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

   double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
   double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

   [[nodiscard]] std::vector<double> row(std::size_t r) const
   {
      return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
              data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
   }
   void set_row(std::size_t r, const std::vector<double>& values)
   {
      if(values.size() != cols_) {
         throw ShapeError("row length mismatch");
      }
      for(std::size_t c = 0; c < cols_; ++c) {
         (*this)(r, c) = values[c];
      }
   }

   [[nodiscard]] bool all_finite() const
   {
      for(double x : data_) {
         if(!std::isfinite(x)) {
            return false;
         }
      }
      return true;
   }

   friend bool operator==(const Matrix&, const Matrix&) = default;

  private:
   std::size_t rows_ = 0;
   std::size_t cols_ = 0;
   std::vector<double> data_;
};

/// How to choose among several welfare-maximizing allocations.
struct TieRule {
   enum class Kind { lexicographic, seeded_uniform, forced };

   Kind kind = Kind::lexicographic;
   std::uint64_t seed = 0;
   /// Index into the optimum list when kind == forced (taken modulo its size).
   std::size_t index = 0;

   static TieRule lexicographic() { return {}; }
   static TieRule seeded_uniform(std::uint64_t seed) { return {Kind::seeded_uniform, seed, 0}; }
   static TieRule forced(std::size_t index) { return {Kind::forced, 0, index}; }

   /// Picks an index in [0, count).
   [[nodiscard]] std::size_t pick(std::size_t count) const
   {
      if(count == 0) {
         throw std::logic_error("tie rule applied to an empty optimum set");
      }
      switch(kind) {
         case Kind::lexicographic: return 0;
         case Kind::forced: return index % count;
         case Kind::seeded_uniform: {
            std::mt19937_64 rng(seed);
            // Modulo draw keeps the choice identical across standard libraries.
            return static_cast<std::size_t>(rng() % count);
         }
      }
      return 0;
   }
};

}  // namespace auction
