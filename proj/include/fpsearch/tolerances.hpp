#pragma once

// Central numeric tolerances used across the library.

namespace fpsearch::tol {

inline constexpr double kUnitarity = 1e-10;   // U†U = I check on construction
inline constexpr double kNorm = 1e-12;        // state norm / amplitude equality
inline constexpr double kZeroBranch = 1e-15;  // measurement branches below this are null

}  // namespace fpsearch::tol
