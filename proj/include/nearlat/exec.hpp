#pragma once

namespace nearlat {

// Execution policy for the scan kernels. Serial is the reference
// implementation; Parallel runs the same scan as an OpenMP reduction.
// Both return identical results, including the first-witness index.
enum class Exec { Serial, Parallel };

}  // namespace nearlat
