#pragma once

namespace revtor {

/// Execution policy for the data-parallel kernels. Every parallel path has a
/// serial twin producing bit-identical results; tests compare the two and the
/// bench tool times them.
enum class Exec { serial, parallel };

} // namespace revtor
