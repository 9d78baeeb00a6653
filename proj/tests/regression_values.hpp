#pragma once

// Frozen reference values, produced by the exhaustive enumeration oracle in
// test_helpers.hpp; regenerate by re-running that oracle.
constexpr double REGRESSION_10x25_SEED7 = 1618.498553786854;
