// Generated by tools/gen_brief_pattern.cpp (seed 0x5EED); do not edit.
#include "propaxis/img/features.hpp"

namespace propaxis::img {

namespace {
constexpr std::array<std::array<std::int8_t, 4>, 256> kBriefPattern = {{
    {-1, -6, -1, 3},
    {0, -5, 1, -7},
    {14, -1, -2, 13},
    {3, 7, 6, -3},
    {1, -1, 6, 2},
    {5, 0, -2, -4},
    {0, 9, 0, 5},
    {9, 2, 7, 0},
    {-3, 4, -6, 0},
    {0, -2, 4, 5},
    {-3, -3, -1, -11},
    {6, 13, -7, 7},
    {-8, 10, 7, 3},
    {4, 1, -4, 2},
    {-15, 0, -7, -4},
    {3, 3, -2, -13},
    {-1, 0, 2, 2},
    {-7, -10, -3, -1},
    {2, 8, -4, 1},
    {-5, 14, 11, 7},
    {-3, -5, 2, -4},
    {1, 9, -2, -10},
    {5, 3, 5, 2},
    {-9, 6, 8, -3},
    {0, 1, -7, 4},
    {-2, -8, 10, 7},
    {-2, 1, 12, -6},
    {3, -7, 0, 11},
    {3, 7, 0, 2},
    {0, 0, -8, 5},
    {5, 6, 4, 2},
    {10, -3, -2, 6},
    {-10, -5, -1, -2},
    {-9, 4, 6, -8},
    {6, -3, -2, 3},
    {5, -13, -6, 0},
    {-4, -8, 8, -2},
    {7, -4, -6, -7},
    {-5, 8, 4, 3},
    {6, 4, 5, 3},
    {-5, -3, -1, 5},
    {4, -2, -5, -13},
    {5, 0, -3, 7},
    {-1, 4, 0, 10},
    {7, 11, 1, -1},
    {6, -12, 9, -2},
    {8, 4, 0, 4},
    {6, 7, 11, 7},
    {9, 1, 2, 5},
    {8, 1, 3, 9},
    {0, -2, 5, 8},
    {5, -3, 4, 3},
    {2, 6, 8, 1},
    {-8, -12, -6, 1},
    {2, -12, -6, 3},
    {-1, 0, 1, 4},
    {0, -3, 7, 6},
    {6, 11, 3, -1},
    {-5, 4, 9, -3},
    {-2, 9, 5, -3},
    {-13, -6, 3, -3},
    {8, 3, -5, 9},
    {-10, 9, 0, 15},
    {2, 9, 5, 2},
    {1, -1, 2, -10},
    {7, 3, 6, -1},
    {-5, 3, 0, 4},
    {-3, -3, 0, -6},
    {1, 8, -1, -1},
    {9, -7, 1, 3},
    {-6, -1, -10, -4},
    {-7, -3, 4, 11},
    {-1, 4, 1, -6},
    {-1, 3, -2, -3},
    {6, -5, 7, 7},
    {-7, -7, -2, 1},
    {8, -3, -7, 2},
    {6, 0, -4, 4},
    {-7, 3, 0, 2},
    {1, 0, 2, 10},
    {3, 4, 8, -8},
    {2, 0, 1, 3},
    {2, -3, -6, -2},
    {-3, 4, -6, -12},
    {5, -1, 6, -9},
    {-6, -1, 7, -2},
    {9, 7, 6, -3},
    {-2, 1, -3, 2},
    {-4, 0, 0, 11},
    {-2, -2, 6, -4},
    {6, -10, -7, 10},
    {-8, -3, 6, 10},
    {-9, -1, 10, -5},
    {6, -3, -1, -9},
    {3, 2, -7, 4},
    {-2, 3, 2, -1},
    {8, -7, -7, 0},
    {2, -1, 2, 9},
    {-4, 2, 4, -13},
    {-7, 4, 7, 1},
    {0, 2, -1, 0},
    {0, -2, 0, 0},
    {0, -5, 6, 7},
    {-1, 7, -13, 2},
    {-4, 9, 4, 3},
    {-8, 4, -2, 8},
    {2, -2, -3, 9},
    {-5, 6, 1, 5},
    {-7, 1, -3, -5},
    {2, 1, 5, 8},
    {-3, 5, 8, 1},
    {-5, -7, 7, 7},
    {-4, 12, -4, -8},
    {1, -5, 6, 4},
    {3, 3, 0, 3},
    {7, 7, 0, 8},
    {5, -5, -5, -5},
    {1, 4, -6, 0},
    {8, -1, -3, 2},
    {-10, -7, -9, -5},
    {-13, -2, -3, 11},
    {0, 2, 7, 1},
    {3, -1, -8, 9},
    {3, -10, 0, -8},
    {-5, 5, 3, 1},
    {1, 3, 1, -1},
    {8, 2, -6, 9},
    {-2, 4, -2, -4},
    {0, -7, 2, 7},
    {1, -4, 9, 11},
    {-3, 1, 2, -2},
    {-7, 8, 11, 0},
    {-10, -7, -3, -8},
    {-8, -2, 3, 7},
    {3, 6, 1, 1},
    {4, 3, -8, -1},
    {-4, 6, -6, -8},
    {14, 3, -1, 7},
    {-12, 1, 7, -4},
    {-7, 2, -6, -3},
    {-5, 3, 1, 4},
    {-4, -3, -4, -1},
    {-7, -2, -4, -12},
    {8, -1, 1, -4},
    {0, 7, -3, 0},
    {6, -5, 11, 3},
    {7, 7, -4, -6},
    {-5, -8, 2, -4},
    {8, 5, 10, -11},
    {8, 9, 4, -2},
    {7, 3, 8, 6},
    {-1, -2, 3, -6},
    {-5, 6, -2, -6},
    {3, 4, -13, 7},
    {8, 4, -4, 2},
    {3, 7, -7, -4},
    {-4, 5, -1, -10},
    {8, 6, -4, -1},
    {-3, -14, 1, 10},
    {1, -6, 3, -9},
    {12, -8, 8, 1},
    {6, -2, 5, -6},
    {0, -2, 2, -1},
    {0, 8, 4, 0},
    {6, -2, -7, -1},
    {-9, -5, 4, -1},
    {-1, 0, -3, 4},
    {-2, 0, 4, -2},
    {-9, -4, -1, 3},
    {0, 8, 10, 2},
    {-6, 2, 1, 3},
    {1, -3, -5, -7},
    {7, -5, 6, 11},
    {3, 8, 5, -2},
    {-7, 3, 7, 6},
    {-6, 2, 3, -6},
    {-4, -3, 6, -2},
    {3, -1, 1, -2},
    {-6, 1, 3, 5},
    {2, 10, -3, 2},
    {-2, -12, 1, 3},
    {-5, 0, -7, -1},
    {0, -2, 14, -2},
    {-11, -2, -10, 7},
    {-5, -12, 1, 2},
    {-1, -12, 10, 0},
    {-1, 4, -7, -2},
    {-9, -3, 10, -4},
    {-1, -1, 5, -4},
    {-1, -6, -1, 4},
    {-3, 3, 9, 8},
    {-4, 6, 0, 7},
    {-2, -1, 6, -3},
    {-5, 0, -3, 4},
    {-6, -7, -2, -1},
    {-2, 1, 6, -6},
    {-6, 2, -2, 9},
    {-1, -4, -4, -3},
    {-10, -5, -2, 5},
    {3, -6, -13, -7},
    {7, 2, 9, -2},
    {0, 2, -7, -2},
    {0, 2, -1, 3},
    {-2, -5, 1, 2},
    {6, -3, -9, 7},
    {-6, -7, 2, 1},
    {-7, 7, -3, -6},
    {-5, 0, -7, 1},
    {-3, -2, -5, -10},
    {6, 8, -12, -3},
    {3, 1, 2, 9},
    {-1, -5, 0, -2},
    {-1, -4, 5, -3},
    {2, -14, 4, -3},
    {-8, -2, -2, -2},
    {2, 2, 5, 2},
    {-4, 1, 1, 10},
    {-3, 2, 0, 0},
    {-6, -3, -3, -4},
    {4, 7, 2, 5},
    {-4, 8, -4, 4},
    {9, -1, 8, 5},
    {-8, 5, 6, 0},
    {10, 2, -6, 5},
    {7, 11, 6, 7},
    {-1, -5, 1, 0},
    {4, 3, 2, -9},
    {-3, -1, -3, 9},
    {0, -1, -2, 1},
    {-6, -4, -9, -9},
    {-3, -10, 1, -3},
    {-1, 7, 9, -3},
    {6, 1, -4, 1},
    {3, 1, -3, 1},
    {-5, 0, 2, -1},
    {11, 3, -3, -8},
    {-3, -1, -13, -6},
    {3, 0, 12, -3},
    {-5, -4, 10, -1},
    {3, 3, -6, 2},
    {4, 2, 7, -11},
    {-8, -10, 4, 0},
    {-9, -2, 7, 5},
    {-1, 12, -5, -1},
    {-2, 1, -3, 6},
    {-5, 5, 4, -6},
    {0, 2, 5, -2},
    {-5, 6, 5, 11},
    {1, 3, -7, 11},
    {0, -1, 1, 0},
    {0, -6, 0, 1},
    {3, 13, -7, -4},
    {5, -6, -2, 4},
    {5, 3, 11, -2},
    {-8, 1, -7, -13},
    {0, 5, 9, 3},
}};
} // namespace

std::span<const std::array<std::int8_t, 4>, 256> brief_pattern() { return kBriefPattern; }

} // namespace propaxis::img
