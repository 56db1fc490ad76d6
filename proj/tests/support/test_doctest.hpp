#pragma once

// clv::toString would be picked up by argument-dependent lookup inside
// doctest's expression decomposition; qualify the call instead.
#define DOCTEST_STRINGIFY(...) ::doctest::toString(__VA_ARGS__)
#include <doctest.h>
