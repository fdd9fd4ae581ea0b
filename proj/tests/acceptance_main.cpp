// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Also reachable as `gradflux selftest`.

#include "gradflux/selftest.hpp"

#include <iostream>

int main() { return gradflux::selftest_main(std::cout); }
