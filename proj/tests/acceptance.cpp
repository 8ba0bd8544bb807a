#include <iostream>

#include "hqf/selftest.hpp"

int main() { return hqf::run_selftest(std::cout); }
