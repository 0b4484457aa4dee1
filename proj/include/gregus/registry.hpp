#pragma once

#include <vector>

#include "gregus/problem.hpp"

namespace gregus {

/// Names of the built-in regression problems, in registry order:
/// two_disks, ex1_9, cq_def, ex2_6.
std::vector<std::string> registry_names();

/// Builds a bundled problem by name; throws std::invalid_argument for
/// unknown names.
Problem make_example(const std::string& name);

}  // namespace gregus
