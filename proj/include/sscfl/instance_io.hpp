#pragma once

#include <string>

#include "sscfl/instance.hpp"

namespace sscfl {

enum class FileFormat {
  NativeJson,  // self-describing JSON, bit-exact round trip
  OrlibCap,    // OR-Library cap* layout, costs stored as total per customer
  AvellaTxt,   // testbed layout with per-unit costs
};

FileFormat parse_format(const std::string& name);
std::string format_name(FileFormat format);

/// Loads and validates an instance. Formats that store the total assignment
/// cost (orlib-cap) are divided by the customer demand on load so that costs
/// are always per unit internally.
Instance load_instance(const std::string& path, FileFormat format);

/// Writes the native JSON format. load_instance on the result reproduces the
/// instance exactly.
void save_instance(const Instance& inst, const std::string& path);

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

/// Solution files are JSON: open location list, per-customer assignment
/// array, objective.
void save_solution(const BinarySolution& sol, const std::string& path);
BinarySolution load_solution(const std::string& path);
std::string solution_to_json(const BinarySolution& sol);
BinarySolution solution_from_json(const std::string& text);

}  // namespace sscfl
