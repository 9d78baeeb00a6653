#include "sscfl/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace sscfl {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << text;
}

json parse_json(const std::string& text, const std::string& context) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw DataError("malformed JSON in " + context);
  return doc;
}

// Whitespace-separated token reader with position tracking for diagnostics.
class TokenReader {
 public:
  TokenReader(const std::string& text, std::string path)
      : in_(text), path_(std::move(path)) {}

  double next_number(const char* what) {
    std::string tok;
    if (!(in_ >> tok))
      throw DataError(path_ + ": unexpected end of file while reading " +
                      std::string(what));
    ++count_;
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw DataError(path_ + ": token " + std::to_string(count_) + " ('" +
                      tok + "') is not a number (" + what + ")");
    }
  }

  int next_count(const char* what) {
    const double v = next_number(what);
    const int n = static_cast<int>(v);
    if (v != n || n <= 0)
      throw DataError(path_ + ": " + std::string(what) +
                      " must be a positive integer, got " + std::to_string(v));
    return n;
  }

  bool at_end() {
    std::string tok;
    return !(in_ >> tok);
  }

 private:
  std::istringstream in_;
  std::string path_;
  long count_ = 0;
};

std::string stem_of(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const std::size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

// OR-Library cap* layout:
//   |I| |J|
//   capacity fixed_cost          (one line per location)
//   demand  c_1j ... c_Ij        (per customer; costs are for the WHOLE
//                                 demand and are divided by d_j on load)
Instance load_orlib_cap(const std::string& path) {
  TokenReader tok(read_file(path), path);
  Instance inst;
  inst.name = stem_of(path);
  inst.num_locations = tok.next_count("location count");
  inst.num_customers = tok.next_count("customer count");
  inst.capacity.resize(inst.num_locations);
  inst.fixed_cost.resize(inst.num_locations);
  inst.demand.resize(inst.num_customers);
  inst.unit_cost.assign(
      static_cast<std::size_t>(inst.num_locations) * inst.num_customers, 0.0);
  for (int i = 0; i < inst.num_locations; ++i) {
    inst.capacity[i] = tok.next_number("capacity");
    inst.fixed_cost[i] = tok.next_number("fixed cost");
  }
  for (int j = 0; j < inst.num_customers; ++j) {
    inst.demand[j] = tok.next_number("demand");
    if (!(inst.demand[j] > 0.0))
      throw DataError(path + ": demand of customer " + std::to_string(j) +
                      " is not positive");
    for (int i = 0; i < inst.num_locations; ++i) {
      const double total = tok.next_number("assignment cost");
      inst.unit_cost[static_cast<std::size_t>(i) * inst.num_customers + j] =
          total / inst.demand[j];
    }
  }
  inst.validate();
  return inst;
}

// Testbed layout (documented here because the files carry no header):
//   |J| |I|
//   d_1 ... d_J
//   q_1 ... q_I
//   f_1 ... f_I
//   c_ij rows, one row of J per-unit costs per location
// Some published variants put the location count first and list capacities
// before demands; when the primary reading fails validation we retry with
// the dimensions swapped.
Instance parse_avella(const std::string& text, const std::string& path,
                      bool customers_first) {
  TokenReader tok(text, path);
  Instance inst;
  inst.name = stem_of(path);
  const int a = tok.next_count("first dimension");
  const int b = tok.next_count("second dimension");
  inst.num_customers = customers_first ? a : b;
  inst.num_locations = customers_first ? b : a;
  inst.demand.resize(inst.num_customers);
  inst.capacity.resize(inst.num_locations);
  inst.fixed_cost.resize(inst.num_locations);
  auto read_block = [&](std::vector<double>& v, const char* what) {
    for (double& x : v) x = tok.next_number(what);
  };
  if (customers_first) {
    read_block(inst.demand, "demand");
    read_block(inst.capacity, "capacity");
  } else {
    read_block(inst.capacity, "capacity");
    read_block(inst.demand, "demand");
  }
  read_block(inst.fixed_cost, "fixed cost");
  inst.unit_cost.resize(static_cast<std::size_t>(inst.num_locations) *
                        inst.num_customers);
  read_block(inst.unit_cost, "unit cost");
  if (!tok.at_end())
    throw DataError(path + ": trailing tokens after the cost matrix");
  inst.validate();
  return inst;
}

Instance load_avella_txt(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_avella(text, path, /*customers_first=*/true);
  } catch (const DataError&) {
    return parse_avella(text, path, /*customers_first=*/false);
  }
}

Instance load_native_json(const std::string& path) {
  return instance_from_json(read_file(path));
}

}  // namespace

FileFormat parse_format(const std::string& name) {
  if (name == "native-json") return FileFormat::NativeJson;
  if (name == "orlib-cap") return FileFormat::OrlibCap;
  if (name == "avella-txt") return FileFormat::AvellaTxt;
  throw DataError("unknown instance format: " + name);
}

std::string format_name(FileFormat format) {
  switch (format) {
    case FileFormat::NativeJson: return "native-json";
    case FileFormat::OrlibCap: return "orlib-cap";
    case FileFormat::AvellaTxt: return "avella-txt";
  }
  return "?";
}

Instance load_instance(const std::string& path, FileFormat format) {
  switch (format) {
    case FileFormat::NativeJson: return load_native_json(path);
    case FileFormat::OrlibCap: return load_orlib_cap(path);
    case FileFormat::AvellaTxt: return load_avella_txt(path);
  }
  throw DataError("unknown format");
}

std::string instance_to_json(const Instance& inst) {
  json doc;
  doc["name"] = inst.name;
  doc["capacities"] = inst.capacity;
  doc["fixed_costs"] = inst.fixed_cost;
  doc["demands"] = inst.demand;
  json rows = json::array();
  for (int i = 0; i < inst.num_locations; ++i) {
    json row = json::array();
    for (int j = 0; j < inst.num_customers; ++j) row.push_back(inst.cost(i, j));
    rows.push_back(std::move(row));
  }
  doc["unit_costs"] = std::move(rows);
  return doc.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  const json doc = parse_json(text, "instance");
  Instance inst;
  try {
    inst.name = doc.at("name").get<std::string>();
    inst.capacity = doc.at("capacities").get<std::vector<double>>();
    inst.fixed_cost = doc.at("fixed_costs").get<std::vector<double>>();
    inst.demand = doc.at("demands").get<std::vector<double>>();
    inst.num_locations = static_cast<int>(inst.capacity.size());
    inst.num_customers = static_cast<int>(inst.demand.size());
    const json& rows = doc.at("unit_costs");
    if (!rows.is_array() ||
        static_cast<int>(rows.size()) != inst.num_locations)
      throw DataError("unit_costs must have one row per location");
    inst.unit_cost.reserve(static_cast<std::size_t>(inst.num_locations) *
                           inst.num_customers);
    for (const json& row : rows) {
      if (static_cast<int>(row.size()) != inst.num_customers)
        throw DataError("unit_costs row has wrong length");
      for (const json& v : row) inst.unit_cost.push_back(v.get<double>());
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("instance JSON: ") + e.what());
  }
  inst.validate();
  return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
  write_file(path, instance_to_json(inst));
}

std::string solution_to_json(const BinarySolution& sol) {
  json doc;
  json open = json::array();
  for (int i = 0; i < static_cast<int>(sol.open.size()); ++i)
    if (sol.open[i]) open.push_back(i);
  doc["open"] = std::move(open);
  doc["assignment"] = sol.assign;
  doc["objective"] = sol.objective;
  doc["num_locations"] = sol.open.size();
  return doc.dump(2) + "\n";
}

BinarySolution solution_from_json(const std::string& text) {
  const json doc = parse_json(text, "solution");
  BinarySolution sol;
  try {
    const int num_locations = doc.at("num_locations").get<int>();
    sol.open.assign(num_locations, false);
    for (int i : doc.at("open").get<std::vector<int>>()) {
      if (i < 0 || i >= num_locations)
        throw DataError("open location index out of range");
      sol.open[i] = true;
    }
    sol.assign = doc.at("assignment").get<std::vector<int>>();
    sol.objective = doc.at("objective").get<double>();
  } catch (const json::exception& e) {
    throw DataError(std::string("solution JSON: ") + e.what());
  }
  return sol;
}

void save_solution(const BinarySolution& sol, const std::string& path) {
  write_file(path, solution_to_json(sol));
}

BinarySolution load_solution(const std::string& path) {
  return solution_from_json(read_file(path));
}

}  // namespace sscfl
