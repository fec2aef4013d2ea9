#include "mmvrp/tsplib.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include <fmt/format.h>

#include "mmvrp/error.hpp"
#include "mmvrp/hash.hpp"
#include "text_util.hpp"

namespace mmvrp {

ParseError::ParseError(Kind kind, int line, const std::string& what)
    : Error(line > 0 ? fmt::format("line {}: {}: {}", line, to_string(kind), what)
                     : fmt::format("{}: {}", to_string(kind), what)),
      kind_(kind),
      line_(line) {}

const char* to_string(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::kMalformedHeader: return "MalformedHeader";
    case ParseError::Kind::kDimensionMismatch: return "DimensionMismatch";
    case ParseError::Kind::kMissingSection: return "MissingSection";
    case ParseError::Kind::kUnsupportedEdgeWeightType: return "UnsupportedEdgeWeightType";
    case ParseError::Kind::kNonZeroDepotDemand: return "NonZeroDepotDemand";
    case ParseError::Kind::kMalformedRow: return "MalformedRow";
    case ParseError::Kind::kMalformedRouteLine: return "MalformedRouteLine";
    case ParseError::Kind::kNoRoutes: return "NoRoutes";
  }
  return "ParseError";
}

namespace {

using detail::parse_double;
using detail::parse_int;
using detail::split_ws;
using detail::trim;
using Kind = ParseError::Kind;

enum class Section { kHeader, kNodeCoord, kDemand, kDepot, kDone };

struct NodeRow {
  std::int64_t index;
  Point pos;
  int line;
};

std::optional<int> fleet_from_name(const std::string& name) {
  static const std::regex kSuffix(R"(-k(\d+)$)");
  std::smatch m;
  if (std::regex_search(name, m, kSuffix)) return std::stoi(m[1].str());
  return std::nullopt;
}

std::optional<int> fleet_from_comment(const std::string& comment) {
  static const std::regex kTrucks(R"(trucks\s*:\s*(\d+))", std::regex::icase);
  std::smatch m;
  if (std::regex_search(comment, m, kTrucks)) return std::stoi(m[1].str());
  return std::nullopt;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  std::map<std::string, std::pair<std::string, int>> header;
  std::vector<NodeRow> nodes;
  std::map<std::int64_t, std::pair<std::int64_t, int>> demands;
  std::vector<std::int64_t> depots;
  bool saw_coords = false, saw_demand = false, saw_depot = false, depot_closed = false;

  Section section = Section::kHeader;
  const auto lines = detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size() && section != Section::kDone; ++li) {
    const int line_no = static_cast<int>(li) + 1;
    const std::string_view line = trim(lines[li]);
    if (line.empty()) continue;

    const auto tokens = split_ws(line);
    const std::string_view head = tokens.front();
    if (head == "NODE_COORD_SECTION" || head == "NODE_COORD_SECTION:") {
      section = Section::kNodeCoord;
      saw_coords = true;
      continue;
    }
    if (head == "DEMAND_SECTION" || head == "DEMAND_SECTION:") {
      section = Section::kDemand;
      saw_demand = true;
      continue;
    }
    if (head == "DEPOT_SECTION" || head == "DEPOT_SECTION:") {
      section = Section::kDepot;
      saw_depot = true;
      continue;
    }
    if (head == "EOF") {
      section = Section::kDone;
      continue;
    }

    if (section == Section::kHeader || !parse_double(head)) {
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(Kind::kMalformedHeader, line_no,
                         fmt::format("expected 'KEY : value', got '{}'", line));
      }
      const std::string key(trim(line.substr(0, colon)));
      const std::string value(trim(line.substr(colon + 1)));
      static const char* kKnown[] = {"NAME", "COMMENT", "TYPE", "DIMENSION", "EDGE_WEIGHT_TYPE",
                                     "CAPACITY"};
      if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
        throw ParseError(Kind::kMalformedHeader, line_no, fmt::format("unknown keyword '{}'", key));
      }
      header[key] = {value, line_no};
      section = Section::kHeader;
      continue;
    }

    switch (section) {
      case Section::kNodeCoord: {
        const auto idx = tokens.size() == 3 ? parse_int(tokens[0]) : std::nullopt;
        const auto x = tokens.size() == 3 ? parse_double(tokens[1]) : std::nullopt;
        const auto y = tokens.size() == 3 ? parse_double(tokens[2]) : std::nullopt;
        if (!idx || !x || !y) {
          throw ParseError(Kind::kMalformedRow, line_no, "expected 'index x y'");
        }
        nodes.push_back({*idx, {*x, *y}, line_no});
        break;
      }
      case Section::kDemand: {
        const auto idx = tokens.size() == 2 ? parse_int(tokens[0]) : std::nullopt;
        const auto d = tokens.size() == 2 ? parse_int(tokens[1]) : std::nullopt;
        if (!idx || !d) throw ParseError(Kind::kMalformedRow, line_no, "expected 'index demand'");
        if (!demands.emplace(*idx, std::pair{*d, line_no}).second) {
          throw ParseError(Kind::kDimensionMismatch, line_no,
                           fmt::format("duplicate demand for node {}", *idx));
        }
        break;
      }
      case Section::kDepot: {
        for (auto tok : tokens) {
          const auto v = parse_int(tok);
          if (!v) throw ParseError(Kind::kMalformedRow, line_no, "expected depot index");
          if (depot_closed) continue;
          if (*v == -1) {
            depot_closed = true;
          } else {
            depots.push_back(*v);
          }
        }
        break;
      }
      default:
        break;
    }
  }

  auto require = [&](const char* key) -> const std::pair<std::string, int>& {
    const auto it = header.find(key);
    if (it == header.end()) {
      throw ParseError(Kind::kMalformedHeader, 0, fmt::format("missing {}", key));
    }
    return it->second;
  };

  if (const auto it = header.find("TYPE"); it != header.end() && it->second.first != "CVRP") {
    throw ParseError(Kind::kMalformedHeader, it->second.second,
                     fmt::format("unsupported TYPE '{}'", it->second.first));
  }
  const auto& [ewt, ewt_line] = require("EDGE_WEIGHT_TYPE");
  if (ewt != "EUC_2D") {
    throw ParseError(Kind::kUnsupportedEdgeWeightType, ewt_line,
                     fmt::format("EDGE_WEIGHT_TYPE '{}'", ewt));
  }
  const auto& [dim_text, dim_line] = require("DIMENSION");
  const auto dimension = parse_int(dim_text);
  if (!dimension || *dimension < 1) {
    throw ParseError(Kind::kMalformedHeader, dim_line, fmt::format("bad DIMENSION '{}'", dim_text));
  }
  const auto& [cap_text, cap_line] = require("CAPACITY");
  const auto capacity = parse_int(cap_text);
  if (!capacity || *capacity <= 0) {
    throw ParseError(Kind::kMalformedHeader, cap_line, fmt::format("bad CAPACITY '{}'", cap_text));
  }

  if (!saw_coords) throw ParseError(Kind::kMissingSection, 0, "NODE_COORD_SECTION");
  if (!saw_demand) throw ParseError(Kind::kMissingSection, 0, "DEMAND_SECTION");
  if (!saw_depot) throw ParseError(Kind::kMissingSection, 0, "DEPOT_SECTION");

  if (static_cast<std::int64_t>(nodes.size()) != *dimension) {
    throw ParseError(Kind::kDimensionMismatch, 0,
                     fmt::format("DIMENSION is {} but NODE_COORD_SECTION has {} rows", *dimension,
                                 nodes.size()));
  }
  if (static_cast<std::int64_t>(demands.size()) != *dimension) {
    throw ParseError(Kind::kDimensionMismatch, 0,
                     fmt::format("DIMENSION is {} but DEMAND_SECTION has {} rows", *dimension,
                                 demands.size()));
  }
  std::vector<bool> seen(static_cast<std::size_t>(*dimension) + 1, false);
  for (const auto& n : nodes) {
    if (n.index < 1 || n.index > *dimension || seen[static_cast<std::size_t>(n.index)]) {
      throw ParseError(Kind::kDimensionMismatch, n.line,
                       fmt::format("node index {} out of range or repeated", n.index));
    }
    seen[static_cast<std::size_t>(n.index)] = true;
  }
  for (const auto& [idx, d] : demands) {
    if (idx < 1 || idx > *dimension) {
      throw ParseError(Kind::kDimensionMismatch, d.second,
                       fmt::format("demand for unknown node {}", idx));
    }
  }
  if (depots.size() != 1) {
    throw ParseError(depots.empty() ? Kind::kMissingSection : Kind::kMalformedRow, 0,
                     fmt::format("expected exactly one depot, found {}", depots.size()));
  }
  const std::int64_t depot = depots.front();
  if (depot < 1 || depot > *dimension) {
    throw ParseError(Kind::kMalformedRow, 0, fmt::format("depot index {} out of range", depot));
  }
  if (const auto& [dd, dline] = demands.at(depot); dd != 0) {
    throw ParseError(Kind::kNonZeroDepotDemand, dline, fmt::format("depot demand is {}", dd));
  }

  Instance instance;
  if (const auto it = header.find("NAME"); it != header.end()) instance.name = it->second.first;
  instance.capacity = *capacity;
  instance.rounding = Rounding::kEuc2d;
  for (const auto& n : nodes) {
    if (n.index == depot) {
      instance.depot = n.pos;
      continue;
    }
    const auto& [demand, dline] = demands.at(n.index);
    if (demand < 0) throw ParseError(Kind::kMalformedRow, dline, "negative demand");
    instance.customers.push_back(
        Customer{static_cast<CustomerId>(instance.customers.size() + 1), n.pos, demand});
  }

  auto fleet = fleet_from_name(instance.name);
  if (!fleet) {
    if (const auto it = header.find("COMMENT"); it != header.end()) {
      fleet = fleet_from_comment(it->second.first);
    }
  }
  if (!fleet || *fleet <= 0) {
    throw ParseError(Kind::kMalformedHeader, 0,
                     "fleet size not found in NAME suffix '-kK' or COMMENT 'trucks: K'");
  }
  instance.fleet_size = *fleet;
  return instance;
}

std::string format_instance(const Instance& instance) {
  using detail::format_number;
  std::string out;
  out += fmt::format("NAME : {}\n", instance.name);
  out += fmt::format("COMMENT : (No of trucks: {})\n", instance.fleet_size);
  out += "TYPE : CVRP\n";
  out += fmt::format("DIMENSION : {}\n", instance.size() + 1);
  out += "EDGE_WEIGHT_TYPE : EUC_2D\n";
  out += fmt::format("CAPACITY : {}\n", instance.capacity);
  out += "NODE_COORD_SECTION\n";
  out += fmt::format("1 {} {}\n", format_number(instance.depot.x), format_number(instance.depot.y));
  for (const auto& c : instance.customers) {
    out += fmt::format("{} {} {}\n", c.id + 1, format_number(c.pos.x), format_number(c.pos.y));
  }
  out += "DEMAND_SECTION\n1 0\n";
  for (const auto& c : instance.customers) out += fmt::format("{} {}\n", c.id + 1, c.demand);
  out += "DEPOT_SECTION\n 1\n -1\nEOF\n";
  return out;
}

ParsedSolution parse_solution(std::string_view text) {
  ParsedSolution parsed;
  bool any_route = false;
  const auto lines = detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int line_no = static_cast<int>(li) + 1;
    const std::string_view line = trim(lines[li]);
    if (line.empty()) continue;
    if (line.size() >= 5 && detail::iequals(line.substr(0, 5), "route")) {
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(Kind::kMalformedRouteLine, line_no, "missing ':'");
      }
      Route route;
      for (auto tok : split_ws(line.substr(colon + 1))) {
        const auto id = parse_int(tok);
        if (!id) {
          throw ParseError(Kind::kMalformedRouteLine, line_no,
                           fmt::format("'{}' is not an integer", tok));
        }
        route.push_back(*id);
      }
      parsed.solution.routes.push_back(std::move(route));
      any_route = true;
    } else if (line.size() >= 4 && detail::iequals(line.substr(0, 4), "cost")) {
      const auto tokens = split_ws(line);
      const auto cost = tokens.size() == 2 ? parse_double(tokens[1]) : std::nullopt;
      if (!cost) throw ParseError(Kind::kMalformedRouteLine, line_no, "malformed Cost line");
      parsed.declared_cost = *cost;
    }
  }
  if (!any_route) throw ParseError(Kind::kNoRoutes, 0, "no 'Route #i:' lines");
  return parsed;
}

std::string format_solution(const Solution& solution, std::optional<double> cost) {
  std::string out;
  for (std::size_t i = 0; i < solution.routes.size(); ++i) {
    out += fmt::format("Route #{}:", i + 1);
    for (CustomerId id : solution.routes[i]) out += fmt::format(" {}", id);
    out += '\n';
  }
  if (cost) out += fmt::format("Cost {}\n", detail::format_number(*cost));
  return out;
}

std::string instance_fingerprint(const Instance& instance) {
  using detail::format_number;
  std::string canon = fmt::format("{}\n{}\n{}\n{}\n{} {}\n", instance.name, instance.capacity,
                                  instance.fleet_size, static_cast<int>(instance.rounding),
                                  format_number(instance.depot.x), format_number(instance.depot.y));
  for (const auto& c : instance.customers) {
    canon += fmt::format("{} {} {} {}\n", c.id, format_number(c.pos.x), format_number(c.pos.y),
                         c.demand);
  }
  return sha256_hex(canon).substr(0, 16);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Instance load_instance(const std::filesystem::path& path) {
  return parse_instance(read_text_file(path));
}

ParsedSolution load_solution(const std::filesystem::path& path) {
  return parse_solution(read_text_file(path));
}

}  // namespace mmvrp
