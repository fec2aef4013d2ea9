#include "mmvrp/prompt.hpp"

#include <cctype>

#include <fmt/format.h>

#include "mmvrp/error.hpp"
#include "mmvrp/validate.hpp"
#include "text_util.hpp"

namespace mmvrp {

namespace {

using detail::format_number;

constexpr std::string_view kTaskIntro =
    "You will help me create initial high-quality solutions for the Capacitated Vehicle Routing "
    "Problems (CVRPs). In a CVRP, vehicles of identical capacity start and end their routes at a "
    "depot, every customer is served by exactly one vehicle and only once, the total demand of "
    "the customers on each route must not exceed the vehicle capacity, and the sum of the "
    "distances of all routes is minimized.\n"
    "To create initial high-quality solutions for the new CVRPs, I will first show you some "
    "solved CVRPs as examples.\n";

constexpr std::string_view kSchema =
    "The following format is used to describe each solved CVRP with text information, where {} "
    "denotes variables:\n"
    "<CVRP name={} n_customer={} capacity={}>\n"
    "<Depot>...</Depot>\n"
    "<Customers>...</Customers>\n"
    "<SOLUTION>...</SOLUTION>\n"
    "</CVRP>\n"
    "<Depot> holds the depot position as <depot x={} y={} />. <Customers> holds one "
    "<customer id={} x={} y={} demand={} /> element per customer. <SOLUTION> holds one "
    "<route id={}>[customer IDs in visiting order]</route> element per vehicle; every route "
    "starts and ends at the depot, which is not listed in the route.\n";

constexpr std::string_view kExamplesVision =
    "Now you will be provided with several solved CVRPs with the description of XML text and the "
    "figure with original topological layout and optimal traveling routes. Each figure has two "
    "sub-figures: the left one, marked as \"A\", shows the original layout, and the right one, "
    "marked as \"B\", shows the layout with the optimal traveling routes. The vertex ID numbers "
    "are annotated in both sub-figures and the depot is drawn as a square.\n";

constexpr std::string_view kExamplesText =
    "Now you will be provided with several solved CVRPs with the description of XML text.\n";

constexpr std::string_view kObserveVision =
    "You may start by finding the accurate customer mapping between the XML document and the "
    "sub-figures according to the IDs, and then return the observations you found.";

constexpr std::string_view kObserveText =
    "You may start by studying the customers and routes in the XML documents, and then return "
    "the observations you found.";

constexpr std::string_view kUnsolvedVision =
    "Now you are presented with the unsolved CVRP with the description of XML text (without the "
    "SOLUTION element) and topological layout picture (without the figure of optimal traveling "
    "routes).\n";

constexpr std::string_view kUnsolvedText =
    "Now you are presented with the unsolved CVRP with the description of XML text (without the "
    "SOLUTION element).\n";

std::string id_list(std::span<const CustomerId> ids) {
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  out += ']';
  return out;
}

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

// Case-insensitive search for `needle` in `hay` starting at `from`.
std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from = 0) {
  if (needle.size() > hay.size()) return std::string_view::npos;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size(); ++j) {
      if (lower(hay[i + j]) != lower(needle[j])) {
        match = false;
        break;
      }
    }
    if (match) return i;
  }
  return std::string_view::npos;
}

// Position of an opening tag `<name` followed by whitespace, '>' or '/'.
std::size_t find_open_tag(std::string_view text, std::string_view name, std::size_t from) {
  const std::string open = "<" + std::string(name);
  for (std::size_t pos = ifind(text, open, from); pos != std::string_view::npos;
       pos = ifind(text, open, pos + 1)) {
    const std::size_t after = pos + open.size();
    if (after >= text.size()) return std::string_view::npos;
    const char c = text[after];
    if (c == '>' || c == '/' || detail::is_space(c)) return pos;
  }
  return std::string_view::npos;
}

std::optional<std::int64_t> attribute_id(std::string_view attrs) {
  const std::size_t pos = ifind(attrs, "id");
  if (pos == std::string_view::npos) return std::nullopt;
  std::size_t i = pos + 2;
  while (i < attrs.size() && detail::is_space(attrs[i])) ++i;
  if (i >= attrs.size() || attrs[i] != '=') return std::nullopt;
  ++i;
  while (i < attrs.size() && (detail::is_space(attrs[i]) || attrs[i] == '"' || attrs[i] == '\''))
    ++i;
  std::size_t j = i;
  while (j < attrs.size() && (std::isdigit(static_cast<unsigned char>(attrs[j])) || attrs[j] == '-'))
    ++j;
  return detail::parse_int(attrs.substr(i, j - i));
}

Route parse_route_payload(std::string_view payload, std::size_t route_index) {
  Route route;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    const auto v = detail::parse_int(token);
    if (!v) {
      throw PromptError(PromptError::Kind::kUnparseableRoute,
                        fmt::format("route {}: '{}' is not a customer ID", route_index + 1, token));
    }
    route.push_back(*v);
    token.clear();
  };
  for (char c : payload) {
    if (c == ',' || c == '[' || c == ']' || c == ';' || detail::is_space(c)) {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return route;
}

}  // namespace

std::string_view to_string(PromptMode mode) {
  return mode == PromptMode::kVision ? "MLLM-V" : "MLLM-T";
}

std::optional<PromptMode> parse_prompt_mode(std::string_view text) {
  if (detail::iequals(text, "mllm-v") || detail::iequals(text, "v")) return PromptMode::kVision;
  if (detail::iequals(text, "mllm-t") || detail::iequals(text, "t")) return PromptMode::kText;
  return std::nullopt;
}

std::size_t PromptBundle::image_count() const {
  std::size_t n = task_image ? 1 : 0;
  for (const auto& b : example_blocks) n += b.image ? 1 : 0;
  return n;
}

XmlSolutionDoc XmlSolutionDoc::from_solution(const Solution& solution) {
  XmlSolutionDoc doc;
  for (std::size_t i = 0; i < solution.routes.size(); ++i) {
    doc.routes.push_back({static_cast<std::int64_t>(i + 1), solution.routes[i]});
  }
  return doc;
}

Solution XmlSolutionDoc::to_solution() const {
  Solution s;
  for (const auto& r : routes) s.routes.push_back(r.customers);
  return s;
}

std::string solution_to_xml(const XmlSolutionDoc& doc) {
  std::string out = "<SOLUTION>\n";
  for (const auto& r : doc.routes) {
    out += fmt::format("<route id={}>{}</route>\n", r.id, id_list(r.customers));
  }
  out += "</SOLUTION>\n";
  return out;
}

std::string instance_to_xml(const Instance& instance, const std::optional<Solution>& solution) {
  std::string out = fmt::format("<CVRP name={} n_customer={} capacity={}>\n", instance.name,
                                instance.size(), instance.capacity);
  out += fmt::format("<Depot><depot x={} y={} /></Depot>\n", format_number(instance.depot.x),
                     format_number(instance.depot.y));
  out += "<Customers>\n";
  for (const auto& c : instance.customers) {
    out += fmt::format("<customer id={} x={} y={} demand={} />\n", c.id, format_number(c.pos.x),
                       format_number(c.pos.y), c.demand);
  }
  out += "</Customers>\n";
  if (solution) out += solution_to_xml(XmlSolutionDoc::from_solution(*solution));
  out += "</CVRP>\n";
  return out;
}

PromptBundle build_step1_prompt(std::span<const SolvedExample> solved, PromptMode mode) {
  if (solved.empty()) {
    throw PromptError(PromptError::Kind::kEmptyExampleSet, "no solved examples supplied");
  }
  const bool vision = mode == PromptMode::kVision;
  PromptBundle bundle;
  bundle.mode = mode;
  bundle.system_preamble = std::string(kTaskIntro) + std::string(kSchema) +
                           std::string(vision ? kExamplesVision : kExamplesText);
  for (const auto& ex : solved) {
    if (ex.image.has_value() != vision) {
      throw Error(fmt::format("solved example {}: images must be supplied iff mode is MLLM-V",
                              ex.instance.name));
    }
    bundle.example_blocks.push_back(
        {instance_to_xml(ex.instance, ex.solution), vision ? ex.image : std::nullopt});
  }
  bundle.instruction_tail = std::string(vision ? kObserveVision : kObserveText);
  return bundle;
}

PromptBundle build_step2_prompt(const Instance& target, PromptMode mode,
                                const std::optional<EncodedImage>& layout) {
  const bool vision = mode == PromptMode::kVision;
  if (layout.has_value() != vision) {
    throw Error(fmt::format("{}: layout image must be supplied iff mode is MLLM-V", target.name));
  }
  PromptBundle bundle;
  bundle.mode = mode;
  bundle.system_preamble = std::string(vision ? kUnsolvedVision : kUnsolvedText);
  bundle.task_block = instance_to_xml(target);
  bundle.task_image = layout;
  bundle.instruction_tail = fmt::format(
      "Kindly return me the complete preliminary solution of {} in XML format, adhering to the "
      "heuristics that you have previously acquired. The answer holds only the SOLUTION element "
      "with one route element per vehicle, and every customer ID from 1 to {} appears in exactly "
      "one route.\n"
      "No Explanation Needed.",
      target.name, target.size());
  return bundle;
}

std::string build_error_prompt(const XmlSolutionDoc& candidate, const ValidationReport& report) {
  if (report.empty()) {
    throw PromptError(PromptError::Kind::kEmptyReport,
                      "candidate passed validation; no error prompt is needed");
  }
  std::string out =
      "Your routing solution is invalid. To return valid routes, refine the ones below by "
      "removing duplicate customer IDs and adding missing ones:\n";
  out += solution_to_xml(candidate);
  out += fmt::format(
      "The duplicated customer IDs are given by: {}, the missed customer IDs are given by: {}, "
      "and the customer IDs which should not appear are given by: {}\n",
      id_list(report.duplicated), id_list(report.missing), id_list(report.extraneous));
  out +=
      "Please remove the duplicated IDs and the IDs should not appear, and add the missed IDs to "
      "the route with minimum customers\n"
      "No Explanations Needed";
  return out;
}

std::string build_format_reminder(const Instance& target) {
  return fmt::format(
      "Your reply did not contain a readable solution. Return the complete solution of {} as "
      "<SOLUTION><route id=1>[customer IDs]</route>...</SOLUTION> using customer IDs 1 to {}.\n"
      "No Explanation Needed.",
      target.name, target.size());
}

XmlSolutionDoc extract_solution(std::string_view reply) {
  const std::size_t open = find_open_tag(reply, "SOLUTION", 0);
  if (open == std::string_view::npos) {
    throw PromptError(PromptError::Kind::kNoSolutionTag, "reply has no <SOLUTION> element");
  }
  const std::size_t body_start = reply.find('>', open);
  const std::size_t close = body_start == std::string_view::npos
                                ? std::string_view::npos
                                : ifind(reply, "</SOLUTION", body_start);
  if (close == std::string_view::npos) {
    throw PromptError(PromptError::Kind::kNoSolutionTag, "<SOLUTION> element is not closed");
  }
  const std::string_view body = reply.substr(body_start + 1, close - body_start - 1);

  XmlSolutionDoc doc;
  std::size_t pos = 0;
  while ((pos = find_open_tag(body, "route", pos)) != std::string_view::npos) {
    const std::size_t tag_end = body.find('>', pos);
    if (tag_end == std::string_view::npos) {
      throw PromptError(PromptError::Kind::kUnparseableRoute, "unterminated <route> tag");
    }
    const std::string_view attrs = body.substr(pos + 6, tag_end - pos - 6);
    const std::size_t index = doc.routes.size();
    std::int64_t id = static_cast<std::int64_t>(index + 1);
    if (!attrs.empty() && attrs.back() == '/') {
      // <route id=3 /> : empty route
      if (auto parsed = attribute_id(attrs)) id = *parsed;
      if (id <= 0) throw PromptError(PromptError::Kind::kUnparseableRoute, "non-positive route id");
      doc.routes.push_back({id, {}});
      pos = tag_end + 1;
      continue;
    }
    if (auto parsed = attribute_id(attrs)) id = *parsed;
    if (id <= 0) throw PromptError(PromptError::Kind::kUnparseableRoute, "non-positive route id");
    const std::size_t end = ifind(body, "</route", tag_end);
    if (end == std::string_view::npos) {
      throw PromptError(PromptError::Kind::kUnparseableRoute,
                        fmt::format("route {} is not closed", index + 1));
    }
    doc.routes.push_back({id, parse_route_payload(body.substr(tag_end + 1, end - tag_end - 1), index)});
    pos = end + 1;
  }
  return doc;
}

}  // namespace mmvrp
