#include "circleprev/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "circleprev/error.hpp"

namespace circleprev::io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(Errc::kSchema, what); }

const json& field(const json& j, const char* key, const char* where) {
  if (!j.is_object()) schema(std::string(where) + " must be an object");
  const auto it = j.find(key);
  if (it == j.end()) schema(std::string(where) + " lacks \"" + key + "\"");
  return *it;
}

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) schema(std::string(what) + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) schema(std::string(what) + " must be finite");
  return x;
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) schema(std::string(what) + " must be an integer");
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    schema(std::string(what) + " out of range");
  }
  return static_cast<int>(v);
}

const json& array(const json& j, const char* what) {
  if (!j.is_array()) schema(std::string(what) + " must be an array");
  return j;
}

// Library validation failures inside a document are schema errors of that
// document, except for the codes the CLI treats as validation outcomes.
template <class Fn>
auto rethrow_as_schema(Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == Errc::kInvalidLifting || e.code() == Errc::kInvalidArgument ||
        e.code() == Errc::kRegularityMismatch) {
      schema(e.what());
    }
    throw;
  }
}

}  // namespace

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string format_double(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Lifting lifting_from_json(const json& j) {
  const double c0 = finite_number(field(j, "c0", "lifting"), "c0");
  int r = kDefaultRegularity;
  if (j.contains("r")) r = integer(j.at("r"), "r");
  std::vector<Harmonic> harmonics;
  std::set<int> seen;
  if (j.contains("harmonics")) {
    for (const json& h : array(j.at("harmonics"), "harmonics")) {
      Harmonic hm;
      hm.k = integer(field(h, "k", "harmonic"), "k");
      hm.sin_coef = h.contains("sin") ? finite_number(h.at("sin"), "sin") : 0.0;
      hm.cos_coef = h.contains("cos") ? finite_number(h.at("cos"), "cos") : 0.0;
      if (!seen.insert(hm.k).second) schema("duplicate harmonic k = " + std::to_string(hm.k));
      harmonics.push_back(hm);
    }
  }
  return rethrow_as_schema([&] { return Lifting(c0, std::move(harmonics), r); });
}

json to_json(const Lifting& f) {
  json hs = json::array();
  for (const Harmonic& h : f.harmonics()) {
    hs.push_back({{"k", h.k}, {"sin", h.sin_coef}, {"cos", h.cos_coef}});
  }
  return {{"c0", f.c0()}, {"r", f.regularity()}, {"harmonics", std::move(hs)}};
}

GroupElement group_element_from_json(const json& j) {
  const double delta = finite_number(field(j, "delta", "group element"), "delta");
  std::vector<Term> terms;
  for (const json& t : array(field(j, "terms", "group element"), "terms")) {
    terms.push_back({finite_number(field(t, "a", "term"), "a"),
                     lifting_from_json(field(t, "w", "term"))});
  }
  return rethrow_as_schema([&] { return GroupElement(delta, std::move(terms)); });
}

json to_json(const GroupElement& g) {
  json terms = json::array();
  for (const Term& t : g.terms()) terms.push_back({{"a", t.a}, {"w", to_json(t.w)}});
  return {{"delta", g.delta()}, {"terms", std::move(terms)}};
}

Probe probe_from_json(const json& j, int grid_points) {
  const Lifting f = lifting_from_json(field(j, "F", "probe"));
  const json& kind = field(j, "kind", "probe");
  if (!kind.is_string()) schema("probe kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "I") {
    const double shift = finite_number(field(j, "k", "probe"), "k");
    return rethrow_as_schema([&] { return Probe::type_one(f, shift, grid_points); });
  }
  if (k == "II") {
    const Lifting g = lifting_from_json(field(j, "G", "probe"));
    return rethrow_as_schema([&] { return Probe::type_two(f, g, grid_points); });
  }
  schema("probe kind must be \"I\" or \"II\", got \"" + k + "\"");
}

json to_json(const Probe& p) {
  json out{{"F", to_json(p.f())}, {"kind", std::string(kind_name(p.kind()))}};
  if (p.kind() == ProbeKind::kTypeI) {
    out["k"] = p.k();
  } else {
    out["G"] = to_json(p.g());
  }
  return out;
}

BoxUnion box_union_from_json(const json& j) {
  const int dim = integer(field(j, "dim", "box union"), "dim");
  std::vector<Box> boxes;
  for (const json& b : array(field(j, "boxes", "box union"), "boxes")) {
    Box box;
    for (const json& r : array(b, "box")) {
      box.push_back({finite_number(field(r, "lo", "range"), "lo"),
                     finite_number(field(r, "hi", "range"), "hi")});
    }
    boxes.push_back(std::move(box));
  }
  try {
    return BoxUnion(dim, std::move(boxes));
  } catch (const Error& e) {
    schema(e.what());
  }
}

json to_json(const BoxUnion& bu) {
  json boxes = json::array();
  for (const Box& b : bu.boxes()) {
    json box = json::array();
    for (const Range& r : b) box.push_back({{"lo", r.lo}, {"hi", r.hi}});
    boxes.push_back(std::move(box));
  }
  return {{"dim", bu.dim()}, {"boxes", std::move(boxes)}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    schema(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace circleprev::io
