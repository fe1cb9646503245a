#include "elicit/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "elicit/errors.hpp"

namespace elicit {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw InputError(std::string("instance is missing field '") + key + "'");
  return *it;
}

std::size_t require_count(const json& doc, const char* key) {
  const auto& v = require(doc, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InputError(std::string("field '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

const json& require_array(const json& doc, const char* key) {
  const auto& v = require(doc, key);
  if (!v.is_array()) throw InputError(std::string("field '") + key + "' must be an array");
  return v;
}

long long to_integer(const json& v, const char* what) {
  if (!v.is_number_integer()) throw InputError(std::string(what) + " must be integers");
  return v.get<long long>();
}

}  // namespace

Problem InstanceDocument::problem(Sense fallback) const {
  Problem p{matroid, attributes, sense.value_or(fallback)};
  p.validate();
  return p;
}

InstanceDocument instance_from_json(const json& doc) {
  if (!doc.is_object()) throw InputError("instance must be a JSON object");
  const auto& kind_field = require(doc, "kind");
  if (!kind_field.is_string()) throw InputError("field 'kind' must be a string");
  const auto kind = parse_matroid_kind(kind_field.get<std::string>());
  const std::size_t n = require_count(doc, "n");

  // Y: rows of numbers.
  const auto& y_field = require_array(doc, "Y");
  std::vector<std::vector<double>> rows;
  for (const auto& row : y_field) {
    if (!row.is_array()) throw InputError("Y must be an array of rows");
    std::vector<double> r;
    for (const auto& x : row) {
      if (!x.is_number()) throw InputError("Y entries must be numbers");
      r.push_back(x.get<double>());
    }
    rows.push_back(std::move(r));
  }
  if (rows.size() != n) {
    throw InconsistentInstance("Y has " + std::to_string(rows.size()) + " rows, expected n = " +
                               std::to_string(n));
  }
  if (doc.contains("p")) {
    const std::size_t p = require_count(doc, "p");
    for (const auto& r : rows) {
      if (r.size() != p) throw InconsistentInstance("Y row length differs from p");
    }
  }

  InstanceDocument out{MatroidInstance::uniform(1, 1), AttributeMatrix{}, std::nullopt, ""};
  switch (kind) {
    case MatroidKind::Uniform:
      out.matroid = MatroidInstance::uniform(n, require_count(doc, "k"));
      break;
    case MatroidKind::Graphic: {
      const std::size_t vertices = require_count(doc, "vertices");
      std::vector<Edge> edges;
      for (const auto& e : require_array(doc, "edges")) {
        if (!e.is_array() || e.size() != 2) throw InputError("each edge must be a [u, v] pair");
        const auto u = to_integer(e[0], "edge endpoints");
        const auto v = to_integer(e[1], "edge endpoints");
        if (u < 0 || v < 0) throw InconsistentInstance("edge endpoints must be >= 0");
        edges.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
      }
      if (edges.size() != n) throw InconsistentInstance("edge count differs from n");
      out.matroid = MatroidInstance::graphic(vertices, std::move(edges));
      break;
    }
    case MatroidKind::Scheduling: {
      std::vector<int> deadlines;
      for (const auto& d : require_array(doc, "deadlines")) {
        deadlines.push_back(static_cast<int>(to_integer(d, "deadlines")));
      }
      if (deadlines.size() != n) throw InconsistentInstance("deadline count differs from n");
      out.matroid = MatroidInstance::scheduling(std::move(deadlines));
      break;
    }
    case MatroidKind::Partition: {
      std::vector<std::vector<Element>> blocks;
      for (const auto& b : require_array(doc, "blocks")) {
        if (!b.is_array()) throw InputError("each block must be an array of elements");
        std::vector<Element> block;
        for (const auto& e : b) {
          const auto id = to_integer(e, "block elements");
          if (id < 1 || static_cast<std::size_t>(id) > n) {
            throw InconsistentInstance("block element " + std::to_string(id) + " out of range");
          }
          block.push_back(static_cast<Element>(id - 1));
        }
        blocks.push_back(std::move(block));
      }
      out.matroid = MatroidInstance::partition(n, std::move(blocks));
      break;
    }
  }
  try {
    out.attributes = AttributeMatrix::from_rows(rows);
  } catch (const InputError& e) {
    throw InconsistentInstance(e.what());
  }
  if (doc.contains("sense")) {
    if (!doc["sense"].is_string()) throw InputError("field 'sense' must be a string");
    out.sense = parse_sense(doc["sense"].get<std::string>());
  }
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw InputError("field 'name' must be a string");
    out.name = doc["name"].get<std::string>();
  }
  return out;
}

json instance_to_json(const InstanceDocument& doc) {
  const auto& m = doc.matroid;
  json out;
  if (!doc.name.empty()) out["name"] = doc.name;
  out["kind"] = std::string(to_string(m.kind()));
  out["n"] = m.size();
  out["p"] = doc.attributes.cols();
  switch (m.kind()) {
    case MatroidKind::Uniform:
      out["k"] = m.uniform_k();
      break;
    case MatroidKind::Graphic: {
      out["vertices"] = m.vertex_count();
      json edges = json::array();
      for (const auto& e : m.edges()) edges.push_back({e.u, e.v});
      out["edges"] = std::move(edges);
      break;
    }
    case MatroidKind::Scheduling:
      out["deadlines"] = m.deadlines();
      break;
    case MatroidKind::Partition: {
      json blocks = json::array();
      for (const auto& b : m.blocks()) {
        json block = json::array();
        for (Element e : b) block.push_back(e + 1);
        blocks.push_back(std::move(block));
      }
      out["blocks"] = std::move(blocks);
      break;
    }
  }
  if (doc.sense) out["sense"] = std::string(to_string(*doc.sense));
  json y = json::array();
  for (std::size_t i = 0; i < doc.attributes.rows(); ++i) {
    const auto row = doc.attributes.row(i);
    json r = json::array();
    for (double x : row) {
      if (x == std::floor(x) && std::abs(x) < 1e15) {
        r.push_back(static_cast<long long>(x));
      } else {
        r.push_back(x);
      }
    }
    y.push_back(std::move(r));
  }
  out["Y"] = std::move(y);
  return out;
}

InstanceDocument load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("instance file " + path.string() + " is not valid JSON: " + e.what());
  }
  return instance_from_json(doc);
}

void save_instance(const std::filesystem::path& path, const InstanceDocument& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write instance file " + path.string());
  out << instance_to_json(doc).dump(2) << '\n';
}

InstanceDocument toy_scheduling_instance() {
  InstanceDocument doc{MatroidInstance::scheduling({5, 3, 2, 4, 1, 5, 3, 2}),
                       AttributeMatrix::from_rows({{6, 8, 8, 3},
                                                   {2, 4, 7, 7},
                                                   {5, 2, 5, 6},
                                                   {8, 7, 1, 8},
                                                   {1, 2, 8, 2},
                                                   {6, 3, 3, 7},
                                                   {3, 4, 6, 5},
                                                   {2, 3, 1, 4}}),
                       Sense::Max, "toy-scheduling-8"};
  return doc;
}

}  // namespace elicit
