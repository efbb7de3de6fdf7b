#include "relcalc/json_io.hpp"

#include <fstream>
#include <sstream>

namespace relcalc {

using nlohmann::json;

namespace {

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) throw InvalidStructure(what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw InvalidStructure("unknown key in " + what + ": " + key);
    }
  }
  for (const char* key : allowed) {
    if (!j.contains(key)) throw InvalidStructure(what + " is missing \"" + key + "\"");
  }
}

std::size_t as_index(const json& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InvalidStructure(what + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<std::string> labels_from_json(const json& j) {
  if (!j.is_array()) throw InvalidStructure("universe must be an array of labels");
  std::vector<std::string> out;
  for (const auto& l : j) {
    if (l.is_string()) {
      out.push_back(l.get<std::string>());
    } else if (l.is_number_integer()) {
      out.push_back(std::to_string(l.get<long long>()));
    } else {
      throw InvalidStructure("universe labels must be strings");
    }
  }
  return out;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
}

RawStructure raw_structure_from_json(const json& j) {
  require_keys(j, {"universe", "relations"}, "structure");
  RawStructure raw;
  raw.universe = labels_from_json(j.at("universe"));
  const json& rels = j.at("relations");
  if (!rels.is_object()) throw InvalidStructure("relations must be an object");
  for (const auto& [symbol, r] : rels.items()) {
    require_keys(r, {"arity", "tuples"}, "relation " + symbol);
    RawStructure::RawRelation rr;
    rr.arity = as_index(r.at("arity"), "arity of " + symbol);
    if (!r.at("tuples").is_array()) throw InvalidStructure("tuples of " + symbol + " must be an array");
    for (const auto& t : r.at("tuples")) {
      if (!t.is_array()) throw InvalidStructure("each tuple of " + symbol + " must be an array");
      Tuple tuple;
      for (const auto& v : t) {
        const std::size_t id = as_index(v, "tuple entry of " + symbol);
        if (id > std::numeric_limits<Element>::max()) throw InvalidStructure("tuple entry too large");
        tuple.push_back(static_cast<Element>(id));
      }
      rr.tuples.push_back(std::move(tuple));
    }
    raw.relations.emplace(symbol, std::move(rr));
  }
  return raw;
}

RelationalStructure structure_from_json(const json& j) { return build_structure(raw_structure_from_json(j)); }

json structure_to_json(const RelationalStructure& s) {
  json rels = json::object();
  for (const auto& [symbol, rel] : s.relations()) {
    rels[symbol] = {{"arity", rel.arity()}, {"tuples", rel.rows()}};
  }
  return {{"universe", s.labels()}, {"relations", rels}};
}

RelationalStructure read_structure(const std::filesystem::path& path) {
  return structure_from_json(parse_json(read_text_file(path)));
}

OperationTable table_from_json(const json& j) {
  require_keys(j, {"arity", "size", "values"}, "operation table");
  std::vector<Element> values;
  if (!j.at("values").is_array()) throw InvalidStructure("values must be an array");
  for (const auto& v : j.at("values")) values.push_back(static_cast<Element>(as_index(v, "table value")));
  return OperationTable(as_index(j.at("arity"), "arity"), as_index(j.at("size"), "size"), std::move(values));
}

json table_to_json(const OperationTable& t) {
  return {{"arity", t.arity()}, {"size", t.base_size()}, {"values", t.values()}};
}

FiniteAlgebra algebra_from_json(const json& j) {
  require_keys(j, {"universe", "operations"}, "algebra");
  FiniteAlgebra a;
  a.labels = labels_from_json(j.at("universe"));
  if (!j.at("operations").is_object()) throw InvalidStructure("operations must be an object");
  for (const auto& [symbol, t] : j.at("operations").items()) a.operations.emplace(symbol, table_from_json(t));
  a.validate();
  return a;
}

json algebra_to_json(const FiniteAlgebra& a) {
  json ops = json::object();
  for (const auto& [symbol, t] : a.operations) ops[symbol] = table_to_json(t);
  return {{"universe", a.labels}, {"operations", ops}};
}

FiniteAlgebra read_algebra(const std::filesystem::path& path) {
  return algebra_from_json(parse_json(read_text_file(path)));
}

json bundle_manifest(const FreeBundle& b) {
  json comps = json::array();
  for (std::size_t u = 0; u < b.components.size(); ++u) {
    json entry = {{"unary_term", b.unary.algebra.labels[u]},
                  {"values", b.unary.functions[u]},
                  {"F_size", b.component_members[u].size()}};
    if (b.H) entry["H_size"] = b.H_size(u);
    if (b.collapsed) entry["K_size"] = b.K_members[u].size();
    comps.push_back(std::move(entry));
  }
  json m = {{"F_size", b.F().size()},
            {"F_elements", b.F().labels},
            {"relation_size", b.Fstruct.only_relation().size()},
            {"U", comps}};
  if (b.collapsed) {
    json classes = json::array();
    for (const auto& cls : b.kernel) {
      json names = json::array();
      for (Element t : cls) names.push_back(b.F().labels[t]);
      classes.push_back(std::move(names));
    }
    m["kernel_classes"] = std::move(classes);
    m["K_size"] = b.K.size();
  }
  return m;
}

void export_bundle(const FreeBundle& b, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_json(dir / "Fstruct.json", structure_to_json(b.Fstruct));
  if (b.collapsed) write_json(dir / "K.json", structure_to_json(b.K));
  write_json(dir / "manifest.json", bundle_manifest(b));
}

}  // namespace relcalc
