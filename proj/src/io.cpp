#include "rbsc/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rbsc/errors.hpp"

namespace rbsc {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

int get_int(const json& j, const char* field) {
  if (!j.contains(field))
    throw ParseError(std::string("missing field '") + field + "'");
  const json& v = j.at(field);
  if (!v.is_number_integer())
    throw ParseError(std::string("field '") + field + "' must be an integer");
  return v.get<int>();
}

std::vector<int> get_id_list(const json& v, const std::string& where,
                             bool* normalized) {
  if (!v.is_array())
    throw ParseError(where + " must be an array of integers");
  std::vector<int> ids;
  ids.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number_integer())
      throw ParseError(where + " must contain integers only");
    ids.push_back(e.get<int>());
  }
  std::vector<int> norm = sorted_unique(ids);
  if (norm != ids) *normalized = true;
  return norm;
}

std::string expect_kind(const json& j, const char* kind) {
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ParseError("missing string field 'kind'");
  std::string k = j.at("kind").get<std::string>();
  if (kind && k != kind)
    throw ParseError("expected kind '" + std::string(kind) + "', got '" + k +
                     "'");
  return k;
}

ReadResult<RbscInstance> rbsc_from_json(const json& j) {
  ReadResult<RbscInstance> out;
  out.instance.blue_count = get_int(j, "k");
  out.instance.red_count = get_int(j, "n");
  if (!j.contains("sets") || !j.at("sets").is_array())
    throw ParseError("rbsc: missing 'sets' array");
  int idx = 0;
  for (const json& s : j.at("sets")) {
    std::string where = "rbsc sets[" + std::to_string(idx) + "]";
    if (!s.is_object()) throw ParseError(where + " must be an object");
    if (!s.contains("blue") || !s.contains("red"))
      throw ParseError(where + " needs 'blue' and 'red'");
    out.instance.blue_adj.push_back(
        get_id_list(s.at("blue"), where + ".blue", &out.normalized));
    out.instance.red_adj.push_back(
        get_id_list(s.at("red"), where + ".red", &out.normalized));
    ++idx;
  }
  validate(out.instance);
  return out;
}

ReadResult<MmsaInstance> mmsa_from_json(const json& j) {
  ReadResult<MmsaInstance> out;
  out.instance.depth = get_int(j, "t");
  if (!j.contains("layers") || !j.at("layers").is_array())
    throw ParseError("mmsa: missing 'layers' array");
  for (const json& v : j.at("layers")) {
    if (!v.is_number_integer()) throw ParseError("mmsa layers must be ints");
    out.instance.layers.push_back(v.get<int>());
  }
  if (!j.contains("edges") || !j.at("edges").is_array())
    throw ParseError("mmsa: missing 'edges' array");
  int p = 0;
  for (const json& block : j.at("edges")) {
    std::string bwhere = "mmsa edges[" + std::to_string(p) + "]";
    if (!block.is_array()) throw ParseError(bwhere + " must be an array");
    std::vector<std::vector<int>> adj;
    int v = 0;
    for (const json& children : block) {
      adj.push_back(get_id_list(
          children, bwhere + "[" + std::to_string(v) + "]", &out.normalized));
      ++v;
    }
    out.instance.edges.push_back(std::move(adj));
    ++p;
  }
  validate(out.instance);
  return out;
}

ReadResult<MinKUnionInstance> mku_from_json(const json& j) {
  ReadResult<MinKUnionInstance> out;
  out.instance.ground_size = get_int(j, "n");
  out.instance.target = get_int(j, "k");
  if (!j.contains("sets") || !j.at("sets").is_array())
    throw ParseError("mku: missing 'sets' array");
  int idx = 0;
  for (const json& s : j.at("sets")) {
    out.instance.sets.push_back(get_id_list(
        s, "mku sets[" + std::to_string(idx) + "]", &out.normalized));
    ++idx;
  }
  validate(out.instance);
  return out;
}

}  // namespace

std::string canonical_json(const RbscInstance& inst) {
  json sets = json::array();
  for (int j = 0; j < inst.set_count(); ++j)
    sets.push_back({{"blue", inst.blue_adj[j]}, {"red", inst.red_adj[j]}});
  json j{{"kind", "rbsc"},
         {"k", inst.blue_count},
         {"n", inst.red_count},
         {"sets", sets}};
  return j.dump();
}

std::string canonical_json(const MmsaInstance& inst) {
  json j{{"kind", "mmsa"},
         {"t", inst.depth},
         {"layers", inst.layers},
         {"edges", inst.edges}};
  return j.dump();
}

std::string canonical_json(const MinKUnionInstance& inst) {
  json j{{"kind", "mku"},
         {"n", inst.ground_size},
         {"k", inst.target},
         {"sets", inst.sets}};
  return j.dump();
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ReadResult<RbscInstance> parse_rbsc(const std::string& text) {
  json j = parse_json(text);
  expect_kind(j, "rbsc");
  return rbsc_from_json(j);
}

ReadResult<MmsaInstance> parse_mmsa(const std::string& text) {
  json j = parse_json(text);
  expect_kind(j, "mmsa");
  return mmsa_from_json(j);
}

ReadResult<MinKUnionInstance> parse_mku(const std::string& text) {
  json j = parse_json(text);
  expect_kind(j, "mku");
  return mku_from_json(j);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << content;
}

AnyReadResult read_instance(const std::string& path) {
  json j = parse_json(read_text_file(path));
  std::string kind = expect_kind(j, nullptr);
  AnyReadResult out;
  if (kind == "rbsc") {
    auto r = rbsc_from_json(j);
    out = {InstanceKind::Rbsc, std::move(r.instance), r.normalized};
  } else if (kind == "mmsa") {
    auto r = mmsa_from_json(j);
    out = {InstanceKind::Mmsa, std::move(r.instance), r.normalized};
  } else if (kind == "mku") {
    auto r = mku_from_json(j);
    out = {InstanceKind::Mku, std::move(r.instance), r.normalized};
  } else {
    throw ParseError("unknown instance kind '" + kind + "'");
  }
  return out;
}

ReadResult<RbscInstance> read_rbsc(const std::string& path) {
  return parse_rbsc(read_text_file(path));
}
ReadResult<MmsaInstance> read_mmsa(const std::string& path) {
  return parse_mmsa(read_text_file(path));
}
ReadResult<MinKUnionInstance> read_mku(const std::string& path) {
  return parse_mku(read_text_file(path));
}

void write_instance(const RbscInstance& inst, const std::string& path) {
  write_text_file(path, canonical_json(inst));
}
void write_instance(const MmsaInstance& inst, const std::string& path) {
  write_text_file(path, canonical_json(inst));
}
void write_instance(const MinKUnionInstance& inst, const std::string& path) {
  write_text_file(path, canonical_json(inst));
}

}  // namespace rbsc
