#include "schema.hpp"

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>
#include <rapidjson/schema.h>
#include <rapidjson/stringbuffer.h>

#include "polyball/errors.hpp"
#include "schemas.hpp"

namespace lab {

using nlohmann::json;
using polyball::ConfigError;

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"check", "rewrite", "vn", "berezin", "dilate", "wold", "beurling", "suite"};
  return names;
}

json command_schema(const std::string& command) {
  static const json root = json::parse(kConfigSchema);
  const auto& defs = root.at("definitions");
  if (!defs.contains(command)) throw ConfigError("unknown command '" + command + "'");
  json out = defs.at(command);
  json props = defs.at("common_properties");
  for (const auto& [key, value] : out.at("properties").items()) props[key] = value;
  out["properties"] = props;
  json shared = defs;
  shared.erase("common_properties");
  for (const auto& name : commands()) shared.erase(name);
  json schema{{"$schema", root.at("$schema")}, {"title", "polyball-lab " + command + " configuration"}};
  schema.update(out);
  schema["definitions"] = shared;
  return schema;
}

json parse_and_validate(const std::string& command, const std::string& text) {
  rapidjson::Document doc;
  doc.Parse(text.c_str());
  if (doc.HasParseError()) {
    throw ConfigError("invalid JSON at offset " + std::to_string(doc.GetErrorOffset()) + ": " +
                          rapidjson::GetParseError_En(doc.GetParseError()),
                      "");
  }
  rapidjson::Document sd;
  sd.Parse(command_schema(command).dump().c_str());
  const rapidjson::SchemaDocument schema(sd);
  rapidjson::SchemaValidator validator(schema);
  if (!doc.Accept(validator)) {
    rapidjson::StringBuffer where;
    validator.GetInvalidDocumentPointer().Stringify(where);
    const std::string pointer = where.GetString();
    rapidjson::StringBuffer rule;
    validator.GetInvalidSchemaPointer().Stringify(rule);
    throw ConfigError(std::string("schema violation: keyword '") + validator.GetInvalidSchemaKeyword() + "' at schema " +
                          rule.GetString(),
                      pointer);
  }
  return json::parse(text);
}

}  // namespace lab
