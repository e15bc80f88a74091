#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>

#include "semistab/poly.hpp"

namespace semistab {

using json = nlohmann::ordered_json;

// Malformed input: carries a location (JSON pointer or line/column).
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& where, const std::string& what) : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j, const std::string& path);

json multiindex_to_json(const Multiindex& a);
Multiindex multiindex_from_json(const json& j, int d, const std::string& path);

json poly_to_json(const Poly& P);
Poly poly_from_json(const json& j, int d, const std::string& path);

json polymatrix_to_json(const PolyMatrix& P);
PolyMatrix polymatrix_from_json(const json& j, const std::string& path = "");

json qmatrix_to_json(const QMatrix& M);
QMatrix qmatrix_from_json(const json& j, const std::string& path);

int int_field(const json& j, const char* key, const std::string& path);
const json& field(const json& j, const char* key, const std::string& path);

// Reads and parses a file; syntax errors become InputError with "line L, column C".
json read_json_file(const std::string& file);
json parse_json_text(const std::string& text, const std::string& source);

}  // namespace semistab
