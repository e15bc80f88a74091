#include <fstream>
#include <limits>
#include <sstream>

#include "semistab/json_io.hpp"

namespace semistab {

namespace {

json integer_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return static_cast<long long>(z.get_si());
  return z.get_str();
}

mpz_class integer_from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<unsigned long long>()));
  if (j.is_string()) {
    try {
      return mpz_class(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw InputError(path, "expected an integer");
}

}  // namespace

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw InputError(path.empty() ? "/" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(path.empty() ? "/" : path, std::string("missing field '") + key + "'");
  return *it;
}

int int_field(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer()) throw InputError(path + "/" + key, "expected an integer");
  long long x = v.get<long long>();
  if (x < 0 || x > std::numeric_limits<int>::max()) throw InputError(path + "/" + key, "out of range");
  return static_cast<int>(x);
}

json rational_to_json(const Rational& r) {
  json j;
  j["num"] = integer_to_json(r.get_num());
  j["den"] = integer_to_json(r.get_den());
  return j;
}

Rational rational_from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(integer_from_json(j, path));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
      throw InputError(path, e.what());
    }
  }
  mpz_class num = integer_from_json(field(j, "num", path), path + "/num");
  mpz_class den = 1;
  if (j.contains("den")) den = integer_from_json(j["den"], path + "/den");
  if (den == 0) throw InputError(path + "/den", "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

json multiindex_to_json(const Multiindex& a) {
  json j = json::array();
  for (int e : a) j.push_back(e);
  return j;
}

Multiindex multiindex_from_json(const json& j, int d, const std::string& path) {
  if (!j.is_array()) throw InputError(path, "expected an array of exponents");
  if (static_cast<int>(j.size()) != d) throw InputError(path, "expected " + std::to_string(d) + " exponents");
  Multiindex a;
  for (size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_integer() || j[k].get<long long>() < 0)
      throw InputError(path + "/" + std::to_string(k), "expected a nonnegative integer");
    a.push_back(static_cast<int>(j[k].get<long long>()));
  }
  return a;
}

json poly_to_json(const Poly& P) {
  json arr = json::array();
  for (const auto& [a, c] : P.terms()) {
    json t;
    t["alpha"] = multiindex_to_json(a);
    t["num"] = integer_to_json(c.get_num());
    t["den"] = integer_to_json(c.get_den());
    arr.push_back(t);
  }
  return arr;
}

Poly poly_from_json(const json& j, int d, const std::string& path) {
  if (!j.is_array()) throw InputError(path, "expected an array of terms");
  Poly P(d);
  for (size_t k = 0; k < j.size(); ++k) {
    std::string tp = path + "/" + std::to_string(k);
    Multiindex a = multiindex_from_json(field(j[k], "alpha", tp), d, tp + "/alpha");
    P.add_term(a, rational_from_json(j[k], tp));
  }
  return P;
}

json polymatrix_to_json(const PolyMatrix& P) {
  json j;
  j["p"] = P.rows();
  j["q"] = P.cols();
  j["d"] = P.dim();
  if (P.has_explicit_cap()) j["D"] = P.cap();
  json rows = json::array();
  for (int i = 0; i < P.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < P.cols(); ++c) row.push_back(poly_to_json(P(i, c)));
    rows.push_back(row);
  }
  j["entries"] = rows;
  return j;
}

PolyMatrix polymatrix_from_json(const json& j, const std::string& path) {
  int p = int_field(j, "p", path), q = int_field(j, "q", path), d = int_field(j, "d", path);
  int cap = j.contains("D") ? int_field(j, "D", path) : -1;
  const json& rows = field(j, "entries", path);
  std::string ep = path + "/entries";
  if (!rows.is_array() || static_cast<int>(rows.size()) != p) throw InputError(ep, "expected " + std::to_string(p) + " rows");
  PolyMatrix P(p, q, d, cap);
  for (int i = 0; i < p; ++i) {
    std::string rp = ep + "/" + std::to_string(i);
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != q)
      throw InputError(rp, "expected " + std::to_string(q) + " entries");
    for (int c = 0; c < q; ++c) {
      std::string cp = rp + "/" + std::to_string(c);
      Poly e = poly_from_json(rows[i][c], d, cp);
      if (cap >= 0 && e.degree() > cap) throw InputError(cp, "entry degree exceeds declared cap");
      P.set(i, c, std::move(e));
    }
  }
  return P;
}

json qmatrix_to_json(const QMatrix& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < M.cols(); ++c) row.push_back(rational_to_json(M(i, c)));
    rows.push_back(row);
  }
  return rows;
}

QMatrix qmatrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw InputError(path, "expected an array of rows");
  int r = static_cast<int>(j.size());
  int c = r ? static_cast<int>(j[0].size()) : 0;
  QMatrix M(r, c);
  for (int i = 0; i < r; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != c) throw InputError(path + "/" + std::to_string(i), "ragged matrix");
    for (int k = 0; k < c; ++k) M(i, k) = rational_from_json(j[i][k], path + "/" + std::to_string(i) + "/" + std::to_string(k));
  }
  return M;
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    size_t line = 1, col = 1;
    size_t upto = std::min(e.byte == 0 ? size_t{0} : e.byte - 1, text.size());
    for (size_t k = 0; k < upto; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    auto pos = msg.find("parse error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col), msg);
  }
}

json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError(file, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), file);
}

}  // namespace semistab
