#include "unclab/family_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <json.hpp>
#include <sstream>

#include "unclab/errors.hpp"

namespace unclab {

namespace {

using nlohmann::json;

enum class Expr { exp, poly, table };

struct Entry {
  long n;
  Expr expr;
  Complex coeff;
};

using Table = std::map<double, std::map<long, Complex>>;

Complex table_value(const Table& table, long n, double alpha) {
  auto at = [n](const std::map<long, Complex>& row) {
    const auto it = row.find(n);
    return it == row.end() ? Complex{} : it->second;
  };
  if (table.empty()) throw InvalidParameter("family uses expr \"table\" but has no table");
  const double lo = table.begin()->first, hi = table.rbegin()->first;
  if (alpha < lo * (1 - 1e-12) || alpha > hi * (1 + 1e-12))
    throw InvalidParameter("alpha " + std::to_string(alpha) + " outside the tabulated range");
  auto upper = table.lower_bound(alpha);
  if (upper == table.end()) return at(table.rbegin()->second);
  if (upper->first == alpha || upper == table.begin()) return at(upper->second);
  const auto lower = std::prev(upper);
  const double t = (alpha - lower->first) / (upper->first - lower->first);
  return (1.0 - t) * at(lower->second) + t * at(upper->second);
}

}  // namespace

CoefficientFamily parse_family_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("family JSON: ") + e.what());
  }

  try {
    std::vector<Entry> entries;
    long radius = 0;
    for (const auto& e : doc.at("entries")) {
      Entry entry{e.at("n").get<long>(), Expr::exp, {1.0, 0.0}};
      const auto expr = e.at("expr").get<std::string>();
      if (expr == "exp") entry.expr = Expr::exp;
      else if (expr == "poly") entry.expr = Expr::poly;
      else if (expr == "table") entry.expr = Expr::table;
      else throw InvalidParameter("family JSON: unknown expr \"" + expr + "\"");
      if (entry.expr == Expr::poly && entry.n == 0) throw InvalidParameter("family JSON: poly entry needs n != 0");
      if (e.contains("coeff")) {
        const auto& c = e.at("coeff");
        entry.coeff = {c.at(0).get<double>(), c.at(1).get<double>()};
      }
      radius = std::max(radius, std::abs(entry.n));
      entries.push_back(entry);
    }
    if (entries.empty()) throw InvalidParameter("family JSON: no entries");

    Table table;
    if (doc.contains("table")) {
      for (const auto& [key, rows] : doc.at("table").items()) {
        double alpha = 0.0;
        try {
          alpha = std::stod(key);
        } catch (const std::exception&) {
          throw InvalidParameter("family JSON: table key \"" + key + "\" is not a number");
        }
        auto& row = table[alpha];
        for (const auto& r : rows) row[r.at(0).get<long>()] = {r.at(1).get<double>(), r.at(2).get<double>()};
      }
    }

    CoefficientFamily f;
    f.name = doc.value("name", std::string("custom"));
    f.is_symmetric = doc.value("symmetric", false);
    f.is_real = doc.value("real", false);
    f.support_radius = radius;
    f.rule = [entries, table](long n, double alpha) {
      Complex sum{};
      for (const auto& e : entries) {
        if (e.n != n) continue;
        switch (e.expr) {
          case Expr::exp: sum += e.coeff * std::exp(-alpha * static_cast<double>(std::abs(n))); break;
          case Expr::poly: sum += e.coeff * std::pow(static_cast<double>(std::abs(n)), -alpha); break;
          case Expr::table: sum += e.coeff * table_value(table, n, alpha); break;
        }
      }
      return sum;
    };

    std::vector<double> probe{1.0};
    if (!table.empty()) {
      probe.clear();
      for (const auto& kv : table) probe.push_back(kv.first);
    }
    validate_family_metadata(f, probe, radius);
    return f;
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("family JSON: ") + e.what());
  }
}

CoefficientFamily load_family_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open family file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_family_json(buf.str());
}

}  // namespace unclab
