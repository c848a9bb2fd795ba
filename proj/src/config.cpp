#include "specpol/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace specpol {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw ConfigError(join(path, k), "unknown field");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

std::int64_t get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

PiMultiple get_pi_multiple(const json& j, const std::string& path) {
  if (j.is_number_integer() && j.get<std::int64_t>() == 0) return PiMultiple(0);
  const std::string text = get_string(j, path);
  try {
    return PiMultiple::parse(text);
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
}

Complex get_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {static_cast<Real>(get_number(j, path)), 0};
  if (j.is_array() && j.size() == 2) {
    return {static_cast<Real>(get_number(j[0], index(path, 0))), static_cast<Real>(get_number(j[1], index(path, 1)))};
  }
  throw ConfigError(path, "expected a number or a [re, im] pair");
}

PiecewiseSymbol parse_symbol(const json& j, const std::string& path) {
  require_object(j, path, {"E", "inside", "outside", "pieces"});
  try {
    if (j.contains("pieces")) {
      if (j.contains("E")) throw ConfigError(path, "give either E or pieces, not both");
      const json& arr = j["pieces"];
      const std::string ppath = join(path, "pieces");
      if (!arr.is_array() || arr.empty()) throw ConfigError(ppath, "expected a non-empty array");
      std::vector<PiecewiseSymbol::Piece> pieces;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string ip = index(ppath, i);
        require_object(arr[i], ip, {"from", "to", "value"});
        for (const char* key : {"from", "to", "value"}) {
          if (!arr[i].contains(key)) throw ConfigError(join(ip, key), "missing field");
        }
        pieces.push_back({get_pi_multiple(arr[i]["from"], join(ip, "from")), get_pi_multiple(arr[i]["to"], join(ip, "to")),
                          static_cast<Real>(get_number(arr[i]["value"], join(ip, "value")))});
      }
      return PiecewiseSymbol(std::move(pieces));
    }
    if (!j.contains("E")) throw ConfigError(path, "missing field E (or pieces)");
    const json& arr = j["E"];
    const std::string epath = join(path, "E");
    if (!arr.is_array()) throw ConfigError(epath, "expected an array of [from, to] pairs");
    std::vector<IntervalSet::Interval> ivs;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ip = index(epath, i);
      if (!arr[i].is_array() || arr[i].size() != 2) throw ConfigError(ip, "expected a [from, to] pair");
      ivs.emplace_back(get_pi_multiple(arr[i][0], index(ip, 0)), get_pi_multiple(arr[i][1], index(ip, 1)));
    }
    IntervalSet E;
    try {
      E = IntervalSet(std::move(ivs));
    } catch (const InvalidArgument& e) {
      throw ConfigError(epath, e.what());
    }
    const Real inside = j.contains("inside") ? get_number(j["inside"], join(path, "inside")) : 1.0;
    const Real outside = j.contains("outside") ? get_number(j["outside"], join(path, "outside")) : -1.0;
    return PiecewiseSymbol::indicator(E, inside, outside);
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
}

RankOneTerm parse_rank_one(const json& j, const std::string& path) {
  require_object(j, path, {"a", "psi"});
  if (!j.contains("a")) throw ConfigError(join(path, "a"), "missing field");
  const Real a = get_number(j["a"], join(path, "a"));
  const json psi = j.contains("psi") ? j["psi"] : json("constant");
  const std::string ppath = join(path, "psi");
  try {
    if (psi.is_string()) {
      if (psi.get<std::string>() != "constant") throw ConfigError(ppath, "expected \"constant\" or a coefficient list");
      return RankOneTerm::constant(a);
    }
    if (!psi.is_array()) throw ConfigError(ppath, "expected \"constant\" or a coefficient list");
    std::vector<Complex> coeffs;
    for (std::size_t i = 0; i < psi.size(); ++i) coeffs.push_back(get_complex(psi[i], index(ppath, i)));
    return RankOneTerm(a, std::move(coeffs));
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

OutputFormat format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw InvalidArgument("unknown output format '" + s + "' (expected csv or json)");
}

std::vector<double> ExperimentConfig::target_eigenvalues() const {
  return lambdas.empty() ? model.discrete_eigenvalues() : lambdas;
}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    // nlohmann reports "... at line L, column C: ..."
    const std::string msg = e.what();
    std::string where = "syntax";
    std::string detail = msg;
    const auto at = msg.find("at line ");
    if (at != std::string::npos) {
      const auto colon = msg.find(": ", at);
      where = msg.substr(at + 3, colon == std::string::npos ? std::string::npos : colon - at - 3);
      if (colon != std::string::npos) detail = msg.substr(colon + 2);
    }
    throw ConfigError(where, detail);
  }

  require_object(root, "", {"operator", "n_list", "lambda", "epsilon", "gap_delta", "match_tol", "max_half_width",
                            "precision", "extended_max_dim", "descent", "grid", "output"});
  ExperimentConfig cfg;

  if (!root.contains("operator")) throw ConfigError("operator", "missing field");
  const json& op = root["operator"];
  require_object(op, "operator", {"label", "symbol", "rank_one", "cutoff_scale"});
  if (!op.contains("symbol")) throw ConfigError("operator.symbol", "missing field");
  cfg.model.symbol = parse_symbol(op["symbol"], "operator.symbol");
  if (op.contains("rank_one")) cfg.model.perturbation = parse_rank_one(op["rank_one"], "operator.rank_one");
  if (op.contains("label")) cfg.model.label = get_string(op["label"], "operator.label");
  if (op.contains("cutoff_scale")) {
    cfg.model.cutoff_scale = get_integer(op["cutoff_scale"], "operator.cutoff_scale");
    if (cfg.model.cutoff_scale < 1) throw ConfigError("operator.cutoff_scale", "must be >= 1");
  }

  if (!root.contains("n_list")) throw ConfigError("n_list", "missing field");
  const json& nl = root["n_list"];
  if (!nl.is_array() || nl.empty()) throw ConfigError("n_list", "expected a non-empty array of integers");
  for (std::size_t i = 0; i < nl.size(); ++i) {
    const auto n = get_integer(nl[i], index("n_list", i));
    if (n < 0) throw ConfigError(index("n_list", i), "must be >= 0");
    if (!cfg.n_list.empty() && n <= cfg.n_list.back()) throw ConfigError(index("n_list", i), "n_list must be ascending");
    cfg.n_list.push_back(n);
  }

  if (root.contains("lambda")) {
    const json& l = root["lambda"];
    if (l.is_number()) {
      cfg.lambdas.push_back(get_number(l, "lambda"));
    } else if (l.is_array()) {
      for (std::size_t i = 0; i < l.size(); ++i) cfg.lambdas.push_back(get_number(l[i], index("lambda", i)));
    } else {
      throw ConfigError("lambda", "expected a number or an array of numbers");
    }
  }
  if (root.contains("epsilon")) {
    cfg.epsilon = get_number(root["epsilon"], "epsilon");
    if (!(cfg.epsilon > 0 && cfg.epsilon < 1)) throw ConfigError("epsilon", "must lie in (0, 1)");
  }
  if (root.contains("gap_delta")) {
    cfg.gap_delta = get_number(root["gap_delta"], "gap_delta");
    if (!(cfg.gap_delta >= 0)) throw ConfigError("gap_delta", "must be >= 0");
  }
  if (root.contains("match_tol")) {
    cfg.match_tol = get_number(root["match_tol"], "match_tol");
    if (!(cfg.match_tol >= 0)) throw ConfigError("match_tol", "must be >= 0");
  }
  if (root.contains("max_half_width") && !root["max_half_width"].is_null()) {
    cfg.max_half_width = get_number(root["max_half_width"], "max_half_width");
    if (!(*cfg.max_half_width >= 0)) throw ConfigError("max_half_width", "must be >= 0");
  }
  if (root.contains("precision")) {
    try {
      cfg.spectrum.precision = precision_from_string(get_string(root["precision"], "precision"));
    } catch (const InvalidArgument& e) {
      throw ConfigError("precision", e.what());
    }
  }
  if (root.contains("extended_max_dim")) {
    cfg.spectrum.extended_max_dim = get_integer(root["extended_max_dim"], "extended_max_dim");
  }

  if (root.contains("descent")) {
    const json& d = root["descent"];
    require_object(d, "descent", {"step0", "shrink", "tol", "max_iter"});
    if (d.contains("step0")) cfg.descent.step0 = get_number(d["step0"], "descent.step0");
    if (d.contains("shrink")) cfg.descent.shrink = get_number(d["shrink"], "descent.shrink");
    if (d.contains("tol")) cfg.descent.tol = get_number(d["tol"], "descent.tol");
    if (d.contains("max_iter")) cfg.descent.max_iter = static_cast<int>(get_integer(d["max_iter"], "descent.max_iter"));
    if (!(cfg.descent.step0 > 0)) throw ConfigError("descent.step0", "must be > 0");
    if (!(cfg.descent.shrink > 0 && cfg.descent.shrink < 1)) throw ConfigError("descent.shrink", "must lie in (0, 1)");
    if (!(cfg.descent.tol > 0)) throw ConfigError("descent.tol", "must be > 0");
    if (cfg.descent.max_iter <= 0) throw ConfigError("descent.max_iter", "must be > 0");
  }

  if (root.contains("grid")) {
    const json& g = root["grid"];
    require_object(g, "grid", {"re", "im", "nx", "ny"});
    auto range = [&](const char* key, double& lo, double& hi) {
      if (!g.contains(key)) return;
      const std::string p = join("grid", key);
      if (!g[key].is_array() || g[key].size() != 2) throw ConfigError(p, "expected [min, max]");
      lo = get_number(g[key][0], index(p, 0));
      hi = get_number(g[key][1], index(p, 1));
      if (!(lo < hi)) throw ConfigError(p, "min must be below max");
    };
    range("re", cfg.grid.re_min, cfg.grid.re_max);
    range("im", cfg.grid.im_min, cfg.grid.im_max);
    if (g.contains("nx")) cfg.grid_nx = static_cast<int>(get_integer(g["nx"], "grid.nx"));
    if (g.contains("ny")) cfg.grid_ny = static_cast<int>(get_integer(g["ny"], "grid.ny"));
    if (cfg.grid_nx < 2) throw ConfigError("grid.nx", "must be >= 2");
    if (cfg.grid_ny < 2) throw ConfigError("grid.ny", "must be >= 2");
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    require_object(o, "output", {"format", "precision", "rounding"});
    if (o.contains("format")) {
      try {
        cfg.output.format = format_from_string(get_string(o["format"], "output.format"));
      } catch (const InvalidArgument& e) {
        throw ConfigError("output.format", e.what());
      }
    }
    if (o.contains("precision")) {
      cfg.output.precision = static_cast<int>(get_integer(o["precision"], "output.precision"));
      if (cfg.output.precision < 6 || cfg.output.precision > 17) {
        throw ConfigError("output.precision", "must lie in [6, 17]");
      }
    }
    if (o.contains("rounding")) {
      const std::string r = get_string(o["rounding"], "output.rounding");
      if (r != "nearest" && r != "truncate") throw ConfigError("output.rounding", "expected nearest or truncate");
      cfg.output.truncate = r == "truncate";
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
}

}  // namespace specpol
