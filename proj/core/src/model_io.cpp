#include "she/model_io.hpp"

#include <cstdio>
#include <set>
#include <string>

#include "json.hpp"
#include "she/error.hpp"

namespace she {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::Config, path + ": " + what);
}

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) config_error(path_, "expected an object");
  }

  double number(const char* key) {
    const json& v = field(key);
    if (!v.is_number()) config_error(path_ + "." + key, "expected a number");
    return v.get<double>();
  }
  double number_or(const char* key, double fallback) { return has(key) ? number(key) : fallback; }

  int integer(const char* key) {
    const json& v = field(key);
    if (!v.is_number_integer()) config_error(path_ + "." + key, "expected an integer");
    return v.get<int>();
  }
  int integer_or(const char* key, int fallback) { return has(key) ? integer(key) : fallback; }

  std::string string(const char* key) {
    const json& v = field(key);
    if (!v.is_string()) config_error(path_ + "." + key, "expected a string");
    return v.get<std::string>();
  }

  bool has(const char* key) const { return node_.contains(key); }
  const json& field(const char* key) {
    seen_.insert(key);
    if (!node_.contains(key)) config_error(path_ + "." + key, "missing required field");
    return node_.at(key);
  }
  std::string child(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) config_error(path_ + "." + key, "unknown field");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

json correction_to_json(const Correction& c) {
  switch (c.kind) {
    case Correction::Kind::None: return json{{"kind", "none"}};
    case Correction::Kind::Power: return json{{"kind", "power"}, {"coefficient", c.coefficient}, {"order", c.order}};
    case Correction::Kind::SignedPower:
      return json{{"kind", "signed_power"}, {"coefficient", c.coefficient}, {"order", c.order}};
    case Correction::Kind::Custom: break;
  }
  throw Error(ErrorKind::NotSerializable, "custom correction callables cannot be serialized");
}

Correction correction_from_json(const json& node, const std::string& path) {
  Reader r(node, path);
  const std::string kind = r.string("kind");
  Correction c;
  if (kind == "none") {
    c = Correction::none();
  } else if (kind == "power") {
    c = Correction::power(r.number("coefficient"), r.number("order"));
  } else if (kind == "signed_power") {
    c = Correction::signed_power(r.number("coefficient"), r.number("order"));
  } else {
    config_error(path + ".kind", "unknown correction kind '" + kind + "'");
  }
  r.finish();
  return c;
}

Correction optional_correction(Reader& r, const char* key) {
  if (!r.has(key)) return Correction::none();
  return correction_from_json(r.field(key), r.child(key));
}

json peak_to_json(const PeakShape& peak) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, QuadraticPeak>) {
          return {{"kind", "quadratic"}, {"curvature", p.curvature}, {"remainder", correction_to_json(p.remainder)}};
        } else if constexpr (std::is_same_v<T, PowerCuspPeak>) {
          return {{"kind", "power_cusp"},
                  {"alpha", p.alpha},
                  {"a_minus", p.a_minus},
                  {"a_plus", p.a_plus},
                  {"remainder", correction_to_json(p.remainder)}};
        } else {
          return {{"kind", "power_c1"}, {"alpha", p.alpha}, {"a_minus", p.a_minus}, {"a_plus", p.a_plus}};
        }
      },
      peak);
}

PeakShape peak_from_json(const json& node, const std::string& path) {
  Reader r(node, path);
  const std::string kind = r.string("kind");
  PeakShape out;
  if (kind == "quadratic") {
    QuadraticPeak p;
    p.curvature = r.number("curvature");
    p.remainder = optional_correction(r, "remainder");
    out = p;
  } else if (kind == "power_cusp") {
    PowerCuspPeak p;
    p.alpha = r.number("alpha");
    p.a_minus = r.number("a_minus");
    p.a_plus = r.number("a_plus");
    p.remainder = optional_correction(r, "remainder");
    out = p;
  } else if (kind == "power_c1") {
    out = PowerC1Peak{r.number("alpha"), r.number("a_minus"), r.number("a_plus")};
  } else {
    config_error(path + ".kind", "unknown peak kind '" + kind + "'");
  }
  r.finish();
  return out;
}

json weight_to_json(const SurfaceWeightShape& weight) {
  return std::visit(
      [](const auto& w) -> json {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, SmoothPowerWeight>) {
          return {{"kind", "smooth_power"}, {"k", w.k}, {"gk", w.gk}, {"correction", correction_to_json(w.correction)}};
        } else if constexpr (std::is_same_v<T, TwoSidedCuspWeight>) {
          return {{"kind", "two_sided_cusp"},
                  {"k", w.k},
                  {"g_plus", w.g_plus},
                  {"g_minus", w.g_minus},
                  {"correction", correction_to_json(w.correction)}};
        } else if constexpr (std::is_same_v<T, C1MixedWeight>) {
          return {{"kind", "c1_mixed"}, {"g1", w.g1}, {"g_plus", w.g_plus}, {"g_minus", w.g_minus}, {"alpha", w.alpha}};
        } else {
          return {{"kind", "fourier_tail"},
                  {"beta0", w.beta0},
                  {"half_width", w.half_width},
                  {"taper_order", w.taper_order}};
        }
      },
      weight);
}

SurfaceWeightShape weight_from_json(const json& node, const std::string& path) {
  Reader r(node, path);
  const std::string kind = r.string("kind");
  SurfaceWeightShape out;
  if (kind == "smooth_power") {
    SmoothPowerWeight w;
    w.k = r.integer("k");
    w.gk = r.number("gk");
    w.correction = optional_correction(r, "correction");
    out = w;
  } else if (kind == "two_sided_cusp") {
    TwoSidedCuspWeight w;
    w.k = r.number("k");
    w.g_plus = r.number("g_plus");
    w.g_minus = r.number("g_minus");
    w.correction = optional_correction(r, "correction");
    out = w;
  } else if (kind == "c1_mixed") {
    out = C1MixedWeight{r.number("g1"), r.number("g_plus"), r.number("g_minus"), r.number("alpha")};
  } else if (kind == "fourier_tail") {
    FourierTailWeight w;
    w.beta0 = r.number_or("beta0", w.beta0);
    w.half_width = r.number_or("half_width", w.half_width);
    w.taper_order = r.integer_or("taper_order", w.taper_order);
    out = w;
  } else {
    config_error(path + ".kind", "unknown weight kind '" + kind + "'");
  }
  r.finish();
  return out;
}

json spec_to_json_value(const PlanetSpec& spec) {
  if (spec.radial_density) {
    throw Error(ErrorKind::NotSerializable, "custom radial density cannot be serialized");
  }
  return json{{"schema_version", spec.schema_version},
              {"radius", spec.radius},
              {"theta0", spec.theta0},
              {"delta", spec.delta},
              {"delta1", spec.delta1},
              {"inner_fraction", spec.inner_fraction},
              {"gravitational_constant", spec.gravitational_constant},
              {"peak", peak_to_json(spec.peak)},
              {"weight", weight_to_json(spec.weight)}};
}

}  // namespace

std::string planet_spec_to_json(const PlanetSpec& spec) { return spec_to_json_value(spec).dump(); }

PlanetSpec planet_spec_from_json(std::string_view text, std::string_view path) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string(path), std::string("malformed JSON: ") + e.what());
  }
  const std::string p(path);
  Reader r(root, p);
  PlanetSpec spec;
  spec.schema_version = r.integer("schema_version");
  if (spec.schema_version != kPlanetSchemaVersion) {
    config_error(p + ".schema_version", "unsupported version " + std::to_string(spec.schema_version));
  }
  spec.radius = r.number_or("radius", spec.radius);
  spec.theta0 = r.number("theta0");
  spec.delta = r.number_or("delta", spec.delta);
  spec.delta1 = r.number_or("delta1", spec.delta1);
  spec.inner_fraction = r.number_or("inner_fraction", spec.inner_fraction);
  spec.gravitational_constant = r.number_or("gravitational_constant", spec.gravitational_constant);
  spec.peak = peak_from_json(r.field("peak"), r.child("peak"));
  spec.weight = weight_from_json(r.field("weight"), r.child("weight"));
  r.finish();
  return spec;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t spec_fingerprint(const PlanetSpec& spec) {
  PlanetSpec copy = spec;
  std::string marker;
  auto strip = [&marker](Correction& c, const char* where) {
    if (c.kind == Correction::Kind::Custom) {
      marker += std::string("|custom:") + where + ":" + std::to_string(c.order);
      c = Correction::none();
    }
  };
  std::visit(
      [&](auto& p) {
        if constexpr (requires { p.remainder; }) strip(p.remainder, "peak");
      },
      copy.peak);
  std::visit(
      [&](auto& w) {
        if constexpr (requires { w.correction; }) strip(w.correction, "weight");
      },
      copy.weight);
  if (copy.radial_density) {
    marker += "|custom:radial_density";
    copy.radial_density = nullptr;
  }
  return fnv1a64(spec_to_json_value(copy).dump() + marker);
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace she
