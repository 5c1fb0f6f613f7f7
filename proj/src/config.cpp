#include "rimfit/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include "rimfit/errors.hpp"

namespace rimfit {

void Config::validate() const {
  hp.validate();
  if (!(canny.sigma > 0)) throw BadConfig("canny_sigma must be positive");
  if (!(canny.low_quantile >= 0 && canny.low_quantile <= canny.high_quantile && canny.high_quantile <= 1)) {
    throw BadConfig("canny quantiles must satisfy 0 <= low <= high <= 1");
  }
  if (!(detector_floor >= 0 && detector_floor <= 1)) throw BadConfig("detector_floor must be in [0, 1]");
  if (n_samples < 3) throw BadConfig("n_samples must be >= 3");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw BadConfig("bad value for '" + std::string(key) + "': '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw BadConfig("bad boolean for '" + std::string(key) + "': '" + std::string(text) + "'");
}

template <typename T>
std::string number_text(T value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

struct Field {
  const char* key;
  std::function<void(Config&, std::string_view)> read;
  std::function<std::string(const Config&)> write;
};

#define RIMFIT_NUMBER(KEY, EXPR, TYPE)                                                   \
  Field {                                                                                \
    KEY, [](Config& c, std::string_view v) { c.EXPR = parse_number<TYPE>(KEY, v); },   \
        [](const Config& c) { return number_text<TYPE>(c.EXPR); }                       \
  }
#define RIMFIT_BOOL(KEY, EXPR)                                                  \
  Field {                                                                       \
    KEY, [](Config& c, std::string_view v) { c.EXPR = parse_bool(KEY, v); },   \
        [](const Config& c) { return std::string(c.EXPR ? "true" : "false"); } \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      RIMFIT_NUMBER("g_m", hp.g_m, double),
      RIMFIT_NUMBER("s", hp.s, int),
      RIMFIT_NUMBER("epsilon", hp.epsilon, double),
      RIMFIT_NUMBER("l_min", hp.l_min, int),
      RIMFIT_NUMBER("d_chord", hp.d_chord, double),
      RIMFIT_NUMBER("h_gap", hp.h_gap, double),
      RIMFIT_NUMBER("m_score", hp.m_score, double),
      RIMFIT_NUMBER("a_p", hp.a_p, double),
      RIMFIT_NUMBER("d_f", hp.d_f, double),
      RIMFIT_NUMBER("canny_sigma", canny.sigma, double),
      RIMFIT_NUMBER("canny_low_quantile", canny.low_quantile, double),
      RIMFIT_NUMBER("canny_high_quantile", canny.high_quantile, double),
      RIMFIT_NUMBER("detector_floor", detector_floor, double),
      RIMFIT_BOOL("strict_containment", strict_containment),
      RIMFIT_BOOL("squared_chord", squared_chord),
      RIMFIT_BOOL("squared_food_distance", squared_food_distance),
      RIMFIT_BOOL("chamfer_normalized", chamfer_normalized),
      RIMFIT_NUMBER("n_samples", n_samples, int),
  };
  return table;
}

#undef RIMFIT_NUMBER
#undef RIMFIT_BOOL

}  // namespace

Config parse_config(std::string_view text) {
  Config config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw BadConfig("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return key == f.key; });
    if (it == table.end()) {
      throw BadConfig("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    if (!seen.emplace(key).second) {
      throw BadConfig("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    }
    it->read(config, value);
  }
  config.validate();
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BadConfig(path.string() + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const BadConfig& e) {
    throw BadConfig(path.string() + ": " + e.what());
  }
}

std::string format_config(const Config& config) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.write(config);
    out += '\n';
  }
  return out;
}

void save_config(const Config& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw BadConfig(path.string() + ": cannot write");
  out << format_config(config);
}

}  // namespace rimfit
