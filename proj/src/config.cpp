#include "gkp/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gkp/errors.hpp"

namespace gkp {
namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double d = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    throw DomainError("config: " + key + " expects a number, got '" + value +
                      "'");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw DomainError("config: " + key + " expects an integer, got '" + value +
                      "'");
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt(double d) {
  std::ostringstream os;
  os.precision(17);
  os << d;
  return os.str();
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key,
                   const std::string& value) {
  if (key == "precision_bits")
    cfg.precision_bits = static_cast<unsigned>(parse_long(key, value));
  else if (key == "workers")
    cfg.workers = static_cast<unsigned>(parse_long(key, value));
  else if (key == "n_lo")
    cfg.n_lo = static_cast<int>(parse_long(key, value));
  else if (key == "n_hi")
    cfg.n_hi = static_cast<int>(parse_long(key, value));
  else if (key == "n")
    cfg.n_lo = cfg.n_hi = static_cast<int>(parse_long(key, value));
  else if (key == "p_max")
    cfg.p_max = value == "auto" ? 0.0 : parse_double(key, value);
  else if (key == "p_step")
    cfg.p_step = parse_double(key, value);
  else if (key == "xi_lo")
    cfg.xi_lo = parse_double(key, value);
  else if (key == "xi_hi")
    cfg.xi_hi = parse_double(key, value);
  else if (key == "rd_lo")
    cfg.rd_lo = parse_double(key, value);
  else if (key == "rd_hi")
    cfg.rd_hi = parse_double(key, value);
  else if (key == "eps_lo")
    cfg.eps_lo = parse_double(key, value);
  else if (key == "eps_hi")
    cfg.eps_hi = parse_double(key, value);
  else if (key == "eps_count")
    cfg.eps_count = static_cast<unsigned>(parse_long(key, value));
  else if (key == "upsilon")
    cfg.upsilon = split_list(value);
  else if (key == "out_dir")
    cfg.out_dir = value;
  else if (key == "cache_dir")
    cfg.cache_dir = value;
  else if (key == "format")
    cfg.format = value;
  else
    throw DomainError("config: unknown key '" + key + "'");
  cfg.given.push_back(key + "=" + value);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open '" + path + "'");
  RunConfig cfg;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config: line " + std::to_string(lineno) +
                        " is not key=value: '" + line + "'");
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void validate(const RunConfig& cfg) {
  if (cfg.precision_bits < 64 || cfg.precision_bits > 16384)
    throw DomainError("config: precision_bits must lie in [64, 16384]");
  if (cfg.workers < 1 || cfg.workers > 256)
    throw DomainError("config: workers must lie in [1, 256]");
  if (cfg.n_lo < 7 || cfg.n_hi < cfg.n_lo || cfg.n_hi > 64)
    throw DomainError("config: need 7 <= n_lo <= n_hi <= 64");
  if (cfg.p_max < 0.0)
    throw DomainError("config: p_max must be nonnegative (0 = auto)");
  if (!(cfg.p_step > 0.0) || (cfg.p_max > 0.0 && cfg.p_step >= cfg.p_max))
    throw DomainError("config: need 0 < p_step < p_max");
  if (cfg.xi_lo < 0.0 || !(cfg.xi_hi > cfg.xi_lo))
    throw DomainError("config: need 0 <= xi_lo < xi_hi");
  if (cfg.rd_lo < 0.0 || !(cfg.rd_hi > cfg.rd_lo))
    throw DomainError("config: need 0 <= rd_lo < rd_hi");
  if (!(cfg.eps_lo > 0.0) || !(cfg.eps_hi > cfg.eps_lo) || cfg.eps_count < 2)
    throw DomainError("config: need 0 < eps_lo < eps_hi and eps_count >= 2");
  if (cfg.upsilon.empty())
    throw DomainError("config: upsilon list must not be empty");
  for (const auto& u : cfg.upsilon) {
    if (u.size() > 2 && u.substr(u.size() - 2) == "dB") {
      double db = parse_double("upsilon", u.substr(0, u.size() - 2));
      if (!(db > 0.0))
        throw DomainError("config: upsilon dB token must be positive");
    } else {
      double v = parse_double("upsilon", u);
      if (!(v > 0.0) || !(v < 1.0))
        throw DomainError("config: upsilon value must lie in (0, 1)");
    }
  }
  if (cfg.out_dir.empty()) throw DomainError("config: out_dir must be set");
  if (cfg.format != "csv" && cfg.format != "json")
    throw DomainError("config: format must be csv or json");
}

std::vector<std::string> render(const RunConfig& cfg) {
  std::vector<std::string> lines;
  lines.push_back("precision_bits=" + std::to_string(cfg.precision_bits));
  lines.push_back("workers=" + std::to_string(cfg.workers));
  lines.push_back("n_lo=" + std::to_string(cfg.n_lo));
  lines.push_back("n_hi=" + std::to_string(cfg.n_hi));
  lines.push_back("p_max=" + (cfg.p_max > 0.0 ? fmt(cfg.p_max)
                                              : std::string("auto")));
  lines.push_back("p_step=" + fmt(cfg.p_step));
  lines.push_back("xi_lo=" + fmt(cfg.xi_lo));
  lines.push_back("xi_hi=" + fmt(cfg.xi_hi));
  lines.push_back("rd_lo=" + fmt(cfg.rd_lo));
  lines.push_back("rd_hi=" + fmt(cfg.rd_hi));
  lines.push_back("eps_lo=" + fmt(cfg.eps_lo));
  lines.push_back("eps_hi=" + fmt(cfg.eps_hi));
  lines.push_back("eps_count=" + std::to_string(cfg.eps_count));
  std::string ulist;
  for (const auto& u : cfg.upsilon) {
    if (!ulist.empty()) ulist += ",";
    ulist += u;
  }
  lines.push_back("upsilon=" + ulist);
  lines.push_back("out_dir=" + cfg.out_dir);
  lines.push_back("cache_dir=" + cfg.cache_dir);
  lines.push_back("format=" + cfg.format);
  return lines;
}

}  // namespace gkp
