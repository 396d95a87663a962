#include "cvdiscord/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cvdiscord {

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace((unsigned char)s[b])) ++b;
  while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace((unsigned char)c) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double parse_number(const std::string& tok) {
  if (tok == "pi") return std::numbers::pi;
  if (tok.rfind("pi/", 0) == 0) {
    const std::string denom = tok.substr(3);
    size_t pos = 0;
    const double d = std::stod(denom, &pos);
    if (pos != denom.size() || d == 0.0) throw std::invalid_argument("bad number: " + tok);
    return std::numbers::pi / d;
  }
  size_t pos = 0;
  const double v = std::stod(tok, &pos);
  if (pos != tok.size()) throw std::invalid_argument("bad number: " + tok);
  return v;
}

// either an explicit list or an inclusive range lo:hi:step
std::vector<double> parse_list(const std::string& value) {
  std::vector<double> out;
  for (const std::string& tok : split_tokens(value)) {
    const size_t c1 = tok.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_number(tok));
      continue;
    }
    const size_t c2 = tok.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("bad range: " + tok);
    const double lo = parse_number(tok.substr(0, c1));
    const double hi = parse_number(tok.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_number(tok.substr(c2 + 1));
    if (!(step > 0.0)) throw std::invalid_argument("range step must be positive: " + tok);
    const int count = (int)std::lround((hi - lo) / step) + 1;
    if (count < 1 || count > 100000) throw std::invalid_argument("bad range extent: " + tok);
    for (int i = 0; i < count; ++i) out.push_back(lo + i * step);
  }
  return out;
}

bool parse_bool(const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw std::invalid_argument("bad boolean: " + value);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string sanitize_error(std::string msg) {
  for (char& c : msg)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return msg;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sweep_config_text(ss.str());
}

SweepConfig parse_sweep_config_text(std::string_view text) {
  SweepConfig cfg;
  cfg.raw_text = std::string(text);
  bool have_strength = false;
  std::string strength_key;

  std::istringstream in(cfg.raw_text);
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key = value: " + stripped);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    if (key == "schema_version") {
      cfg.schema_version = (int)parse_number(value);
      if (cfg.schema_version != 1)
        throw std::invalid_argument("unsupported schema_version: " + value);
    } else if (key == "family") {
      if (value == "sts") cfg.family = StateFamily::Sts;
      else if (value == "mts") cfg.family = StateFamily::Mts;
      else throw std::invalid_argument("family must be sts or mts");
    } else if (key == "n1") {
      cfg.n1 = parse_list(value);
    } else if (key == "n2") {
      if (value == "same") {
        cfg.n2_same = true;
      } else {
        cfg.n2 = parse_list(value);
        cfg.n2_same = false;
      }
    } else if (key == "q") {
      cfg.q = parse_list(value);
      cfg.n2_same = false;
    } else if (key == "lambda" || key == "phi") {
      cfg.strength = parse_list(value);
      have_strength = true;
      strength_key = key;
    } else if (key == "alpha") {
      cfg.alpha = parse_list(value);
    } else if (key == "r") {
      cfg.r = parse_list(value);
    } else if (key == "eps") {
      cfg.eps = parse_number(value);
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "timing") {
      cfg.timing = parse_bool(value);
    } else if (key == "unsafe") {
      cfg.unsafe = parse_bool(value);
    } else if (key == "threads") {
      cfg.threads = (int)parse_number(value);
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  if (have_strength) {
    const bool sts = cfg.family == StateFamily::Sts;
    if ((sts && strength_key != "lambda") || (!sts && strength_key != "phi"))
      throw std::invalid_argument("strength key does not match family");
  }
  return cfg;
}

void check_ranges(const SweepConfig& cfg) {
  if (cfg.unsafe) return;
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("outside validated range (" + what + "); use unsafe = on");
  };
  for (double v : cfg.n1)
    if (v < 0.0 || v > 2.0) fail("n1 in [0, 2]");
  for (double v : cfg.n2)
    if (v < 0.0 || v > 2.0) fail("n2 in [0, 2]");
  for (double v : cfg.q)
    if (v < 0.0) fail("q >= 0");
  for (double v : cfg.strength) {
    if (cfg.family == StateFamily::Sts && (v < 0.0 || v > 0.6)) fail("lambda in [0, 0.6]");
    if (cfg.family == StateFamily::Mts && (v < 0.0 || v > std::numbers::pi / 2 + 1e-12))
      fail("phi in [0, pi/2]");
  }
  for (double v : cfg.alpha)
    if (std::abs(v) > 8.0) fail("|alpha| <= 8");
  for (double v : cfg.r)
    if (std::abs(v) > 0.6) fail("|r| <= 0.6");
  if (!(cfg.eps > 0.0 && cfg.eps <= 1e-3)) fail("eps in (0, 1e-3]");
}

std::vector<GridPoint> expand_grid(const SweepConfig& cfg) {
  std::vector<GridPoint> points;
  std::vector<double> n2_axis;
  enum class N2Mode { Same, List, Ratio } mode;
  if (!cfg.q.empty()) {
    mode = N2Mode::Ratio;
    n2_axis = cfg.q;
  } else if (!cfg.n2_same && !cfg.n2.empty()) {
    mode = N2Mode::List;
    n2_axis = cfg.n2;
  } else {
    mode = N2Mode::Same;
    n2_axis = {0.0};  // placeholder, single iteration
  }

  for (double n1 : cfg.n1)
    for (double axis : n2_axis) {
      const double n2 = mode == N2Mode::Same   ? n1
                        : mode == N2Mode::Ratio ? axis * n1
                                                : axis;
      for (double s : cfg.strength) {
        const TwoModeState state = cfg.family == StateFamily::Sts
                                       ? TwoModeState::sts(n1, n2, s)
                                       : TwoModeState::mts(n1, n2, s);
        for (double a : cfg.alpha)
          for (double rr : cfg.r) points.push_back({state, a, rr});
      }
    }
  return points;
}

SweepRecord compute_record(const GridPoint& point, double eps, bool timing) {
  SweepRecord rec;
  rec.family = point.state.family;
  rec.n1 = point.state.n1;
  rec.n2 = point.state.n2;
  (point.state.family == StateFamily::Sts ? rec.lambda : rec.phi) = point.state.strength;
  rec.alpha = point.alpha;
  rec.r = point.r;
  rec.eps = eps;

  const auto start = std::chrono::steady_clock::now();
  try {
    const MeasurementBasis basis{{point.alpha, 0.0}, point.r};
    const StandardFormCM cm = standard_form(point.state);
    const DiscordResult dr = non_gaussian_discord(point.state, basis, eps);
    const GeometricResult geo = non_gaussian_geometric_discord(point.state, basis, eps);
    rec.cutoff = dr.cutoff.dim;
    rec.trace_err = dr.cutoff.trace_error;
    rec.mi = dr.mutual_information;
    rec.dg = dr.gaussian_discord;
    rec.dng = dr.non_gaussian_discord;
    rec.geo_g = gaussian_geometric_discord(cm);
    rec.geo_ng = geo.value;
    rec.ent_err_bound = dr.entropy_error_bound;
  } catch (const std::exception& e) {
    rec.error = sanitize_error(e.what());
  }
  if (timing) {
    rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  }
  return rec;
}

std::string render_csv(const std::vector<SweepRecord>& records) {
  std::string out{kCsvHeader};
  out.push_back('\n');
  for (const SweepRecord& r : records) {
    out += r.family == StateFamily::Sts ? "sts" : "mts";
    for (double v : {r.n1, r.n2, r.lambda, r.phi, r.alpha, r.r, r.eps}) {
      out.push_back(',');
      out += format_double(v);
    }
    out.push_back(',');
    out += std::to_string(r.cutoff);
    for (double v : {r.trace_err, r.mi, r.dg, r.dng, r.geo_g, r.geo_ng, r.ent_err_bound}) {
      out.push_back(',');
      out += format_double(v);
    }
    out.push_back(',');
    out += std::to_string(r.wall_ms);
    out.push_back(',');
    out += r.error;
    out.push_back('\n');
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string version_string() { return CVDISCORD_VERSION; }

int resolve_threads(int configured) {
  if (const char* env = std::getenv("CVDISCORD_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? (int)hw : 1;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
  check_ranges(cfg);
  const std::vector<GridPoint> points = expand_grid(cfg);
  std::vector<SweepRecord> records(points.size());

  const int threads = std::max(1, std::min<int>(resolve_threads(cfg.threads),
                                                std::max<size_t>(points.size(), 1)));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= points.size()) break;
      records[i] = compute_record(points[i], cfg.eps, cfg.timing);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + cfg.output);
  out << render_csv(records);
  out.close();

  const std::string hashed = cfg.raw_text;
  char hash_hex[32];
  std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                (unsigned long long)fnv1a64(hashed));
  nlohmann::json manifest{{"schema_version", cfg.schema_version},
                          {"config_hash", hash_hex},
                          {"code_version", version_string()},
                          {"eps", cfg.eps},
                          {"rows", records.size()},
                          {"output", cfg.output}};
  std::ofstream mout(cfg.output + ".manifest.json", std::ios::binary | std::ios::trunc);
  if (!mout) throw std::runtime_error("cannot write manifest for " + cfg.output);
  mout << manifest.dump(2) << '\n';
  return records;
}

}  // namespace cvdiscord
