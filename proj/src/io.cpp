#include "nhdqpt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "nhdqpt/errors.hpp"

namespace nhdqpt {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) throw std::logic_error("CsvTable: row width mismatch");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto put_line = [&out](const auto& cells, auto&& fmt) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += fmt(cells[i]);
    }
    out += '\n';
  };
  put_line(header_, [](const std::string& s) { return s; });
  for (const auto& row : rows_) {
    put_line(row, [](const Cell& c) {
      return std::visit(
          [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else return v;
          },
          c);
    });
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string_view status_name(CellStatus status) {
  switch (status) {
    case CellStatus::gapped: return "gapped";
    case CellStatus::boundary: return "boundary";
    case CellStatus::invalid: return "invalid";
  }
  return "invalid";
}

std::string_view range_name(BzRange range) {
  return range == BzRange::reduced ? "reduced" : "full";
}

using nlohmann::ordered_json;

ordered_json to_json(const WindingResult& w) {
  return {{"w", w.w},
          {"method", w.method == WindingMethod::angle_integration ? "angle_integration"
                                                                  : "ep_enclosure"},
          {"grid_size", w.grid_size},
          {"imaginary_closure", w.imaginary_closure}};
}

ordered_json to_json(const CriticalSet& c) {
  ordered_json momenta = ordered_json::array();
  for (std::size_t i = 0; i < c.momenta.size(); ++i) {
    const auto& m = c.momenta[i];
    ordered_json times = ordered_json::array();
    for (int n = c.n_min; n <= c.n_max; ++n) times.push_back(c.time(i, n));
    momenta.push_back({{"k", m.k}, {"energy", m.energy}, {"period", m.period}, {"times", times}});
  }
  return {{"n_min", c.n_min},
          {"n_max", c.n_max},
          {"momenta", momenta},
          {"unobservable", c.unobservable},
          {"distinct_periods", c.distinct_periods()}};
}

ordered_json to_json(const CorrespondenceRow& r) {
  return {{"condition", r.condition},
          {"geometric_picture", r.geometric_picture},
          {"w", r.w},
          {"critical_structure", r.critical_structure},
          {"periods", r.periods},
          {"momenta", r.momenta}};
}

ordered_json to_json(const DqptReport& r) {
  return {{"family", family_name(r.family)},
          {"winding", to_json(r.winding)},
          {"critical", to_json(r.critical)},
          {"table_row", to_json(r.row)},
          {"consistent", r.consistent},
          {"diagnostic", r.diagnostic}};
}

ordered_json to_json(const SymmetryReport& r) {
  auto one = [](const SymmetryCheck& c) {
    return ordered_json{{"holds", c.holds}, {"max_violation", c.max_violation}, {"relation", c.relation}};
  };
  return {{"chiral", one(r.chiral)},
          {"particle_hole", one(r.particle_hole)},
          {"time_reversal", one(r.time_reversal)},
          {"inversion", one(r.inversion)},
          {"parity_time", one(r.parity_time)}};
}

ordered_json to_json(const GaplessSet& g) {
  ordered_json res = ordered_json::array();
  for (const auto& r : g.residuals) {
    res.push_back({{"norm_balance", r.norm_balance}, {"orthogonality", r.orthogonality}});
  }
  return {{"candidates", g.candidates}, {"residuals", res}, {"momenta", g.momenta}};
}

ordered_json to_json(const ChiralTwoBandModel& m) {
  ordered_json j;
  j["family"] = family_name(m.family());
  if (m.family() == ModelFamily::generic) {
    j["axis_a"] = std::string(1, axis_label(m.axis_a()));
    j["axis_b"] = std::string(1, axis_label(m.axis_b()));
    auto prof = [](const FourierProfile& p) {
      return ordered_json{{"cos", p.cos_coeffs}, {"sin", p.sin_coeffs}};
    };
    j["h_a"] = prof(m.h_a());
    j["h_b"] = prof(m.h_b());
    j["g_a"] = prof(m.g_a());
    j["g_b"] = prof(m.g_b());
  } else {
    for (const auto& name : parameter_names(m.family())) j[name] = parameter_value(m, name);
  }
  return j;
}

}  // namespace nhdqpt
