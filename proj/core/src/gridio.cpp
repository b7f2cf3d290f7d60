#include "wigmix/gridio.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace wigmix {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  stream.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!stream) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

void append_grid_header(std::string& out, const PhaseSpaceGrid& g) {
  out += "# x_min: " + format_double(g.x_min) + "\n";
  out += "# x_max: " + format_double(g.x_max) + "\n";
  out += "# p_min: " + format_double(g.p_min) + "\n";
  out += "# p_max: " + format_double(g.p_max) + "\n";
  out += "# nx: " + std::to_string(g.nx) + "\n";
  out += "# np: " + std::to_string(g.np) + "\n";
}

struct ParsedFile {
  std::map<std::string, std::string> header;
  std::vector<std::string> rows;  // data lines, in order
};

ParsedFile parse_file(const std::filesystem::path& path,
                      const std::string& expected_format) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    throw std::runtime_error("cannot open for reading: " + path.string());
  }
  ParsedFile parsed;
  std::string line;
  bool first = true;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      if (first) {
        if (body != expected_format) {
          throw std::runtime_error(path.string() + ": expected format '" +
                                   expected_format + "', found '" + body + "'");
        }
        first = false;
        continue;
      }
      auto colon = body.find(": ");
      if (colon != std::string::npos) {
        parsed.header[body.substr(0, colon)] = body.substr(colon + 2);
      }
      continue;
    }
    if (first) {
      throw std::runtime_error(path.string() + ": missing format header");
    }
    parsed.rows.push_back(line);
  }
  return parsed;
}

const std::string& header_value(const ParsedFile& f, const std::string& key,
                                const std::filesystem::path& path) {
  auto it = f.header.find(key);
  if (it == f.header.end()) {
    throw std::runtime_error(path.string() + ": missing header key '" + key +
                             "'");
  }
  return it->second;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  // from_chars rejects "nan"/"inf" only on some older libstdc++ corner cases;
  // strtod covers the full repertoire produced by to_chars.
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) {
    throw std::runtime_error(path.string() + ": bad number '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, const std::filesystem::path& path) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc()) {
    throw std::runtime_error(path.string() + ": bad integer '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& row) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    auto comma = row.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(row.substr(start));
      return cells;
    }
    cells.push_back(row.substr(start, comma - start));
    start = comma + 1;
  }
}

PhaseSpaceGrid grid_from_header(const ParsedFile& f,
                                const std::filesystem::path& path) {
  PhaseSpaceGrid g;
  g.x_min = parse_double(header_value(f, "x_min", path), path);
  g.x_max = parse_double(header_value(f, "x_max", path), path);
  g.p_min = parse_double(header_value(f, "p_min", path), path);
  g.p_max = parse_double(header_value(f, "p_max", path), path);
  g.nx = parse_int(header_value(f, "nx", path), path);
  g.np = parse_int(header_value(f, "np", path), path);
  g.validate();
  return g;
}

Mode parse_mode(const std::string& s, const std::filesystem::path& path) {
  if (s == "a") return Mode::a;
  if (s == "b") return Mode::b;
  throw std::runtime_error(path.string() + ": bad mode '" + s + "'");
}

FieldMeaning parse_meaning(const std::string& s,
                           const std::filesystem::path& path) {
  for (auto m : {FieldMeaning::wigner_distribution, FieldMeaning::weyl_symbol,
                 FieldMeaning::divergence, FieldMeaning::residual}) {
    if (s == to_string(m)) return m;
  }
  throw std::runtime_error(path.string() + ": bad meaning '" + s + "'");
}

}  // namespace

void write_scalar_field(const std::filesystem::path& path,
                        const ScalarField& field, Mode mode, double tau) {
  const PhaseSpaceGrid& g = field.grid;
  std::string out;
  out.reserve(g.size() * 40 + 256);
  out += "# wigmix-field v1\n";
  out += "# kind: scalar\n";
  out += std::string("# meaning: ") + to_string(field.meaning) + "\n";
  out += std::string("# mode: ") + to_string(mode) + "\n";
  out += "# tau: " + format_double(tau) + "\n";
  append_grid_header(out, g);
  out += "# columns: x,p,value\n";
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.np; ++j) {
      append_double(out, g.x(i));
      out += ',';
      append_double(out, g.p(j));
      out += ',';
      append_double(out, field.values[g.index(i, j)]);
      out += '\n';
    }
  }
  write_text(path, out);
}

ScalarFieldFile read_scalar_field(const std::filesystem::path& path) {
  ParsedFile f = parse_file(path, "wigmix-field v1");
  const PhaseSpaceGrid g = grid_from_header(f, path);
  if (f.rows.size() != g.size()) {
    throw std::runtime_error(path.string() + ": expected " +
                             std::to_string(g.size()) + " rows, found " +
                             std::to_string(f.rows.size()));
  }
  ScalarFieldFile out;
  out.field = ScalarField(g, parse_meaning(header_value(f, "meaning", path),
                                           path));
  out.mode = parse_mode(header_value(f, "mode", path), path);
  out.tau = parse_double(header_value(f, "tau", path), path);
  for (std::size_t k = 0; k < f.rows.size(); ++k) {
    auto cells = split_csv(f.rows[k]);
    if (cells.size() != 3) {
      throw std::runtime_error(path.string() + ": bad row '" + f.rows[k] + "'");
    }
    out.field.values[k] = parse_double(cells[2], path);
  }
  return out;
}

void write_vector_field(const std::filesystem::path& path,
                        const VectorField& field) {
  const PhaseSpaceGrid& g = field.grid;
  std::string out;
  out.reserve(g.size() * 60 + 256);
  out += "# wigmix-field v1\n";
  out += "# kind: vector\n";
  out += std::string("# mode: ") + to_string(field.mode) + "\n";
  out += "# tau: " + format_double(field.tau) + "\n";
  append_grid_header(out, g);
  out += "# columns: x,p,jx,jp\n";
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.np; ++j) {
      const std::size_t k = g.index(i, j);
      append_double(out, g.x(i));
      out += ',';
      append_double(out, g.p(j));
      out += ',';
      append_double(out, field.jx[k]);
      out += ',';
      append_double(out, field.jp[k]);
      out += '\n';
    }
  }
  write_text(path, out);
}

VectorField read_vector_field(const std::filesystem::path& path) {
  ParsedFile f = parse_file(path, "wigmix-field v1");
  if (header_value(f, "kind", path) != "vector") {
    throw std::runtime_error(path.string() + ": not a vector field file");
  }
  const PhaseSpaceGrid g = grid_from_header(f, path);
  if (f.rows.size() != g.size()) {
    throw std::runtime_error(path.string() + ": expected " +
                             std::to_string(g.size()) + " rows, found " +
                             std::to_string(f.rows.size()));
  }
  VectorField out(g, parse_mode(header_value(f, "mode", path), path),
                  parse_double(header_value(f, "tau", path), path));
  for (std::size_t k = 0; k < f.rows.size(); ++k) {
    auto cells = split_csv(f.rows[k]);
    if (cells.size() != 4) {
      throw std::runtime_error(path.string() + ": bad row '" + f.rows[k] + "'");
    }
    out.jx[k] = parse_double(cells[2], path);
    out.jp[k] = parse_double(cells[3], path);
  }
  return out;
}

void write_velocity_field(const std::filesystem::path& path,
                          const VelocityField& field, Mode mode, double tau) {
  const PhaseSpaceGrid& g = field.grid;
  std::string out;
  out.reserve(g.size() * 60 + 256);
  out += "# wigmix-field v1\n";
  out += "# kind: velocity\n";
  out += std::string("# mode: ") + to_string(mode) + "\n";
  out += "# tau: " + format_double(tau) + "\n";
  append_grid_header(out, g);
  out += "# threshold: " + format_double(field.threshold) + "\n";
  out += "# j_floor: " + format_double(field.j_floor) + "\n";
  out += "# columns: x,p,wx,wp,valid\n";
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.np; ++j) {
      const std::size_t k = g.index(i, j);
      append_double(out, g.x(i));
      out += ',';
      append_double(out, g.p(j));
      out += ',';
      append_double(out, field.wx[k]);
      out += ',';
      append_double(out, field.wp[k]);
      out += ',';
      out += field.valid[k] ? '1' : '0';
      out += '\n';
    }
  }
  write_text(path, out);
}

void write_singular_cells(const std::filesystem::path& path,
                          const VelocityField& field, Mode mode, double tau) {
  std::string out;
  out += "# wigmix-singular-cells v1\n";
  out += std::string("# mode: ") + to_string(mode) + "\n";
  out += "# tau: " + format_double(tau) + "\n";
  out += "# threshold: " + format_double(field.threshold) + "\n";
  out += "# j_floor: " + format_double(field.j_floor) + "\n";
  out += "# cells: " + std::to_string(field.singular_cells.size()) + "\n";
  out += "# columns: i,j,x,p\n";
  for (const auto& [i, j] : field.singular_cells) {
    out += std::to_string(i) + "," + std::to_string(j) + ",";
    append_double(out, field.grid.x(i));
    out += ',';
    append_double(out, field.grid.p(j));
    out += '\n';
  }
  write_text(path, out);
}

void write_field_lines(const std::filesystem::path& path,
                       const std::vector<FieldLine>& lines, Mode mode,
                       double tau) {
  std::string out;
  out += "# wigmix-fieldlines v1\n";
  out += std::string("# mode: ") + to_string(mode) + "\n";
  out += "# tau: " + format_double(tau) + "\n";
  out += "# lines: " + std::to_string(lines.size()) + "\n";
  out += "# columns: line,vertex,x,p,speed\n";
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const FieldLine& line = lines[n];
    out += "# line " + std::to_string(n) +
           ": vertices=" + std::to_string(line.vertices.size()) +
           " backward=" + to_string(line.backward_reason) +
           " forward=" + to_string(line.forward_reason) + "\n";
    for (std::size_t v = 0; v < line.vertices.size(); ++v) {
      out += std::to_string(n) + "," + std::to_string(v) + ",";
      append_double(out, line.vertices[v][0]);
      out += ',';
      append_double(out, line.vertices[v][1]);
      out += ',';
      append_double(out, line.speed[v]);
      out += '\n';
    }
  }
  write_text(path, out);
}

void write_sweep_records(const std::filesystem::path& path,
                         const std::vector<SweepRecord>& records) {
  std::string out;
  out += "# wigmix-observables v1\n";
  out += "# rows: " + std::to_string(records.size()) + "\n";
  out +=
      "# columns: tau,n_a,n_b,n_total,purity_a,purity_b,entropy,"
      "negativity_a,negativity_b,negativity_error_a,negativity_error_b\n";
  for (const SweepRecord& r : records) {
    const double cols[] = {r.tau,        r.n_a,          r.n_b,
                           r.n_total,    r.purity_a,     r.purity_b,
                           r.entropy,    r.negativity_a, r.negativity_b,
                           r.negativity_error_a, r.negativity_error_b};
    for (std::size_t c = 0; c < std::size(cols); ++c) {
      if (c) out += ',';
      append_double(out, cols[c]);
    }
    out += '\n';
  }
  write_text(path, out);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    throw std::runtime_error("cannot open for hashing: " + path.string());
  }
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 init failed");
  }
  char buf[65536];
  while (stream) {
    stream.read(buf, sizeof(buf));
    const std::streamsize got = stream.gcount();
    if (got > 0 &&
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(got)) != 1) {
      EVP_MD_CTX_free(ctx);
      throw std::runtime_error("sha256 update failed");
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 final failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char hex[] = "0123456789abcdef";
  std::string out(static_cast<std::size_t>(len) * 2, '0');
  for (unsigned int k = 0; k < len; ++k) {
    out[2 * k] = hex[digest[k] >> 4];
    out[2 * k + 1] = hex[digest[k] & 0xf];
  }
  return out;
}

}  // namespace wigmix
