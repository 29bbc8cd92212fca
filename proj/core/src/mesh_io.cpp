#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

#include "hodgelab/errors.hpp"
#include "hodgelab/mesh.hpp"
#include "local_subsets.hpp"

namespace hodgelab {

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

// Non-empty, non-comment lines with their 1-based numbers.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view raw = text.substr(pos, end - pos);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::istringstream is{std::string(raw)};
    Line line{number, {}};
    for (std::string tok; is >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

template <typename T>
T parse_number(const std::string& tok, int line) {
  T value{};
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if constexpr (std::is_floating_point_v<T>) {
    // std::from_chars for double is not available in every libstdc++ we target.
    char* stop = nullptr;
    value = std::strtod(first, &stop);
    if (stop != last) throw ParseError(line, "expected a number, got '" + tok + "'");
  } else {
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) throw ParseError(line, "expected an integer, got '" + tok + "'");
  }
  return value;
}

}  // namespace

SimplicialComplex read_mesh(std::string_view text) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty mesh file");
  const auto& header = lines[0];
  if (header.tokens.size() != 3) throw ParseError(header.number, "header must be 'dim nv ncell'");
  const int dim = parse_number<int>(header.tokens[0], header.number);
  const int nv = parse_number<int>(header.tokens[1], header.number);
  const int ncell = parse_number<int>(header.tokens[2], header.number);
  if (dim != 2 && dim != 3) throw ParseError(header.number, "dim must be 2 or 3");
  if (nv < 0 || ncell < 0) throw ParseError(header.number, "negative counts");

  auto line_at = [&](std::size_t k, const char* what) -> const Line& {
    if (k >= lines.size()) {
      const int after = lines.back().number + 1;
      throw ParseError(after, std::string("unexpected end of file, expected ") + what);
    }
    return lines[k];
  };

  std::vector<Point> vertices;
  vertices.reserve(nv);
  std::size_t k = 1;
  for (int v = 0; v < nv; ++v, ++k) {
    const Line& line = line_at(k, "a vertex");
    if (static_cast<int>(line.tokens.size()) != dim)
      throw ParseError(line.number, "vertex needs " + std::to_string(dim) + " coordinates");
    Point p = Point::Zero();
    for (int d = 0; d < dim; ++d) p[d] = parse_number<double>(line.tokens[d], line.number);
    vertices.push_back(p);
  }

  std::vector<Simplex> cells;
  std::vector<int> cell_lines;
  cells.reserve(ncell);
  for (int c = 0; c < ncell; ++c, ++k) {
    const Line& line = line_at(k, "a cell");
    if (static_cast<int>(line.tokens.size()) != dim + 1)
      throw ParseError(line.number, "cell needs " + std::to_string(dim + 1) + " vertex indices");
    Simplex s{-1, -1, -1, -1};
    for (int d = 0; d <= dim; ++d) {
      s[d] = parse_number<int>(line.tokens[d], line.number);
      if (s[d] < 0 || s[d] >= nv)
        throw ParseError(line.number, "vertex index " + std::to_string(s[d]) + " out of range [0, " +
                                          std::to_string(nv) + ")");
    }
    std::sort(s.begin(), s.begin() + dim + 1);
    if (std::adjacent_find(s.begin(), s.begin() + dim + 1) != s.begin() + dim + 1)
      throw ParseError(line.number, "cell repeats a vertex");
    cells.push_back(s);
    cell_lines.push_back(line.number);
  }
  if (k < lines.size()) throw ParseError(lines[k].number, "trailing data after cells");

  // Manifold check with line attribution: no face may have more than two cells.
  std::map<Simplex, int> face_count;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (const auto& sub : detail::local_subsets(dim, dim - 1)) {
      Simplex f{-1, -1, -1, -1};
      for (int d = 0; d < dim; ++d) f[d] = cells[c][sub[d]];
      if (++face_count[f] > 2) throw ParseError(cell_lines[c], "non-manifold cell: face shared by three cells");
    }
  }
  std::map<Simplex, int> seen;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!seen.emplace(cells[c], static_cast<int>(c)).second) throw ParseError(cell_lines[c], "duplicate cell");
  }

  return SimplicialComplex(dim, std::move(vertices), std::move(cells));
}

std::string write_mesh(const SimplicialComplex& complex) {
  const int dim = complex.dim();
  std::string out;
  out += std::to_string(dim) + " " + std::to_string(complex.num_simplices(0)) + " " +
         std::to_string(complex.num_simplices(dim)) + "\n";
  char buf[64];
  for (const auto& v : complex.vertices()) {
    for (int d = 0; d < dim; ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", v[d]);
      out += buf;
      out += d + 1 < dim ? ' ' : '\n';
    }
  }
  for (const auto& c : complex.cells()) {
    for (int d = 0; d <= dim; ++d) {
      out += std::to_string(c[d]);
      out += d < dim ? ' ' : '\n';
    }
  }
  return out;
}

std::uint64_t mesh_hash(const SimplicialComplex& complex) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : write_mesh(complex)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace hodgelab
