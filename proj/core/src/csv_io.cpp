#include "wgf/csv_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "wgf/errors.hpp"
#include "wgf/numerics.hpp"

namespace wgf {
namespace {

std::map<std::string, std::string> parse_header(const std::string& line) {
  std::map<std::string, std::string> kv;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

double to_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ValidationError(std::string("csv: bad number for ") + what + ": " + s);
  return v;
}

Domain domain_from_header(const std::map<std::string, std::string>& kv) {
  auto it = kv.find("domain");
  if (it == kv.end()) throw ValidationError("csv: missing domain in header");
  if (it->second == "torus")
    return Domain::torus(to_double(kv.at("period"), "period"));
  if (it->second == "interval")
    return Domain::interval(to_double(kv.at("left"), "left"),
                            to_double(kv.at("right"), "right"),
                            kv.count("trunc") && kv.at("trunc") == "1");
  throw ValidationError("csv: unknown domain kind " + it->second);
}

} // namespace

std::string measure_to_csv(const Measure& m) {
  std::ostringstream out;
  if (const auto* g = std::get_if<GridMeasure>(&m)) {
    out << "# wgf-measure kind=grid domain=";
    if (g->domain.is_torus()) {
      out << "torus period=" << format_full(g->domain.period());
    } else {
      out << "interval left=" << format_full(g->domain.left())
          << " right=" << format_full(g->domain.right());
      if (g->domain.truncation_of_line()) out << " trunc=1";
    }
    out << " n_cells=" << g->n_cells() << "\n";
    out << "cell_center,density\n";
    for (int i = 0; i < g->n_cells(); ++i)
      out << format_full(g->cell_center(i)) << ","
          << format_full(g->density[i]) << "\n";
  } else {
    const auto& p = std::get<ParticleMeasure>(m);
    out << "# wgf-measure kind=particle domain=";
    if (p.domain.is_torus()) {
      out << "torus period=" << format_full(p.domain.period());
    } else {
      out << "interval left=" << format_full(p.domain.left())
          << " right=" << format_full(p.domain.right());
      if (p.domain.truncation_of_line()) out << " trunc=1";
    }
    out << " n=" << p.size() << "\n";
    out << "position,weight\n";
    for (int i = 0; i < p.size(); ++i)
      out << format_full(p.positions[i]) << "," << format_full(p.weights[i])
          << "\n";
  }
  return out.str();
}

Measure measure_from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# wgf-measure", 0) != 0)
    throw ValidationError("csv: missing '# wgf-measure' header");
  const auto kv = parse_header(line);
  const Domain dom = domain_from_header(kv);
  const auto kind_it = kv.find("kind");
  if (kind_it == kv.end()) throw ValidationError("csv: missing kind");
  if (!std::getline(in, line))
    throw ValidationError("csv: missing column header");

  std::vector<double> col1, col2;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ValidationError("csv: malformed row: " + line);
    col1.push_back(to_double(line.substr(0, comma), "column 1"));
    col2.push_back(to_double(line.substr(comma + 1), "column 2"));
  }
  if (col1.empty()) throw ValidationError("csv: no data rows");

  if (kind_it->second == "grid") {
    GridMeasure g;
    g.domain = dom;
    g.cell_width = dom.length() / static_cast<double>(col1.size());
    g.density = std::move(col2);
    for (size_t i = 0; i < col1.size(); ++i) {
      const double expect = dom.left() + (i + 0.5) * g.cell_width;
      if (std::fabs(col1[i] - expect) > 1e-9 * std::max(1.0, std::fabs(expect)))
        throw ValidationError("csv: cell centers do not match a uniform mesh");
    }
    g.validate(1e-6);
    return g;
  }
  if (kind_it->second == "particle")
    return ParticleMeasure::canonical(dom, std::move(col1), std::move(col2));
  throw ValidationError("csv: unknown measure kind " + kind_it->second);
}

void write_measure_csv(const std::filesystem::path& path, const Measure& m) {
  write_text_file(path, measure_to_csv(m));
}

Measure read_measure_csv(const std::filesystem::path& path) {
  return measure_from_csv_text(read_text_file(path));
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace wgf
