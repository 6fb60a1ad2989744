#pragma once

#include <filesystem>
#include <string>

#include "wgf/measures.hpp"

namespace wgf {

/// Measures serialize to CSV with a one-line header naming the domain:
///   # wgf-measure kind=grid domain=torus period=1 n_cells=256
///   cell_center,density
/// or, for atoms,
///   # wgf-measure kind=particle domain=interval left=-2 right=2 trunc=1
///   position,weight
/// All numbers use round-trip decimal formatting.
std::string measure_to_csv(const Measure& m);
Measure measure_from_csv_text(const std::string& text);

void write_measure_csv(const std::filesystem::path& path, const Measure& m);
Measure read_measure_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path,
                     const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

} // namespace wgf
