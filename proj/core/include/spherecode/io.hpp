#ifndef SPHERECODE_IO_HPP
#define SPHERECODE_IO_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spherecode/combinatorics.hpp"
#include "spherecode/decomposition.hpp"
#include "spherecode/types.hpp"

namespace spherecode {

/// A code on disk: either explicit vectors or a Gram matrix, never both.
struct CodeFile {
    int dim = 0;
    std::optional<Code> code;
    std::optional<GramMatrix> gram;
    std::map<std::string, std::string> metadata;
};

CodeFile parse_code_json(const std::string& text, const std::string& origin = "<string>");
CodeFile load_code_file(const std::filesystem::path& path);
std::string serialize_code_file(const CodeFile& file);
void save_code_file(const CodeFile& file, const std::filesystem::path& path);

struct AngleFile {
    double beta = 0.5;
    std::vector<double> angles;
    AngleSystem system() const { return AngleSystem(beta, angles); }
};

AngleFile parse_angle_json(const std::string& text, const std::string& origin = "<string>");
AngleFile load_angle_file(const std::filesystem::path& path);
std::string serialize_angle_file(const AngleFile& file);
void save_angle_file(const AngleFile& file, const std::filesystem::path& path);

/// Full symmetric colour matrix; the diagonal is ignored on input and
/// written as -1.
EdgeColoring parse_coloring_json(const std::string& text,
                                 const std::string& origin = "<string>");
EdgeColoring load_coloring_file(const std::filesystem::path& path);
std::string serialize_coloring(const EdgeColoring& coloring);
void save_coloring_file(const EdgeColoring& coloring, const std::filesystem::path& path);

DecompositionTrace parse_trace_json(const std::string& text,
                                    const std::string& origin = "<string>");
DecompositionTrace load_trace_file(const std::filesystem::path& path);
std::string serialize_trace(const DecompositionTrace& trace);
void save_trace_file(const DecompositionTrace& trace, const std::filesystem::path& path);

}  // namespace spherecode

#endif
