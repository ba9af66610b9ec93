// Regenerates the test fixture corpus under tests/fixtures/. Run manually
// from the repository root after changing a witness construction or a file
// format; the outputs are committed.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "spherecode/combinatorics.hpp"
#include "spherecode/io.hpp"
#include "spherecode/search.hpp"

using namespace spherecode;

namespace {

void write_code(const std::filesystem::path& dir, const std::string& name, const Code& code,
                const std::string& label) {
    CodeFile file;
    file.dim = code.dim();
    file.code = code;
    file.metadata["name"] = label;
    save_code_file(file, dir / name);
    std::cout << "wrote " << (dir / name).string() << "\n";
}

void write_angles(const std::filesystem::path& dir, const std::string& name, double beta,
                  std::vector<double> angles) {
    AngleFile file;
    file.beta = beta;
    file.angles = std::move(angles);
    save_angle_file(file, dir / name);
    std::cout << "wrote " << (dir / name).string() << "\n";
}

// e1 plus four vectors at product 1/2 with it and 0.05 with each other;
// exercises the gap case (ell = 2) of the decomposition.
Code gap_code() {
    const Code simplex = simplex_code(3);
    const double lambda = std::sqrt(19.0 / 20.0);
    const double mu = std::sqrt(1.0 / 20.0);
    const double s = std::sqrt(0.75);
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(5, 5);
    rows(0, 0) = 1.0;
    for (int j = 0; j < 4; ++j) {
        rows(j + 1, 0) = 0.5;
        for (int c = 0; c < 3; ++c) rows(j + 1, c + 1) = s * lambda * simplex.rows()(j, c);
        rows(j + 1, 4) = s * mu;
    }
    return Code(5, rows);
}

Code uniform_half_code(int n) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(n, n, 0.5);
    for (int i = 0; i < n; ++i) g(i, i) = 1.0;
    return factor_gram(GramMatrix(g), n);
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path dir =
        argc > 1 ? std::filesystem::path(argv[1]) : std::filesystem::path("tests/fixtures");
    std::filesystem::create_directories(dir);

    write_code(dir, "orthonormal3.json", Code(3, Eigen::MatrixXd::Identity(3, 3)),
               "orthonormal-basis-r3");
    write_code(dir, "simplex_d3.json", simplex_code(3), "simplex-d3");
    write_code(dir, "simplex_d4.json", simplex_code(4), "simplex-d4");
    write_code(dir, "icosahedron.json", icosahedron_code(), "icosahedron");
    write_code(dir, "gap_code.json", gap_code(), "gap-fixture");
    write_code(dir, "ramsey_code.json", uniform_half_code(10), "uniform-half-10");

    const double alpha = icosahedron_angle();
    write_angles(dir, "angles_ortho.json", 0.5, {0.0});
    write_angles(dir, "angles_interval_quarter.json", 0.25, {});
    write_angles(dir, "angles_interval_third.json", 1.0 / 3, {});
    write_angles(dir, "angles_ico.json", 0.9, {-alpha, alpha});
    write_angles(dir, "angles_gap.json", 0.5, {0.05, 0.5});
    write_angles(dir, "angles_ramsey.json", 0.5, {0.5, 0.6});

    // deterministic 2-colouring of K9 for the ramsey subcommand
    EdgeColoring coloring(9, 2);
    std::mt19937_64 rng(2718281828);
    for (int i = 0; i < 9; ++i)
        for (int j = i + 1; j < 9; ++j)
            coloring.set_color(i, j, static_cast<int>(rng() % 2));
    save_coloring_file(coloring, dir / "coloring_k2_n9.json");
    std::cout << "wrote " << (dir / "coloring_k2_n9.json").string() << "\n";

    // schema-violation specimens
    const char* both = R"({"dim":2,"gram":[[1,0],[0,1]],"vectors":[[1,0],[0,1]]})";
    const char* neither = R"({"dim":2,"metadata":{"name":"empty"}})";
    const char* empty = R"({"dim":3,"vectors":[]})";
    for (const auto& [name, text] :
         std::initializer_list<std::pair<const char*, const char*>>{
             {"bad_both.json", both}, {"bad_neither.json", neither}, {"empty_code.json", empty}}) {
        std::ofstream out(dir / name, std::ios::binary);
        out << text << "\n";
        std::cout << "wrote " << (dir / name).string() << "\n";
    }
    return 0;
}
