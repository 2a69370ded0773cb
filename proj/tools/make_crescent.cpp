// Writes the bundled crescent point cloud: uniform samples of the unit disk
// minus a shifted disk, drawn by rejection with a fixed seed.

#include <cstdio>
#include <random>
#include <string>

#include <CLI11.hpp>

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic non-convex 2-d point cloud"};
  int count = 20000;
  std::uint64_t seed = 20260101;
  std::string out = "crescent.csv";
  app.add_option("--count", count, "number of points")->capture_default_str();
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--out", out, "output file")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  constexpr double cx = 0.45, cy = 0.1, r = 0.8;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::FILE* f = std::fopen(out.c_str(), "w");
  if (f == nullptr) {
    std::fprintf(stderr, "cannot open %s\n", out.c_str());
    return 1;
  }
  std::fprintf(f, "x1,x2\n");
  for (int k = 0; k < count;) {
    const double x = u(rng), y = u(rng);
    if (x * x + y * y > 1.0) continue;
    if ((x - cx) * (x - cx) + (y - cy) * (y - cy) < r * r) continue;
    std::fprintf(f, "%.17g,%.17g\n", x, y);
    ++k;
  }
  std::fclose(f);
  return 0;
}
