// Serial against OpenMP timings of the data-parallel kernels.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "circlelab/conformality.hpp"
#include "circlelab/fatness.hpp"
#include "circlelab/generate.hpp"
#include "circlelab/modulus.hpp"
#include "circlelab/sequence.hpp"

using namespace circlelab;

namespace {

double seconds(const std::function<void()>& f, int repeat) {
  double best = 1e300;
  for (int r = 0; r < repeat; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

struct Kernel {
  std::string name;
  std::function<void(Exec)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const int repeat = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;

  KoebeConfig serial_koebe;
  serial_koebe.exec = Exec::serial;
  const CircleDomainMap map = koebe_iterate(carpet(2), 9, SpherePoint::infinity(), SpherePoint(Complex(0, 0)),
                                            SpherePoint(Complex(1, 0)), serial_koebe);
  ModulusInstance inst;
  inst.window = {-0.25, 0.0, 1.25, 1.0};
  inst.packing = carpet(2);
  inst.e.push_back(PeripheralContinuum::polygon(-1, {{-1, -1}, {0, -1}, {0, 2}, {-1, 2}}));
  inst.f.push_back(PeripheralContinuum::polygon(-2, {{1, -1}, {2, -1}, {2, 2}, {1, 2}}));
  const auto curves = random_curves(map, 1, 16);
  const auto thin = PeripheralContinuum::polygon(1, {{0, 0}, {1, 0}, {1, 0.1}, {0, 0.1}});

  const std::vector<Kernel> kernels{
      {"koebe_iterate carpet(2) n=9",
       [&](Exec e) {
         KoebeConfig c;
         c.exec = e;
         koebe_iterate(carpet(2), 9, SpherePoint::infinity(), SpherePoint(Complex(0, 0)), SpherePoint(Complex(1, 0)), c);
       }},
      {"conformality_domain_check depth 2",
       [&](Exec e) { conformality_domain_check(map, {.max_depth = 2, .tolerance = 1e-3}, e); }},
      {"estimate_fatness thin rectangle", [&](Exec e) { estimate_fatness(thin, {}, e); }},
      {"mobius_fatness_survey 20 maps", [&](Exec e) { mobius_fatness_survey(thin, 3, 20, {}, 0.3, e); }},
      {"discretize h=1/54", [&](Exec e) { discretize(inst, 1.0 / 54.0, {.stencil = 3, .exec = e}); }},
      {"equicontinuity_table 3 levels", [&](Exec e) { equicontinuity_table(map, {0.4, 0.2, 0.1}, e); }},
      {"upper_gradient_spot_check 16 curves", [&](Exec e) { upper_gradient_spot_check(map, curves, 0.02, 50, e); }},
  };

  std::printf("threads: %d, best of %d\n", max_threads(), repeat);
  std::printf("%-40s %12s %12s %8s\n", "kernel", "serial [s]", "parallel [s]", "speedup");
  for (const Kernel& k : kernels) {
    const double s = seconds([&] { k.run(Exec::serial); }, repeat);
    const double p = seconds([&] { k.run(Exec::parallel); }, repeat);
    std::printf("%-40s %12.4f %12.4f %8.2f\n", k.name.c_str(), s, p, s / p);
  }
  return 0;
}
