// Walks a few classical maps through the library: norms, a univalence
// criterion, the starlikeness check and a small rendered mesh.
#include <cstdio>
#include <sstream>

#include "logharm/logharm.hpp"

using namespace logharm;

int main() {
  const LogHarmonicMap th0 = LogHarmonicMap::from_strings(0, 0.0, "exp(z/(1-z))", "exp(-z/(1-z))/(1-z)");
  const auto p = pre_schwarzian_norm(th0);
  const auto s = schwarzian_norm(th0);
  std::printf("f = h conj(g), h = exp(z/(1-z)), g = exp(-z/(1-z))/(1-z)\n");
  std::printf("  ||P_f|| >= %.6f at (%.4f, %.4f)\n", p.value, p.argmax.real(), p.argmax.imag());
  std::printf("  ||S_f|| >= %.6f over %zu samples\n", s.value, s.samples);
  const auto gap = gap_th0(th0);
  std::printf("  ||P_f|| - ||P_hg|| = %.6f (%s)\n", gap.gap, std::string(to_string(gap.verdict)).c_str());

  const Expr koebe = parse("z/(1-z)^2");
  std::printf("Koebe: ||P|| >= %.6f, ||S|| >= %.6f\n", analytic_pre_schwarzian_norm(koebe).value,
              analytic_schwarzian_norm(koebe).value);

  const Expr small = parse("exp(0.4*z)");
  const auto becker = becker_check(small);
  std::printf("exp(0.4 z) Becker: %s\n", std::string(to_string(becker.verdict)).c_str());

  const LogHarmonicMap ex1 = LogHarmonicMap::from_strings(1, 2.0, "1/(1-z)", "1-z");
  const auto star = starlike_check(ex1);
  std::printf("z|z|^4 h conj(g), h = 1/(1-z), g = 1-z: starlike %s, min functional %.3e\n",
              std::string(to_string(star.verdict)).c_str(), star.values.at("min_functional"));

  RenderJob job;
  job.target = ex1;
  job.radial = 32;
  job.angular = 64;
  std::ostringstream csv;
  job.format = RenderFormat::Csv;
  const auto sum = render_image(job, csv);
  std::printf("rendered %zu points, max |w| = %.3f\n", sum.rows, sum.max_modulus);
  return 0;
}
