// Holonomy of the QH bundle around latitude circles of CP^1, compared with
// the phases predicted from the enclosed curvature.

#include <cstdio>

#include "quantizer/quantizer.hpp"

using namespace quantizer;

int main() {
  std::printf("%6s %4s %22s %22s %12s %10s\n", "radius", "l", "vacuum phase", "tangent phase", "|H - I|", "switches");
  for (int l : {0, 1, 2}) {
    for (double r : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const auto h = parallel_transport(PicardClass{l}, Loop::latitude(1, r), 400);
      const cplx v = h.vacuum_phase;
      const cplx t = h.matrix(1, 1);
      std::printf("%6.2f %4d  (%+.6f, %+.6f)  (%+.6f, %+.6f) %12.3e %10d\n", r, l, v.real(), v.imag(), t.real(), t.imag(),
                  h.deviation_from_identity, h.chart_switches);
    }
  }
  const auto cert = nonflatness_certificate(2, 0);
  std::printf("\nCP^2, l = 0: radius %.2f, |H - I| = %.4f, nonflat = %s\n", cert.radius, cert.deviation, cert.nonflat ? "yes" : "no");
  return 0;
}
