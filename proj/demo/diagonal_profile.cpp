// Conformal factor h(s, s, t) along the diagonal for the four-well Hamiltonian,
// at a few times on either side of t = 0.

#include <cstdio>

#include <kgflow/kgflow.hpp>

int main()
{
    using namespace kgflow;
    const char *text = "(1/8)*(sin(pi*x)^2+sin(pi*y)^2)^2";
    const auto cs = build_conformal_series(parse_hamiltonian(text), 12, text);

    const double times[] = {-0.12, -0.05, 0.05, 0.1, 0.12};
    std::printf("%6s", "s");
    for (double t : times) {
        std::printf("  t=%+.2f", t);
    }
    std::printf("\n");
    for (double s : linspace(0.0, 0.5, 11)) {
        std::printf("%6.2f", s);
        for (double t : times) {
            const auto v = eval_conformal(cs, s, s, t, eval_mode::rational);
            if (v.blowup) {
                std::printf("  %7s", "blowup");
            } else {
                std::printf("  %7.3f", v.h);
            }
        }
        std::printf("\n");
    }
}
