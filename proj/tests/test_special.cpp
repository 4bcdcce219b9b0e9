#include <doctest.h>

#include "nvist/special.hpp"

using namespace nvist;

namespace {

// w, e^w E1(w), e^w Re E1(w); 30-digit reference values
struct Ref {
  double wr, wi, fr, fi, hr, hi;
};
const Ref kRefs[] = {
    {0.010000000000000000208, 0.0, 4.0785114434564258266, 0.0, 4.0785114434564258266, 0.0},
    {-0.0099999999999647925142, 2.6535897933527301327e-8, 3.9779504817971476957, -3.1103305252460117762, 3.9779503992617315371, 1.0555848577944350992e-7},
    {8.0384689755085897096e-9, 0.2999999999999998812, 0.99616667702989482601, -1.0236235048941016536, 0.6201786031700968359, 0.19184372319277246858},
    {-0.24034308466408010556, -0.17954164323118694157, 0.61711813034980942977, 1.7241124522702580305, 0.29449756914185652067, -0.053450140882197827842},
    {-0.98999249660044545727, 0.1411200080598672221, -0.54303716715725185641, -1.1127240214931971886, -0.68724538163846457344, -0.097633051986138712946},
    {1.9106729782512120458, 0.591040413322679129, 0.35375801171614394202, -0.082973485031585607522, 0.20552446654085770915, 0.13791997447156674501},
    {1.7551651237807454322, -0.95885107720840600055, 0.34024009733109796352, 0.13760230041371472353, 0.047578392540588924404, -0.067793036133218407741},
    {-0.99875240771314169183, 2.1823138243816359882, -0.022082128004742685234, -0.40493325666120991782, 0.18306823399476480859, -0.26108591792820058023},
    {-2.3979243606558706349, -0.099793589839897173396, -0.57068215001322922436, 0.30237015334775888373, -0.59499237151880821536, 0.059574318227423877634},
    {-2.597751390710526706, 0.10810972232655527887, -0.53769570327405179114, -0.2517754807169832705, -0.55844350050069839698, -0.060609484701345043363},
    {1.6209069176044191522, 2.52441295442368952, 0.18891568082398858836, -0.20312611775264969565, 0.22150993878466263081, -0.15719670735200382407},
    {-0.087598566903866444957, -2.9987208091245154852, 0.072211310216099074506, 0.29552461412735393325, 0.11239722731075284971, 0.016168562036029505596},
    {-4.2844437668447363979, 2.5775068591073207958, -0.17561092850616872389, -0.1555708032815447443, -0.055124395739519218482, 0.034874777756952758391},
    {8.0, 0.0, 0.11227963925349931183, 0.0, 0.11227963925349931183, 0.0},
    {-7.9999999999718338448, 0.000021228718346821840619, -0.14773097599977130271, -0.0010543694771268801258, -0.14773099831610774193, -3.1361397548185721913e-6},
    {3.2153875902034360028e-7, 11.999999999999995692, 0.0066870999448921870282, -0.082257361993671402263, 0.042007057249347476699, -0.026710604425853280927},
    {-9.613723386563204578, -7.1816657292474779286, -0.067972280124752755496, 0.057715844024656808266, -0.054488056911222770547, 0.068449698743514405086},
    {-19.799849932008909145, 2.822400161197344442, -0.052166821325679645016, -0.0078847736740242596288, -0.044680667908643853194, 0.014766668422737950183},
    {27.704758184642574665, 8.5700859931788473705, 0.032009277212216120866, -0.0095762882016729599843, 0.018535923202595672882, -0.021300787109576307045},
    {25.449894294820808767, -13.903340619521887008, 0.029627575554930943705, 0.015606102828800039704, -0.0019269823545766991175, 0.0080903406026412554416},
    {-12.900551932961413997, 28.188220231596132557, -0.01267932309663849299, -0.030094147166649622209, -0.010006806824782227471, 0.00086385905717568859644},
    {-30.973189658471663514, -1.2890005354320052041, -0.033341154165492757313, 0.0014374209297108404031, -0.0029621942267616380707, 0.010232118081363035283},
    {-49.956757513663973409, 2.0790331216645245227, -0.020398225809639210138, -0.00086701733021384159285, -0.004462036764032986526, 0.0080101748416807126044},
    {64.836276704176766088, 100.9765181769475808, 0.004530291626621676013, -0.0069492968712031777028, 0.00098643784443675003692, 0.00047110538805823128829},
    {-3.5039426761546577983, -119.94883236498061941, -0.00017393089290271283421, 0.0083326784038969572088, -0.0039033268157805542996, 0.0024926214141297140397},
};

}  // namespace

TEST_CASE("exp_e1 against reference values") {
  for (const Ref& r : kRefs) {
    const Complex w(r.wr, r.wi);
    const Complex f(r.fr, r.fi), h(r.hr, r.hi);
    CAPTURE(w);
    CHECK(std::abs(exp_e1(w) - f) <= 1e-11 * std::abs(f));
    CHECK(std::abs(exp_re_e1(w) - h) <= 1e-11 * std::abs(h));
  }
}

TEST_CASE("E1 on the positive axis") {
  CHECK(expint_e1(1.0).real() == doctest::Approx(0.21938393439552027368).epsilon(1e-14));
  CHECK(std::abs(expint_e1(1.0).imag()) < 1e-15);
}

TEST_CASE("lattice constant closed form") {
  const double c = std::log(2.0) + 0.5 * std::log(M_PI) - 2.0 * std::lgamma(0.25);
  CHECK(kLogCellConstant == doctest::Approx(c).epsilon(1e-13));
}

TEST_CASE("Faddeev Green's function solves the homogeneous equation off the origin") {
  const Complex k(1.0, 0.5);
  const Complex I(0.0, 1.0);
  const double e = 1e-3;
  for (Complex x : {Complex(0.7, -0.3), Complex(-1.5, 2.0), Complex(3.0, 1.0)}) {
    auto g = [&](Complex z) { return faddeev_green(k, z); };
    // dbar (d + ik) = Laplacian/4 + (ik/2)(dx + i dy)
    const Complex gxx = (g(x + e) - 2.0 * g(x) + g(x - e)) / (e * e);
    const Complex gyy = (g(x + I * e) - 2.0 * g(x) + g(x - I * e)) / (e * e);
    const Complex gx = (g(x + e) - g(x - e)) / (2 * e);
    const Complex gy = (g(x + I * e) - g(x - I * e)) / (2 * e);
    const Complex lhs = 0.25 * (gxx + gyy) + 0.5 * I * k * (gx + I * gy);
    CHECK(std::abs(lhs) < 1e-5 * std::abs(g(x)) + 1e-6);
  }
}

TEST_CASE("Faddeev kernel reflection identity") {
  // conj(g_{-k}(-x)) = e_k(x) g_k(x) holds sample by sample
  const Complex k(-2.3, 0.9);
  for (Complex x : {Complex(0.0, 0.0), Complex(0.125, -0.5), Complex(-4.0, 2.5), Complex(7.0, 7.0)}) {
    const Complex lhs = std::conj(faddeev_kernel_sample(-k, -x, 0.0625));
    const Complex ek = std::polar(1.0, 2.0 * (k * x).real());
    CHECK(std::abs(lhs - ek * faddeev_kernel_sample(k, x, 0.0625)) <= 1e-15 * std::abs(lhs));
  }
}

TEST_CASE("Faddeev kernel decays like 1/|x|") {
  // |e^w Re E1(w)| <= ~1/|w| for large |w|
  const Complex k(1.0, 0.3);
  for (double r : {5.0, 10.0, 40.0, 160.0})
    for (double a : {0.0, 0.7, 1.6, 2.5, 3.1, 4.0, 5.5}) {
      const Complex x = std::polar(r, a);
      CHECK(std::abs(faddeev_green(k, x)) * std::abs(k * x) <= 2.0 / M_PI * 1.2);
    }
}
