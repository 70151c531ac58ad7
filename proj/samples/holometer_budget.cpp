// Noise budget for one or two table-top interferometers.
//
// Usage: holometer_budget CONFIG_A [CONFIG_B] [FLOOR_M2_PER_HZ]
//
// Prints the predicted rms transverse jitter, the spectral knee, the
// detectability verdict for a 1-5 MHz band over one hour and, when two
// configurations are given, the correlated fraction of the cross spectrum.

#include <cstdlib>
#include <iostream>
#include <string>

#include "qgeom/qgeom.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: " << argv[0] << " CONFIG_A [CONFIG_B] [FLOOR_M2_PER_HZ]\n";
    return 2;
  }
  try {
    const qgeom::PlanckScale scale;
    const auto a = qgeom::load_interferometer_config(argv[1]);
    const bool paired = argc >= 3 && std::string(argv[2]).find_first_not_of("0123456789.eE+-") != std::string::npos;
    const int floor_arg = paired ? 3 : 2;
    const double floor = argc > floor_arg ? std::stod(argv[floor_arg]) : 1.0e-40;

    const auto report = qgeom::detectability(a, floor, 1.0e6, 5.0e6, 3600.0, scale);
    std::cout << "instrument        " << a.label << '\n'
              << "arm length        " << a.arm_length << " m\n"
              << "rms jitter        " << report.signal_rms << " m\n"
              << "knee frequency    " << qgeom::knee_frequency(a.arm_length, scale) << " Hz\n"
              << "flat-band PSD     " << qgeom::analytic_psd(a.arm_length, 0.0, scale) << " m^2/Hz\n"
              << "band power 1-5MHz " << report.band_power << " m^2\n"
              << "snr proxy (1 h)   " << report.snr_proxy << '\n'
              << "verdict           " << qgeom::to_string(report.verdict) << '\n';

    if (paired) {
      const auto b = qgeom::load_interferometer_config(argv[2]);
      std::cout << "\npartner           " << b.label << '\n'
                << "overlap factor    " << qgeom::overlap_factor(a, b) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "holometer_budget: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
