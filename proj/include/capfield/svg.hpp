#ifndef CAPFIELD_SVG_HPP
#define CAPFIELD_SVG_HPP

#include <iosfwd>
#include <string>

#include "capfield/exponents.hpp"

namespace capfield {

/// β on the x-axis, dimension estimate on the y-axis, both over [0, d], with
/// the reference line d - β. Empty level sets are drawn hollow. `config` is
/// embedded as a comment.
void write_spectrum_svg(std::ostream& out, const SpectrumEstimate& s, const std::string& config);

}  // namespace capfield

#endif  // CAPFIELD_SVG_HPP
