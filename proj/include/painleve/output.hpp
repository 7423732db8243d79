#pragma once

#include <json.hpp>
#include <ostream>
#include <string>

#include "painleve/asymptotics.hpp"
#include "painleve/classifier.hpp"
#include "painleve/integrator.hpp"
#include "painleve/laurent.hpp"
#include "painleve/stokes.hpp"

namespace painleve {

using json = nlohmann::ordered_json;

// Fixed 17-significant-digit formatting used by every text artifact.
std::string fmt17(double x);

json to_json(const LaurentSeries& s);
json to_json(const PoleRecord& r);
json to_json(const SolutionTrace& tr, bool with_samples = false);
json to_json(const TypeReport& r);
json to_json(const PeriodData& d);
json to_json(const TurningPoints& tp);
json to_json(const StokesData& s);
json to_json(const ConnectionParameters& c);

// columns: re_t, im_t, re_y, im_y, re_yp, im_yp
void write_trace_csv(std::ostream& os, const SolutionTrace& tr);
// columns: p, H, label, failed
void write_phase_csv(std::ostream& os, const PhaseDiagram& pd);
void write_phase_svg(std::ostream& os, const PhaseDiagram& pd);
json polylines_json(const PhaseDiagram& pd);

}  // namespace painleve
