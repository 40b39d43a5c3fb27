#ifndef EISDEPTH_REPORT_HPP
#define EISDEPTH_REPORT_HPP

#include "eisdepth/congruence.hpp"
#include "eisdepth/toyverify.hpp"

#include <string>

namespace eis {

enum class OutputFormat { Text, Json, Csv };

std::string render_report(const DepthReport& rep, OutputFormat fmt);
std::string render_toy_report(const ToyReport& rep, OutputFormat fmt);

// parse back the numeric content of a JSON report (round-trip checks)
DepthReport parse_report_json(const std::string& json_text);

}  // namespace eis

#endif
