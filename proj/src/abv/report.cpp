#include "abv/report.hpp"

namespace abv {

namespace anchors {

const std::vector<std::string>& all() {
  static const std::vector<std::string> list = {
      kSection1, kSection2,  kSection3,   kSection41, kSection43, kSection44,
      kDetdef,   kDetdefp,   kBur1,       kG,         kBeta,      kInvbeta,
      kHI,       kNormH,     kNormHIreal, kNormHI,    kHIshort,   kBWpr,
      kD,        kD1,        kD2,         kHext,      kSymmkernel, kK2};
  return list;
}

}  // namespace anchors

void Report::add(Record r) {
  pass = pass && r.pass;
  records.push_back(std::move(r));
}

Json Report::to_json() const {
  Json j;
  j["schemaVersion"] = schema_version;
  j["command"] = command;
  j["config"] = config_echo;
  Json recs = Json::array();
  for (const auto& r : records) {
    Json jr;
    jr["name"] = r.name;
    jr["paperAnchor"] = r.paper_anchor;
    jr["values"] = r.values;
    jr["tolerance"] = r.tolerance;
    jr["pass"] = r.pass;
    recs.push_back(std::move(jr));
  }
  j["records"] = std::move(recs);
  j["pass"] = pass;
  Json timings;
  double total = 0.0;
  for (const auto& r : records) {
    timings[r.name] = r.elapsed_ms;
    total += r.elapsed_ms;
  }
  j["timings"] = Json{{"totalMs", total}, {"records", std::move(timings)}};
  return j;
}

std::string Report::to_json_string() const { return to_json().dump(2) + "\n"; }

Json Report::strip_timings(Json report_json) {
  report_json.erase("timings");
  return report_json;
}

}  // namespace abv
