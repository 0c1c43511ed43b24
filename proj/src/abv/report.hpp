#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace abv {

using Json = nlohmann::ordered_json;

// Anchor strings attached to report records; each value appears verbatim in
// the project's check catalog.
namespace anchors {
inline constexpr const char* kSection1 = "§1";
inline constexpr const char* kSection2 = "§2";
inline constexpr const char* kSection3 = "§3";
inline constexpr const char* kSection41 = "§4.1";
inline constexpr const char* kSection43 = "§4.3";
inline constexpr const char* kSection44 = "§4.4";
inline constexpr const char* kDetdef = "Eq. (detdef)";
inline constexpr const char* kDetdefp = "Eq. (detdefp)";
inline constexpr const char* kBur1 = "Eq. (Bur1)";
inline constexpr const char* kG = "Eq. (g)";
inline constexpr const char* kBeta = "Eq. (beta)";
inline constexpr const char* kInvbeta = "Eq. (invbeta)";
inline constexpr const char* kHI = "Eq. (H_I)";
inline constexpr const char* kNormH = "Eq. (normH)";
inline constexpr const char* kNormHIreal = "Eq. (normH_Ireal)";
inline constexpr const char* kNormHI = "Eq. (normH_I)";
inline constexpr const char* kHIshort = "Eq. (HI)";
inline constexpr const char* kBWpr = "Eq. (BWpr)";
inline constexpr const char* kD = "Eq. (d)";
inline constexpr const char* kD1 = "Eq. (D1)";
inline constexpr const char* kD2 = "Eq. (D2)";
inline constexpr const char* kHext = "Lemma (hext)";
inline constexpr const char* kSymmkernel = "Lemma (symmkernel)";
inline constexpr const char* kK2 = "Lemma (k_2)";

const std::vector<std::string>& all();
}  // namespace anchors

struct Record {
  std::string name;
  std::string paper_anchor;
  Json values;       // named numbers for the check
  Json tolerance;    // number or object
  bool pass = false;
  double elapsed_ms = 0.0;
};

struct Report {
  int schema_version = 1;
  std::string command;
  Json config_echo;
  std::vector<Record> records;
  bool pass = true;

  void add(Record r);
  Json to_json() const;               // full report, timings included
  std::string to_json_string() const;
  static Json strip_timings(Json report_json);
};

}  // namespace abv
