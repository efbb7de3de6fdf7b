#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace relcalc {

enum class Verdict { Pass, Fail, Refused };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Refused: return "refused";
  }
  return "fail";
}

struct Check {
  std::string name;
  Verdict verdict = Verdict::Fail;
  std::string detail;
};

/// Ordered list of named checks. "Refused" marks a check whose hypothesis is
/// absent; it does not count as a failure.
struct Report {
  std::vector<Check> checks;

  void add(std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), ok ? Verdict::Pass : Verdict::Fail, std::move(detail)});
  }
  void refuse(std::string name, std::string detail) {
    checks.push_back({std::move(name), Verdict::Refused, std::move(detail)});
  }
  bool passed() const {
    return std::ranges::none_of(checks, [](const Check& c) { return c.verdict == Verdict::Fail; });
  }
  const Check* find(const std::string& name) const {
    auto it = std::ranges::find(checks, name, &Check::name);
    return it == checks.end() ? nullptr : &*it;
  }
};

}  // namespace relcalc
