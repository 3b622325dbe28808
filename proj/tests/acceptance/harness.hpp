#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace acceptance {

struct Criterion {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline int report(const std::vector<Criterion>& criteria) {
  bool all = true;
  for (const auto& c : criteria) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) std::cout << " | " << c.detail;
    std::cout << "\n";
    all = all && c.pass;
  }
  std::cout.flush();
  return all ? 0 : 1;
}

}  // namespace acceptance
