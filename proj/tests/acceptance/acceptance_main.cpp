#include <cstdio>
#include <cstdlib>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  using namespace symreeb::testing;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int id = 1; id <= kCriterionCount; ++id) ids.push_back(id);
  int failed = 0;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id);
    std::printf("%s\n", format_result(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(ids.size()) - failed, ids.size());
  return failed == 0 ? 0 : 1;
}
