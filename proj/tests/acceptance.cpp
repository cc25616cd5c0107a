// One line per acceptance criterion. Exit status is nonzero if any criterion
// fails other than the documented ones listed below, which are reported as
// FAIL but expected.
#include <cstdio>
#include <map>
#include <string>

#include "pga/verify.hpp"

namespace {

// Criterion id -> why it cannot pass as stated.
const std::map<int, std::string> kKnownFailures = {
    {6,
     "the r1 signs (E[B*] falls in r1, dF*/dr1 >= 0) hold only with p* frozen; p* rises in r1, "
     "and the total derivative is positive for E[B*] (e.g. V=10, g=1, r1=r2=0.1, N=5: "
     "E[B*] 5.37588 -> 5.54995 as r1 goes 0.1 -> 0.2). All other signs pass."},
};

}  // namespace

int main() {
  constexpr std::uint64_t kSeed = 42;
  int failed = 0;
  int unexpected = 0;
  for (int id = 1; id <= pga::kCheckCount; ++id) {
    const pga::CheckResult r = pga::run_check(id, pga::Battery::Default, kSeed);
    const auto known = kKnownFailures.find(id);
    if (!r.pass) {
      ++failed;
      if (known == kKnownFailures.end()) ++unexpected;
    }
    std::printf("%s criterion %2d  %-30s %7.2f s  %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.detail.c_str());
    if (!r.pass && known != kKnownFailures.end()) {
      std::printf("     expected failure: %s\n", known->second.c_str());
    }
    if (r.pass && known != kKnownFailures.end()) {
      std::printf("     note: listed as a known failure but passed\n");
    }
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed, %d documented failure(s), %d unexpected\n",
              pga::kCheckCount - failed, pga::kCheckCount, failed - unexpected, unexpected);
  return unexpected == 0 ? 0 : 1;
}
