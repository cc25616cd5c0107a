#include <doctest.h>

#include "pga/model.hpp"

using namespace pga;

namespace {

AuctionParams base() { return validate_params({10.0, 1.0, 0.1, 0.1, 20}); }

ErrorCode code_of(const AuctionParams& p) {
  try {
    validate_params(p);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("validate_params rejects out-of-range inputs") {
  CHECK(code_of({1.0, 1.0, 0.1, 0.1, 2}) == ErrorCode::ValueNotAboveBaseFee);
  CHECK(code_of({10.0, 0.0, 0.1, 0.1, 2}) == ErrorCode::NonPositiveFee);
  CHECK(code_of({10.0, 1.0, 1.5, 0.1, 2}) == ErrorCode::RateOutOfRange);
  CHECK(code_of({10.0, 1.0, 0.1, -0.1, 2}) == ErrorCode::RateOutOfRange);
  CHECK(code_of({10.0, 1.0, 0.1, 0.1, 1}) == ErrorCode::TooFewAgents);
  CHECK(base().breakeven_bid() == 9.0);
}

TEST_CASE("action accessors") {
  CHECK(Action::bid(2.5).amount() == 2.5);
  CHECK(Action::abstain().is_abstain());
  CHECK_THROWS_AS(Action::abstain().amount(), Error);
  CHECK(to_string(Action::abstain()) == "abstain");
}

TEST_CASE("pure payoff splits ties and charges losers their revert cost") {
  const AuctionParams p = validate_params({10.0, 1.0, 0.1, 0.1, 4});
  const PureProfile prof({Action::bid(3.0), Action::bid(5.0), Action::bid(5.0), Action::abstain()});
  CHECK(pure_payoff(p, prof, 3) == 0.0);
  CHECK(pure_payoff(p, prof, 0) == doctest::Approx(-(0.1 * 1.0 + 0.1 * 3.0)));
  // Winner nets V - g - b, loser pays r1 g + r2 b; each half the time.
  const double win = 10.0 - 1.0 - 5.0;
  const double lose = -(0.1 + 0.5);
  CHECK(pure_payoff(p, prof, 1) == doctest::Approx(0.5 * win + 0.5 * lose));
  CHECK(pure_win_probability(prof, 2) == 0.5);
  CHECK(pure_payoff(p, prof, 1, 0.25) == doctest::Approx(0.5 * win + 0.5 * lose - 0.25));
  CHECK(*prof.max_bid() == 5.0);
  CHECK(!PureProfile({Action::abstain(), Action::abstain()}).max_bid());
}

TEST_CASE("presets") {
  CHECK(preset_names().size() == 7);
  const SettingPreset cb = preset("l1-coinbase-transfer", 0.2);
  CHECK(cb.revert_rate_base == 0.2);
  CHECK(cb.revert_rate_priority == 0.0);
  const SettingPreset pf = preset("l2-priority-ordering", 0.3);
  CHECK(pf.revert_rate_priority == 0.3);
  CHECK(preset("l2-revert-protection").revert_rate_base == 0.0);
  CHECK_THROWS_AS(preset("nope"), Error);
  try {
    preset("l1-priority-fee");
    FAIL("expected MissingPresetRate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingPresetRate);
  }
  CHECK_THROWS_AS(preset("l1-priority-fee", 1.5), Error);
  const AuctionParams q = apply_preset(base(), pf);
  CHECK(q.revert_rate_base == 0.3);
  CHECK(q.value == 10.0);
}
