#include <gtest/gtest.h>

#include <chrono>

#include "labtom/errors.hpp"
#include "labtom/translator.hpp"

namespace labtom {
namespace {

std::string mock(const std::string& mode) { return std::string(LABTOM_MOCK_TRANSLATOR) + " " + mode; }

TEST(Fixture, GoldSentencesResolve) {
  FixtureBackend backend;
  int checked = 0;
  for (const GoldPair& p : gold_corpus()) {
    if (p.sentence.empty() || p.sentence == "The player initially expected to find a key in box 3.") continue;
    const auto out = translate(p.sentence, backend);
    ASSERT_EQ(out.size(), 1U) << p.sentence;
    EXPECT_EQ(elot::print(*out[0].formula), elot::print(*elot::parse(p.formula))) << p.sentence;
    EXPECT_EQ(out[0].weight, 1.0);
    ++checked;
  }
  EXPECT_EQ(checked, 12);
}

TEST(Fixture, ExpectedKeySentenceIsRenormalized) {
  FixtureBackend backend;
  const auto out = translate("The player initially expected to find a key in box 3.", backend);
  ASSERT_EQ(out.size(), 2U);
  EXPECT_EQ(elot::print(*out[0].formula), "believes(player, likely(exists(key(K), inside(K, box3))))");
  EXPECT_NEAR(out[0].weight, 0.67 / 0.99, 1e-12);
  EXPECT_NEAR(out[1].weight, 0.32 / 0.99, 1e-12);
  EXPECT_EQ(translate("The player initially expected to find a key in box 3.", backend, default_signature(), 1).size(), 1U);
}

TEST(Fixture, UnknownSentenceIsAnError) {
  FixtureBackend backend;
  EXPECT_THROW(translate("The player is hungry.", backend), TranslationError);
}

class ListBackend : public TranslatorBackend {
 public:
  explicit ListBackend(std::vector<RawCandidate> c) : c_(std::move(c)) {}
  std::vector<RawCandidate> propose(const std::string&, int) override { return c_; }

 private:
  std::vector<RawCandidate> c_;
};

TEST(Translate, DropsInvalidAndKeepsStableOrder) {
  ListBackend backend({{"believes(player, empty(box3))", 5.0},
                       {"believes(player, formula(empty(box1)))", 1.0},
                       {"believes(player, formula(empty(box2)))", 3.0},
                       {"believes(player, formula(empty(box4)))", 1.0}});
  const auto out = translate("s", backend);
  ASSERT_EQ(out.size(), 3U);
  EXPECT_EQ(elot::print(*out[0].formula), "believes(player, formula(empty(box2)))");
  EXPECT_EQ(elot::print(*out[1].formula), "believes(player, formula(empty(box1)))");
  EXPECT_EQ(elot::print(*out[2].formula), "believes(player, formula(empty(box4)))");
  EXPECT_DOUBLE_EQ(out[0].weight, 0.6);
  ListBackend none({{"believes(player, empty(box3))", 1.0}});
  EXPECT_THROW(translate("s", none), TranslationError);
}

TEST(External, Echo) {
  ExternalBackend backend(mock("echo"));
  const auto out = translate("anything", backend);
  ASSERT_EQ(out.size(), 1U);
  EXPECT_EQ(elot::print(*out[0].formula), "believes(player, formula(empty(box3)))");
  // the process is reused across requests
  EXPECT_EQ(translate("again", backend).size(), 1U);
}

TEST(External, TwoWeighted) {
  ExternalBackend backend(mock("two"));
  const auto out = translate("anything", backend);
  ASSERT_EQ(out.size(), 2U);
  EXPECT_DOUBLE_EQ(out[0].weight, 0.6);
  EXPECT_EQ(elot::print(*out[1].formula), "believes(player, might(empty(box2)))");
}

TEST(External, MixedDropsTheInvalidCandidate) {
  ExternalBackend backend(mock("mixed"));
  const auto out = translate("anything", backend);
  ASSERT_EQ(out.size(), 1U);
  EXPECT_EQ(elot::print(*out[0].formula), "certain_that(player, formula(empty(box1)))");
  EXPECT_DOUBLE_EQ(out[0].weight, 1.0);
}

TEST(External, Failures) {
  for (const char* mode : {"invalid", "garbage", "exit"}) {
    ExternalBackend backend(mock(mode));
    EXPECT_THROW(translate("anything", backend), TranslationError) << mode;
  }
}

TEST(External, TimesOut) {
  ExternalBackend backend(mock("hang"), 300);
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_THROW(translate("anything", backend), TranslationError);
  EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::seconds(10));
}

TEST(MakeBackend, Specs) {
  EXPECT_NE(dynamic_cast<FixtureBackend*>(make_backend("fixture").get()), nullptr);
  EXPECT_NE(dynamic_cast<ExternalBackend*>(make_backend("external:" + mock("echo")).get()), nullptr);
  EXPECT_THROW(make_backend("oracle"), InputError);
  EXPECT_THROW(make_backend("external:"), InputError);
}

}  // namespace
}  // namespace labtom
