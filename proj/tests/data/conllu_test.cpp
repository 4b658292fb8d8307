#include <gtest/gtest.h>

#include <sstream>

#include "absa/core/error.hpp"
#include "absa/data/conllu.hpp"
#include "absa/data/corpus.hpp"
#include "scratch.hpp"

using namespace absa::data;

namespace {

const char* kTwoSentences =
    "# sent_id = 1\n"
    "1\tThe\tthe\tDET\tDT\t_\t2\tdet\t_\t_\n"
    "2\tfood\tfood\tNOUN\tNN\t_\t4\tnsubj\t_\t_\n"
    "3\twas\tbe\tAUX\tVBD\t_\t4\tcop\t_\t_\n"
    "4\tgreat\tgreat\tADJ\tJJ\t_\t0\troot\t_\t_\n"
    "\n"
    "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "1\tdo\tdo\tAUX\tVBP\t_\t3\taux\t_\t_\n"
    "2\tn't\tnot\tPART\tRB\t_\t3\tadvmod\t_\t_\n"
    "3\tgo\tgo\tVERB\tVB\t_\t0\troot\t_\t_\n"
    "3.1\tthere\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "\n";

}  // namespace

TEST(Conllu, ReadsSentencesAndSkipsSpecialRows) {
  std::istringstream in(kTwoSentences);
  const auto sents = read_conllu(in);
  ASSERT_EQ(sents.size(), 2u);
  EXPECT_EQ(sents[0].forms, (std::vector<std::string>{"The", "food", "was", "great"}));
  EXPECT_EQ(sents[0].heads, (std::vector<int>{1, 3, 3, -1}));
  EXPECT_EQ(sents[1].forms.size(), 3u);
  EXPECT_EQ(sents[1].heads, (std::vector<int>{2, 2, -1}));
}

TEST(Conllu, BadColumnCountReportsLine) {
  std::istringstream in("1\tThe\tthe\n");
  try {
    read_conllu(in, "x.conllu");
    FAIL();
  } catch (const absa::LoadError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Conllu, ConvertsWithSidecarAndRoundTrips) {
  absa::testing::ScratchDir dir("conllu");
  const auto conllu = dir.write("s.conllu", kTwoSentences);
  const auto side = dir.write("a.json",
                              R"([{"sentence_index":0,"from":1,"to":2,"label":"positive"},
                                  {"sentence_index":1,"from":2,"to":3,"label":"negative"}])");
  const auto exs = convert_conllu(read_conllu(conllu), read_aspect_sidecar(side));
  ASSERT_EQ(exs.size(), 2u);
  EXPECT_EQ(exs[0].tokens[1], "food");
  EXPECT_EQ(exs[0].label, Polarity::positive);
  EXPECT_EQ(exs[1].aspect_from, 2u);
  write_corpus(dir / "out.jsonl", exs);
  EXPECT_EQ(parse_corpus(dir / "out.jsonl"), exs);
}

TEST(Conllu, SidecarErrors) {
  absa::testing::ScratchDir dir("conllu");
  std::istringstream in(kTwoSentences);
  const auto sents = read_conllu(in);
  EXPECT_THROW(read_aspect_sidecar(dir.write("bad.json", "{")), absa::LoadError);
  EXPECT_THROW(read_aspect_sidecar(dir.write("obj.json", "{}")), absa::LoadError);
  EXPECT_THROW(read_aspect_sidecar(dir.write("lab.json", R"([{"sentence_index":0,"from":0,"to":1,"label":"x"}])")),
               absa::LoadError);
  EXPECT_THROW(convert_conllu(sents, {{5, 0, 1, Polarity::neutral}}), absa::LoadError);
  EXPECT_THROW(convert_conllu(sents, {{0, 2, 2, Polarity::neutral}}), absa::LoadError);
}
