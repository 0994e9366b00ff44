#include <fstream>

#include <gtest/gtest.h>

#include "devroles/mail.hpp"

using namespace devroles;

namespace {

MailArchive load_sample() {
  std::ifstream in(DEVROLES_TEST_DATA "/sample.mbox");
  return parse_mbox(in);
}

Message msg(std::string id, UnixTime t, std::optional<std::string> parent = std::nullopt) {
  Message m;
  m.message_id = std::move(id);
  m.timestamp = t;
  m.in_reply_to = std::move(parent);
  return m;
}

}  // namespace

TEST(Mbox, SampleMessagesAndWarnings) {
  const auto ar = load_sample();
  ASSERT_EQ(ar.messages.size(), 4u);
  EXPECT_EQ(ar.warnings.get("unparseable_date"), 1);
  EXPECT_EQ(ar.warnings.get("missing_message_id"), 1);

  EXPECT_EQ(ar.messages[0].message_id, "<root.1@example.org>");
  EXPECT_EQ(ar.messages[0].author_identity.email, "alice@example.org");
  EXPECT_EQ(ar.messages[0].author_identity.source, Source::mail);
  EXPECT_EQ(ar.messages[0].timestamp, 1500285600);
  EXPECT_FALSE(ar.messages[0].in_reply_to);
}

TEST(Mbox, BodyFromLineWithoutBlankIsNotASeparator) {
  // Message one's body contains "From here on ..." directly after text.
  const auto ar = load_sample();
  EXPECT_EQ(ar.messages[1].message_id, "<reply.1@example.org>");
}

TEST(Mbox, ZoneOffsetApplied) {
  const auto ar = load_sample();
  EXPECT_EQ(ar.messages[1].timestamp, 1500285600 + 3600 + 1800);  // 13:30 +0200
  EXPECT_EQ(ar.messages[1].author_identity.name, "Bob Builder");
}

TEST(Mbox, ReferencesFallbackAndObfuscatedAddress) {
  const auto ar = load_sample();
  const Message& m = ar.messages[2];
  EXPECT_EQ(m.author_identity.email, "carol@example.org");
  EXPECT_EQ(m.author_identity.name, "Carol Coder");
  ASSERT_TRUE(m.in_reply_to);
  EXPECT_EQ(*m.in_reply_to, "<reply.1@example.org>");
  EXPECT_EQ(m.timestamp, 1500292800);  // ctime order, no zone
}

TEST(Mbox, SyntheticIdIsStable) {
  const auto a = load_sample();
  const auto b = load_sample();
  EXPECT_EQ(a.messages[3].message_id, b.messages[3].message_id);
  EXPECT_NE(a.messages[3].message_id.find("@devroles.invalid>"), std::string::npos);
}

TEST(Mbox, ReingestIsStable) {
  const auto a = load_sample();
  const auto b = load_sample();
  EXPECT_EQ(a.messages, b.messages);
}

TEST(Mbox, DuplicateIdsKeepFirst) {
  const std::string text =
      "From a Thu Jan  1 00:00:00 2015\nFrom: A <a@x>\nDate: Thu, 1 Jan 2015 00:00:00 +0000\nMessage-ID: <m@x>\n\nbody\n\n"
      "From b Thu Jan  1 00:00:00 2015\nFrom: B <b@x>\nDate: Thu, 1 Jan 2015 01:00:00 +0000\nMessage-ID: <m@x>\n\nbody\n";
  const auto ar = parse_mbox(std::string_view(text));
  ASSERT_EQ(ar.messages.size(), 1u);
  EXPECT_EQ(ar.messages[0].author_identity.email, "a@x");
  EXPECT_EQ(ar.warnings.get("duplicate_message_id"), 1);
}

TEST(Mbox, MissingFromIsDropped) {
  const std::string text = "From x Thu Jan  1 00:00:00 2015\nDate: Thu, 1 Jan 2015 00:00:00 +0000\nMessage-ID: <m@x>\n\n";
  const auto ar = parse_mbox(std::string_view(text));
  EXPECT_TRUE(ar.messages.empty());
  EXPECT_EQ(ar.warnings.get("missing_from"), 1);
}

TEST(FromHeader, Forms) {
  auto r = parse_from_header("\"Doe, Jane\" <Jane@Example.org>");
  EXPECT_EQ(r.name, "Doe, Jane");
  EXPECT_EQ(r.email, "Jane@Example.org");
  r = parse_from_header("jane@example.org (Jane Doe)");
  EXPECT_EQ(r.name, "Jane Doe");
  EXPECT_EQ(r.email, "jane@example.org");
  r = parse_from_header("jane@example.org");
  EXPECT_EQ(r.email, "jane@example.org");
  EXPECT_EQ(r.name, "");
  r = parse_from_header("jane at example.org");
  EXPECT_EQ(r.email, "jane@example.org");
  r = parse_from_header("Jane (Team Lead) <j@x.org>");
  EXPECT_EQ(r.email, "j@x.org");
}

TEST(Date, Formats) {
  EXPECT_EQ(parse_rfc2822_date("Thu, 1 Jan 2015 00:00:00 +0000"), 1420070400);
  EXPECT_EQ(parse_rfc2822_date("1 Jan 2015 00:00:00 -0100"), 1420070400 + 3600);
  EXPECT_EQ(parse_rfc2822_date("Thu, 01 Jan 15 00:00:00 GMT"), 1420070400);
  EXPECT_EQ(parse_rfc2822_date("Thu, 1 Jan 99 00:00:00 UT"), 915148800);
  EXPECT_EQ(parse_rfc2822_date("Thu, 1 Jan 2015 00:00:00 +0000 (UTC)"), 1420070400);
  EXPECT_EQ(parse_rfc2822_date("Thu Jan  1 00:00:00 2015"), 1420070400);
  EXPECT_EQ(parse_rfc2822_date("Thu, 1 Jan 2015 00:00 EST"), 1420070400 + 5 * 3600);
  EXPECT_FALSE(parse_rfc2822_date("yesterday"));
  EXPECT_FALSE(parse_rfc2822_date("Thu, 32 Jan 2015 00:00:00 +0000"));
  EXPECT_FALSE(parse_rfc2822_date(""));
}

TEST(Threading, SampleThreads) {
  auto ar = load_sample();
  const auto threads = thread_messages(ar.messages);
  ASSERT_EQ(threads.size(), 2u);
  EXPECT_EQ(threads[0].messages, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(threads[1].messages, (std::vector<std::size_t>{3}));
  EXPECT_EQ(ar.messages[2].thread_id, 0);
  EXPECT_EQ(ar.messages[3].thread_id, 1);
}

TEST(Threading, UnknownParentStartsOwnThread) {
  std::vector<Message> ms = {msg("<a>", 1), msg("<b>", 2, "<missing>"), msg("<c>", 3, "<b>")};
  const auto threads = thread_messages(ms);
  ASSERT_EQ(threads.size(), 2u);
  EXPECT_EQ(ms[1].thread_id, ms[2].thread_id);
  EXPECT_NE(ms[0].thread_id, ms[1].thread_id);
}

TEST(Threading, CycleIsBroken) {
  std::vector<Message> ms = {msg("<a>", 1, "<c>"), msg("<b>", 2, "<a>"), msg("<c>", 3, "<b>")};
  const auto threads = thread_messages(ms);
  ASSERT_EQ(threads.size(), 1u);
  EXPECT_EQ(threads[0].messages, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Threading, ThreadOrderFollowsFirstMessage) {
  std::vector<Message> ms = {msg("<late-root>", 10), msg("<early-root>", 1), msg("<reply>", 20, "<early-root>")};
  const auto threads = thread_messages(ms);
  ASSERT_EQ(threads.size(), 2u);
  EXPECT_EQ(ms[1].thread_id, 0);
  EXPECT_EQ(ms[2].thread_id, 0);
  EXPECT_EQ(ms[0].thread_id, 1);
  EXPECT_EQ(threads[0].messages, (std::vector<std::size_t>{1, 2}));
}
